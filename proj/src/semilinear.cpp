#include "hotspot/semilinear.hpp"

#include <algorithm>
#include <cmath>

#include "hotspot/errors.hpp"

namespace hotspot {

SemilinearSource SemilinearSource::small_diffusion(int N, double eps) {
  if (!(eps > 0)) throw DomainError("eps must be positive");
  const double n = N;
  return {[n, eps](double s) { return n - s / eps; }, [n, eps](double s) { return n * s - s * s / (2 * eps); },
          1.0 / eps, "small_diffusion"};
}

SemilinearSource SemilinearSource::constant(double N) {
  return {[N](double) { return N; }, [N](double s) { return N * s; }, 0.0, "constant"};
}

SemilinearSource SemilinearSource::linear(double lambda) {
  return {[lambda](double s) { return lambda * s; }, [lambda](double s) { return 0.5 * lambda * s * s; },
          std::abs(lambda), "linear"};
}

SemilinearSource SemilinearSource::lane_emden(double q, double lambda) {
  if (!(q > 1 && q <= 2)) throw DomainError("Lane-Emden exponent must lie in (1, 2]");
  return {[q, lambda](double s) { return lambda * std::pow(std::max(s, 0.0), q - 1); },
          [q, lambda](double s) { return lambda * std::pow(std::max(s, 0.0), q) / q; }, 0.0, "lane_emden"};
}

double check_primitive(const SemilinearSource& src, double lo, double hi, int samples) {
  double worst = 0, fmax = 0;
  const double step = (hi - lo) / samples;
  for (int k = 0; k <= samples; ++k) {
    const double s = lo + k * step;
    const double d = std::max(1e-7 * std::max(1.0, std::abs(s)), 1e-9);
    const double dF = (src.F(s + d) - src.F(s - d)) / (2 * d);
    worst = std::max(worst, std::abs(dF - src.f(s)));
    fmax = std::max(fmax, std::abs(src.f(s)));
  }
  return fmax > 0 ? worst / fmax : worst;
}

}  // namespace hotspot
