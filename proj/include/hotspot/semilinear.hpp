#pragma once

#include <functional>
#include <string>

namespace hotspot {

// Right-hand side f of -Lap u = f(u) together with its primitive F (F(0) = 0).
struct SemilinearSource {
  std::function<double(double)> f;
  std::function<double(double)> F;
  double lipschitz = 0;  // bound on |f'| over the relevant range (used as a fixed-point shift)
  std::string name;

  // f = N - s / eps
  static SemilinearSource small_diffusion(int N, double eps);
  // f = N (torsion)
  static SemilinearSource constant(double N);
  // f = lambda s
  static SemilinearSource linear(double lambda);
  // f = lambda s^{q-1}, s >= 0
  static SemilinearSource lane_emden(double q, double lambda);
};

// max |F'(s) - f(s)| over the sampled range, relative to max |f|.
double check_primitive(const SemilinearSource& src, double lo, double hi, int samples = 200);

}  // namespace hotspot
