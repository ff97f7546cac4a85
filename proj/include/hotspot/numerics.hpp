#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace hotspot::numerics {

using Fn = std::function<double(double)>;

// Adaptive Gauss-Kronrod (7/15) quadrature on a finite interval.
double integrate(const Fn& f, double a, double b, double rel_tol = 1e-12, double abs_tol = 1e-14,
                 int max_depth = 40);

// Integral over [a, b) where f may have an integrable singularity at b.
// Uses the substitution s = b - (b-a) * (1-t)^2 to soften inverse square-root behaviour.
double integrate_sqrt_singular_right(const Fn& f, double a, double b, double rel_tol = 1e-12);

// Bisection root of a function with f(lo) and f(hi) of opposite sign.
double bisect(const Fn& f, double lo, double hi, double xtol = 1e-14, int max_iter = 200);

// Golden-section search for the maximiser of a unimodal function.
std::pair<double, double> golden_max(const Fn& f, double lo, double hi, int iterations = 200);

// Golden-section search for the minimiser.
std::pair<double, double> golden_min(const Fn& f, double lo, double hi, int iterations = 200);

// Shape-preserving monotone cubic (Fritsch-Carlson) interpolant.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);
  // Hermite form with known nodal slopes; the Fritsch-Carlson limiter is applied only where needed.
  MonotoneCubic(std::vector<double> x, std::vector<double> y, std::vector<double> slopes);
  double operator()(double t) const;
  double xmin() const { return x_.front(); }
  double xmax() const { return x_.back(); }
  bool empty() const { return x_.empty(); }

 private:
  void limit(const std::vector<double>& secants);
  std::vector<double> x_, y_, m_;
};

std::vector<double> logspace(double lo, double hi, int n);

}  // namespace hotspot::numerics
