#include "hotspot/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hotspot::numerics {

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

void gk15(const Fn& f, double a, double b, double& result, double& err) {
  const double c = 0.5 * (a + b), hl = 0.5 * (b - a);
  const double fc = f(c);
  double rk = fc * kWgk[7];
  double rg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = hl * kXgk[j];
    const double s = f(c - dx) + f(c + dx);
    rk += kWgk[j] * s;
    if (j % 2 == 1) rg += kWg[j / 2] * s;
  }
  result = rk * hl;
  err = std::abs((rk - rg) * hl);
}

double adapt(const Fn& f, double a, double b, double whole, double err, double tol, int depth) {
  if (err <= tol || depth <= 0 || !(b - a > 0)) return whole;
  const double m = 0.5 * (a + b);
  double r1, e1, r2, e2;
  gk15(f, a, m, r1, e1);
  gk15(f, m, b, r2, e2);
  if (e1 + e2 <= tol) return r1 + r2;
  return adapt(f, a, m, r1, e1, 0.5 * tol, depth - 1) + adapt(f, m, b, r2, e2, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const Fn& f, double a, double b, double rel_tol, double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  if (a > b) return -integrate(f, b, a, rel_tol, abs_tol, max_depth);
  double r, e;
  gk15(f, a, b, r, e);
  const double tol = std::max(abs_tol, rel_tol * std::abs(r));
  return adapt(f, a, b, r, e, tol, max_depth);
}

double integrate_sqrt_singular_right(const Fn& f, double a, double b, double rel_tol) {
  const double L = b - a;
  // s = b - L (1-t)^2, ds = 2 L (1-t) dt; the factor (1-t) cancels an inverse sqrt at b.
  auto g = [&](double t) {
    const double w = 1.0 - t;
    return f(b - L * w * w) * 2.0 * L * w;
  };
  return integrate(g, 0.0, 1.0, rel_tol, 1e-15);
}

double bisect(const Fn& f, double lo, double hi, double xtol, int max_iter) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) throw std::invalid_argument("bisect: root not bracketed");
  for (int i = 0; i < max_iter && std::abs(hi - lo) > xtol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::pair<double, double> golden_max(const Fn& f, double lo, double hi, int iterations) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iterations; ++i) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    }
    if (hi - lo <= 1e-15 * (1.0 + std::abs(lo))) break;
  }
  return f1 > f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

std::pair<double, double> golden_min(const Fn& f, double lo, double hi, int iterations) {
  auto [x, v] = golden_max([&](double t) { return -f(t); }, lo, hi, iterations);
  return {x, -v};
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  const size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw std::invalid_argument("MonotoneCubic: need >= 2 matching nodes");
  std::vector<double> d(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
  m_.assign(n, 0.0);
  m_[0] = d[0];
  m_[n - 1] = d[n - 2];
  for (size_t i = 1; i + 1 < n; ++i) m_[i] = (d[i - 1] * d[i] <= 0) ? 0.0 : 0.5 * (d[i - 1] + d[i]);
  limit(d);
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y, std::vector<double> slopes)
    : x_(std::move(x)), y_(std::move(y)), m_(std::move(slopes)) {
  const size_t n = x_.size();
  if (n < 2 || y_.size() != n || m_.size() != n) throw std::invalid_argument("MonotoneCubic: size mismatch");
  std::vector<double> d(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
  limit(d);
}

void MonotoneCubic::limit(const std::vector<double>& d) {
  for (size_t i = 0; i + 1 < x_.size(); ++i) {
    if (d[i] == 0.0) {
      m_[i] = m_[i + 1] = 0.0;
      continue;
    }
    const double a = m_[i] / d[i], b = m_[i + 1] / d[i];
    const double s = a * a + b * b;
    if (s > 9.0) {
      const double t = 3.0 / std::sqrt(s);
      m_[i] = t * a * d[i];
      m_[i + 1] = t * b * d[i];
    }
  }
}

double MonotoneCubic::operator()(double t) const {
  if (t <= x_.front()) return y_.front() + m_.front() * (t - x_.front());
  if (t >= x_.back()) return y_.back() + m_.back() * (t - x_.back());
  const size_t k = static_cast<size_t>(std::upper_bound(x_.begin(), x_.end(), t) - x_.begin()) - 1;
  const double h = x_[k + 1] - x_[k];
  const double s = (t - x_[k]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  return h00 * y_[k] + h10 * h * m_[k] + h01 * y_[k + 1] + h11 * h * m_[k + 1];
}

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) v[i] = std::exp(a + (b - a) * i / (n - 1));
  v.front() = lo;
  v.back() = hi;
  return v;
}

}  // namespace hotspot::numerics
