#include <cmath>
#include <numbers>

#include "hotspot/errors.hpp"
#include "hotspot/numerics.hpp"
#include "hotspot/pde.hpp"

namespace hotspot {

namespace {

constexpr double kPi = std::numbers::pi;

// e^{-sigma/sqrt(eps)} h^eps(sigma), bounded for all sigma >= 0.
double h_scaled(double eps, double sigma, int N) {
  const double k = sigma / std::sqrt(eps);
  auto f = [&](double th) { return std::exp(k * (std::cos(th) - 1)) * std::pow(std::sin(th), N - 2); };
  if (k > 50) {
    // The integrand concentrates near theta = 0 with width ~ 1/sqrt(k).
    const double w = std::min(kPi, 40 / std::sqrt(k));
    return numerics::integrate(f, 0, w, 1e-13, 0) + numerics::integrate(f, w, kPi, 1e-13, 1e-300);
  }
  return numerics::integrate(f, 0, kPi, 1e-13, 0);
}

double ball_sphere_area(int N) { return 2 * std::pow(kPi, N / 2.0) / std::tgamma(N / 2.0); }

}  // namespace

double radial_h_eps(double eps, double sigma, int N) {
  if (!(eps > 0) || sigma < 0 || N < 2) throw DomainError("radial_h_eps needs eps > 0, sigma >= 0, N >= 2");
  return std::exp(sigma / std::sqrt(eps)) * h_scaled(eps, sigma, N);
}

double radial_q_eps(double eps, double r, int N) {
  if (!(eps > 0) || r < 0 || N < 2) throw DomainError("radial_q_eps needs eps > 0, r >= 0, N >= 2");
  if (r == 0) return 0.0;
  const double se = std::sqrt(eps);
  const double h0 = h_scaled(eps, 0, N);
  // Inner integral I(s) = e^{s/sqrt(eps)} Ihat(s), Ihat(s) = int_0^s t^{N-1} e^{(t-s)/sqrt(eps)} hhat(t) dt.
  auto inner = [&](double s) {
    return numerics::integrate(
        [&](double t) { return std::pow(t, N - 1) * std::exp((t - s) / se) * h_scaled(eps, t, N); }, 0, s, 1e-11,
        0);
  };
  auto outer = [&](double s) {
    if (s <= 0) return 0.0;
    const double hs = h_scaled(eps, s, N);
    return inner(s) * std::exp(-s / se) / (std::pow(s, N - 1) * hs * hs);
  };
  return N * h0 * numerics::integrate(outer, 0, r, 1e-10, 0);
}

double radial_lane_emden_lambda(double q, int N) {
  if (!(q > 1 && q <= 2)) throw DomainError("Lane-Emden exponent must lie in (1, 2]");
  if (N < 1) throw DomainError("dimension must be positive");
  if (q == 2) {
    // |w|_q^{q-2} = 1 for q = 2; the eigenvalue is the Bessel one.
    const double nu = N / 2.0 - 1;
    // Shooting on -v'' - (N-1)/s v' = v with v(0)=1: first zero j.
    double s = 1e-6, v = 1 - s * s / (2 * N), dv = -s / N;
    const double ds = 1e-4;
    auto rhs = [&](double ss, double vv, double dd, double& a, double& b) {
      a = dd;
      b = -vv - (N - 1) / ss * dd;
    };
    while (v > 0) {
      double k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b;
      rhs(s, v, dv, k1a, k1b);
      rhs(s + ds / 2, v + ds / 2 * k1a, dv + ds / 2 * k1b, k2a, k2b);
      rhs(s + ds / 2, v + ds / 2 * k2a, dv + ds / 2 * k2b, k3a, k3b);
      rhs(s + ds, v + ds * k3a, dv + ds * k3b, k4a, k4b);
      const double nv = v + ds / 6 * (k1a + 2 * k2a + 2 * k3a + k4a);
      const double nd = dv + ds / 6 * (k1b + 2 * k2b + 2 * k3b + k4b);
      if (nv <= 0) {
        const double j = s + ds * v / (v - nv);
        (void)nu;
        return j * j;
      }
      s += ds, v = nv, dv = nd;
    }
    throw SolverError("radial shooting failed");
  }
  // -v'' - (N-1)/s v' = v^{q-1}, v(0) = 1, integrated to the first zero R; state (v, v', int v^q s^{N-1}).
  const double ds = 2e-5;
  double s = 1e-6;
  double y[3] = {1 - s * s / (2 * N), -s / N, 0};
  auto rhs = [&](double ss, const double* yy, double* out) {
    const double vp = std::max(yy[0], 0.0);
    out[0] = yy[1];
    out[1] = -std::pow(vp, q - 1) - (N - 1) / ss * yy[1];
    out[2] = std::pow(vp, q) * std::pow(ss, N - 1);
  };
  for (int guard = 0; guard < 10000000; ++guard) {
    double k1[3], k2[3], k3[3], k4[3], t[3], ny[3];
    rhs(s, y, k1);
    for (int i = 0; i < 3; ++i) t[i] = y[i] + ds / 2 * k1[i];
    rhs(s + ds / 2, t, k2);
    for (int i = 0; i < 3; ++i) t[i] = y[i] + ds / 2 * k2[i];
    rhs(s + ds / 2, t, k3);
    for (int i = 0; i < 3; ++i) t[i] = y[i] + ds * k3[i];
    rhs(s + ds, t, k4);
    for (int i = 0; i < 3; ++i) ny[i] = y[i] + ds / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    if (ny[0] <= 0) {
      const double f = y[0] / (y[0] - ny[0]);
      const double R = s + f * ds;
      const double I = y[2] + f * (ny[2] - y[2]);
      // w(x) = c v(R |x|) solves -Lap w = w^{q-1} on the unit ball with c = R^{-2/(2-q)}.
      const double c = std::pow(R, -2.0 / (2 - q));
      const double wq = std::pow(c, q) * std::pow(R, -N) * ball_sphere_area(N) * I;
      return std::pow(wq, (q - 2) / q);
    }
    s += ds;
    for (int i = 0; i < 3; ++i) y[i] = ny[i];
  }
  throw SolverError("radial shooting failed");
}

}  // namespace hotspot
