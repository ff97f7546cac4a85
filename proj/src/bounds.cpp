#include "hotspot/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hotspot/errors.hpp"
#include "hotspot/numerics.hpp"

namespace hotspot {

namespace {

constexpr double kPi = std::numbers::pi;

void require_dim(int N) {
  if (N < 1) throw DomainError("dimension must be positive");
}

}  // namespace

double bessel_J(double nu, double x) {
  if (nu < 0) throw DomainError("Bessel order must be nonnegative");
  if (x == 0) return nu == 0 ? 1.0 : 0.0;
  const long double hx = 0.5L * x;
  long double term = std::pow(hx, static_cast<long double>(nu)) / std::tgamma(static_cast<long double>(nu) + 1);
  long double sum = term;
  for (int k = 1; k < 300; ++k) {
    term *= -hx * hx / (static_cast<long double>(k) * (k + nu));
    sum += term;
    if (std::abs(term) < 1e-22L * std::max(1.0L, std::abs(sum)) && k > hx) break;
  }
  return static_cast<double>(sum);
}

double bessel_first_zero(double nu) {
  if (nu < 0 || nu > 10) throw DomainError("Bessel order must lie in [0, 10]");
  auto f = [nu](double x) { return bessel_J(nu, x); };
  double a = std::max(0.5, nu), fa = f(a);
  constexpr double step = 0.05;
  while (fa > 0) {
    const double b = a + step, fb = f(b);
    if (fb <= 0) return numerics::bisect(f, a, b, 1e-14);
    a = b, fa = fb;
  }
  throw SolverError("Bessel zero bracket not found");
}

double lambda1_ball(int N) {
  require_dim(N);
  if (N == 1) return kPi * kPi / 4;
  const double j = bessel_first_zero(N / 2.0 - 1);
  return j * j;
}

double gamma_beta(double a, double b) {
  if (!(a > 0) || !(b > 0)) throw DomainError("beta function needs positive arguments");
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

double ball_volume(int k) {
  require_dim(k);
  return std::pow(kPi, k / 2.0) / std::tgamma(k / 2.0 + 1);
}

double bound_torsion_meanconvex(int N) {
  require_dim(N);
  return 1 / std::sqrt(static_cast<double>(N));
}

double torsion_max_upper(int N, double r_in) {
  require_dim(N);
  if (!(r_in > 0)) throw DomainError("inradius must be positive");
  return N * r_in * r_in / 2;
}

double bound_torsion_john(const std::vector<double>& axes, double r_in, int N) {
  require_dim(N);
  if (!(r_in > 0)) throw DomainError("inradius must be positive");
  if (static_cast<int>(axes.size()) != N) throw DomainError("John ellipsoid needs N semi-axes");
  return std::max(1.0, m_minus2(axes) / r_in) / std::sqrt(static_cast<double>(N));
}

double bound_torsion_curvature(int N, double M0_minus, double r_in) {
  require_dim(N);
  if (M0_minus < 0 || !(r_in > 0)) throw DomainError("curvature bound needs M0- >= 0 and r > 0");
  const double x = (N - 1) * M0_minus * r_in;
  if (x >= 1) throw InapplicableError("(N-1) M0- r_in >= 1");
  return std::sqrt((1 - x) / N);
}

double gradient_G_constant(int N) {
  require_dim(N);
  return N == 2 ? 1.5 : N / 2.0;
}

double gradient_G_upper(int N, double diam, double r_e) {
  if (!(diam > 0) || !(r_e > 0)) throw DomainError("diameter and exterior radius must be positive");
  return gradient_G_constant(N) * diam * (1 + diam / r_e);
}

double bound_torsion_exterior(int N, double diam, double r_e, double r_in) {
  if (!(diam > 0) || !(r_e > 0) || !(r_in > 0)) throw DomainError("exterior bound needs positive inputs");
  const double q = diam / r_e;
  return 1 / std::sqrt(N + (N - 1) * gradient_G_constant(N) * q * (1 + q));
}

double bound_semilinear_distance(const SemilinearSource& source, double u_z, double u_x) {
  if (u_x < 0 || u_z < 0) throw DomainError("values must be nonnegative");
  if (u_x > u_z * (1 + 1e-12)) throw DomainError("u_x must not exceed u_z");
  u_x = std::min(u_x, u_z);
  if (u_x == 0) return 0.0;
  const double Fz = source.F(u_z);
  constexpr int samples = 400;
  for (int k = 0; k < samples; ++k) {
    const double s = u_z * k / samples;
    if (source.F(s) > Fz + 1e-12 * std::max(1.0, std::abs(Fz)))
      throw InapplicableError("F(s) exceeds F(u_z) below the maximum");
  }
  auto f = [&](double s) {
    const double gap = Fz - source.F(s);
    return gap > 0 ? 1 / std::sqrt(2 * gap) : 0.0;
  };
  return numerics::integrate_sqrt_singular_right(f, 0, u_x, 1e-10);
}

double bound_small_diffusion(double eps, int N, double u_z, double r_in, bool use_geometric) {
  require_dim(N);
  if (!(eps > 0)) throw DomainError("eps must be positive");
  const double u = use_geometric ? radial_q_eps(eps, r_in, N) : u_z;
  if (u < 0) throw DomainError("u_z must be nonnegative");
  if (u / eps >= N) throw InapplicableError("u_z / eps >= N");
  return std::sqrt(eps) * std::acosh(N / (N - u / eps));
}

double bound_eigen(double lambda1, int N, double r_in, Form form) {
  (void)r_in;
  if (form == Form::ratio) return kPi / (2 * std::sqrt(lambda1_ball(N)));
  if (!(lambda1 > 0)) throw DomainError("eigenvalue must be positive");
  return kPi / (2 * std::sqrt(lambda1));
}

double bms_bound(int N, double r_in, double diam) {
  if (N < 2) throw DomainError("BMS bound needs N >= 2");
  if (!(r_in > 0) || !(diam > 0)) throw DomainError("inradius and diameter must be positive");
  const double lb = lambda1_ball(N);
  return std::pow(N / 2.0, N - 1) * ball_volume(N - 1) / (ball_volume(N) * std::pow(lb, N)) *
         std::pow(2 * r_in / diam, N * N - 1);
}

double bound_quasilinear(const YoungPair& pair, int N, double r_in, QuasiVariant variant) {
  require_dim(N);
  if (!(r_in > 0)) throw DomainError("inradius must be positive");
  const Growth& g = pair.growth();
  switch (variant) {
    case QuasiVariant::general: return psi_inverse(pair, N * pair.Psi(r_in)) / N;
    case QuasiVariant::power_ratio:
      if (g.a != 0) throw InapplicableError("power-ratio bound needs a = 0");
      return std::pow(g.c / (N * g.C), 1 / g.p);
    case QuasiVariant::shift: {
      const double pc = g.p / (g.p - 1);
      const double r = r_in, a = g.a, c = g.c, C = g.C;
      const double L = std::max(0.0, N * std::pow(C, 1 - pc) * std::pow(r, pc) - N * pc * a * r +
                                         N * (pc - 1) * C * std::pow(a, pc));
      auto R = [&](double d) {
        return std::max(0.0, std::pow(N, pc) * std::pow(c, 1 - pc) * std::pow(d, pc) - N * pc * a * d +
                                 N * (pc - 1) * c * std::pow(a, pc));
      };
      if (L <= R(0)) return 0.0;
      // R is convex with its minimum at d* = a^{p-1} c / N; the root lies on the increasing branch.
      const double dstar = std::pow(a, g.p - 1) * c / N;
      double lo = std::max(0.0, dstar), hi = std::max(r, lo) + 1;
      while (R(hi) < L) hi *= 2;
      const double d = numerics::bisect([&](double x) { return R(x) - L; }, lo, hi, 1e-14 * hi);
      return d / r;
    }
  }
  return 0;
}

double bound_p_eigen(double p, double lambda_1p, int N, Form form) {
  (void)form;
  require_dim(N);
  if (!(p > 1)) throw DomainError("p must exceed 1");
  if (!(lambda_1p > 0)) throw DomainError("eigenvalue must be positive");
  const double pc = p / (p - 1);
  return (1 / p) * std::pow((p - 1) / lambda_1p, 1 / p) * gamma_beta(1 / p, 1 / pc);
}

double lane_emden_integral(double q) {
  if (!(q > 1 && q <= 2)) throw InapplicableError("Lane-Emden exponent must lie in (1, 2]");
  return numerics::integrate_sqrt_singular_right(
      [q](double s) {
        const double v = 1 - std::pow(s, q);
        return v > 0 ? 1 / std::sqrt(v) : 0.0;
      },
      0, 1, 1e-13);
}

double bound_lane_emden(double q, double lambda_q, double max_u, int N, double r_in, double vol, Form form) {
  require_dim(N);
  const double I = lane_emden_integral(q);
  if (!(lambda_q > 0)) throw DomainError("lambda_q must be positive");
  if (form == Form::absolute) {
    if (!(max_u > 0)) throw DomainError("max u must be positive");
    return std::sqrt(q / (2 * lambda_q)) * std::pow(max_u, 1 - q / 2) * I;
  }
  if (!(r_in > 0) || !(vol > 0)) throw DomainError("inradius and volume must be positive");
  return std::sqrt(q / (2 * lambda_q)) * I * std::pow(std::pow(r_in, N) / vol, 1 / q - 0.5);
}

double bound_aniso(const YoungPair& pair, int N, double r_in_aniso) {
  return bound_quasilinear(pair, N, r_in_aniso, QuasiVariant::general);
}

HeatBoundInputs heat_constant(const ScalarField& g, const ScalarField& phi1, double lambda1, int N, double r_in) {
  if (g.grid != phi1.grid) throw DomainError("g and phi_1 must live on the same grid");
  if (!(lambda1 > 0) || !(r_in > 0)) throw DomainError("heat constant needs lambda_1 > 0 and r > 0");
  HeatBoundInputs in;
  in.lambda1 = lambda1;
  in.lambda1_ball = lambda1_ball(N);
  in.r_in = r_in;
  const Grid& grid = *g.grid;
  const double pmax = phi1.values.maxCoeff();
  double sup_all = 0, sup_core = 0, sup_edge = 0;
  for (int k = 0; k < grid.size(); ++k) {
    const double ph = phi1.values(k);
    if (g.values(k) < -1e-14) throw DomainError("g must be nonnegative");
    if (!(ph > 1e-6 * pmax)) continue;
    const double ratio = g.values(k) / ph;
    sup_all = std::max(sup_all, ratio);
    if (ph >= 0.1 * pmax) sup_core = std::max(sup_core, ratio);
    if (grid.boundary_adjacent(k)) sup_edge = std::max(sup_edge, ratio);
  }
  in.sup_ratio = sup_all;
  in.divergent = sup_edge > 10 * std::max(sup_core, 1e-300);
  const auto grad = field_gradient(g);
  double gt = 0;
  for (int k = 0; k < grid.size(); ++k)
    gt = std::max(gt, std::sqrt(g.values(k) * g.values(k) + grad[k].squaredNorm() / lambda1));
  in.grad_term = gt;
  const double m = std::max(in.sup_ratio, in.grad_term);
  in.K = std::sqrt(in.lambda1_ball) * m;
  in.K_Omega = std::sqrt(lambda1) * m;
  return in;
}

double heat_bound(const HeatBoundInputs& in, double M_t, double t) {
  if (in.divergent) throw InapplicableError("sup g/phi_1 diverges towards the boundary");
  if (!(in.K > 0)) throw DomainError("heat constant must be positive");
  return M_t * std::exp(in.lambda1 * t) / in.K;
}

BoundCheck check(double measured, double bound, double tolerance, Sense sense, std::string name) {
  if (measured < 0 || bound < 0 || tolerance < 0) throw DomainError("check needs nonnegative inputs");
  BoundCheck c;
  c.bound_name = std::move(name);
  c.measured = measured;
  c.bound = bound;
  c.tolerance = tolerance;
  c.sense = sense;
  c.slack = bound > 0 ? (measured - bound) / bound : 0.0;
  c.pass = sense == Sense::lower ? measured >= bound * (1 - tolerance) : measured <= bound * (1 + tolerance);
  return c;
}

}  // namespace hotspot
