#include "hotspot/young.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "hotspot/errors.hpp"

namespace hotspot {

struct YoungPair::Table {
  double tau_lo = 0, tau_hi = 0, sigma_hi = 0;
  numerics::MonotoneCubic logPsi;  // log Psi as a function of log tau
};

namespace {

// Inverse of an increasing function g with g(0) = 0 by geometric bracketing and bisection.
double invert_increasing(const std::function<double(double)>& g, double value) {
  if (value <= 0) return 0.0;
  double hi = 1.0;
  while (g(hi) < value) {
    hi *= 2;
    if (hi > 1e300) throw DomainError("inverse out of range");
  }
  double lo = 0.0;
  if (hi > 1.0) lo = 0.5 * hi;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < value ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::string YoungPair::describe() const {
  std::ostringstream os;
  if (kind_ == Kind::power) os << "power(p=" << growth_.p << ")";
  else os << name_ << "(p=" << growth_.p << ",a=" << growth_.a << ",c=" << growth_.c << ",C=" << growth_.C << ")";
  return os.str();
}

double YoungPair::Phi(double s) const {
  if (kind_ == Kind::power) return std::pow(s, growth_.p) / growth_.p;
  return Phi_(s);
}

double YoungPair::phi(double s) const {
  if (kind_ == Kind::power) return std::pow(s, growth_.p - 1);
  return phi_(s);
}

double YoungPair::dphi(double s) const {
  if (kind_ == Kind::power) return (growth_.p - 1) * std::pow(s, growth_.p - 2);
  return dphi_(s);
}

double YoungPair::phi_over_s(double s) const {
  if (kind_ == Kind::power) return std::pow(s, growth_.p - 2);
  if (s < 1e-12) return dphi_(0.0);
  return phi_(s) / s;
}

double YoungPair::psi(double t) const {
  if (t < 0) throw DomainError("psi needs a nonnegative argument");
  if (kind_ == Kind::power) return std::pow(t, p_conj() - 1);
  return invert_increasing(phi_, t);
}

double YoungPair::Psi(double t) const {
  if (t < 0) throw DomainError("Psi needs a nonnegative argument");
  if (kind_ == Kind::power) return std::pow(t, p_conj()) / p_conj();
  if (t == 0) return 0.0;
  if (t >= table_->tau_lo && t <= table_->tau_hi) return std::exp(table_->logPsi(std::log(t)));
  return conjugate(Phi_, phi_, t);
}

YoungPair YoungPair::power(double p) {
  if (!(p > 1)) throw DomainError("power Young pair needs p > 1");
  YoungPair y;
  y.kind_ = Kind::power;
  y.growth_ = {p, 0.0, 1.0, 1.0};
  return y;
}

YoungPair YoungPair::tabulated(std::function<double(double)> Phi, std::function<double(double)> phi,
                               std::function<double(double)> dphi, Growth growth, std::string name) {
  if (!(growth.p > 1)) throw DomainError("Young pair needs p > 1");
  if (!(growth.c > 0 && growth.C >= growth.c && growth.a >= 0)) throw DomainError("invalid growth constants");
  if (std::abs(Phi(0.0)) > 1e-14 || std::abs(phi(0.0)) > 1e-14) throw ConsistencyError("Young function needs Phi(0)=phi(0)=0");
  YoungPair y;
  y.kind_ = Kind::tabulated;
  y.growth_ = growth;
  y.name_ = std::move(name);
  y.Phi_ = std::move(Phi);
  y.phi_ = std::move(phi);
  y.dphi_ = std::move(dphi);
  // Table range: sigma from 1e-6 to where Phi reaches ~1e12.
  double shi = 1.0;
  while (y.Phi_(2 * shi) < 1e12 && shi < 1e6) shi *= 2;
  auto table = std::make_shared<Table>();
  table->sigma_hi = shi;
  const auto sig = numerics::logspace(1e-6, shi, 2048);
  std::vector<double> lt, lv, slope;
  double prev = -1;
  for (double s : sig) {
    const double tau = y.phi_(s);
    if (!(tau > prev)) throw ConsistencyError("phi is not strictly increasing on the table grid");
    prev = tau;
    const double v = conjugate(y.Phi_, y.phi_, tau);
    lt.push_back(std::log(tau));
    lv.push_back(std::log(v));
    // d log Psi / d log tau = tau psi(tau) / Psi(tau), with psi(tau) = s.
    slope.push_back(tau * s / v);
  }
  table->tau_lo = std::exp(lt.front());
  table->tau_hi = std::exp(lt.back());
  table->logPsi = numerics::MonotoneCubic(lt, lv, slope);
  y.table_ = table;
  return y;
}

YoungPair make_power_pair(double p) { return YoungPair::power(p); }

YoungPair make_cosh_pair(double fit_max) {
  auto Phi = [](double s) { return std::cosh(s) - 1.0; };
  auto phi = [](double s) { return std::sinh(s); };
  auto dphi = [](double s) { return std::cosh(s); };
  YoungPair provisional = YoungPair::tabulated(Phi, phi, dphi, {2, 0, 1, 1}, "cosh");
  const Growth g = fit_growth(provisional, 2.0, 0.0, 0.0, fit_max);
  return YoungPair::tabulated(Phi, phi, dphi, g, "cosh");
}

double conjugate(const std::function<double(double)>& Phi, const std::function<double(double)>& phi, double tau) {
  if (tau < 0) throw DomainError("conjugate needs tau >= 0");
  if (tau == 0) return 0.0;
  double smax = 1.0;
  while (phi(smax) <= tau) smax *= 2;
  const auto [s, v] = numerics::golden_max([&](double s) { return tau * s - Phi(s); }, 0.0, smax, 200);
  (void)s;
  return std::max(0.0, v);
}

double conjugate(const YoungPair& pair, double tau) {
  if (tau < 0) throw DomainError("conjugate needs tau >= 0");
  if (pair.kind() == YoungPair::Kind::power) return pair.Psi(tau);
  return conjugate([&](double s) { return pair.Phi(s); }, [&](double s) { return pair.phi(s); }, tau);
}

double psi_inverse(const YoungPair& pair, double s) {
  if (s < 0) throw DomainError("psi_inverse needs s >= 0");
  if (s == 0) return 0.0;
  if (pair.kind() == YoungPair::Kind::power) return std::pow(pair.p_conj() * s, 1.0 / pair.p_conj());
  return invert_increasing([&](double t) { return pair.Psi(t); }, s);
}

ChiResult chi_detail(const YoungPair& pair, double sigma, int N) {
  if (sigma < 0) throw DomainError("chi needs sigma >= 0");
  if (N < 2) throw DomainError("chi needs N >= 2");
  ChiResult r;
  r.value = psi_inverse(pair, N * sigma) / N;
  if (sigma == 0) return r;
  // s = sigma t^m removes the (integrable) power singularity of the integrand at 0.
  const double pc = pair.p();
  const double m = std::max(4.0, std::ceil(3.0 / (1.0 - 1.0 / pc)));
  auto f = [&](double t) {
    if (t <= 0) return 0.0;
    const double s = sigma * std::pow(t, m);
    const double den = pair.psi(psi_inverse(pair, N * s));
    return den > 0 ? sigma * m * std::pow(t, m - 1) / den : 0.0;
  };
  r.quadrature = numerics::integrate(f, 0.0, 1.0, 1e-10, 1e-300);
  return r;
}

double chi(const YoungPair& pair, double sigma, int N) {
  const ChiResult r = chi_detail(pair, sigma, N);
  if (sigma > 0 && std::abs(r.quadrature - r.value) > 1e-4 * std::abs(r.value))
    throw ConsistencyError("chi identity and quadrature disagree");
  return r.value;
}

namespace {

template <class Visit>
void growth_samples(const YoungPair& pair, const Growth& g, double lo, double hi, int samples, Visit visit) {
  const double start = std::max(lo, 1e-6 * std::max(1.0, hi));
  for (int i = 0; i < samples; ++i) {
    const double s = start + (hi - start) * i / (samples - 1);
    const double e1 = std::pow(g.a + s, g.p - 1), e2 = std::pow(g.a + s, g.p - 2);
    visit(s, pair.phi(s) / e1, pair.dphi(s) / e2, pair.phi_over_s(s) / e2);
  }
}

}  // namespace

GrowthReport verify_growth(const YoungPair& pair, const Growth& g, double lo, double hi, int samples) {
  GrowthReport rep;
  growth_samples(pair, g, lo, hi, samples, [&](double s, double r1, double r2, double r3) {
    for (double r : {r1, r2, r3}) {
      const double v = std::max(g.c / r - 1.0, r / g.C - 1.0);
      if (v > rep.worst_violation + 1e-12) {
        rep.worst_violation = v;
        rep.worst_sigma = s;
      }
    }
  });
  if (rep.worst_violation < 1e-12) rep.worst_violation = 0;
  return rep;
}

GrowthReport verify_growth(const YoungPair& pair, double lo, double hi, int samples) {
  return verify_growth(pair, pair.growth(), lo, hi, samples);
}

Growth fit_growth(const YoungPair& pair, double p, double a, double lo, double hi, int samples) {
  Growth g{p, a, std::numeric_limits<double>::infinity(), 0.0};
  growth_samples(pair, g, lo, hi, samples, [&](double, double r1, double r2, double r3) {
    g.c = std::min({g.c, r1, r2, r3});
    g.C = std::max({g.C, r1, r2, r3});
  });
  return g;
}

}  // namespace hotspot
