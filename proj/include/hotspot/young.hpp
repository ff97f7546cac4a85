#pragma once

#include <functional>
#include <memory>
#include <string>

#include "hotspot/numerics.hpp"

namespace hotspot {

// Growth envelope c (a+s)^{p-1} <= phi(s) <= C (a+s)^{p-1}, with the analogous (p-2) envelope for
// the eigenvalues phi'(s) and phi(s)/s of the Hessian of Phi(|xi|).
struct Growth {
  double p = 2, a = 0, c = 1, C = 1;
};

class YoungPair {
 public:
  enum class Kind { power, tabulated };

  YoungPair() = default;

  Kind kind() const { return kind_; }
  const Growth& growth() const { return growth_; }
  double p() const { return growth_.p; }
  double p_conj() const { return growth_.p / (growth_.p - 1); }
  std::string describe() const;

  double Phi(double s) const;
  double phi(double s) const;
  double dphi(double s) const;
  double Psi(double t) const;
  double psi(double t) const;  // inverse of phi

  // phi(s)/s, continuous at 0 and finite for p >= 2; used as the lagged diffusivity.
  double phi_over_s(double s) const;

  static YoungPair power(double p);
  // Generic pair from Phi, phi = Phi', phi'; Psi is tabulated by numeric conjugation.
  static YoungPair tabulated(std::function<double(double)> Phi, std::function<double(double)> phi,
                             std::function<double(double)> dphi, Growth growth, std::string name = "tabulated");

 private:
  struct Table;

  Kind kind_ = Kind::power;
  Growth growth_;
  std::string name_ = "power";
  std::function<double(double)> Phi_, phi_, dphi_;
  std::shared_ptr<const Table> table_;
};

YoungPair make_power_pair(double p);
// Phi(s) = cosh(s) - 1, a standard non-power example; growth constants fitted on [0, fit_max].
YoungPair make_cosh_pair(double fit_max = 1.0);

// Psi(tau) = max_{s >= 0} [tau s - Phi(s)] by golden-section search on [0, s_max], phi(s_max) > tau.
double conjugate(const std::function<double(double)>& Phi, const std::function<double(double)>& phi, double tau);
double conjugate(const YoungPair& pair, double tau);

double psi_inverse(const YoungPair& pair, double s);

struct ChiResult {
  double value = 0;       // Psi^{-1}(N sigma) / N
  double quadrature = 0;  // int_0^sigma ds / psi(Psi^{-1}(N s))
};
ChiResult chi_detail(const YoungPair& pair, double sigma, int N);
// Returns Psi^{-1}(N sigma)/N after cross-checking the quadrature form; throws ConsistencyError.
double chi(const YoungPair& pair, double sigma, int N);

struct GrowthReport {
  double worst_violation = 0;  // max relative excess over both envelopes; 0 means satisfied
  double worst_sigma = 0;
};
GrowthReport verify_growth(const YoungPair& pair, const Growth& g, double lo, double hi, int samples = 400);
GrowthReport verify_growth(const YoungPair& pair, double lo, double hi, int samples = 400);
// Fits the tightest c, C for given p, a on [lo, hi].
Growth fit_growth(const YoungPair& pair, double p, double a, double lo, double hi, int samples = 400);

}  // namespace hotspot
