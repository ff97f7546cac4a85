#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hotspot/pde.hpp"
#include "hotspot/semilinear.hpp"
#include "hotspot/young.hpp"

namespace hotspot {

// ---- special functions ------------------------------------------------------------------------

double bessel_J(double nu, double x);
// First positive zero j_{nu,1}, nu in [0, 10].
double bessel_first_zero(double nu);
// lambda_1 of the unit ball in R^N: j_{N/2-1,1}^2.
double lambda1_ball(int N);
double gamma_beta(double a, double b);
double ball_volume(int k);

// ---- bounds -----------------------------------------------------------------------------------

enum class Form { absolute, ratio };
enum class QuasiVariant { general, power_ratio, shift };

double bound_torsion_meanconvex(int N);
double torsion_max_upper(int N, double r_in);
double bound_torsion_john(const std::vector<double>& axes, double r_in, int N);
// Throws InapplicableError when (N-1) M0_minus r_in >= 1.
double bound_torsion_curvature(int N, double M0_minus, double r_in);
double gradient_G_constant(int N);
double gradient_G_upper(int N, double diam, double r_e);
double bound_torsion_exterior(int N, double diam, double r_e, double r_in);
double bound_semilinear_distance(const SemilinearSource& source, double u_z, double u_x);
double bound_small_diffusion(double eps, int N, double u_z, double r_in, bool use_geometric);
double bound_eigen(double lambda1, int N, double r_in, Form form);
double bms_bound(int N, double r_in, double diam);
double bound_quasilinear(const YoungPair& pair, int N, double r_in, QuasiVariant variant);
double bound_p_eigen(double p, double lambda_1p, int N, Form form);
// int_0^1 (1 - s^q)^{-1/2} ds
double lane_emden_integral(double q);
double bound_lane_emden(double q, double lambda_q, double max_u, int N, double r_in, double vol, Form form);
double bound_aniso(const YoungPair& pair, int N, double r_in_aniso);

struct HeatBoundInputs {
  double lambda1 = 0;       // lambda_1(Omega)
  double lambda1_ball = 0;  // lambda_1(B)
  double sup_ratio = 0;     // sup g/phi_1 over nodes with phi_1 > 1e-6 max
  double grad_term = 0;     // max sqrt(g^2 + |grad g|^2 / lambda_1)
  double K = 0;
  double K_Omega = 0;
  double r_in = 0;
  bool divergent = false;   // g/phi_1 blows up towards the boundary
  std::vector<std::pair<double, double>> M_of_t;
};

HeatBoundInputs heat_constant(const ScalarField& g, const ScalarField& phi1, double lambda1, int N, double r_in);
// Lower bound for d(z(t))/r_in; InapplicableError if sup g/phi_1 is not finite.
double heat_bound(const HeatBoundInputs& in, double M_t, double t);

// ---- certification ----------------------------------------------------------------------------

enum class Sense { lower, upper };

struct BoundCheck {
  std::string bound_name;
  double measured = 0;
  double bound = 0;
  double slack = 0;  // (measured - bound) / bound
  double tolerance = 0.02;
  bool pass = false;
  Sense sense = Sense::lower;
  std::map<std::string, double> inputs;
};

// Lower sense: pass iff measured >= bound (1 - tol).  Upper sense: measured <= bound (1 + tol).
BoundCheck check(double measured, double bound, double tolerance = 0.02, Sense sense = Sense::lower,
                 std::string name = {});

}  // namespace hotspot
