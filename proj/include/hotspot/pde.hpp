#pragma once

#include <Eigen/Sparse>
#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hotspot/anisotropy.hpp"
#include "hotspot/geometry.hpp"
#include "hotspot/semilinear.hpp"
#include "hotspot/young.hpp"

namespace hotspot {

using Vector = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;

// One of the four axis arms of an unknown: +x, -x, +y, -y.
struct Arm {
  static constexpr int kBoundary = -1;  // neighbour lies outside; boundary at distance theta * h
  static constexpr int kSymmetry = -2;  // reflection across the axis of an axisymmetric grid
  int nb = kBoundary;
  double theta = 1.0;
};

// Uniform grid restricted to the domain.  Nodes sit at integer multiples of h.  Axisymmetric
// grids use x = rho >= 0 (first column on the axis) and y = z.
class Grid {
 public:
  Grid(const DomainSpec& domain, double h);

  const DomainSpec& domain() const { return domain_; }
  double h() const { return h_; }
  bool axisymmetric() const { return axisym_; }
  int N() const { return domain_.dimension(); }
  int size() const { return static_cast<int>(ij_.size()); }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  Point point(int k) const;
  Point node_point(int i, int j) const;
  std::array<int, 2> ij(int k) const { return ij_[k]; }
  int index(int i, int j) const;  // -1 if outside
  const std::array<Arm, 4>& arms(int k) const { return arms_[k]; }
  bool boundary_adjacent(int k) const;
  // Flux weight of arm a at node k (1 on Cartesian grids) and nodal mass.
  double face_weight(int k, int a) const;
  double mass(int k) const { return mass_[k]; }
  const Vector& mass_vector() const { return mass_; }

  // Stiffness matrix of -div(w grad) with the fraction-weighted boundary closure.
  const SpMat& stiffness() const { return A_; }
  // Contribution of boundary data b to the right-hand side: sum over boundary arms of w/theta * b(x_b).
  Vector boundary_rhs(const std::function<double(const Point&)>& b) const;
  Point arm_boundary_point(int k, int a) const;

 private:
  DomainSpec domain_;
  double h_;
  bool axisym_;
  int i0_ = 0, j0_ = 0, nx_ = 0, ny_ = 0;
  std::vector<int> index_;
  std::vector<std::array<int, 2>> ij_;
  std::vector<std::array<Arm, 4>> arms_;
  Vector mass_;
  SpMat A_;
};

using GridPtr = std::shared_ptr<const Grid>;
GridPtr make_grid(const DomainSpec& domain, double h);

// Field on the inside nodes, zero (or the given boundary data) outside.  An optional complement
// representation u = scale * (1 - w) is kept when the maximum sits on a plateau close to scale,
// so that argmax can be resolved from w with full relative precision.
struct ScalarField {
  GridPtr grid;
  Vector values;
  std::string problem;
  std::map<std::string, double> params;
  std::function<double(const Point&)> boundary;  // Dirichlet data, empty means 0
  std::optional<Vector> complement;
  double complement_scale = 1.0;
  // Gradient at short boundary arms from the node itself rather than from the far-side nodes;
  // set for the energy discretisation, whose first interior layer is less accurate.
  bool nodal_boundary_gradient = false;

  double boundary_value(const Point& x) const { return boundary ? boundary(x) : 0.0; }
  double max() const;
};

struct MaxInfo {
  Point z;          // interpolated maximiser around the best node
  double value = 0;  // interpolated maximum
  int node = -1;     // best node (lexicographic among exact ties)
  std::vector<int> near_max;  // nodes with value >= max (1 - 1e-3), lexicographically sorted
  std::vector<Point> near_points;
};
MaxInfo locate_max(const ScalarField& field, double rel_threshold = 1e-3);

// Nodal gradient: three-point (possibly non-uniform) differences using boundary data at the
// crossing points; zero normal derivative on the axis of axisymmetric grids.  Across an arm
// shorter than h the boundary value and the far-side nodes are interpolated instead.
std::vector<Eigen::Vector2d> field_gradient(const ScalarField& field);

// ---- linear solves --------------------------------------------------------------------------

class SpdSolver {
 public:
  explicit SpdSolver(const SpMat& A);
  Vector solve(const Vector& b) const;  // relative residual <= 1e-10 or SolverError

 private:
  const SpMat* A_;
  Eigen::SimplicialLDLT<SpMat> ldlt_;
};

ScalarField solve_torsion(const DomainSpec& domain, double h);
ScalarField solve_torsion(const GridPtr& grid);
ScalarField solve_torsion_axisymmetric(const DomainSpec& domain, double h);

struct EigenResult {
  double lambda = 0;
  ScalarField psi;  // unit discrete L2 norm
  ScalarField phi;  // max 1
  int iterations = 0;
};
EigenResult solve_eigen(const DomainSpec& domain, double h);
EigenResult solve_eigen(const GridPtr& grid);

struct HeatStep {
  double t = 0;
  double M = 0;
  Point z;
  int near_count = 0;
};

struct HeatSnapshot {
  double requested = 0;
  double t = 0;
  ScalarField u;
  MaxInfo max;
};

struct HeatTrajectory {
  std::vector<HeatStep> steps;
  std::vector<HeatSnapshot> snapshots;
  std::vector<double> times() const;
};

struct HeatInitial {
  std::function<double(const Point&)> g;  // initial datum at nodes
  Vector nodal;                           // nodal values; used instead of g when nonempty
  bool constant_one = false;              // g == 1 (does not vanish on the boundary)
};

struct HeatOptions {
  double dt_max = 5e-3;
  int steps_per_level = 4;
};

HeatTrajectory solve_heat(const GridPtr& grid, const HeatInitial& g, const std::vector<double>& times,
                          const HeatOptions& opt = {});
HeatTrajectory solve_heat(const DomainSpec& domain, const HeatInitial& g, const std::vector<double>& times, double h);

struct SmallDiffusionResult {
  ScalarField u;  // u^eps
  ScalarField v;  // v^eps = 1 - u^eps / (N eps)
};
SmallDiffusionResult solve_small_diffusion(const GridPtr& grid, double eps);
SmallDiffusionResult solve_small_diffusion(const DomainSpec& domain, double eps, double h);

struct NonlinearOptions {
  std::vector<double> eps_levels{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  int max_iterations = 400;
  double change_tol = 1e-8;
  double energy_tol = 1e-10;
  // Adds the rank-one curvature term of Phi(H) to the lagged-diffusivity matrix (Euclidean and
  // elliptic norms only), which turns the fixed point into a damped Newton iteration.
  bool newton_correction = true;
  const Vector* initial = nullptr;  // starting guess; default is the rescaled linear torsion solution
};

struct NonlinearStats {
  int iterations = 0;
  std::vector<double> energies;  // discrete energy after every accepted step
};

// Discrete energy sum_T W_T Phi(H(grad_T u)) - N sum_i m_i u_i for Cartesian grids.
double discrete_energy(const Grid& grid, const AnisoNorm& norm, const YoungPair& pair, const Vector& u,
                       double eps = 0.0);

ScalarField solve_quasilinear(const GridPtr& grid, const AnisoNorm& norm, const YoungPair& pair,
                              const NonlinearOptions& opt = {}, NonlinearStats* stats = nullptr);
ScalarField solve_p_torsion(const DomainSpec& domain, double p, double h, NonlinearStats* stats = nullptr);
ScalarField solve_p_torsion(const GridPtr& grid, double p, NonlinearStats* stats = nullptr);
ScalarField solve_aniso_torsion(const DomainSpec& domain, const AnisoNorm& norm, const YoungPair& pair, double h,
                                NonlinearStats* stats = nullptr);
ScalarField solve_aniso_torsion(const GridPtr& grid, const AnisoNorm& norm, const YoungPair& pair,
                                NonlinearStats* stats = nullptr);

enum class SemilinearMode { fixed_point, normalized };

struct SemilinearResult {
  ScalarField u;
  double lambda_q = 0;  // normalized mode only
  int iterations = 0;
};
SemilinearResult solve_semilinear(const GridPtr& grid, const SemilinearSource& source, SemilinearMode mode,
                                  double q = 2.0);
SemilinearResult solve_semilinear(const DomainSpec& domain, const SemilinearSource& source, double h,
                                  SemilinearMode mode, double q = 2.0);
SemilinearResult solve_lane_emden(const GridPtr& grid, double q);

// ---- radial quadratures -----------------------------------------------------------------------

// h^eps(sigma) = int_0^pi exp(sigma cos(theta)/sqrt(eps)) sin(theta)^{N-2} dtheta
double radial_h_eps(double eps, double sigma, int N);
// q^eps(r) = N h(0) int_0^r (int_0^s t^{N-1} h(t) dt) ds / (s^{N-1} h(s)^2)
double radial_q_eps(double eps, double r, int N);
// lambda_q of the unit ball by radial shooting for -Lap w = w^{q-1}: lambda_q = |w|_q^{q-2}.
double radial_lane_emden_lambda(double q, int N);

}  // namespace hotspot
