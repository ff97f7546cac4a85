#include <algorithm>
#include <cmath>
#include <limits>

#include "hotspot/errors.hpp"
#include "hotspot/numerics.hpp"
#include "hotspot/pde.hpp"

namespace hotspot {

namespace {

// Half-cell triangle of the node c spanned by its (+x,+y) or (-x,-y) arms.  With the boundary
// value 0 taken at the arm crossing, g_x = dx (u_nx - u_c) and g_y = dy (u_ny - u_c).
struct Tri {
  int c = 0, nx = -1, ny = -1;
  double dx = 0, dy = 0;
  double Wxy = 0, Wx = 0, Wy = 0;
};

std::vector<Tri> build_triangles(const Grid& g) {
  if (g.axisymmetric()) throw UnsupportedError("quasilinear solvers are implemented for planar grids");
  const double h = g.h();
  std::vector<Tri> tris;
  tris.reserve(2 * g.size());
  for (int c = 0; c < g.size(); ++c) {
    const auto& arms = g.arms(c);
    for (int side = 0; side < 2; ++side) {
      const Arm& ax = arms[side];
      const Arm& ay = arms[2 + side];
      const double sgn = side == 0 ? 1.0 : -1.0;
      Tri t;
      t.c = c;
      t.nx = ax.nb >= 0 ? ax.nb : -1;
      t.ny = ay.nb >= 0 ? ay.nb : -1;
      t.dx = sgn / (ax.theta * h);
      t.dy = sgn / (ay.theta * h);
      const double tx = ax.nb >= 0 ? 1.0 : 2 * ax.theta;
      const double ty = ay.nb >= 0 ? 1.0 : 2 * ay.theta;
      const double txy = std::min(tx, ty);
      t.Wxy = 0.5 * h * h * txy;
      t.Wx = 0.5 * h * h * (tx - txy);
      t.Wy = 0.5 * h * h * (ty - txy);
      tris.push_back(t);
    }
  }
  return tris;
}

class Model {
 public:
  Model(const GridPtr& grid, const AnisoNorm& norm, const YoungPair& pair, bool newton)
      : grid_(grid), norm_(norm), pair_(pair), tris_(build_triangles(*grid)), B_(norm.preconditioner()),
        newton_(newton && norm.kind() != AnisoNorm::Kind::lp) {
    load_ = grid->mass_vector() * static_cast<double>(grid->N());
  }

  int size() const { return grid_->size(); }

  double energy(const Vector& u, double eps) const {
    const double base = pair_.Phi(eps);
    double E = 0;
    for (const Tri& t : tris_) {
      const double uc = u(t.c);
      const double gx = t.dx * ((t.nx >= 0 ? u(t.nx) : 0.0) - uc);
      const double gy = t.dy * ((t.ny >= 0 ? u(t.ny) : 0.0) - uc);
      auto term = [&](double W, const Vec2& xi) {
        if (W <= 0) return;
        const double H = norm_.H(xi);
        E += W * (pair_.Phi(std::sqrt(eps * eps + H * H)) - base);
      };
      term(t.Wxy, Vec2(gx, gy));
      term(t.Wx, Vec2(gx, 0));
      term(t.Wy, Vec2(0, gy));
    }
    return E - load_.dot(u);
  }

  // Gradient of the energy and the (lagged-diffusivity or Newton) matrix at u.
  void linearise(const Vector& u, double eps, Vector& grad, SpMat& P) const {
    grad = -load_;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(tris_.size() * 27);
    for (const Tri& t : tris_) {
      const double uc = u(t.c);
      const double gx = t.dx * ((t.nx >= 0 ? u(t.nx) : 0.0) - uc);
      const double gy = t.dy * ((t.ny >= 0 ? u(t.ny) : 0.0) - uc);
      auto term = [&](double W, bool ux, bool uy) {
        if (W <= 0) return;
        const Vec2 xi(ux ? gx : 0.0, uy ? gy : 0.0);
        const double H = norm_.H(xi);
        const double s = std::sqrt(eps * eps + H * H);
        const double k = pair_.phi_over_s(s);
        const Vec2 G = k * norm_.H_gradH(xi);
        // Nodes touched and their derivative vectors d xi / d u_node (masked to the active components).
        int nodes[3];
        Vec2 v[3];
        int n = 0;
        nodes[n] = t.c;
        v[n++] = Vec2(ux ? -t.dx : 0.0, uy ? -t.dy : 0.0);
        if (ux && t.nx >= 0) {
          nodes[n] = t.nx;
          v[n++] = Vec2(t.dx, 0);
        }
        if (uy && t.ny >= 0) {
          nodes[n] = t.ny;
          v[n++] = Vec2(0, t.dy);
        }
        Eigen::Matrix2d Bm = B_;
        if (!ux) Bm.row(0).setZero(), Bm.col(0).setZero();
        if (!uy) Bm.row(1).setZero(), Bm.col(1).setZero();
        Eigen::Matrix2d K = k * Bm;
        if (newton_ && s > 0) {
          const Vec2 Bx = Bm * xi;
          K += (pair_.dphi(s) - k) / (s * s) * Bx * Bx.transpose();
        }
        for (int a = 0; a < n; ++a) {
          grad(nodes[a]) += W * G.dot(v[a]);
          for (int b = 0; b < n; ++b) {
            const double val = W * v[a].dot(K * v[b]);
            if (val != 0) trip.emplace_back(nodes[a], nodes[b], val);
          }
        }
      };
      term(t.Wxy, true, true);
      term(t.Wx, true, false);
      term(t.Wy, false, true);
    }
    P.resize(size(), size());
    P.setFromTriplets(trip.begin(), trip.end());
  }

 private:
  GridPtr grid_;
  AnisoNorm norm_;
  YoungPair pair_;
  std::vector<Tri> tris_;
  Eigen::Matrix2d B_;
  bool newton_;
  Vector load_;
};

Vector initial_guess(const GridPtr& grid, const Model& model, double eps) {
  const SpdSolver lin(grid->stiffness());
  const Vector u2 = lin.solve(grid->mass_vector() * static_cast<double>(grid->N()));
  auto f = [&](double lt) { return model.energy(std::exp(lt) * u2, eps); };
  int best = 0;
  double bv = std::numeric_limits<double>::infinity();
  constexpr int n = 49;
  for (int k = 0; k < n; ++k) {
    const double v = f(-12 + 24.0 * k / (n - 1));
    if (v < bv) bv = v, best = k;
  }
  const double lt0 = -12 + 24.0 * best / (n - 1), step = 24.0 / (n - 1);
  const auto [lt, val] = numerics::golden_min(f, lt0 - step, lt0 + step, 100);
  (void)val;
  return std::exp(lt) * u2;
}

}  // namespace

double discrete_energy(const Grid& grid, const AnisoNorm& norm, const YoungPair& pair, const Vector& u, double eps) {
  const GridPtr shared(std::shared_ptr<const Grid>{}, &grid);
  const Model model(shared, norm, pair, false);
  return model.energy(u, eps);
}

ScalarField solve_quasilinear(const GridPtr& grid, const AnisoNorm& norm, const YoungPair& pair,
                              const NonlinearOptions& opt, NonlinearStats* stats) {
  const Model model(grid, norm, pair, opt.newton_correction);
  if (opt.eps_levels.empty()) throw DomainError("at least one regularisation level is required");
  Vector u = opt.initial ? *opt.initial : initial_guess(grid, model, opt.eps_levels.front());
  if (u.size() != grid->size()) throw DomainError("initial guess has the wrong size");
  NonlinearStats local;
  NonlinearStats& st = stats ? *stats : local;
  const bool newton = opt.newton_correction && norm.kind() != AnisoNorm::Kind::lp;
  Eigen::SimplicialLDLT<SpMat> ldlt;
  bool analysed = false;
  for (size_t L = 0; L < opt.eps_levels.size(); ++L) {
    const double eps = opt.eps_levels[L];
    const bool final_level = L + 1 == opt.eps_levels.size();
    const double ctol = final_level ? opt.change_tol : std::max(opt.change_tol, 1e-6);
    const double etol = final_level ? opt.energy_tol : std::max(opt.energy_tol, 1e-8);
    double E = model.energy(u, eps);
    bool converged = false;
    for (int it = 0; it < opt.max_iterations; ++it) {
      Vector grad;
      SpMat P;
      model.linearise(u, eps, grad, P);
      if (!analysed) {
        ldlt.analyzePattern(P);
        analysed = true;
      }
      ldlt.factorize(P);
      if (ldlt.info() != Eigen::Success) throw SolverError("nonlinear preconditioner factorisation failed");
      const Vector d = -ldlt.solve(grad);
      const double slope = grad.dot(d);
      if (!(slope < 0)) {
        converged = true;
        break;
      }
      double alpha = 1.0, En = model.energy(u + d, eps);
      while (!(En <= E + 1e-4 * alpha * slope) && alpha > 1e-12) {
        alpha *= 0.5;
        En = model.energy(u + alpha * d, eps);
      }
      if (!(En <= E + 1e-4 * alpha * slope)) {
        // No further decrease is representable: accept the current iterate.
        converged = true;
        break;
      }
      if (!newton && alpha == 1.0) {
        for (int e = 0; e < 10; ++e) {
          const double Ee = model.energy(u + 2 * alpha * d, eps);
          if (!(Ee < En)) break;
          alpha *= 2;
          En = Ee;
        }
      }
      const double change = alpha * d.cwiseAbs().maxCoeff();
      const double dE = E - En;
      u += alpha * d;
      E = En;
      ++st.iterations;
      st.energies.push_back(E);
      if (change < ctol * std::max(1.0, u.cwiseAbs().maxCoeff()) && dE <= etol * std::abs(E)) {
        converged = true;
        break;
      }
    }
    if (!converged && final_level) throw SolverError("quasilinear iteration did not converge");
  }
  ScalarField f;
  f.grid = grid;
  f.values = std::move(u);
  f.problem = "quasilinear";
  f.params["p"] = pair.p();
  f.nodal_boundary_gradient = true;
  return f;
}

ScalarField solve_p_torsion(const GridPtr& grid, double p, NonlinearStats* stats) {
  if (!(p > 1)) throw DomainError("p must exceed 1");
  const AnisoNorm euclid = AnisoNorm::euclidean();
  NonlinearOptions opt;
  // Large exponents are reached by continuation in p from the p = 4 solution.
  std::vector<double> ps;
  for (double q = 4; q < p; q *= 2) ps.push_back(q);
  ps.push_back(p);
  ScalarField f;
  Vector start;
  for (size_t k = 0; k < ps.size(); ++k) {
    const YoungPair pair = make_power_pair(ps[k]);
    if (k > 0) {
      const Model model(grid, euclid, pair, false);
      auto E = [&](double lt) { return model.energy(std::exp(lt) * f.values, opt.eps_levels.front()); };
      const auto [lt, val] = numerics::golden_min(E, -3.0, 3.0, 100);
      (void)val;
      start = std::exp(lt) * f.values;
      opt.initial = &start;
    }
    f = solve_quasilinear(grid, euclid, pair, opt, stats);
  }
  f.problem = "p_torsion";
  return f;
}

ScalarField solve_p_torsion(const DomainSpec& domain, double p, double h, NonlinearStats* stats) {
  return solve_p_torsion(make_grid(domain, h), p, stats);
}

ScalarField solve_aniso_torsion(const GridPtr& grid, const AnisoNorm& norm, const YoungPair& pair,
                                NonlinearStats* stats) {
  ScalarField f = solve_quasilinear(grid, norm, pair, {}, stats);
  f.problem = "aniso";
  return f;
}

ScalarField solve_aniso_torsion(const DomainSpec& domain, const AnisoNorm& norm, const YoungPair& pair, double h,
                                NonlinearStats* stats) {
  return solve_aniso_torsion(make_grid(domain, h), norm, pair, stats);
}

}  // namespace hotspot
