#include <algorithm>
#include <cmath>

#include "hotspot/errors.hpp"
#include "hotspot/pde.hpp"

namespace hotspot {

namespace {

double max_abs(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

ScalarField make_field(const GridPtr& grid, Vector values, std::string problem) {
  ScalarField f;
  f.grid = grid;
  f.values = std::move(values);
  f.problem = std::move(problem);
  return f;
}

SpMat shifted(const Grid& g, double sigma) {
  SpMat S = g.stiffness();
  if (sigma != 0) {
    for (int k = 0; k < g.size(); ++k) S.coeffRef(k, k) += sigma * g.mass(k);
  }
  return S;
}

}  // namespace

ScalarField solve_torsion(const GridPtr& grid) {
  const SpdSolver solver(grid->stiffness());
  Vector u = solver.solve(grid->mass_vector() * static_cast<double>(grid->N()));
  ScalarField f = make_field(grid, std::move(u), "torsion");
  f.params["N"] = grid->N();
  return f;
}

ScalarField solve_torsion(const DomainSpec& domain, double h) { return solve_torsion(make_grid(domain, h)); }

ScalarField solve_torsion_axisymmetric(const DomainSpec& domain, double h) {
  if (!domain.axisymmetric()) throw UnsupportedError("axisymmetric solve needs a revolution profile");
  return solve_torsion(make_grid(domain, h));
}

EigenResult solve_eigen(const GridPtr& grid) {
  const Grid& g = *grid;
  const Vector& m = g.mass_vector();
  const SpdSolver solver(g.stiffness());
  Vector psi = solver.solve(m);
  auto normalise = [&](Vector& v) { v /= std::sqrt(v.dot(m.cwiseProduct(v))); };
  normalise(psi);
  double lambda = psi.dot(g.stiffness() * psi);
  EigenResult out;
  bool converged = false;
  for (int it = 1; it <= 2000; ++it) {
    Vector next = solver.solve(m.cwiseProduct(psi));
    normalise(next);
    const double lnext = next.dot(g.stiffness() * next);
    const double dl = std::abs(lnext - lambda) / lnext;
    const double dv = max_abs(next - psi) / max_abs(next);
    psi = std::move(next);
    lambda = lnext;
    out.iterations = it;
    if (dl < 1e-12 && dv < 1e-10) {
      converged = true;
      break;
    }
  }
  if (!converged) throw SolverError("inverse iteration stagnated");
  if (psi.sum() < 0) psi = -psi;
  out.lambda = lambda;
  out.psi = make_field(grid, psi, "eigen");
  out.phi = make_field(grid, psi / psi.maxCoeff(), "eigen");
  out.psi.params["lambda"] = out.phi.params["lambda"] = lambda;
  return out;
}

EigenResult solve_eigen(const DomainSpec& domain, double h) { return solve_eigen(make_grid(domain, h)); }

std::vector<double> HeatTrajectory::times() const {
  std::vector<double> t;
  t.reserve(steps.size());
  for (const auto& s : steps) t.push_back(s.t);
  return t;
}

HeatTrajectory solve_heat(const GridPtr& grid, const HeatInitial& init, const std::vector<double>& times,
                          const HeatOptions& opt) {
  const Grid& g = *grid;
  if (times.empty()) throw DomainError("heat solve needs at least one output time");
  std::vector<double> req = times;
  std::sort(req.begin(), req.end());
  if (!(req.front() > 0)) throw DomainError("output times must be positive");
  const bool comp = init.constant_one;
  const bool nodal = init.nodal.size() > 0;
  if (!comp && !nodal && !init.g) throw DomainError("heat solve needs an initial datum");
  if (nodal && init.nodal.size() != g.size()) throw DomainError("nodal initial datum has the wrong size");
  const Vector& m = g.mass_vector();
  // With g == 1 the complement w = 1 - u solves the heat equation with w(0) = 0 and w = 1 on the boundary.
  Vector x(g.size());
  if (comp) {
    x.setZero();
  } else {
    for (int k = 0; k < g.size(); ++k) {
      x(k) = nodal ? init.nodal(k) : init.g(g.point(k));
      if (x(k) < -1e-14) throw DomainError("initial datum must be nonnegative");
    }
  }
  const Vector brhs = comp ? g.boundary_rhs([](const Point&) { return 1.0; }) : Vector::Zero(g.size());

  auto field_of = [&](const Vector& state) {
    ScalarField f;
    f.grid = grid;
    f.problem = "heat";
    if (comp) {
      f.values = Vector::Ones(g.size()) - state;
      f.complement = state;
      f.boundary = [](const Point&) { return 1.0; };
    } else {
      f.values = state;
    }
    return f;
  };

  HeatTrajectory traj;
  size_t next_req = 0;
  const double T = req.back();
  double t = 0, dt = 0.5 * g.h() * g.h();
  Vector prev;
  while (t < T * (1 - 1e-12)) {
    dt = std::min(dt, opt.dt_max);
    const bool last_level = dt >= opt.dt_max;
    SpMat Sie = shifted(g, 1.0 / dt), Sbdf = shifted(g, 1.5 / dt);
    const SpdSolver ie(Sie), bdf(Sbdf);
    for (int s = 0; (last_level || s < opt.steps_per_level) && t < T * (1 - 1e-12); ++s) {
      Vector nx;
      if (s == 0) {
        nx = ie.solve(m.cwiseProduct(x) / dt + brhs);
      } else {
        nx = bdf.solve(m.cwiseProduct(2.0 * x - 0.5 * prev) / dt + brhs);
      }
      prev = std::move(x);
      x = std::move(nx);
      t += dt;
      const ScalarField f = field_of(x);
      const MaxInfo mi = locate_max(f);
      traj.steps.push_back({t, f.max(), mi.z, static_cast<int>(mi.near_max.size())});
      while (next_req < req.size() && t >= req[next_req] * (1 - 1e-12)) {
        traj.snapshots.push_back({req[next_req], t, f, mi});
        ++next_req;
      }
    }
    dt *= 2;
  }
  return traj;
}

HeatTrajectory solve_heat(const DomainSpec& domain, const HeatInitial& g, const std::vector<double>& times,
                          double h) {
  return solve_heat(make_grid(domain, h), g, times, {});
}

SmallDiffusionResult solve_small_diffusion(const GridPtr& grid, double eps) {
  if (!(eps > 0)) throw DomainError("eps must be positive");
  const Grid& g = *grid;
  const double N = g.N();
  const SpMat S = shifted(g, 1.0 / eps);
  const SpdSolver solver(S);
  // v = 1 - u/(N eps) solves -eps Lap v + v = 0 with v = 1 on the boundary.
  Vector v = solver.solve(g.boundary_rhs([](const Point&) { return 1.0; }));
  Vector u = solver.solve(g.mass_vector() * N);
  SmallDiffusionResult out;
  out.u = make_field(grid, u, "small_diffusion");
  out.u.params["eps"] = eps;
  out.u.complement = v;
  out.u.complement_scale = N * eps;
  out.v = make_field(grid, v, "small_diffusion_v");
  out.v.params["eps"] = eps;
  out.v.boundary = [](const Point&) { return 1.0; };
  return out;
}

SmallDiffusionResult solve_small_diffusion(const DomainSpec& domain, double eps, double h) {
  return solve_small_diffusion(make_grid(domain, h), eps);
}

SemilinearResult solve_lane_emden(const GridPtr& grid, double q) {
  if (!(q > 1 && q <= 2)) throw DomainError("Lane-Emden exponent must lie in (1, 2]");
  const Grid& g = *grid;
  const Vector& m = g.mass_vector();
  const SpdSolver solver(g.stiffness());
  auto normalise = [&](Vector& v) {
    v = v.cwiseMax(0.0);
    double s = 0;
    for (int k = 0; k < v.size(); ++k) s += m(k) * std::pow(v(k), q);
    v /= std::pow(s, 1.0 / q);
  };
  Vector u = solver.solve(m);
  normalise(u);
  double lambda = u.dot(g.stiffness() * u);
  SemilinearResult out;
  bool converged = false;
  for (int it = 1; it <= 4000; ++it) {
    Vector rhs(u.size());
    for (int k = 0; k < u.size(); ++k) rhs(k) = m(k) * std::pow(u(k), q - 1);
    Vector next = solver.solve(rhs);
    normalise(next);
    const double lnext = next.dot(g.stiffness() * next);
    const double dl = std::abs(lnext - lambda) / lnext;
    const double dv = max_abs(next - u) / max_abs(next);
    u = std::move(next);
    lambda = lnext;
    out.iterations = it;
    if (dl < 1e-12 && dv < 1e-10) {
      converged = true;
      break;
    }
  }
  if (!converged) throw SolverError("normalized iteration did not converge");
  out.lambda_q = lambda;
  out.u = make_field(grid, u, "lane_emden");
  out.u.params["q"] = q;
  out.u.params["lambda_q"] = lambda;
  return out;
}

SemilinearResult solve_semilinear(const GridPtr& grid, const SemilinearSource& source, SemilinearMode mode,
                                  double q) {
  if (mode == SemilinearMode::normalized) return solve_lane_emden(grid, q);
  const Grid& g = *grid;
  const Vector& m = g.mass_vector();
  const double sigma = std::max(0.0, source.lipschitz);
  const SpMat S = shifted(g, sigma);
  const SpdSolver solver(S);
  Vector u = Vector::Zero(g.size());
  SemilinearResult out;
  for (int it = 1; it <= 5000; ++it) {
    Vector rhs(u.size());
    for (int k = 0; k < u.size(); ++k) rhs(k) = m(k) * (source.f(u(k)) + sigma * u(k));
    Vector next = solver.solve(rhs);
    if (!next.allFinite()) throw SolverError("fixed-point iteration diverged");
    const double change = max_abs(next - u);
    u = std::move(next);
    out.iterations = it;
    if (change <= 1e-12 * std::max(1.0, max_abs(u))) {
      out.u = make_field(grid, u, "semilinear");
      return out;
    }
  }
  throw SolverError("fixed-point iteration did not converge");
}

SemilinearResult solve_semilinear(const DomainSpec& domain, const SemilinearSource& source, double h,
                                  SemilinearMode mode, double q) {
  return solve_semilinear(make_grid(domain, h), source, mode, q);
}

}  // namespace hotspot
