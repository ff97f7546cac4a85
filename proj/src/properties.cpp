#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "hotspot/errors.hpp"
#include "pipeline.hpp"

namespace hotspot {

namespace {

using detail::DomainCache;
using detail::Solved;

struct Ctx {
  const ExperimentConfig& cfg;
  DomainCache& cache;
  const DomainConfig& dc;
  const ProblemConfig& pc;
  const std::string& label;
  std::vector<PropertyResult>& out;

  void add(const std::string& prop, double margin, const std::string& note = {}) {
    out.push_back({dc.id, label, prop, margin, margin >= 0 ? "pass" : "fail", note});
  }
  void skip(const std::string& prop, const std::string& why) { out.push_back({dc.id, label, prop, 0, "skipped", why}); }
  double allowance(double scale) const { return cfg.gradient_tolerance * cfg.h * scale; }
};

// Worst normalised margin of rhs_k - lhs_k over nodes, with the property allowance.
template <class F>
double pointwise(const Ctx& c, int n, double scale, F&& lhs_rhs) {
  double worst = std::numeric_limits<double>::infinity();
  const double tol = c.allowance(scale);
  for (int k = 0; k < n; ++k) {
    const auto [lhs, rhs] = lhs_rhs(k);
    worst = std::min(worst, (rhs - lhs + tol) / scale);
  }
  return worst;
}

std::string fmt_note(const char* f, double a, double b = 0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

void field_properties(Ctx& c, const Solved& s) {
  const ScalarField& u = s.field;
  const Grid& g = *u.grid;
  const int n = g.size();
  const int N = g.N();
  const double M = std::max(s.M, u.values.maxCoeff());
  const DomainSpec& domain = c.dc.domain;
  const bool mc = c.cache.mean_convex();
  const auto grad = field_gradient(u);

  auto nonneg = [&](const std::string& name, const Vector& v, double scale) {
    c.add(name, pointwise(c, n, scale, [&](int k) { return std::pair{-v(k), 0.0}; }));
  };

  switch (c.pc.type) {
    case ProblemType::torsion: {
      nonneg("max_principle", u.values, M);
      c.add("lower_bound_distance",
            pointwise(c, n, M, [&](int k) {
              const double d = distance_to_boundary(domain, g.point(k));
              return std::pair{d * d / 2, u.values(k)};
            }));
      if (mc) {
        c.add("gradient_torsion", pointwise(c, n, 2 * N * M, [&](int k) {
                return std::pair{grad[k].squaredNorm(), 2.0 * N * (M - u.values(k))};
              }));
      } else {
        c.skip("gradient_torsion", "boundary is not mean convex");
      }
      const auto& geo = c.cache.geometry();
      if (geo.curvature && geo.r_e && !geo.r_e->degenerate) {
        const double G = gradient_G_upper(N, geo.diam, geo.r_e->value);
        const double coef = 2 * (N + (N - 1) * geo.curvature->M0_minus * G);
        c.add("gradient_torsion_general",
              pointwise(c, n, coef * M, [&](int k) { return std::pair{grad[k].squaredNorm(), coef * (M - u.values(k))}; }),
              fmt_note("G=%.6g", G));
      } else {
        c.skip("gradient_torsion_general", "curvature or exterior radius not available");
      }
      if (domain.kind() == DomainKind::ball || (domain.axisymmetric() && domain.convex() && geo.john &&
                                                 geo.john->axes.front() == geo.john->axes.back())) {
        // Ball: exact solution (R^2 - |x - c|^2) / 2; error must drop under refinement.
        const Point c0 = geo.incenters.front();
        const double R = geo.r_in;
        auto err = [&](const ScalarField& f) {
          double e = 0;
          for (int k = 0; k < f.grid->size(); ++k)
            e = std::max(e, std::abs(f.values(k) - (R * R - (f.grid->point(k) - c0).squaredNorm()) / 2));
          return e;
        };
        const double e1 = err(u);
        const double e2 = err(solve_torsion(domain, 2 * c.cfg.h));
        c.add("grid_convergence", e2 / std::max(e1, 1e-300) / 1.7 - 1, fmt_note("err(2h)/err(h)=%.4g", e2 / e1));
      }
      break;
    }
    case ProblemType::eigen: {
      const double lam = s.eigen->lambda;
      const auto gpsi = field_gradient(s.eigen->psi);
      const Vector& psi = s.eigen->psi.values;
      const double M1 = psi.maxCoeff();
      nonneg("max_principle", psi, M1);
      c.add("gradient_eigen", pointwise(c, n, lam * M1 * M1, [&](int k) {
              return std::pair{gpsi[k].squaredNorm(), lam * (M1 * M1 - psi(k) * psi(k))};
            }));
      break;
    }
    case ProblemType::heat: {
      const auto& hi = *s.heat_inputs;
      const double lam = hi.lambda1;
      const Vector& phi = s.eigen->phi.values;
      const double gmax = s.heat_g->values.maxCoeff();
      double mp = std::numeric_limits<double>::infinity(), up = mp, gr = mp;
      for (const auto& sn : s.heat->snapshots) {
        const Vector& v = sn.u.values;
        mp = std::min(mp, pointwise(c, n, gmax, [&](int k) { return std::pair{-v(k), 0.0}; }));
        mp = std::min(mp, pointwise(c, n, gmax, [&](int k) { return std::pair{v(k), gmax}; }));
        const double decay = std::exp(-lam * sn.t);
        if (!hi.divergent) {
          const double scale = hi.sup_ratio * decay;
          up = std::min(up, pointwise(c, n, scale, [&](int k) { return std::pair{v(k), hi.sup_ratio * phi(k) * decay}; }));
          if (mc) {
            const auto gv = field_gradient(sn.u);
            const double rhs = hi.K_Omega * hi.K_Omega * decay * decay;
            gr = std::min(gr, pointwise(c, n, rhs, [&](int k) {
                            return std::pair{gv[k].squaredNorm() + lam * v(k) * v(k), rhs};
                          }));
          }
        }
      }
      c.add("max_principle", mp);
      if (hi.divergent) {
        c.skip("heat_upper_bound", "sup g/phi_1 is not finite");
        c.skip("gradient_heat", "sup g/phi_1 is not finite");
      } else {
        c.add("heat_upper_bound", up);
        if (mc) c.add("gradient_heat", gr);
        else c.skip("gradient_heat", "boundary is not mean convex");
      }
      // Large-time behaviour: M(t) e^{lambda t} tends to <g, phi_1> / <phi_1, phi_1> (phi_1 has max 1).
      const auto& last = s.heat->snapshots.back();
      const Vector& m = g.mass_vector();
      const double coef = s.heat_g->values.dot(m.cwiseProduct(phi)) / phi.dot(m.cwiseProduct(phi));
      const double ratio = last.max.value * std::exp(lam * last.t) / coef;
      c.add("spectral_large_time", 0.02 - std::abs(ratio - 1), fmt_note("M e^{lt}/c=%.6g at t=%.4g", ratio, last.t));
      if (c.pc.g == HeatData::one) {
        std::vector<std::pair<double, double>> dz;
        for (const auto& sn : s.heat->snapshots) dz.emplace_back(sn.t, distance_to_boundary(domain, sn.max.z) / s.r);
        std::sort(dz.begin(), dz.end());
        if (dz.size() < 3) {
          c.skip("varadhan_parabolic", "needs three output times");
        } else {
          // d(z(t))/r must increase as t decreases over the three smallest times.
          const double tol = 0.5 * c.cfg.h / s.r;
          double margin = std::min(dz[0].second - dz[1].second, dz[1].second - dz[2].second) + tol;
          c.add("varadhan_parabolic", margin,
                fmt_note("d/r=%.4f at smallest t, %.4f", dz[0].second, dz[2].second) + " at third");
        }
      }
      break;
    }
    case ProblemType::small_diffusion:
    case ProblemType::lane_emden: {
      nonneg("max_principle", u.values, M);
      if (!mc) {
        c.skip("gradient_semilinear", "boundary is not mean convex");
        break;
      }
      const auto& F = s.source->F;
      const double FM = F(M);
      c.add("gradient_semilinear", pointwise(c, n, 2 * FM, [&](int k) {
              return std::pair{grad[k].squaredNorm(), 2 * (FM - F(u.values(k)))};
            }));
      break;
    }
    case ProblemType::p_torsion:
    case ProblemType::aniso: {
      const YoungPair& pair = *s.pair;
      const bool an = c.pc.type == ProblemType::aniso;
      const AnisoNorm norm = an ? *s.norm : AnisoNorm::euclidean();
      nonneg("max_principle", u.values, M);
      c.add(an ? "lower_bound_aniso" : "lower_bound_young",
            pointwise(c, n, M, [&](int k) {
              const double d = detail::measure_distance(domain, s, g.point(k));
              return std::pair{pair.Psi(d), u.values(k)};
            }));
      bool ok = mc;
      if (an) {
        try {
          ok = aniso_mean_convexity(domain, norm).h_mean_convex;
        } catch (const UnsupportedError&) {
          ok = false;
        }
      }
      const std::string name = an ? "gradient_aniso" : "gradient_quasilinear";
      if (!ok) {
        c.skip(name, "boundary is not (H-)mean convex");
        break;
      }
      c.add(name, pointwise(c, n, N * M, [&](int k) {
              return std::pair{pair.Psi(pair.phi(norm.H(grad[k]))), N * (M - u.values(k))};
            }));
      break;
    }
  }
}

// Monotone trend of d(z)/r along an ordered parameter sequence.
void trend(Ctx& c, const std::string& name, std::vector<std::pair<double, double>> pts, double tol) {
  if (pts.size() < 3) {
    c.skip(name, "needs three parameter values");
    return;
  }
  double margin = std::numeric_limits<double>::infinity();
  for (size_t i = 1; i < pts.size(); ++i) margin = std::min(margin, pts[i].second - pts[i - 1].second + tol);
  std::string note;
  for (const auto& [p, v] : pts) note += fmt_note("%g:%.4f ", p, v);
  if (!note.empty()) note.pop_back();
  c.add(name, margin, note);
}

}  // namespace

std::vector<PropertyResult> property_suite(const ExperimentConfig& cfg, int threads) {
  auto caches = detail::make_caches(cfg);
  const auto exps = expand(cfg);
  std::vector<std::optional<Solved>> solved(exps.size());
  std::vector<std::string> errors(exps.size());
  std::vector<std::vector<PropertyResult>> per(exps.size());
  detail::parallel_for(static_cast<int>(exps.size()), thread_count(threads), [&](int i) {
    const Experiment& ex = exps[i];
    DomainCache& cache = *caches[ex.domain_index];
    const DomainConfig& dc = cache.config();
    const ProblemConfig& pc = dc.problems[ex.problem_index];
    Ctx c{cfg, cache, dc, pc, ex.label, per[i]};
    try {
      solved[i] = detail::solve_experiment(cfg, ex, cache);
      field_properties(c, *solved[i]);
    } catch (const std::exception& e) {
      per[i].push_back({dc.id, ex.label, "solve", 0, "error", e.what()});
    }
  });
  std::vector<PropertyResult> out;
  for (size_t i = 0; i < exps.size(); ++i) {
    for (auto& r : per[i]) out.push_back(std::move(r));
    // Trend checks once per parameterised problem, after its last member.
    const bool last = i + 1 == exps.size() || exps[i + 1].domain_index != exps[i].domain_index ||
                      exps[i + 1].problem_index != exps[i].problem_index;
    if (!last) continue;
    const Experiment& ex = exps[i];
    DomainCache& cache = *caches[ex.domain_index];
    const DomainConfig& dc = cache.config();
    const ProblemConfig& pc = dc.problems[ex.problem_index];
    if (pc.type != ProblemType::small_diffusion && pc.type != ProblemType::p_torsion) continue;
    std::vector<std::pair<double, double>> pts;
    bool complete = true;
    for (size_t j = 0; j < exps.size(); ++j) {
      if (exps[j].domain_index != ex.domain_index || exps[j].problem_index != ex.problem_index) continue;
      if (!solved[j]) {
        complete = false;
        continue;
      }
      const double p = exps[j].param;
      if (pc.type == ProblemType::small_diffusion && p > 0.1 * (1 + 1e-12)) continue;
      pts.emplace_back(p, distance_to_boundary(dc.domain, solved[j]->max.z) / solved[j]->r);
    }
    Ctx c{cfg, cache, dc, pc, pc.id, out};
    if (!complete) {
      c.skip(pc.type == ProblemType::p_torsion ? "p_incenter_trend" : "varadhan_elliptic", "a member solve failed");
      continue;
    }
    const double tol = 0.5 * cfg.h / cache.geometry().r_in;
    if (pc.type == ProblemType::small_diffusion) {
      // Ordered by decreasing eps: d(z_eps)/r must increase.
      std::sort(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.first > b.first; });
      trend(c, "varadhan_elliptic", pts, tol);
    } else {
      std::sort(pts.begin(), pts.end());
      trend(c, "p_incenter_trend", pts, 2 * tol);
    }
  }
  return out;
}

std::string properties_csv(const std::vector<PropertyResult>& props) {
  std::string s = "domain,problem,property,margin,status,note\n";
  for (const auto& p : props) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", p.margin);
    std::string note = p.note;
    std::replace(note.begin(), note.end(), ',', ';');
    s += p.domain + "," + p.problem + "," + p.property + "," + buf + "," + p.status + "," + note + "\n";
  }
  return s;
}

}  // namespace hotspot
