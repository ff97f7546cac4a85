#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <thread>

#include "hotspot/errors.hpp"
#include "pipeline.hpp"

namespace hotspot {

namespace {

using detail::DomainCache;
using detail::Solved;

struct Eval {
  double measured = 0;
  double bound = 0;
  Sense sense = Sense::lower;
  std::string note;
};

void require_mean_convex(DomainCache& cache) {
  if (!cache.mean_convex()) throw InapplicableError("boundary is not mean convex");
}

Eval evaluate(const std::string& name, const Solved& s, DomainCache& cache, const ProblemConfig& pc) {
  const DomainSpec& domain = cache.config().domain;
  const int N = domain.dimension();
  const double r = s.r, d = s.d_worst;
  Eval e;
  if (name == "torsion_meanconvex") {
    require_mean_convex(cache);
    e.measured = d / r, e.bound = bound_torsion_meanconvex(N);
  } else if (name == "torsion_max_upper") {
    require_mean_convex(cache);
    e.measured = s.M, e.bound = torsion_max_upper(N, r), e.sense = Sense::upper;
  } else if (name == "torsion_john") {
    if (!domain.convex()) throw InapplicableError("domain is not convex");
    const auto& g = cache.geometry();
    std::vector<double> axes;
    if (cache.config().overrides.john_axes) axes = *cache.config().overrides.john_axes;
    else if (g.john) axes = g.john->axes;
    else throw InapplicableError("John ellipsoid not available for this domain");
    e.measured = d / r, e.bound = bound_torsion_john(axes, r, N);
  } else if (name == "torsion_curvature") {
    const auto& g = cache.geometry();
    if (!g.curvature) throw InapplicableError("boundary curvature not available");
    e.measured = d / r, e.bound = bound_torsion_curvature(N, g.curvature->M0_minus, r);
  } else if (name == "torsion_exterior") {
    const auto& g = cache.geometry();
    if (!g.r_e) throw InapplicableError("exterior sphere radius not available");
    if (g.r_e->degenerate) throw InapplicableError("no uniform exterior sphere");
    e.measured = d / r, e.bound = bound_torsion_exterior(N, g.diam, g.r_e->value, r);
    if (g.r_e->unbounded) e.note = "r_e unbounded, truncated to diam";
  } else if (name == "semilinear") {
    require_mean_convex(cache);
    e.measured = d, e.bound = bound_semilinear_distance(*s.source, s.M, s.M);
  } else if (name == "small_diffusion" || name == "small_diffusion_geometric") {
    require_mean_convex(cache);
    e.measured = d;
    e.bound = bound_small_diffusion(s.param, N, s.M, r, name == "small_diffusion_geometric");
  } else if (name == "eigen") {
    require_mean_convex(cache);
    e.measured = d, e.bound = bound_eigen(s.eigen->lambda, N, r, Form::absolute);
  } else if (name == "eigen_ratio") {
    require_mean_convex(cache);
    e.measured = d / r, e.bound = bound_eigen(s.eigen->lambda, N, r, Form::ratio);
  } else if (name == "bms") {
    if (!domain.convex()) throw InapplicableError("domain is not convex");
    e.measured = d / r, e.bound = bms_bound(N, r, cache.geometry().diam);
  } else if (name == "p_eigen") {
    require_mean_convex(cache);
    e.measured = d, e.bound = bound_p_eigen(2.0, s.eigen->lambda, N, Form::absolute);
  } else if (name == "p_eigen_ratio") {
    require_mean_convex(cache);
    e.measured = d / r, e.bound = bound_p_eigen(2.0, lambda1_ball(N), N, Form::ratio);
  } else if (name == "heat") {
    require_mean_convex(cache);
    if (pc.g == HeatData::one) throw InapplicableError("initial datum does not vanish on the boundary");
    const auto& hi = *s.heat_inputs;
    // Worst time over the whole trajectory: reported z at every step, worst near-max node at snapshots.
    double worst = std::numeric_limits<double>::infinity();
    auto consider = [&](double t, double M, double dist) {
      const double b = heat_bound(hi, M, t);
      const double m = dist / r;
      if (m / b < worst) {
        worst = m / b;
        e.measured = m, e.bound = b;
        char buf[64];
        std::snprintf(buf, sizeof buf, "t=%.6g", t);
        e.note = buf;
      }
    };
    for (const auto& st : s.heat->steps) consider(st.t, st.M, detail::measure_distance(domain, s, st.z));
    for (const auto& sn : s.heat->snapshots) {
      double dmin = detail::measure_distance(domain, s, sn.max.z);
      for (const Point& x : sn.max.near_points) dmin = std::min(dmin, detail::measure_distance(domain, s, x));
      consider(sn.t, sn.max.value, dmin);
    }
  } else if (name == "quasilinear") {
    require_mean_convex(cache);
    e.measured = d, e.bound = bound_quasilinear(*s.pair, N, r, QuasiVariant::general);
  } else if (name == "quasilinear_power_ratio") {
    require_mean_convex(cache);
    e.measured = d / r, e.bound = bound_quasilinear(*s.pair, N, r, QuasiVariant::power_ratio);
  } else if (name == "quasilinear_shift") {
    require_mean_convex(cache);
    e.measured = d / r, e.bound = bound_quasilinear(*s.pair, N, r, QuasiVariant::shift);
  } else if (name == "lane_emden") {
    require_mean_convex(cache);
    e.measured = d, e.bound = bound_lane_emden(pc.q, s.lambda_q, s.M, N, r, cache.volume(), Form::absolute);
  } else if (name == "lane_emden_ratio") {
    require_mean_convex(cache);
    const double lb = radial_lane_emden_lambda(pc.q, N);
    e.measured = d / r, e.bound = bound_lane_emden(pc.q, lb, s.M, N, r, cache.volume(), Form::ratio);
  } else if (name == "aniso" || name == "aniso_power_ratio") {
    const AnisoConvexity ac = aniso_mean_convexity(domain, *s.norm);
    if (!ac.h_mean_convex) throw InapplicableError("boundary is not H-mean convex");
    if (name == "aniso") e.measured = d, e.bound = bound_aniso(*s.pair, N, r);
    else e.measured = d / r, e.bound = bound_quasilinear(*s.pair, N, r, QuasiVariant::power_ratio);
  } else {
    throw ConfigError("unknown bound '" + name + "'");
  }
  return e;
}

std::string fmt(double v) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

int thread_count(int requested) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (const char* env = std::getenv("HOTSPOT_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return n;
}

RunResult run(const ExperimentConfig& cfg, const RunOptions& opt) {
  auto caches = detail::make_caches(cfg);
  const auto exps = expand(cfg);
  std::vector<std::vector<ReportRow>> rows(exps.size());
  std::vector<std::optional<FieldDump>> dumps(exps.size());
  detail::parallel_for(static_cast<int>(exps.size()), thread_count(opt.threads), [&](int i) {
    const Experiment& ex = exps[i];
    DomainCache& cache = *caches[ex.domain_index];
    const DomainConfig& dc = cache.config();
    const ProblemConfig& pc = dc.problems[ex.problem_index];
    ReportRow base;
    base.domain = dc.id;
    base.problem = ex.label;
    base.N = dc.domain.dimension();
    std::optional<Solved> s;
    std::string solve_error;
    try {
      s = detail::solve_experiment(cfg, ex, cache);
      base.r_in = s->r;
    } catch (const std::exception& err) {
      solve_error = err.what();
      try {
        base.r_in = cache.geometry().r_in;
      } catch (const std::exception&) {
      }
    }
    for (const std::string& name : pc.bounds) {
      ReportRow row = base;
      row.bound = name;
      const auto t0 = std::chrono::steady_clock::now();
      if (!s) {
        row.status = "error";
        row.note = solve_error;
      } else {
        try {
          const Eval e = evaluate(name, *s, cache, pc);
          const BoundCheck c = check(e.measured, e.bound, cfg.tolerance, e.sense, name);
          row.d_measured = c.measured;
          row.bound_value = c.bound;
          row.slack = c.slack;
          row.status = c.pass ? "pass" : "fail";
          row.note = e.note;
        } catch (const InapplicableError& err) {
          row.status = "inapplicable", row.note = err.what();
        } catch (const UnsupportedError& err) {
          row.status = "inapplicable", row.note = err.what();
        } catch (const std::exception& err) {
          row.status = "error", row.note = err.what();
        }
      }
      row.runtime_s = (s ? s->solve_seconds : 0.0) +
                      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      rows[i].push_back(std::move(row));
    }
    if (opt.keep_fields && s) dumps[i] = FieldDump{dc.id, ex.label, s->field, s->max};
  });
  RunResult out;
  for (auto& r : rows)
    for (auto& row : r) out.rows.push_back(std::move(row));
  for (auto& d : dumps)
    if (d) out.fields.push_back(std::move(*d));
  return out;
}

bool rows_ok(const std::vector<ReportRow>& rows) {
  for (const auto& r : rows)
    if (r.status == "fail" || r.status == "error") return false;
  return true;
}

std::string csv_header() { return "domain,problem,N,r_in,d_measured,bound,bound_value,slack,status,runtime_s"; }

std::string to_csv(const std::vector<ReportRow>& rows, bool include_runtime) {
  std::string out = csv_header() + "\n";
  for (const auto& r : rows) {
    out += r.domain + "," + r.problem + "," + std::to_string(r.N) + "," + fmt(r.r_in) + "," + fmt(r.d_measured) +
           "," + r.bound + "," + fmt(r.bound_value) + "," + fmt(r.slack) + "," + r.status + ",";
    if (include_runtime) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", r.runtime_s);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

json to_json(const ExperimentConfig& cfg, const RunResult& result, bool dump_fields) {
  json j;
  j["config"] = cfg.source;
  j["rows"] = json::array();
  for (const auto& r : result.rows) {
    j["rows"].push_back({{"domain", r.domain},
                         {"problem", r.problem},
                         {"N", r.N},
                         {"r_in", r.r_in},
                         {"d_measured", r.d_measured},
                         {"bound", r.bound},
                         {"bound_value", r.bound_value},
                         {"slack", r.slack},
                         {"status", r.status},
                         {"runtime_s", r.runtime_s},
                         {"note", r.note}});
  }
  if (dump_fields) {
    j["fields"] = json::array();
    for (const auto& f : result.fields) {
      json pts = json::array();
      for (int k = 0; k < f.field.grid->size(); ++k) {
        const Point x = f.field.grid->point(k);
        pts.push_back({x.x(), x.y(), f.field.values(k)});
      }
      j["fields"].push_back({{"domain", f.domain},
                             {"problem", f.problem},
                             {"z", {f.max.z.x(), f.max.z.y()}},
                             {"max", f.max.value},
                             {"points", std::move(pts)}});
    }
  }
  return j;
}

void emit_csv(const std::vector<ReportRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << to_csv(rows);
  if (!out) throw std::runtime_error(path + ": write failed");
}

void emit_json(const ExperimentConfig& cfg, const RunResult& result, const std::string& path, bool dump_fields) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << to_json(cfg, result, dump_fields).dump(2) << "\n";
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace hotspot
