#include "pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <limits>
#include <thread>

#include "hotspot/errors.hpp"

namespace hotspot::detail {

const GeomSummary& DomainCache::geometry() {
  std::call_once(geom_once_, [this] { geom_ = summarize(dc_->domain, dc_->overrides); });
  return geom_;
}

GridPtr DomainCache::grid() {
  std::call_once(grid_once_, [this] { grid_ = make_grid(dc_->domain, h_); });
  return grid_;
}

bool DomainCache::mean_convex() {
  if (dc_->domain.convex()) return true;
  const auto& g = geometry();
  return g.curvature && g.curvature->min_curvature >= -1e-8;
}

double DomainCache::volume() { return grid()->mass_vector().sum(); }

std::vector<std::unique_ptr<DomainCache>> make_caches(const ExperimentConfig& cfg) {
  std::vector<std::unique_ptr<DomainCache>> out;
  for (const auto& dc : cfg.domains) out.push_back(std::make_unique<DomainCache>(dc, cfg.h));
  return out;
}

void parallel_for(int n, int threads, const std::function<void(int)>& f) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex err_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

double measure_distance(const DomainSpec& domain, const Solved& s, const Point& x) {
  if (s.norm) return aniso_distance(domain, *s.norm, x);
  return distance_to_boundary(domain, x);
}

Solved solve_experiment(const ExperimentConfig& cfg, const Experiment& ex, DomainCache& cache) {
  (void)cfg;
  const auto t0 = std::chrono::steady_clock::now();
  const DomainConfig& dc = cache.config();
  const ProblemConfig& pc = dc.problems[ex.problem_index];
  const DomainSpec& domain = dc.domain;
  const GridPtr grid = cache.grid();
  const int N = domain.dimension();
  Solved s;
  s.param = ex.param;
  switch (pc.type) {
    case ProblemType::torsion:
      s.field = solve_torsion(grid);
      s.source = SemilinearSource::constant(N);
      break;
    case ProblemType::eigen:
      s.eigen = solve_eigen(grid);
      s.field = s.eigen->phi;
      s.source = SemilinearSource::linear(s.eigen->lambda);
      break;
    case ProblemType::heat: {
      s.eigen = solve_eigen(grid);
      HeatInitial init;
      ScalarField g;
      g.grid = grid;
      g.problem = "heat_initial";
      if (pc.g == HeatData::one) {
        init.constant_one = true;
        g.values = Vector::Ones(grid->size());
        g.boundary = [](const Point&) { return 1.0; };
      } else if (pc.g == HeatData::phi1) {
        g.values = s.eigen->phi.values;
      } else {
        const ScalarField u = solve_torsion(grid);
        g.values = u.values / u.values.maxCoeff();
      }
      if (!init.constant_one) init.nodal = g.values;
      s.heat = solve_heat(grid, init, pc.times);
      s.heat_g = g;
      s.field = s.heat->snapshots.back().u;
      break;
    }
    case ProblemType::small_diffusion: {
      auto r = solve_small_diffusion(grid, ex.param);
      s.field = r.u;
      s.source = SemilinearSource::small_diffusion(N, ex.param);
      break;
    }
    case ProblemType::p_torsion:
      s.pair = make_power_pair(ex.param);
      s.field = solve_p_torsion(grid, ex.param);
      break;
    case ProblemType::aniso:
      s.pair = *pc.pair;
      s.norm = *pc.norm;
      s.field = solve_aniso_torsion(grid, *pc.norm, *pc.pair);
      break;
    case ProblemType::lane_emden: {
      auto r = solve_lane_emden(grid, pc.q);
      s.field = r.u;
      s.lambda_q = r.lambda_q;
      s.source = SemilinearSource::lane_emden(pc.q, r.lambda_q);
      break;
    }
  }
  s.max = locate_max(s.field);
  s.M = s.max.value;
  s.d_z = measure_distance(domain, s, s.max.z);
  s.d_worst = std::numeric_limits<double>::infinity();
  for (const Point& x : s.max.near_points) s.d_worst = std::min(s.d_worst, measure_distance(domain, s, x));
  s.d_worst = std::min(s.d_worst, s.d_z);
  s.r = s.norm ? aniso_inradius(domain, *s.norm).r_in : cache.geometry().r_in;
  if (s.heat && s.heat_g) {
    s.heat_inputs = heat_constant(*s.heat_g, s.eigen->phi, s.eigen->lambda, N, s.r);
    for (const auto& st : s.heat->steps) s.heat_inputs->M_of_t.emplace_back(st.t, st.M);
  }
  s.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return s;
}

}  // namespace hotspot::detail
