#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hotspot/harness.hpp"

namespace hotspot::detail {

// Geometry and grid of one configured domain, computed on first use and shared by its problems.
class DomainCache {
 public:
  DomainCache(const DomainConfig& dc, double h) : dc_(&dc), h_(h) {}
  const GeomSummary& geometry();
  GridPtr grid();
  bool mean_convex();
  double volume();
  const DomainConfig& config() const { return *dc_; }

 private:
  const DomainConfig* dc_;
  double h_;
  std::once_flag geom_once_, grid_once_;
  GeomSummary geom_;
  GridPtr grid_;
};

struct Solved {
  ScalarField field;
  MaxInfo max;
  double M = 0;           // interpolated maximum
  double d_z = 0;         // distance of the reported z
  double d_worst = 0;     // smallest distance over the near-max set
  double r = 0;           // inradius (anisotropic for aniso problems)
  double param = 0;       // eps or p
  std::optional<EigenResult> eigen;
  std::optional<HeatTrajectory> heat;
  std::optional<HeatBoundInputs> heat_inputs;
  std::optional<ScalarField> heat_g;
  std::optional<YoungPair> pair;
  std::optional<AnisoNorm> norm;
  std::optional<SemilinearSource> source;
  double lambda_q = 0;
  double solve_seconds = 0;
};

Solved solve_experiment(const ExperimentConfig& cfg, const Experiment& ex, DomainCache& cache);

// Distance used by the bounds of a problem: anisotropic for aniso problems.
double measure_distance(const DomainSpec& domain, const Solved& s, const Point& x);

// Runs f(i) for i in [0, n) on up to `threads` workers.
void parallel_for(int n, int threads, const std::function<void(int)>& f);

std::vector<std::unique_ptr<DomainCache>> make_caches(const ExperimentConfig& cfg);

}  // namespace hotspot::detail
