#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hotspot/anisotropy.hpp"
#include "hotspot/bounds.hpp"
#include "hotspot/geometry.hpp"
#include "hotspot/pde.hpp"
#include "hotspot/young.hpp"

namespace hotspot {

using json = nlohmann::json;

enum class ProblemType { torsion, eigen, heat, small_diffusion, p_torsion, aniso, lane_emden };
std::string to_string(ProblemType t);

enum class HeatData { phi1, one, torsion };

struct ProblemConfig {
  ProblemType type = ProblemType::torsion;
  std::string id;
  std::vector<std::string> bounds;
  HeatData g = HeatData::phi1;
  std::vector<double> times;
  std::vector<double> eps;
  std::vector<double> p;
  std::optional<AnisoNorm> norm;
  std::optional<YoungPair> pair;
  double q = 1.5;
};

struct DomainConfig {
  std::string id;
  DomainSpec domain;
  GeomOverrides overrides;
  std::vector<ProblemConfig> problems;
};

struct ExperimentConfig {
  double h = 1.0 / 128;
  double tolerance = 0.02;
  double gradient_tolerance = 5.0;  // property tolerance factor, multiplied by h and the field scale
  std::vector<DomainConfig> domains;
  json source;
};

// Names accepted in `bounds` lists, with the problems that can feed them.
const std::map<std::string, std::vector<ProblemType>>& bound_catalogue();

ExperimentConfig parse_config(const json& j);
ExperimentConfig load_config(const std::string& path);

struct ReportRow {
  std::string domain;
  std::string problem;
  int N = 2;
  double r_in = 0;
  double d_measured = 0;
  std::string bound;
  double bound_value = 0;
  double slack = 0;
  std::string status;  // pass | fail | inapplicable | error
  double runtime_s = 0;
  std::string note;
};

// One solved (domain, problem, parameter) instance.
struct Experiment {
  int domain_index = 0;
  int problem_index = 0;
  int sub_index = 0;
  std::string label;  // problem id with the parameter, e.g. "small_diffusion[eps=0.1]"
  double param = 0;
};
std::vector<Experiment> expand(const ExperimentConfig& cfg);

struct FieldDump {
  std::string domain;
  std::string problem;
  ScalarField field;
  MaxInfo max;
};

struct RunOptions {
  bool keep_fields = false;
  int threads = 0;  // 0: HOTSPOT_THREADS or hardware concurrency
};

struct RunResult {
  std::vector<ReportRow> rows;
  std::vector<FieldDump> fields;
};

int thread_count(int requested = 0);
RunResult run(const ExperimentConfig& cfg, const RunOptions& opt = {});

struct PropertyResult {
  std::string domain;
  std::string problem;
  std::string property;
  double margin = 0;  // worst (allowance - violation); >= 0 passes
  std::string status;  // pass | fail | skipped | error
  std::string note;
};
std::vector<PropertyResult> property_suite(const ExperimentConfig& cfg, int threads = 0);

std::string csv_header();
std::string to_csv(const std::vector<ReportRow>& rows, bool include_runtime = true);
json to_json(const ExperimentConfig& cfg, const RunResult& result, bool dump_fields);
void emit_csv(const std::vector<ReportRow>& rows, const std::string& path);
void emit_json(const ExperimentConfig& cfg, const RunResult& result, const std::string& path, bool dump_fields);
std::string properties_csv(const std::vector<PropertyResult>& props);

bool rows_ok(const std::vector<ReportRow>& rows);

}  // namespace hotspot
