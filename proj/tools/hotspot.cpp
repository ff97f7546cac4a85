#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "hotspot/errors.hpp"
#include "hotspot/harness.hpp"

namespace fs = std::filesystem;
using namespace hotspot;

namespace {

std::map<std::string, std::string> parse_params(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("parameter '" + item + "' is not k=v");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

class Params {
 public:
  explicit Params(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

  double num(const std::string& k) const {
    auto it = kv_.find(k);
    if (it == kv_.end()) throw ConfigError("missing parameter '" + k + "'");
    return to_double(k, it->second);
  }
  double num(const std::string& k, double def) const { return kv_.count(k) ? num(k) : def; }
  int dim() const {
    const double n = num("N", 2);
    if (n != std::floor(n)) throw ConfigError("N must be an integer");
    return static_cast<int>(n);
  }
  std::string str(const std::string& k, const std::string& def) const {
    auto it = kv_.find(k);
    return it == kv_.end() ? def : it->second;
  }
  // Colon separated list, e.g. axes=2:1
  std::vector<double> list(const std::string& k) const {
    std::vector<double> out;
    std::stringstream ss(str(k, ""));
    std::string item;
    while (std::getline(ss, item, ':')) out.push_back(to_double(k, item));
    if (out.empty()) throw ConfigError("missing parameter '" + k + "'");
    return out;
  }

 private:
  static double to_double(const std::string& k, const std::string& v) {
    try {
      size_t pos = 0;
      const double x = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      throw ConfigError("parameter '" + k + "': '" + v + "' is not a number");
    }
  }
  std::map<std::string, std::string> kv_;
};

YoungPair pair_from(const Params& p) {
  const std::string kind = p.str("pair", "power");
  if (kind == "power") return make_power_pair(p.num("p", 2));
  if (kind == "cosh") return make_cosh_pair(p.num("fit_max", 1));
  throw ConfigError("unknown pair '" + kind + "'");
}

SemilinearSource source_from(const Params& p) {
  const std::string kind = p.str("source", "constant");
  const int N = p.dim();
  if (kind == "constant") return SemilinearSource::constant(p.num("c", N));
  if (kind == "linear") return SemilinearSource::linear(p.num("lambda"));
  if (kind == "small_diffusion") return SemilinearSource::small_diffusion(N, p.num("eps"));
  if (kind == "lane_emden") return SemilinearSource::lane_emden(p.num("q"), p.num("lambda"));
  throw ConfigError("unknown source '" + kind + "'");
}

double bound_value(const std::string& name, const Params& p) {
  const int N = p.dim();
  if (name == "torsion_meanconvex") return bound_torsion_meanconvex(N);
  if (name == "torsion_max_upper") return torsion_max_upper(N, p.num("r"));
  if (name == "torsion_john") return bound_torsion_john(p.list("axes"), p.num("r"), N);
  if (name == "torsion_curvature") return bound_torsion_curvature(N, p.num("M0"), p.num("r"));
  if (name == "torsion_exterior") return bound_torsion_exterior(N, p.num("diam"), p.num("re"), p.num("r"));
  if (name == "semilinear") {
    const double uz = p.num("uz");
    return bound_semilinear_distance(source_from(p), uz, p.num("ux", uz));
  }
  if (name == "small_diffusion" || name == "small_diffusion_geometric")
    return bound_small_diffusion(p.num("eps"), N, p.num("u"), p.num("r", 1), name == "small_diffusion_geometric");
  if (name == "eigen") return bound_eigen(p.num("lambda"), N, p.num("r", 1), Form::absolute);
  if (name == "eigen_ratio") return bound_eigen(p.num("lambda", lambda1_ball(N)), N, p.num("r", 1), Form::ratio);
  if (name == "bms") return bms_bound(N, p.num("r"), p.num("diam"));
  if (name == "heat") {
    HeatBoundInputs in;
    in.lambda1 = p.num("lambda");
    in.K = p.num("K");
    return heat_bound(in, p.num("M"), p.num("t"));
  }
  if (name == "quasilinear") return bound_quasilinear(pair_from(p), N, p.num("r"), QuasiVariant::general);
  if (name == "quasilinear_power_ratio" || name == "aniso_power_ratio")
    return bound_quasilinear(pair_from(p), N, p.num("r", 1), QuasiVariant::power_ratio);
  if (name == "quasilinear_shift") return bound_quasilinear(pair_from(p), N, p.num("r"), QuasiVariant::shift);
  if (name == "p_eigen") return bound_p_eigen(p.num("p", 2), p.num("lambda"), N, Form::absolute);
  if (name == "p_eigen_ratio") return bound_p_eigen(p.num("p", 2), p.num("lambda", lambda1_ball(N)), N, Form::ratio);
  if (name == "lane_emden" || name == "lane_emden_ratio") {
    const double q = p.num("q");
    const bool ratio = name == "lane_emden_ratio";
    const double lam = p.num("lambda", ratio ? radial_lane_emden_lambda(q, N) : NAN);
    if (std::isnan(lam)) throw ConfigError("missing parameter 'lambda'");
    return bound_lane_emden(q, lam, p.num("M", 1), N, p.num("r", 1), p.num("vol", ball_volume(N)),
                            ratio ? Form::ratio : Form::absolute);
  }
  if (name == "aniso") return bound_aniso(pair_from(p), N, p.num("r"));
  throw ConfigError("unknown bound '" + name + "'");
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << text;
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.' && c != '=') c = '_';
  return s;
}

int cmd_solve(const std::string& config, const std::string& dir) {
  const ExperimentConfig cfg = load_config(config);
  RunOptions opt;
  opt.keep_fields = true;
  const RunResult res = run(cfg, opt);
  fs::create_directories(dir);
  std::string summary = "domain,problem,z_x,z_y,max\n";
  char buf[160];
  for (const auto& f : res.fields) {
    std::string csv = "x,y,value\n";
    for (int k = 0; k < f.field.grid->size(); ++k) {
      const Point x = f.field.grid->point(k);
      std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g\n", x.x(), x.y(), f.field.values(k));
      csv += buf;
    }
    write_file(fs::path(dir) / (sanitize(f.domain) + "__" + sanitize(f.problem) + ".csv"), csv);
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g\n", f.max.z.x(), f.max.z.y(), f.max.value);
    summary += f.domain + "," + f.problem + "," + buf;
  }
  write_file(fs::path(dir) / "summary.csv", summary);
  emit_csv(res.rows, (fs::path(dir) / "report.csv").string());
  std::cout << "wrote " << res.fields.size() << " fields to " << dir << "\n";
  for (const auto& r : res.rows)
    if (r.status == "error") std::cerr << r.domain << "/" << r.problem << ": " << r.note << "\n";
  return 0;
}

int cmd_verify(const std::string& config, const std::string& report, const std::string& json_path, bool fields) {
  const ExperimentConfig cfg = load_config(config);
  RunOptions opt;
  opt.keep_fields = fields && !json_path.empty();
  const RunResult res = run(cfg, opt);
  emit_csv(res.rows, report);
  if (!json_path.empty()) emit_json(cfg, res, json_path, opt.keep_fields);
  int counts[4] = {0, 0, 0, 0};
  for (const auto& r : res.rows) {
    if (r.status == "pass") ++counts[0];
    else if (r.status == "fail") ++counts[1];
    else if (r.status == "inapplicable") ++counts[2];
    else ++counts[3];
    if (r.status == "fail" || r.status == "error")
      std::cerr << r.status << ": " << r.domain << "/" << r.problem << "/" << r.bound
                << (r.note.empty() ? "" : " (" + r.note + ")") << "\n";
  }
  std::cout << res.rows.size() << " rows: " << counts[0] << " pass, " << counts[1] << " fail, " << counts[2]
            << " inapplicable, " << counts[3] << " error\n";
  return rows_ok(res.rows) ? 0 : 1;
}

int cmd_props(const std::string& config, const std::string& out) {
  const ExperimentConfig cfg = load_config(config);
  const auto props = property_suite(cfg);
  const std::string csv = properties_csv(props);
  if (out.empty()) std::cout << csv;
  else write_file(out, csv);
  bool ok = true;
  for (const auto& p : props) ok = ok && (p.status == "pass" || p.status == "skipped");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hot spot location bounds: solve, certify, and property-test"};
  app.require_subcommand(1);

  std::string config, out, report, json_path, name, params;
  bool fields = false;

  auto* solve = app.add_subcommand("solve", "solve every configured problem and write nodal fields");
  solve->add_option("--config", config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  solve->add_option("--out", out, "output directory")->required();

  auto* verify = app.add_subcommand("verify", "evaluate and certify the configured bounds");
  verify->add_option("--config", config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  verify->add_option("--report", report, "CSV report path")->required();
  verify->add_option("--json", json_path, "JSON report path");
  verify->add_flag("--fields", fields, "include field dumps in the JSON report");

  auto* bounds = app.add_subcommand("bounds", "evaluate one bound formula");
  bounds->add_option("--name", name, "bound name")->required();
  bounds->add_option("--params", params, "comma separated k=v list");

  auto* props = app.add_subcommand("props", "run the property suite");
  props->add_option("--config", config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  props->add_option("--out", out, "CSV output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return cmd_solve(config, out);
    if (*verify) return cmd_verify(config, report, json_path, fields);
    if (*props) return cmd_props(config, out);
    if (*bounds) {
      const double v = bound_value(name, Params(parse_params(params)));
      std::printf("%s=%.12g\n", name.c_str(), v);
      return 0;
    }
  } catch (const InapplicableError& e) {
    std::cerr << "inapplicable: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
