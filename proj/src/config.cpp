#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "hotspot/errors.hpp"
#include "hotspot/harness.hpp"

namespace hotspot {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw ConfigError(path + ": " + msg); }

const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing required field");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

double positive(const json& j, const std::string& path) {
  const double v = number(j, path);
  if (!(v > 0) || !std::isfinite(v)) fail(path, "must be positive");
  return v;
}

double num_or(const json& j, const std::string& key, double def, const std::string& path) {
  auto it = j.find(key);
  return it == j.end() ? def : number(*it, path + "." + key);
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Point point(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected [x, y]");
  return Point(number(j[0], path + "[0]"), number(j[1], path + "[1]"));
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> v;
  for (size_t i = 0; i < j.size(); ++i) v.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  return v;
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& path) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) fail(path + "." + it.key(), "unknown field");
}

AnisoNorm parse_norm(const json& j, const std::string& path) {
  const std::string type = text(field(j, "type", path), path + ".type");
  if (type == "euclidean") return AnisoNorm::euclidean();
  try {
    if (type == "elliptic") {
      const json& A = field(j, "A", path);
      const std::string ap = path + ".A";
      if (!A.is_array() || A.size() != 2) fail(ap, "expected a 2x2 matrix");
      Eigen::Matrix2d M;
      for (int r = 0; r < 2; ++r) {
        const auto row = numbers(A[r], ap + "[" + std::to_string(r) + "]");
        if (row.size() != 2) fail(ap, "expected a 2x2 matrix");
        M(r, 0) = row[0], M(r, 1) = row[1];
      }
      return AnisoNorm::elliptic(M);
    }
    if (type == "lp") return AnisoNorm::lp(number(field(j, "s", path), path + ".s"));
  } catch (const DomainError& e) {
    fail(path, e.what());
  }
  fail(path + ".type", "unknown norm '" + type + "'");
}

YoungPair parse_pair(const json& j, const std::string& path) {
  const std::string type = text(field(j, "type", path), path + ".type");
  if (type == "power") {
    const double p = number(field(j, "p", path), path + ".p");
    if (!(p > 1)) fail(path + ".p", "must exceed 1");
    return make_power_pair(p);
  }
  if (type == "cosh") return make_cosh_pair(num_or(j, "fit_max", 1.0, path));
  fail(path + ".type", "unknown Young pair '" + type + "'");
}

DomainSpec parse_shape(const json& j, const std::string& path) {
  const std::string type = text(field(j, "type", path), path + ".type");
  try {
    if (type == "ball")
      return make_ball(point(field(j, "center", path), path + ".center"),
                       positive(field(j, "radius", path), path + ".radius"));
    if (type == "ellipse")
      return make_ellipse(point(field(j, "center", path), path + ".center"), positive(field(j, "a", path), path + ".a"),
                          positive(field(j, "b", path), path + ".b"));
    if (type == "rectangle")
      return make_rectangle(point(field(j, "lo", path), path + ".lo"), point(field(j, "hi", path), path + ".hi"));
    if (type == "polygon") {
      const json& v = field(j, "vertices", path);
      if (!v.is_array()) fail(path + ".vertices", "expected an array of points");
      std::vector<Point> pts;
      for (size_t i = 0; i < v.size(); ++i) pts.push_back(point(v[i], path + ".vertices[" + std::to_string(i) + "]"));
      return make_convex_polygon(pts);
    }
    if (type == "regular_polygon")
      return make_regular_polygon(static_cast<int>(number(field(j, "n", path), path + ".n")),
                                  positive(field(j, "side", path), path + ".side"),
                                  j.contains("center") ? point(j["center"], path + ".center") : Point(0, 0));
    if (type == "polar") {
      const Point c = j.contains("center") ? point(j["center"], path + ".center") : Point(0, 0);
      const double a0 = positive(field(j, "a0", path), path + ".a0");
      const auto cs = j.contains("cos") ? numbers(j["cos"], path + ".cos") : std::vector<double>{};
      const auto sn = j.contains("sin") ? numbers(j["sin"], path + ".sin") : std::vector<double>{};
      return make_polar(c, a0, cs, sn);
    }
    if (type == "sphere")
      return make_sphere3d(positive(field(j, "radius", path), path + ".radius"), num_or(j, "zc", 0.0, path));
    if (type == "dumbbell")
      return make_dumbbell(positive(field(j, "R", path), path + ".R"), positive(field(j, "r", path), path + ".r"),
                           positive(field(j, "neck", path), path + ".neck"));
    if (type == "capsule")
      return make_capsule(positive(field(j, "a", path), path + ".a"),
                          positive(field(j, "half_length", path), path + ".half_length"));
    if (type == "wulff")
      return make_wulff_ball(parse_norm(field(j, "norm", path), path + ".norm"),
                             j.contains("center") ? point(j["center"], path + ".center") : Point(0, 0),
                             positive(field(j, "radius", path), path + ".radius"));
  } catch (const DomainError& e) {
    fail(path, e.what());
  } catch (const UnsupportedError& e) {
    fail(path, e.what());
  }
  fail(path + ".type", "unknown shape '" + type + "'");
}

const std::map<std::string, ProblemType>& problem_names() {
  static const std::map<std::string, ProblemType> m{
      {"torsion", ProblemType::torsion},     {"eigen", ProblemType::eigen},
      {"heat", ProblemType::heat},           {"small_diffusion", ProblemType::small_diffusion},
      {"p_torsion", ProblemType::p_torsion}, {"aniso", ProblemType::aniso},
      {"lane_emden", ProblemType::lane_emden}};
  return m;
}

ProblemConfig parse_problem(const json& j, const std::string& path) {
  ProblemConfig pc;
  const std::string type = text(field(j, "type", path), path + ".type");
  auto it = problem_names().find(type);
  if (it == problem_names().end()) fail(path + ".type", "unknown problem '" + type + "'");
  pc.type = it->second;
  pc.id = j.contains("id") ? text(j["id"], path + ".id") : type;
  check_keys(j, {"type", "id", "bounds", "g", "times", "eps", "p", "norm", "pair", "q"}, path);
  if (j.contains("bounds")) {
    const json& b = j["bounds"];
    if (!b.is_array()) fail(path + ".bounds", "expected an array of bound names");
    for (size_t i = 0; i < b.size(); ++i) {
      const std::string bp = path + ".bounds[" + std::to_string(i) + "]";
      const std::string name = text(b[i], bp);
      auto bc = bound_catalogue().find(name);
      if (bc == bound_catalogue().end()) fail(bp, "unknown bound '" + name + "'");
      bool ok = false;
      for (ProblemType t : bc->second) ok = ok || t == pc.type;
      if (!ok) fail(bp, "bound '" + name + "' cannot be evaluated for a " + type + " problem");
      pc.bounds.push_back(name);
    }
  }
  switch (pc.type) {
    case ProblemType::heat: {
      if (!j.contains("g")) fail(path + ".g", "heat problems need an initial datum g");
      const std::string g = text(j["g"], path + ".g");
      if (g == "phi1") pc.g = HeatData::phi1;
      else if (g == "one") pc.g = HeatData::one;
      else if (g == "torsion") pc.g = HeatData::torsion;
      else fail(path + ".g", "unknown initial datum '" + g + "' (phi1, one, torsion)");
      pc.times = numbers(field(j, "times", path), path + ".times");
      if (pc.times.empty()) fail(path + ".times", "at least one time is required");
      for (size_t i = 0; i < pc.times.size(); ++i)
        if (!(pc.times[i] > 0)) fail(path + ".times[" + std::to_string(i) + "]", "must be positive");
      break;
    }
    case ProblemType::small_diffusion:
      pc.eps = numbers(field(j, "eps", path), path + ".eps");
      if (pc.eps.empty()) fail(path + ".eps", "at least one value is required");
      for (size_t i = 0; i < pc.eps.size(); ++i)
        if (!(pc.eps[i] > 0)) fail(path + ".eps[" + std::to_string(i) + "]", "must be positive");
      break;
    case ProblemType::p_torsion:
      pc.p = numbers(field(j, "p", path), path + ".p");
      if (pc.p.empty()) fail(path + ".p", "at least one value is required");
      for (size_t i = 0; i < pc.p.size(); ++i)
        if (!(pc.p[i] > 1)) fail(path + ".p[" + std::to_string(i) + "]", "must exceed 1");
      break;
    case ProblemType::aniso:
      pc.norm = parse_norm(field(j, "norm", path), path + ".norm");
      pc.pair = j.contains("pair") ? parse_pair(j["pair"], path + ".pair") : make_power_pair(2);
      break;
    case ProblemType::lane_emden:
      pc.q = number(field(j, "q", path), path + ".q");
      if (!(pc.q > 1 && pc.q <= 2)) fail(path + ".q", "must lie in (1, 2]");
      break;
    default: break;
  }
  return pc;
}

}  // namespace

std::string to_string(ProblemType t) {
  for (const auto& [k, v] : problem_names())
    if (v == t) return k;
  return "?";
}

const std::map<std::string, std::vector<ProblemType>>& bound_catalogue() {
  using P = ProblemType;
  static const std::map<std::string, std::vector<ProblemType>> m{
      {"torsion_meanconvex", {P::torsion}},
      {"torsion_max_upper", {P::torsion}},
      {"torsion_john", {P::torsion}},
      {"torsion_curvature", {P::torsion}},
      {"torsion_exterior", {P::torsion}},
      {"semilinear", {P::torsion, P::small_diffusion, P::lane_emden}},
      {"small_diffusion", {P::small_diffusion}},
      {"small_diffusion_geometric", {P::small_diffusion}},
      {"eigen", {P::eigen}},
      {"eigen_ratio", {P::eigen}},
      {"bms", {P::eigen}},
      {"p_eigen", {P::eigen}},
      {"p_eigen_ratio", {P::eigen}},
      {"heat", {P::heat}},
      {"quasilinear", {P::p_torsion}},
      {"quasilinear_power_ratio", {P::p_torsion}},
      {"quasilinear_shift", {P::p_torsion}},
      {"lane_emden", {P::lane_emden}},
      {"lane_emden_ratio", {P::lane_emden}},
      {"aniso", {P::aniso}},
      {"aniso_power_ratio", {P::aniso}},
  };
  return m;
}

ExperimentConfig parse_config(const json& j) {
  ExperimentConfig cfg;
  cfg.source = j;
  if (!j.is_object()) fail("$", "expected an object");
  check_keys(j, {"h", "tolerance", "gradient_tolerance", "domains", "description"}, "$");
  if (j.contains("h")) cfg.h = positive(j["h"], "$.h");
  if (j.contains("tolerance")) {
    cfg.tolerance = number(j["tolerance"], "$.tolerance");
    if (cfg.tolerance < 0 || cfg.tolerance >= 1) fail("$.tolerance", "must lie in [0, 1)");
  }
  if (j.contains("gradient_tolerance")) cfg.gradient_tolerance = positive(j["gradient_tolerance"], "$.gradient_tolerance");
  const json& doms = field(j, "domains", "$");
  if (!doms.is_array() || doms.empty()) fail("$.domains", "expected a nonempty array");
  std::set<std::string> ids;
  for (size_t d = 0; d < doms.size(); ++d) {
    const std::string path = "$.domains[" + std::to_string(d) + "]";
    const json& dj = doms[d];
    check_keys(dj, {"id", "shape", "overrides", "problems"}, path);
    DomainConfig dc;
    dc.id = text(field(dj, "id", path), path + ".id");
    if (!ids.insert(dc.id).second) fail(path + ".id", "duplicate domain id '" + dc.id + "'");
    dc.domain = parse_shape(field(dj, "shape", path), path + ".shape");
    if (dj.contains("overrides")) {
      const json& o = dj["overrides"];
      const std::string op = path + ".overrides";
      check_keys(o, {"r_e", "john_axes"}, op);
      if (o.contains("r_e")) dc.overrides.r_e = positive(o["r_e"], op + ".r_e");
      if (o.contains("john_axes")) dc.overrides.john_axes = numbers(o["john_axes"], op + ".john_axes");
    }
    const json& probs = field(dj, "problems", path);
    if (!probs.is_array() || probs.empty()) fail(path + ".problems", "expected a nonempty array");
    std::set<std::string> pids;
    for (size_t p = 0; p < probs.size(); ++p) {
      const std::string pp = path + ".problems[" + std::to_string(p) + "]";
      ProblemConfig pc = parse_problem(probs[p], pp);
      if (!pids.insert(pc.id).second) fail(pp + ".id", "duplicate problem id '" + pc.id + "'");
      if (pc.type != ProblemType::torsion && pc.type != ProblemType::eigen && pc.type != ProblemType::heat &&
          pc.type != ProblemType::small_diffusion && dc.domain.axisymmetric())
        fail(pp + ".type", "only linear problems are supported on revolution domains");
      if (pc.type == ProblemType::aniso && dc.domain.dimension() != 2) fail(pp + ".type", "anisotropic problems are planar");
      dc.problems.push_back(std::move(pc));
    }
    cfg.domains.push_back(std::move(dc));
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open configuration file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_config(j);
}

std::vector<Experiment> expand(const ExperimentConfig& cfg) {
  std::vector<Experiment> out;
  auto fmt = [](double v) {
    std::ostringstream os;
    os << v;
    return os.str();
  };
  for (size_t d = 0; d < cfg.domains.size(); ++d) {
    const auto& dc = cfg.domains[d];
    for (size_t p = 0; p < dc.problems.size(); ++p) {
      const auto& pc = dc.problems[p];
      std::vector<double> params;
      std::string key;
      if (pc.type == ProblemType::small_diffusion) params = pc.eps, key = "eps";
      if (pc.type == ProblemType::p_torsion) params = pc.p, key = "p";
      if (params.empty()) {
        out.push_back({static_cast<int>(d), static_cast<int>(p), 0, pc.id, 0});
      } else {
        for (size_t s = 0; s < params.size(); ++s)
          out.push_back({static_cast<int>(d), static_cast<int>(p), static_cast<int>(s),
                         pc.id + "[" + key + "=" + fmt(params[s]) + "]", params[s]});
      }
    }
  }
  return out;
}

}  // namespace hotspot
