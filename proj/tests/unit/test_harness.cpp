#include <cstdlib>
#include <filesystem>
#include <set>

#include "doctest.h"
#include "hotspot/errors.hpp"
#include "hotspot/harness.hpp"

using namespace hotspot;
using doctest::Approx;

namespace {

json disk_config(double h, const std::vector<std::string>& bounds) {
  return json{{"h", h},
              {"domains",
               {{{"id", "disk"},
                 {"shape", {{"type", "ball"}, {"center", {0, 0}}, {"radius", 1}}},
                 {"problems", {{{"type", "torsion"}, {"bounds", bounds}}}}}}}};
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("config defaults and validation") {
  json j = disk_config(0.1, {"torsion_meanconvex"});
  j.erase("h");
  const auto cfg = parse_config(j);
  CHECK(cfg.h == Approx(1.0 / 128));
  CHECK(cfg.tolerance == Approx(0.02));
  REQUIRE(cfg.domains.size() == 1);
  CHECK(cfg.domains[0].problems[0].type == ProblemType::torsion);

  CHECK_THROWS_AS(parse_config(disk_config(0.1, {"no_such_bound"})), ConfigError);
  CHECK_THROWS_AS(parse_config(disk_config(-1, {"torsion_meanconvex"})), ConfigError);
  CHECK_THROWS_AS(parse_config(disk_config(0.1, {"heat"})), ConfigError);

  json heat = disk_config(0.1, {"heat"});
  heat["domains"][0]["problems"][0] = {{"type", "heat"}, {"bounds", {"heat"}}};
  try {
    parse_config(heat);
    FAIL("missing g accepted");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("$.domains[0].problems[0]") != std::string::npos);
  }
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("report serialisation") {
  const std::vector<ReportRow> none;
  CHECK(to_csv(none) == csv_header() + "\n");
  ReportRow r;
  r.domain = "disk";
  r.problem = "torsion";
  r.bound = "torsion_meanconvex";
  r.status = "pass";
  const std::string one = to_csv({r});
  int lines = 0;
  for (char c : one) lines += c == '\n';
  CHECK(lines == 2);
  CHECK(rows_ok({r}));
  r.status = "error";
  CHECK_FALSE(rows_ok({r}));
  r.status = "inapplicable";
  CHECK(rows_ok({r}));
}

TEST_CASE("run, json round trip and field dump") {
  const auto cfg = parse_config(disk_config(1.0 / 64, {"torsion_meanconvex", "torsion_max_upper"}));
  RunOptions opt;
  opt.keep_fields = true;
  const auto res = run(cfg, opt);
  REQUIRE(res.rows.size() == 2);
  CHECK(res.rows[0].bound == "torsion_meanconvex");
  CHECK(res.rows[0].status == "pass");
  CHECK(res.rows[0].d_measured == Approx(1).epsilon(2.0 / 64));

  const json j = json::parse(to_json(cfg, res, true).dump());
  CHECK(j["rows"].size() == 2);
  CHECK(j["rows"][1]["bound"] == "torsion_max_upper");
  CHECK(j["config"] == cfg.source);
  REQUIRE(j["fields"].size() == 1);
  bool centre = false;
  for (const auto& p : j["fields"][0]["points"])
    if (std::abs(p[0].get<double>()) < 1e-12 && std::abs(p[1].get<double>()) < 1e-12)
      centre = std::abs(p[2].get<double>() - 0.5) <= 1e-3;
  CHECK(centre);

  // Same inputs, same report.
  CHECK(to_csv(run(cfg).rows, false) == to_csv(res.rows, false));
}

TEST_CASE("inapplicable rows are reported, not failed") {
  json j = disk_config(1.0 / 32, {"torsion_meanconvex"});
  j["domains"][0]["shape"] = {{"type", "polar"}, {"center", {0, 0}}, {"a0", 1}, {"cos", {0.15, 0.3}}};
  const auto res = run(parse_config(j));
  REQUIRE(res.rows.size() == 1);
  CHECK(res.rows[0].status == "inapplicable");
  CHECK(rows_ok(res.rows));
}

TEST_CASE("thread count") {
  CHECK(thread_count(3) == 3);
  setenv("HOTSPOT_THREADS", "1", 1);
  CHECK(thread_count() == 1);
  unsetenv("HOTSPOT_THREADS");
  CHECK(thread_count() >= 1);
}

TEST_CASE("shipped configs cover every bound") {
  std::set<std::string> seen;
  for (const auto& e : std::filesystem::directory_iterator(HOTSPOT_CONFIG_DIR)) {
    if (e.path().extension() != ".json") continue;
    const auto cfg = load_config(e.path().string());
    for (const auto& d : cfg.domains)
      for (const auto& p : d.problems) seen.insert(p.bounds.begin(), p.bounds.end());
  }
  for (const auto& [name, types] : bound_catalogue()) CHECK_MESSAGE(seen.count(name), name);
}

}
