#include "causticlab/runner.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace causticlab;
using nlohmann::json;

namespace {

std::string field_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("configuration errors name the offending field") {
  CHECK(field_of(R"({"experiment": "supnorm", "deltas": [-0.5]})") == "/deltas/0");
  CHECK(field_of(R"({"experiment": "supnorm", "deltas": [0.0, 2.0]})") == "/deltas/1");
  CHECK(field_of(R"({"experiment": "bogus"})") == "/experiment");
  CHECK(field_of(R"({"experiment": "supnorm", "colour": 1})") == "/colour");
  CHECK(field_of(R"({"experiment": "supnorm", "singularity": "Q7"})") == "/singularity");
  CHECK(field_of(R"({"experiment": "supnorm", "rel_tol": 0.5})") == "/rel_tol");
  CHECK(field_of(R"({"experiment": "supnorm", "h_grid": [0.1, 0.01]})") == "/h_grid");
  CHECK(field_of(R"({"experiment": "supnorm", "seed": -3})") == "/seed");
  CHECK(field_of(R"({"experiment": "torus", "omega": ["3/5", "4/5"]})").empty());
  CHECK_THROWS_AS(parse_config("[1, 2"), ConfigError);
}

TEST_CASE("configurations round-trip through JSON") {
  const auto c = parse_config(R"({"experiment": "torus", "n": 3, "mode": "sphere", "deltas": ["1/2", 0.75],
                                  "h_grid": {"first": 0.01, "last": 0.0001, "points": 7}, "seed": 11})");
  CHECK(c.n == 3);
  CHECK(c.deltas == std::vector<double>{0.5, 0.75});
  CHECK(c.h_grid.points == 7);
  CHECK(parse_config(config_to_json(c)) == c);
  CHECK(config_to_json(parse_config(config_to_json(c))) == config_to_json(c));
  CHECK(parse_config("{}") == RunConfig{});
}

TEST_CASE("catalog run") {
  const auto r = execute(parse_config(R"({"experiment": "catalog_dump"})"));
  CHECK(r.status == 0);
  REQUIRE(r.files.count("catalog.csv") == 1);
  const auto summary = json::parse(r.files.at("summary.json"));
  CHECK(summary["experiment"] == "catalog_dump");
  CHECK(summary["config"]["experiment"] == "catalog_dump");
  CHECK(summary.contains("fits"));
  CHECK_FALSE(summary.contains("wall_seconds"));
}

TEST_CASE("run writes files and reports invalid configs with status 2") {
  const auto dir = std::filesystem::temp_directory_path() / "causticlab-runner-test";
  std::filesystem::remove_all(dir);
  RunConfig c;
  c.out_dir = dir.string();
  CHECK(run(c) == 0);
  CHECK(std::filesystem::exists(dir / "catalog.csv"));
  CHECK(std::filesystem::exists(dir / "summary.json"));
  CHECK(std::filesystem::exists(dir / "timing.json"));
  c.experiment = Experiment::supnorm;
  c.deltas = {-1.0};
  CHECK(run(c) == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("A2 sup-norm run is deterministic across worker counts") {
  auto c = parse_config(R"({"experiment": "supnorm", "singularity": "A2", "x_strategy": "omega_shells", "quick": true})");
  const auto one = execute(c);
  c.workers = 4;
  const auto four = execute(c);
  CHECK(one.status == 0);
  CHECK(one.files == four.files);
  const auto summary = json::parse(one.files.at("summary.json"));
  REQUIRE(summary["fits"].size() == 1);
  CHECK(summary["fits"][0]["reference_exact"] == "1/6");
  CHECK(summary["fits"][0]["verdict"] == "pass");
}

TEST_CASE("a tolerance too tight to meet gives status 1") {
  // The fixed bump at the origin scales exactly, so break homogeneity with a narrow cutoff.
  auto c = parse_config(R"({"experiment": "supnorm", "singularity": "A2", "amplitude": "narrow_bump",
                            "deltas": [0.2], "quick": true, "tolerance": 1e-6})");
  CHECK(execute(c).status == 1);
}

TEST_CASE("exploratory fits do not affect the status") {
  // A3 beyond its threshold is exploratory.
  auto c = parse_config(R"({"experiment": "threshold_sweep", "singularity": "A3", "amplitude": "narrow_bump",
                            "deltas": [0.1, 0.6], "quick": true})");
  const auto r = execute(c);
  REQUIRE(r.fits.size() == 2);
  CHECK(r.fits[0].expected_pass);
  CHECK_FALSE(r.fits[1].expected_pass);
  CHECK(r.status == (r.fits[0].verdict == Verdict::pass ? 0 : 1));
}

TEST_CASE("lemma62 run") {
  auto c = parse_config(R"({"experiment": "lemma62", "eps_grid": [0.1, 0.03, 0.01, 0.003, 0.001]})");
  const auto r = execute(c);
  CHECK(r.status == 0);
  CHECK(r.files.count("lemma62.csv") == 1);
}

TEST_CASE("verify matrix subset") {
  VerifyOptions o;
  o.only = {1, 2};
  const auto s = verify_all(o);
  REQUIRE(s.criteria.size() == 2);
  CHECK(s.all_passed());
  CHECK(s.to_csv().find("PASS") != std::string::npos);
  CHECK(json::parse(s.to_json()).is_object());
}
