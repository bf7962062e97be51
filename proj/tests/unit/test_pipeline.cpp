#include <doctest.h>

#include <fstream>

#include "ecomplex/csv.hpp"
#include "ecomplex/econometrics.hpp"
#include "ecomplex/errors.hpp"
#include "ecomplex/pipeline.hpp"
#include "ecomplex/synthdata.hpp"
#include "support.hpp"

using namespace ecomplex;
namespace fs = std::filesystem;

namespace {

fs::path small_fixture(const std::string& name) {
  const auto dir = support::temp_dir(name);
  SynthOptions o;
  o.n_countries = 12;
  o.n_products = 40;
  o.n_export_years = 3;
  o.first_export_year = 2015;
  o.goods_fraction = 0.4;
  write_fixture(generate_quadripartite(5, {12, 60, 40, 80}, o), dir);
  return dir;
}

std::string manifest_value(const fs::path& dir, const std::string& kind, const std::string& name) {
  std::ifstream in(dir / artifacts::manifest);
  csv::Reader r(in, "manifest");
  r.expect_header({"kind", "name", "value"});
  while (r.next()) {
    if (r.field(0) == kind && r.field(1) == name) return r.field(2);
  }
  return "<absent>";
}

}  // namespace

TEST_CASE("config parsing") {
  const auto dir = support::temp_dir("config");
  const auto cfg = parse_config(R"(
[inputs]
skills = "data/skills.csv"
county_panel = "/abs/county.csv"
[years]
base = 2016
horizon = 2021
export_years = [2014, 2012, 2014]
[solver]
max_iterations = 50
[quotient]
skill_mean = "all_with_zeros"
[models]
run = ["T1.m4"]
[report]
bins = 12
)",
                                dir, "test.toml");
  CHECK(cfg.inputs.skills == dir / "data/skills.csv");
  CHECK(cfg.inputs.county_panel == fs::path("/abs/county.csv"));
  CHECK(cfg.base_year == 2016);
  CHECK(cfg.export_years == std::vector<int>{2012, 2014});
  CHECK(cfg.solver.max_iterations == 50);
  CHECK(cfg.skill_mean == SkillMeanRule::all_with_zeros);
  CHECK(cfg.models == std::vector<std::string>{"T1.m4"});
  CHECK(cfg.distribution.bins == 12);
  CHECK(cfg.output_dir == dir / "out");
  CHECK_FALSE(cfg.has_exports());

  const auto defaults = parse_config("", dir);
  CHECK(defaults.export_years.size() == 10);
  CHECK(defaults.export_years.front() == 2012);
  CHECK(defaults.models.size() == known_models().size());

  CHECK_THROWS_AS(parse_config("[inputs]\nskilz = \"x\"\n", dir), ConfigError);
  CHECK_THROWS_AS(parse_config("[extras]\n", dir), ConfigError);
  CHECK_THROWS_AS(parse_config("[years]\nbase = \"2017\"\n", dir), ConfigError);
  CHECK_THROWS_AS(parse_config("[years\n", dir), ConfigError);
  CHECK_THROWS_AS(parse_config("[quotient]\nskill_mean = \"median\"\n", dir), ConfigError);
}

TEST_CASE("config validation") {
  const auto dir = small_fixture("validate");
  auto cfg = load_config(dir / fixture_files::config);
  CHECK_NOTHROW(cfg.validate());
  auto bad = cfg;
  bad.horizon_year = bad.base_year;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.models = {"T3.m1"};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.inputs.skills = dir / "nope.csv";
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  // The canonical rendering parses back to the same rendering.
  const auto text = render_config(cfg, dir);
  CHECK(render_config(parse_config(text, dir), dir) == text);
  CHECK(config_schema().find("[solver]") != std::string_view::npos);
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("full run produces every artifact and is deterministic") {
  const auto dir = small_fixture("run");
  auto cfg = load_config(dir / fixture_files::config);
  const auto m = run_pipeline(cfg);
  CHECK_FALSE(m.failed);
  CHECK(m.stages.size() == all_stages().size());
  for (const auto& s : m.stages) CHECK(s.status == "produced");
  for (const char* f :
       {artifacts::manifest, artifacts::m1, artifacts::m2, artifacts::m3, artifacts::q_hidden,
        artifacts::f_job_based, artifacts::f_endogenous, artifacts::f_exogenous,
        artifacts::q_revealed, artifacts::coefficients, artifacts::summary, artifacts::chow,
        artifacts::tables, artifacts::rankings, artifacts::scatter, artifacts::scatter_svg,
        artifacts::scatter_outliers, artifacts::distribution_summary, artifacts::solver_summary}) {
    CHECK_MESSAGE(fs::exists(cfg.output_dir / f), f);
  }
  CHECK(fs::exists(cfg.output_dir / "choropleth_exogenous_export.csv"));
  CHECK_FALSE(fs::exists(cfg.output_dir / artifacts::failed));
  CHECK(manifest_value(cfg.output_dir, "status", "run") == "ok");
  CHECK(manifest_value(cfg.output_dir, "artifact", artifacts::f_job_based) == "80");

  std::map<std::string, std::string> first;
  for (const auto& e : fs::directory_iterator(cfg.output_dir)) {
    first[e.path().filename().string()] = support::slurp(e.path());
  }
  run_pipeline(cfg);
  for (const auto& [name, bytes] : first) {
    CHECK_MESSAGE(support::slurp(cfg.output_dir / name) == bytes, name);
  }

  // Single stages can be rerun on the artifacts of an earlier run.
  const auto again = run_stages(cfg, {Stage::reports});
  CHECK(again.stages.size() == 1);
  CHECK(support::slurp(cfg.output_dir / artifacts::rankings) == first.at(artifacts::rankings));
}

TEST_CASE("missing export data skips the revealed stage") {
  const auto dir = small_fixture("noexports");
  auto cfg = load_config(dir / fixture_files::config);
  cfg.inputs.exports.clear();
  const auto m = run_pipeline(cfg);
  CHECK_FALSE(m.failed);
  const auto& revealed = m.stages[5];
  CHECK(revealed.stage == Stage::revealed);
  CHECK(revealed.status == "skipped");
  CHECK(manifest_value(cfg.output_dir, "stage", "revealed") == "skipped");
  CHECK(manifest_value(cfg.output_dir, "artifact", artifacts::q_revealed) == "<absent>");
  CHECK_FALSE(fs::exists(cfg.output_dir / artifacts::q_revealed));
  CHECK(m.stages[6].note.find("T1.m1 skipped") != std::string::npos);
  CHECK(fs::exists(cfg.output_dir / artifacts::tables));
}

TEST_CASE("a failing stage is named and leaves a marker") {
  const auto dir = small_fixture("failing");
  auto cfg = load_config(dir / fixture_files::config);
  cfg.output_dir = dir / "fresh";
  CHECK_THROWS_AS(run_stages(cfg, {Stage::job_fitness}), ComputeError);
  CHECK(fs::exists(cfg.output_dir / artifacts::failed));
  CHECK(manifest_value(cfg.output_dir, "stage", "job_fitness") == "failed");
  CHECK(manifest_value(cfg.output_dir, "status", "run") == "failed");

  // Corrupt input: detected by ingest as a data error.
  std::ofstream(dir / fixture_files::skills, std::ios::app) << "s_bad,11-1011,9\n";
  CHECK_THROWS_AS(run_pipeline(load_config(dir / fixture_files::config)), DataError);
}

TEST_CASE("strict mode fails on coverage gaps") {
  const auto dir = support::temp_dir("strict");
  SynthOptions o;
  o.n_countries = 12;
  o.n_products = 40;
  o.n_export_years = 1;
  o.goods_fraction = 0.4;
  o.unmatched_industries = 2;
  write_fixture(generate_quadripartite(5, {12, 60, 40, 80}, o), dir);
  auto cfg = load_config(dir / fixture_files::config);
  cfg.export_years = {2012};
  const auto lenient = run_stages(cfg, {Stage::ingest});
  CHECK_FALSE(lenient.warnings.empty());
  cfg.strict = true;
  CHECK_THROWS_AS(run_stages(cfg, {Stage::ingest}), ComputeError);
}
