#pragma once

// Config-driven pipeline. Stages run in dependency order and communicate only
// through CSV artifacts in the output directory, so each stage can also be
// run on its own:
//
//   ingest -> binarize -> job_fitness -> industry_complexity -> county_fitness
//          -> revealed -> regressions -> reports
//
// Every run writes run_manifest.csv (config hash, stage status, artifact row
// counts). A failing stage leaves the artifacts produced so far in place and
// adds a FAILED marker file.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ecomplex/efc.hpp"
#include "ecomplex/quotient.hpp"
#include "ecomplex/report.hpp"

namespace ecomplex {

struct InputPaths {
  std::filesystem::path skills;
  std::filesystem::path job_wages;
  std::filesystem::path employment;
  std::filesystem::path county_wages;
  std::filesystem::path industry_panel;
  std::filesystem::path county_panel;
  // Optional; when either is empty the export-based stages are skipped.
  std::filesystem::path exports;
  std::filesystem::path concordance;
};

struct PipelineConfig {
  InputPaths inputs;
  int base_year = 2017;
  int horizon_year = 2022;
  std::vector<int> export_years;  // defaults to 2012..2021
  SolverConfig solver;
  QuotientSpec quotient;
  SkillMeanRule skill_mean = SkillMeanRule::rated_only;
  std::string reference_country = "USA";
  std::filesystem::path output_dir;
  std::vector<std::string> models;  // defaults to every known model
  OutlierRule outliers;
  DistributionOptions distribution;
  bool strict = false;

  PipelineConfig();

  bool has_exports() const { return !inputs.exports.empty() && !inputs.concordance.empty(); }

  // Checks years, solver settings, model ids and that every configured input
  // file exists. Throws ConfigError.
  void validate() const;
};

// Parses TOML text. Relative paths are resolved against `base_dir`. Unknown
// sections or keys are rejected. Throws ConfigError.
PipelineConfig parse_config(std::string_view toml_text, const std::filesystem::path& base_dir,
                            const std::string& source = "config");
PipelineConfig load_config(const std::filesystem::path& path);

// Canonical TOML rendering of a config (paths relative to `base_dir`).
std::string render_config(const PipelineConfig& cfg, const std::filesystem::path& base_dir);

// Documented schema, printed by --print-schema.
std::string_view config_schema();

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

enum class Stage {
  ingest,
  binarize,
  job_fitness,
  industry_complexity,
  county_fitness,
  revealed,
  regressions,
  reports,
};

std::string_view to_string(Stage s);
const std::vector<Stage>& all_stages();

struct StageOutcome {
  Stage stage;
  std::string status;  // produced | skipped | failed
  std::string note;
};

struct RunManifest {
  std::string config_hash;
  std::vector<StageOutcome> stages;
  std::vector<std::pair<std::string, std::size_t>> artifacts;  // file, data rows
  std::vector<std::string> warnings;
  bool failed = false;
};

// Runs `stages` (in the given order) against cfg.output_dir, then writes the
// manifest. Rethrows the first stage error after recording it.
RunManifest run_stages(const PipelineConfig& cfg, const std::vector<Stage>& stages);
inline RunManifest run_pipeline(const PipelineConfig& cfg) { return run_stages(cfg, all_stages()); }

// Artifact file names.
namespace artifacts {
inline constexpr const char* manifest = "run_manifest.csv";
inline constexpr const char* failed = "FAILED";
inline constexpr const char* config = "run_config.toml";
inline constexpr const char* ingest_summary = "ingest_summary.csv";
inline constexpr const char* m1 = "network_skill_job.csv";
inline constexpr const char* iwq = "quotient_job_industry.csv";
inline constexpr const char* m2 = "network_job_industry.csv";
inline constexpr const char* wlq = "quotient_county_industry.csv";
inline constexpr const char* m3 = "network_county_industry.csv";
inline constexpr const char* job_fitness = "fitness_job_skill.csv";
inline constexpr const char* job_trajectory = "trajectory_job_skill.csv";
inline constexpr const char* q_hidden = "industry_complexity_hidden.csv";
inline constexpr const char* f_job_based = "county_fitness_job_based.csv";
inline constexpr const char* county_solve = "fitness_county_industry.csv";
inline constexpr const char* county_trajectory = "trajectory_county_industry.csv";
inline constexpr const char* f_endogenous = "county_fitness_endogenous.csv";
inline constexpr const char* q_endogenous = "industry_complexity_endogenous.csv";
inline constexpr const char* diversification = "diversification.csv";
inline constexpr const char* product_complexity = "product_complexity.csv";
inline constexpr const char* q_revealed = "industry_complexity_revealed.csv";
inline constexpr const char* f_exogenous = "county_fitness_exogenous.csv";
inline constexpr const char* diversification_restricted = "diversification_restricted.csv";
inline constexpr const char* solver_summary = "solver_summary.csv";
inline constexpr const char* coefficients = "regression_coefficients.csv";
inline constexpr const char* summary = "regression_summary.csv";
inline constexpr const char* chow = "chow_tests.csv";
inline constexpr const char* samples = "regression_samples.csv";
inline constexpr const char* exclusions = "macro_exclusions.csv";
inline constexpr const char* tables = "regression_tables.txt";
inline constexpr const char* rankings = "rankings.csv";
inline constexpr const char* scatter = "scatter_hidden_revealed.csv";
inline constexpr const char* scatter_svg = "scatter_hidden_revealed.svg";
inline constexpr const char* scatter_outliers = "scatter_outliers.csv";
inline constexpr const char* distribution_summary = "distribution_summary.csv";
}  // namespace artifacts

}  // namespace ecomplex
