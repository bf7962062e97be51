// ecomplex command-line front end.
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 4 stage failure.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "ecomplex/errors.hpp"
#include "ecomplex/pipeline.hpp"
#include "ecomplex/synthdata.hpp"

namespace {

using namespace ecomplex;

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kDataError = 3;
constexpr int kStageFailure = 4;

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("ecomplex");
  logger->set_pattern("%^%l%$: %v");
  spdlog::set_default_logger(logger);
  const char* env = std::getenv("ECOMPLEX_LOG");
  const std::string level = env ? env : "warn";
  auto parsed = spdlog::level::from_str(level);
  if (parsed == spdlog::level::off && level != "off") {
    std::cerr << "warning: unknown ECOMPLEX_LOG level '" << level << "', using warn\n";
    parsed = spdlog::level::warn;
  }
  spdlog::set_level(parsed);
}

struct PipelineFlags {
  std::string config;
  std::string out;
  std::string models;
  bool strict = false;
};

void add_pipeline_flags(CLI::App* cmd, PipelineFlags& flags) {
  cmd->add_option("--config", flags.config, "Pipeline configuration (TOML)")->required();
  cmd->add_option("--out", flags.out, "Output directory (overrides output.dir)");
  cmd->add_option("--models", flags.models, "Comma-separated model ids, e.g. T1.m4,T4.m1");
  cmd->add_flag("--strict", flags.strict, "Fail on any coverage gap");
}

PipelineConfig resolve(const PipelineFlags& flags) {
  auto cfg = load_config(flags.config);
  if (!flags.out.empty()) cfg.output_dir = flags.out;
  if (!flags.models.empty()) {
    cfg.models.clear();
    std::stringstream list(flags.models);
    std::string id;
    while (std::getline(list, id, ',')) {
      if (!id.empty()) cfg.models.push_back(id);
    }
  }
  if (flags.strict) cfg.strict = true;
  return cfg;
}

int report_manifest(const RunManifest& m, const PipelineConfig& cfg) {
  for (const auto& s : m.stages) {
    std::cout << to_string(s.stage) << ": " << s.status;
    if (!s.note.empty()) std::cout << " (" << s.note << ")";
    std::cout << "\n";
  }
  if (!m.warnings.empty()) std::cout << m.warnings.size() << " warning(s), see run_manifest.csv\n";
  std::cout << "artifacts in " << cfg.output_dir.string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"Hidden and revealed economic complexity pipeline"};
  app.require_subcommand(0, 1);
  bool print_schema = false;
  app.add_flag("--print-schema", print_schema, "Print the documented configuration schema");

  // synth
  auto* synth = app.add_subcommand("synth", "Write a synthetic input fixture and its config");
  std::uint64_t seed = 1;
  std::string synth_out = "fixture";
  SynthSizes sizes;
  SynthOptions opt;
  synth->add_option("--seed", seed, "Generator seed")->capture_default_str();
  synth->add_option("--out", synth_out, "Fixture directory")->capture_default_str();
  synth->add_option("--skills", sizes.n_skills)->capture_default_str();
  synth->add_option("--jobs", sizes.n_jobs)->capture_default_str();
  synth->add_option("--industries", sizes.n_industries)->capture_default_str();
  synth->add_option("--counties", sizes.n_counties)->capture_default_str();
  synth->add_option("--countries", opt.n_countries)->capture_default_str();
  synth->add_option("--products", opt.n_products)->capture_default_str();
  synth->add_option("--export-years", opt.n_export_years)->capture_default_str();
  synth->add_option("--service-only-fraction", opt.service_only_fraction)->capture_default_str();
  synth->add_option("--rare-industries", opt.rare_industries)->capture_default_str();
  synth->add_option("--rare-holders", opt.rare_holders)->capture_default_str();
  synth->add_option("--unmatched-industries", opt.unmatched_industries)->capture_default_str();
  synth->add_option("--wage-beta", opt.planted.wage_beta)->capture_default_str();
  synth->add_option("--lp-beta", opt.planted.lp_beta)->capture_default_str();
  synth->add_option("--fitness-beta", opt.planted.fitness_beta)->capture_default_str();

  struct Command {
    CLI::App* app;
    std::vector<Stage> stages;
    PipelineFlags flags;
  };
  std::vector<Command> commands = {
      {app.add_subcommand("ingest-check", "Load and validate every input table"), {Stage::ingest}, {}},
      {app.add_subcommand("binarize", "Quotients and binary networks"), {Stage::binarize}, {}},
      {app.add_subcommand("fitness", "Job fitness on the job x skill network"),
       {Stage::job_fitness}, {}},
      {app.add_subcommand("aggregate", "Industry complexities and county fitness measures"),
       {Stage::industry_complexity, Stage::county_fitness, Stage::revealed}, {}},
      {app.add_subcommand("regress", "Regression tables"), {Stage::regressions}, {}},
      {app.add_subcommand("report", "Rankings, scatter and distribution reports"),
       {Stage::reports}, {}},
      {app.add_subcommand("run", "Full pipeline"), all_stages(), {}},
  };
  for (auto& c : commands) add_pipeline_flags(c.app, c.flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (print_schema) {
      std::cout << config_schema();
      return kOk;
    }
    if (synth->parsed()) {
      const auto world = generate_quadripartite(seed, sizes, opt);
      write_fixture(world, synth_out);
      std::cout << "fixture written to " << synth_out << " (config "
                << (std::filesystem::path(synth_out) / fixture_files::config).string() << ")\n";
      return kOk;
    }
    for (auto& c : commands) {
      if (!c.app->parsed()) continue;
      const auto cfg = resolve(c.flags);
      return report_manifest(run_stages(cfg, c.stages), cfg);
    }
    std::cout << app.help();
    return kConfigError;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "stage failure: " << e.what() << "\n";
    return kStageFailure;
  }
}
