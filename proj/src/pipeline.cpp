#include "ecomplex/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include <spdlog/spdlog.h>

#include "ecomplex/aggregate.hpp"
#include "ecomplex/csv.hpp"
#include "ecomplex/econometrics.hpp"
#include "ecomplex/errors.hpp"
#include "ecomplex/ingest.hpp"

namespace ecomplex {

namespace fs = std::filesystem;

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::ingest: return "ingest";
    case Stage::binarize: return "binarize";
    case Stage::job_fitness: return "job_fitness";
    case Stage::industry_complexity: return "industry_complexity";
    case Stage::county_fitness: return "county_fitness";
    case Stage::revealed: return "revealed";
    case Stage::regressions: return "regressions";
    case Stage::reports: return "reports";
  }
  return "unknown";
}

const std::vector<Stage>& all_stages() {
  static const std::vector<Stage> stages = {
      Stage::ingest,         Stage::binarize, Stage::job_fitness, Stage::industry_complexity,
      Stage::county_fitness, Stage::revealed, Stage::regressions, Stage::reports,
  };
  return stages;
}

namespace {

std::string hex64(std::uint64_t h) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string join(const std::vector<std::string>& ids, std::size_t limit = 10) {
  std::string out;
  for (std::size_t i = 0; i < ids.size() && i < limit; ++i) out += (i ? ", " : "") + ids[i];
  if (ids.size() > limit) out += ", ... (" + std::to_string(ids.size()) + " total)";
  return out;
}

// Artifact I/O inside the output directory. Files are assembled in memory
// and written in one go so that row counts are exact.
class Workspace {
 public:
  Workspace(const PipelineConfig& cfg, RunManifest& manifest)
      : cfg_(cfg), dir_(cfg.output_dir), manifest_(manifest) {}

  const PipelineConfig& cfg() const { return cfg_; }

  void write(const std::string& name, const std::function<void(std::ostream&)>& fill,
             bool has_header = true) {
    std::ostringstream buf;
    buf.imbue(std::locale::classic());
    fill(buf);
    const auto text = buf.str();
    std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
    if (!out) throw ComputeError("cannot write '" + (dir_ / name).string() + "'");
    out << text;
    if (!out) throw ComputeError("write failed for '" + (dir_ / name).string() + "'");
    auto rows = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
    if (has_header && rows > 0) --rows;
    auto it = std::find_if(manifest_.artifacts.begin(), manifest_.artifacts.end(),
                           [&](const auto& a) { return a.first == name; });
    if (it == manifest_.artifacts.end()) {
      manifest_.artifacts.emplace_back(name, rows);
    } else {
      it->second = rows;
    }
    spdlog::debug("wrote {} ({} rows)", name, rows);
  }

  bool exists(const std::string& name) const { return fs::is_regular_file(dir_ / name); }

  void remove(const std::string& name) const {
    std::error_code ec;
    fs::remove(dir_ / name, ec);
  }

  template <typename Fn>
  auto read(const std::string& name, Stage producer, Fn&& parse) const {
    const auto path = dir_ / name;
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw ComputeError("missing artifact " + name + " (produced by stage " +
                         std::string(to_string(producer)) + ")");
    }
    return parse(in, path.string());
  }

  void warn(const std::string& message) {
    spdlog::warn("{}", message);
    manifest_.warnings.push_back(message);
  }

  // Coverage gaps fail in strict mode and are recorded as warnings otherwise.
  void gap(const std::string& message) {
    if (cfg_.strict) throw ComputeError("coverage gap: " + message);
    warn(message);
  }

 private:
  const PipelineConfig& cfg_;
  fs::path dir_;
  RunManifest& manifest_;
};

BinaryBipartite read_binary(Workspace& ws, const char* name, Stage producer, AxisKind rows,
                            AxisKind cols) {
  return ws.read(name, producer, [&](std::istream& in, const std::string& src) {
    return read_binary_csv(in, src, rows, cols);
  });
}

FitnessResult read_fitness(Workspace& ws, const char* name, Stage producer, AxisKind rows,
                           AxisKind cols) {
  return ws.read(name, producer, [&](std::istream& in, const std::string& src) {
    return read_fitness_csv(in, src, rows, cols);
  });
}

IndustryComplexity read_complexity(Workspace& ws, const char* name, Stage producer) {
  return ws.read(name, producer, [](std::istream& in, const std::string& src) {
    return read_industry_complexity(in, src);
  });
}

CountyFitness read_fitness_map(Workspace& ws, const char* name, Stage producer) {
  return ws.read(name, producer, [](std::istream& in, const std::string& src) {
    return read_county_fitness(in, src);
  });
}

DiversificationIndex read_divers(Workspace& ws, const char* name, Stage producer) {
  auto all = ws.read(name, producer, [](std::istream& in, const std::string& src) {
    return read_diversification(in, src);
  });
  if (all.size() != 1) throw DataError(std::string(name) + ": expected one diversification index");
  return all.front();
}

void write_trajectory(std::ostream& out, const FitnessResult& r) {
  csv::write_row(out, {"iteration", "max_rel_change"});
  for (std::size_t i = 0; i < r.max_rel_change.size(); ++i) {
    csv::write_row(out, {std::to_string(i + 1), csv::format_double(r.max_rel_change[i])});
  }
}

// solver_summary.csv collects one row per solve; each stage replaces its own
// rows and keeps the others.
void record_solves(Workspace& ws, const std::vector<std::pair<std::string, const FitnessResult*>>& solves) {
  std::map<std::string, std::vector<std::string>> rows;
  if (ws.exists(artifacts::solver_summary)) {
    ws.read(artifacts::solver_summary, Stage::job_fitness,
            [&](std::istream& in, const std::string& src) {
              csv::Reader r(in, src);
              r.expect_header({"solve", "rows", "cols", "iterations", "stop_rule",
                               "rank_stable_iterations", "rank_stable", "underflowed"});
              while (r.next()) {
                std::vector<std::string> row;
                for (std::size_t i = 0; i < r.size(); ++i) row.push_back(r.field(i));
                rows[r.field(0)] = std::move(row);
              }
              return 0;
            });
  }
  for (const auto& [name, res] : solves) {
    rows[name] = {name,
                  std::to_string(res->fitness.size()),
                  std::to_string(res->complexity.size()),
                  std::to_string(res->iterations_used),
                  std::string(to_string(res->stop_rule)),
                  std::to_string(res->rank_stable_iterations),
                  res->rank_stable ? "true" : "false",
                  std::to_string(res->underflowed_ids().size())};
  }
  ws.write(artifacts::solver_summary, [&](std::ostream& out) {
    csv::write_row(out, {"solve", "rows", "cols", "iterations", "stop_rule",
                         "rank_stable_iterations", "rank_stable", "underflowed"});
    for (const auto& [name, row] : rows) csv::write_row(out, row);
  });
}

void log_solve(const std::string& name, const FitnessResult& r) {
  spdlog::info("{}: {}x{}, {} iterations, stop rule {}, {} underflowed", name, r.fitness.size(),
               r.complexity.size(), r.iterations_used, to_string(r.stop_rule),
               r.underflowed_ids().size());
}

std::map<int, WeightedBipartite> export_slices(const PipelineConfig& cfg) {
  auto all = load_exports(cfg.inputs.exports);
  std::map<int, WeightedBipartite> out;
  std::vector<std::string> missing;
  for (int y : cfg.export_years) {
    auto it = all.find(y);
    if (it == all.end()) {
      missing.push_back(std::to_string(y));
    } else {
      out.emplace(y, std::move(it->second));
    }
  }
  if (out.empty()) throw DataError("exports: none of the configured export years are present");
  if (!missing.empty()) {
    throw DataError("exports: configured years without data: " + join(missing));
  }
  return out;
}

// ---------------------------------------------------------------- stages

void stage_ingest(Workspace& ws) {
  const auto& cfg = ws.cfg();
  // Solver rows are accumulated by later stages; start from a clean file.
  ws.remove(artifacts::solver_summary);
  const auto skills = load_skill_job(cfg.inputs.skills);
  const auto job_wages =
      load_wage_bipartite(cfg.inputs.job_wages, AxisKind::job, AxisKind::industry, cfg.base_year);
  const auto employment = load_employment(cfg.inputs.employment, cfg.base_year);
  const auto county_wages = load_wage_bipartite(cfg.inputs.county_wages, AxisKind::county,
                                                AxisKind::industry, cfg.base_year);
  std::vector<std::string> universe = county_wages.cols().ids();
  universe.insert(universe.end(), employment.cols().ids().begin(), employment.cols().ids().end());
  std::sort(universe.begin(), universe.end());
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
  const auto panels = load_panels(
      {cfg.inputs.industry_panel, cfg.inputs.county_panel,
       cfg.has_exports() ? cfg.inputs.concordance : fs::path()},
      universe);
  if (!panels.industries.unmatched.empty()) {
    ws.gap("industries without a panel row: " + join(panels.industries.unmatched));
  }
  std::vector<std::string> no_panel;
  for (const auto& fips : county_wages.rows().ids()) {
    if (!panels.counties.counties.count(fips)) no_panel.push_back(fips);
  }
  if (!no_panel.empty()) ws.gap("counties without a panel row: " + join(no_panel));

  std::vector<std::vector<std::string>> rows = {
      {"skills", std::to_string(skills.importance.rows().size()),
       std::to_string(skills.importance.cols().size()), std::to_string(skills.importance.nnz())},
      {"job_wages", std::to_string(job_wages.rows().size()),
       std::to_string(job_wages.cols().size()), std::to_string(job_wages.nnz())},
      {"employment", std::to_string(employment.rows().size()),
       std::to_string(employment.cols().size()), std::to_string(employment.nnz())},
      {"county_wages", std::to_string(county_wages.rows().size()),
       std::to_string(county_wages.cols().size()), std::to_string(county_wages.nnz())},
      {"industry_panel", std::to_string(panels.industries.industries.size()), "",
       std::to_string(panels.industries.unmatched.size())},
      {"county_panel", std::to_string(panels.counties.counties.size()), "", ""},
  };
  if (cfg.has_exports()) {
    const auto exports = export_slices(cfg);
    const auto total = sum_over_years(exports);
    rows.push_back({"exports", std::to_string(total.rows().size()),
                    std::to_string(total.cols().size()), std::to_string(total.nnz())});
    rows.push_back({"concordance", std::to_string(panels.concordance.entries.size()), "", ""});
    if (!total.rows().contains(cfg.reference_country)) {
      throw DataError("exports: reference country " + cfg.reference_country + " has no exports");
    }
  }
  ws.write(artifacts::ingest_summary, [&](std::ostream& out) {
    csv::write_row(out, {"table", "rows", "cols", "cells"});
    for (const auto& r : rows) csv::write_row(out, r);
  });
}

void stage_binarize(Workspace& ws) {
  const auto& cfg = ws.cfg();
  const auto skills = load_skill_job(cfg.inputs.skills);
  const auto m1 = binarize_skills(skills, cfg.skill_mean);
  ws.write(artifacts::m1, [&](std::ostream& out) { write_binary_csv(out, m1); });

  const auto job_wages =
      load_wage_bipartite(cfg.inputs.job_wages, AxisKind::job, AxisKind::industry, cfg.base_year);
  const auto iwq = balassa_quotient(job_wages);
  ws.write(artifacts::iwq, [&](std::ostream& out) { write_quotient_csv(out, iwq); });
  const auto m2 = binarize(iwq, cfg.quotient);
  ws.write(artifacts::m2, [&](std::ostream& out) { write_binary_csv(out, m2); });

  const auto county_wages = load_wage_bipartite(cfg.inputs.county_wages, AxisKind::county,
                                                AxisKind::industry, cfg.base_year);
  const auto wlq = balassa_quotient(county_wages);
  ws.write(artifacts::wlq, [&](std::ostream& out) { write_quotient_csv(out, wlq); });
  const auto m3 = binarize(wlq, cfg.quotient);
  ws.write(artifacts::m3, [&](std::ostream& out) { write_binary_csv(out, m3); });

  std::vector<std::string> unlinked;
  const auto degrees = m3.row_degrees();
  for (std::size_t r = 0; r < degrees.size(); ++r) {
    if (degrees[r] == 0) unlinked.push_back(m3.rows()[r]);
  }
  if (!unlinked.empty()) ws.gap("counties without any specialization: " + join(unlinked));
  spdlog::info("networks: skill-job {} links, job-industry {} links, county-industry {} links",
               m1.nnz(), m2.nnz(), m3.nnz());
}

void stage_job_fitness(Workspace& ws) {
  const auto& cfg = ws.cfg();
  const auto m1 = read_binary(ws, artifacts::m1, Stage::binarize, AxisKind::skill, AxisKind::job);
  const auto result = solve_fitness(drop_empty(transpose(m1)).matrix, cfg.solver);
  log_solve("job x skill", result);
  ws.write(artifacts::job_fitness, [&](std::ostream& out) { write_fitness_csv(out, result); });
  ws.write(artifacts::job_trajectory, [&](std::ostream& out) { write_trajectory(out, result); });
  record_solves(ws, {{"job_skill", &result}});
}

void stage_industry_complexity(Workspace& ws) {
  const auto& cfg = ws.cfg();
  const auto fitness =
      read_fitness(ws, artifacts::job_fitness, Stage::job_fitness, AxisKind::job, AxisKind::skill);
  const auto employment = load_employment(cfg.inputs.employment, cfg.base_year);

  // Jobs without fitness (no skill above the skill means) cannot contribute.
  WeightedBuilder kept(AxisKind::job, AxisKind::industry);
  std::set<std::string> dropped_jobs;
  for (const auto& c : employment.cells()) {
    const auto& job = employment.rows()[c.row];
    if (fitness.fitness.find(job)) {
      kept.add(job, employment.cols()[c.col], c.value);
    } else {
      dropped_jobs.insert(job);
    }
  }
  if (!dropped_jobs.empty()) {
    ws.gap("employed jobs without fitness: " +
           join(std::vector<std::string>(dropped_jobs.begin(), dropped_jobs.end())));
  }
  const auto q = hidden_industry_complexity(kept.build(), fitness);
  std::vector<std::string> lost;
  for (const auto& id : employment.cols().ids()) {
    if (!q.find(id)) lost.push_back(id);
  }
  if (!lost.empty()) ws.gap("industries without hidden complexity: " + join(lost));
  ws.write(artifacts::q_hidden, [&](std::ostream& out) { write_industry_complexity(out, q); });
}

// Columns of `m` restricted to `keep`; rows are preserved.
BinaryBipartite keep_columns(const BinaryBipartite& m, const std::set<std::string, std::less<>>& keep) {
  std::vector<std::string> cols;
  for (const auto& id : m.cols().ids()) {
    if (keep.count(id)) cols.push_back(id);
  }
  AxisLabels col_axis(m.cols().kind(), cols);
  std::vector<CellKey> links;
  for (const auto& [r, c] : m.links()) {
    if (auto j = col_axis.find(m.cols()[c])) links.emplace_back(r, *j);
  }
  return BinaryBipartite(m.rows(), col_axis, std::move(links));
}

void stage_county_fitness(Workspace& ws) {
  const auto& cfg = ws.cfg();
  const auto m3 =
      read_binary(ws, artifacts::m3, Stage::binarize, AxisKind::county, AxisKind::industry);
  const auto q = read_complexity(ws, artifacts::q_hidden, Stage::industry_complexity);

  const auto covered = q.coverage();
  std::vector<std::string> missing;
  for (const auto& id : m3.cols().ids()) {
    if (!covered.count(id)) missing.push_back(id);
  }
  if (!missing.empty()) ws.gap("specialized industries without hidden complexity: " + join(missing));
  const auto f_job = hidden_county_fitness(missing.empty() ? m3 : keep_columns(m3, covered), q);
  ws.write(artifacts::f_job_based, [&](std::ostream& out) { write_county_fitness(out, f_job); });

  const auto solved = solve_fitness(drop_empty(m3).matrix, cfg.solver);
  log_solve("county x industry", solved);
  ws.write(artifacts::county_solve, [&](std::ostream& out) { write_fitness_csv(out, solved); });
  ws.write(artifacts::county_trajectory, [&](std::ostream& out) { write_trajectory(out, solved); });
  const auto f_endo = endogenous_county_fitness(m3, solved);
  ws.write(artifacts::f_endogenous, [&](std::ostream& out) { write_county_fitness(out, f_endo); });
  const auto q_endo = endogenous_industry_complexity(solved);
  ws.write(artifacts::q_endogenous, [&](std::ostream& out) { write_industry_complexity(out, q_endo); });
  const auto divers = diversification(m3);
  ws.write(artifacts::diversification, [&](std::ostream& out) { write_diversification(out, {divers}); });
  record_solves(ws, {{"county_industry", &solved}});
}

const char* const kRevealedArtifacts[] = {
    artifacts::product_complexity, artifacts::q_revealed, artifacts::f_exogenous,
    artifacts::diversification_restricted, artifacts::scatter, artifacts::scatter_svg,
    artifacts::scatter_outliers,
};

void stage_revealed(Workspace& ws) {
  const auto& cfg = ws.cfg();
  const auto exports = export_slices(cfg);
  std::map<int, FitnessResult> per_year;
  const auto products = export_product_complexity(exports, cfg.quotient, cfg.solver, &per_year);
  for (const auto& [year, r] : per_year) log_solve("exports " + std::to_string(year), r);
  ws.write(artifacts::product_complexity, [&](std::ostream& out) {
    csv::write_row(out, {"hs_code", "complexity", "years"});
    for (const auto& [hs, value] : products) {
      int years = 0;
      for (const auto& [y, r] : per_year) years += r.complexity.find(hs).has_value();
      csv::write_row(out, {hs, csv::format_double(value), std::to_string(years)});
    }
  });
  std::ifstream conc_in(cfg.inputs.concordance, std::ios::binary);
  if (!conc_in) throw ConfigError("cannot read '" + cfg.inputs.concordance.string() + "'");
  const auto concordance = read_concordance(conc_in, cfg.inputs.concordance.string());
  const auto q = exogenous_industry_complexity(products, concordance, sum_over_years(exports),
                                               cfg.reference_country);
  ws.write(artifacts::q_revealed, [&](std::ostream& out) { write_industry_complexity(out, q); });

  const auto m3 =
      read_binary(ws, artifacts::m3, Stage::binarize, AxisKind::county, AxisKind::industry);
  const auto f = exogenous_county_fitness(m3, q);
  ws.write(artifacts::f_exogenous, [&](std::ostream& out) { write_county_fitness(out, f); });
  const auto covered = q.coverage();
  const auto divers = diversification(m3, &covered);
  ws.write(artifacts::diversification_restricted,
           [&](std::ostream& out) { write_diversification(out, {divers}); });
  spdlog::info("revealed complexity covers {} industries; exogenous fitness covers {} of {} counties",
               q.values.size(), f.values.size(), f.universe.size());

  std::vector<std::pair<std::string, const FitnessResult*>> solves;
  std::vector<std::string> names;
  for (const auto& [year, r] : per_year) names.push_back("export_" + std::to_string(year));
  std::size_t i = 0;
  for (const auto& [year, r] : per_year) solves.emplace_back(names[i++], &r);
  record_solves(ws, solves);
}

ValueMap to_values(const DiversificationIndex& d) {
  ValueMap out;
  for (const auto& [id, v] : d.values) out.emplace(id, static_cast<double>(v));
  return out;
}

void stage_regressions(Workspace& ws, std::vector<std::string>& notes) {
  const auto& cfg = ws.cfg();
  const auto panels = load_panels({cfg.inputs.industry_panel, cfg.inputs.county_panel, {}});
  ModelInputs in;
  in.macro = derive_macro_variables(panels.industries, panels.counties, cfg.base_year,
                                    cfg.horizon_year);
  in.q_hidden = read_complexity(ws, artifacts::q_hidden, Stage::industry_complexity).values;
  in.f_job_based = read_fitness_map(ws, artifacts::f_job_based, Stage::county_fitness).values;
  in.f_endogenous = read_fitness_map(ws, artifacts::f_endogenous, Stage::county_fitness).values;
  in.divers = to_values(read_divers(ws, artifacts::diversification, Stage::county_fitness));
  const bool revealed = cfg.has_exports();
  if (revealed) {
    in.q_revealed = read_complexity(ws, artifacts::q_revealed, Stage::revealed).values;
    in.f_exogenous = read_fitness_map(ws, artifacts::f_exogenous, Stage::revealed).values;
    in.divers_res =
        to_values(read_divers(ws, artifacts::diversification_restricted, Stage::revealed));
  }
  ws.write(artifacts::exclusions, [&](std::ostream& out) {
    csv::write_row(out, {"id", "reason"});
    for (const auto& e : in.macro.exclusions) csv::write_row(out, {e.id, e.reason});
  });

  std::vector<ModelRun> runs;
  for (const auto& id : cfg.models) {
    BuiltModel model;
    try {
      model = build_model(id, in);
    } catch (const ComputeError& e) {
      if (revealed) throw;
      notes.push_back(id + " skipped: " + e.what());
      spdlog::info("{} skipped (no export data)", id);
      continue;
    }
    ModelRun run;
    run.result = ols_fit(model.design, model.covariance);
    if (std::any_of(model.design.columns.begin(), model.design.columns.end(),
                    [](const std::string& c) { return c == "serv"; })) {
      run.chow = {chow_test(run.result, ChowVariant::all_deltas),
                  chow_test(run.result, ChowVariant::deltas_excluding_intercept)};
    }
    run.model = std::move(model);
    spdlog::info("{}: n = {}, R2 = {:.4f}", id, run.result.n, run.result.r2);
    runs.push_back(std::move(run));
  }

  ws.write(artifacts::coefficients, [&](std::ostream& out) { write_coefficients_csv(out, runs); });
  ws.write(artifacts::summary, [&](std::ostream& out) { write_summary_csv(out, runs); });
  ws.write(artifacts::chow, [&](std::ostream& out) { write_chow_csv(out, runs); });
  ws.write(artifacts::samples, [&](std::ostream& out) {
    csv::write_row(out, {"model_id", "n", "dropped_missing", "covariance", "clusters"});
    for (const auto& r : runs) {
      csv::write_row(out, {r.model.id, std::to_string(r.result.n),
                           std::to_string(r.model.dropped_missing),
                           std::string(to_string(r.result.covariance_type)),
                           std::to_string(r.result.clusters)});
    }
  });
  ws.write(
      artifacts::tables,
      [&](std::ostream& out) {
        const std::pair<const char*, const char*> tables[] = {
            {"T1", "T1: log wage per worker"},
            {"T2", "T2: labor productivity growth"},
            {"T4", "T4: GDP per capita growth"},
        };
        bool first = true;
        for (const auto& [prefix, title] : tables) {
          std::vector<ModelRun> group;
          for (const auto& r : runs) {
            if (r.model.id.rfind(std::string(prefix) + ".", 0) == 0) group.push_back(r);
          }
          if (group.empty()) continue;
          if (!first) out << "\n";
          first = false;
          render_table(out, title, group);
        }
      },
      false);
}

void write_rankings(std::ostream& out, const std::vector<std::pair<std::string, ValueMap>>& measures) {
  csv::write_row(out, {"measure", "rank", "id", "value"});
  for (const auto& [name, values] : measures) {
    std::vector<std::pair<std::string, double>> sorted(values.begin(), values.end());
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      csv::write_row(out, {name, std::to_string(i + 1), sorted[i].first,
                           csv::format_double(sorted[i].second)});
    }
  }
}

void stage_reports(Workspace& ws) {
  const auto& cfg = ws.cfg();
  const bool revealed = cfg.has_exports();
  const auto q_hidden = read_complexity(ws, artifacts::q_hidden, Stage::industry_complexity);
  const auto q_endo = read_complexity(ws, artifacts::q_endogenous, Stage::county_fitness);
  std::vector<CountyFitness> fitness = {
      read_fitness_map(ws, artifacts::f_job_based, Stage::county_fitness),
      read_fitness_map(ws, artifacts::f_endogenous, Stage::county_fitness),
  };
  std::optional<IndustryComplexity> q_rev;
  if (revealed) {
    q_rev = read_complexity(ws, artifacts::q_revealed, Stage::revealed);
    fitness.push_back(read_fitness_map(ws, artifacts::f_exogenous, Stage::revealed));
  }

  std::vector<std::pair<std::string, ValueMap>> measures = {
      {"industry_complexity_hidden", q_hidden.values},
      {"industry_complexity_endogenous", q_endo.values},
  };
  if (q_rev) measures.emplace_back("industry_complexity_revealed", q_rev->values);
  for (const auto& f : fitness) {
    measures.emplace_back("county_fitness_" + std::string(to_string(f.provenance)), f.values);
  }
  ws.write(artifacts::rankings, [&](std::ostream& out) { write_rankings(out, measures); });

  if (q_rev) {
    const auto scatter = report_scatter(q_hidden, *q_rev, cfg.outliers);
    ws.write(artifacts::scatter, [&](std::ostream& out) { write_scatter_csv(out, scatter); });
    ws.write(artifacts::scatter_outliers, [&](std::ostream& out) { write_outlier_csv(out, scatter); });
    ws.write(artifacts::scatter_svg, [&](std::ostream& out) { write_scatter_svg(out, scatter); },
             false);
  }

  std::vector<DistributionReport> reports;
  for (const auto& f : fitness) {
    const auto name = std::string(to_string(f.provenance));
    auto r = report_distribution(f, cfg.distribution);
    ws.write("histogram_" + name + ".csv", [&](std::ostream& out) { write_histogram_csv(out, r); });
    ws.write("choropleth_" + name + ".csv", [&](std::ostream& out) { report_choropleth(out, f); });
    spdlog::info("{} fitness: {} covered of {}, {} mode(s), {:.3f} below floor", name,
                 f.values.size(), f.universe.size(), r.modes, r.below_floor_fraction);
    reports.push_back(std::move(r));
  }
  ws.write(artifacts::distribution_summary,
           [&](std::ostream& out) { write_distribution_summary_csv(out, reports); });
}

void write_manifest(const fs::path& dir, const RunManifest& m,
                    const std::vector<std::pair<std::string, std::string>>& inputs) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  csv::write_row(s, {"kind", "name", "value"});
  csv::write_row(s, {"config", "hash", m.config_hash});
  for (const auto& [name, hash] : inputs) csv::write_row(s, {"input", name, hash});
  for (const auto& st : m.stages) {
    csv::write_row(s, {"stage", to_string(st.stage), st.status});
    if (!st.note.empty()) csv::write_row(s, {"note", to_string(st.stage), st.note});
  }
  for (const auto& [file, rows] : m.artifacts) {
    csv::write_row(s, {"artifact", file, std::to_string(rows)});
  }
  for (std::size_t i = 0; i < m.warnings.size(); ++i) {
    csv::write_row(s, {"warning", std::to_string(i + 1), m.warnings[i]});
  }
  csv::write_row(s, {"status", "run", m.failed ? "failed" : "ok"});
  std::ofstream out(dir / artifacts::manifest, std::ios::binary | std::ios::trunc);
  out << s.str();
}

}  // namespace

RunManifest run_stages(const PipelineConfig& cfg, const std::vector<Stage>& stages) {
  cfg.validate();
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec || !fs::is_directory(cfg.output_dir)) {
    throw ConfigError("cannot create output directory '" + cfg.output_dir.string() + "'");
  }
  fs::remove(cfg.output_dir / artifacts::failed, ec);

  RunManifest manifest;
  const auto rendered = render_config(cfg, cfg.output_dir);
  manifest.config_hash = hex64(fnv1a(rendered));
  std::vector<std::pair<std::string, std::string>> input_hashes;
  const std::pair<const char*, const fs::path*> inputs[] = {
      {"skills", &cfg.inputs.skills},
      {"job_wages", &cfg.inputs.job_wages},
      {"employment", &cfg.inputs.employment},
      {"county_wages", &cfg.inputs.county_wages},
      {"industry_panel", &cfg.inputs.industry_panel},
      {"county_panel", &cfg.inputs.county_panel},
      {"exports", &cfg.inputs.exports},
      {"concordance", &cfg.inputs.concordance},
  };
  for (const auto& [name, path] : inputs) {
    if (!path->empty()) input_hashes.emplace_back(name, hex64(fnv1a(read_file(*path))));
  }

  Workspace ws(cfg, manifest);
  ws.write(artifacts::config, [&](std::ostream& out) { out << rendered; }, false);

  for (Stage stage : stages) {
    StageOutcome outcome{stage, "produced", {}};
    spdlog::info("stage {}", to_string(stage));
    try {
      std::vector<std::string> notes;
      switch (stage) {
        case Stage::ingest: stage_ingest(ws); break;
        case Stage::binarize: stage_binarize(ws); break;
        case Stage::job_fitness: stage_job_fitness(ws); break;
        case Stage::industry_complexity: stage_industry_complexity(ws); break;
        case Stage::county_fitness: stage_county_fitness(ws); break;
        case Stage::revealed:
          if (!cfg.has_exports()) {
            // Stale outputs of an earlier run must not leak into later stages.
            for (const char* name : kRevealedArtifacts) ws.remove(name);
            outcome.status = "skipped";
            outcome.note = "no export data configured";
          } else {
            stage_revealed(ws);
          }
          break;
        case Stage::regressions: stage_regressions(ws, notes); break;
        case Stage::reports: stage_reports(ws); break;
      }
      for (const auto& n : notes) outcome.note += (outcome.note.empty() ? "" : "; ") + n;
      if (stage == Stage::reports && !cfg.has_exports()) {
        outcome.note = "hidden-vs-revealed scatter skipped: no export data configured";
      }
      manifest.stages.push_back(outcome);
    } catch (const std::exception& e) {
      outcome.status = "failed";
      outcome.note = e.what();
      manifest.stages.push_back(outcome);
      manifest.failed = true;
      spdlog::error("stage {} failed: {}", to_string(stage), e.what());
      write_manifest(cfg.output_dir, manifest, input_hashes);
      std::ofstream marker(cfg.output_dir / artifacts::failed, std::ios::binary | std::ios::trunc);
      marker << "stage " << to_string(stage) << " failed: " << e.what() << "\n";
      throw;
    }
  }
  write_manifest(cfg.output_dir, manifest, input_hashes);
  return manifest;
}

}  // namespace ecomplex
