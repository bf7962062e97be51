#include "ecomplex/aggregate.hpp"

#include <algorithm>

#include "ecomplex/csv.hpp"
#include "ecomplex/errors.hpp"

namespace ecomplex {

namespace {

std::string join_ids(const std::vector<std::string>& ids, std::size_t limit = 10) {
  std::string out;
  for (std::size_t i = 0; i < ids.size() && i < limit; ++i) out += (i ? ", " : "") + ids[i];
  if (ids.size() > limit) out += ", ... (" + std::to_string(ids.size()) + " total)";
  return out;
}

// Divides by the mean over the map's entries.
void mean_normalize(ValueMap& values) {
  if (values.empty()) return;
  double sum = 0.0;
  for (const auto& [id, v] : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  for (auto& [id, v] : values) v /= mean;
}

template <class Map>
std::set<std::string, std::less<>> keys_of(const Map& m) {
  std::set<std::string, std::less<>> out;
  for (const auto& [k, v] : m) out.insert(k);
  return out;
}

}  // namespace

std::string_view to_string(ComplexityProvenance p) {
  switch (p) {
    case ComplexityProvenance::hidden: return "hidden";
    case ComplexityProvenance::revealed_export: return "revealed_export";
    case ComplexityProvenance::endogenous: return "endogenous";
  }
  return "unknown";
}

std::string_view to_string(FitnessProvenance p) {
  switch (p) {
    case FitnessProvenance::job_based: return "job_based";
    case FitnessProvenance::endogenous: return "endogenous";
    case FitnessProvenance::exogenous_export: return "exogenous_export";
  }
  return "unknown";
}

ComplexityProvenance parse_complexity_provenance(std::string_view name) {
  for (auto p : {ComplexityProvenance::hidden, ComplexityProvenance::revealed_export,
                 ComplexityProvenance::endogenous}) {
    if (to_string(p) == name) return p;
  }
  throw DataError("unknown complexity provenance '" + std::string(name) + "'");
}

FitnessProvenance parse_fitness_provenance(std::string_view name) {
  for (auto p : {FitnessProvenance::job_based, FitnessProvenance::endogenous,
                 FitnessProvenance::exogenous_export}) {
    if (to_string(p) == name) return p;
  }
  throw DataError("unknown fitness provenance '" + std::string(name) + "'");
}

std::set<std::string, std::less<>> IndustryComplexity::coverage() const { return keys_of(values); }

std::optional<double> IndustryComplexity::find(std::string_view naics4) const {
  auto it = values.find(naics4);
  if (it == values.end()) return std::nullopt;
  return it->second;
}

std::set<std::string, std::less<>> CountyFitness::coverage() const { return keys_of(values); }

std::optional<double> CountyFitness::find(std::string_view fips) const {
  auto it = values.find(fips);
  if (it == values.end()) return std::nullopt;
  return it->second;
}

IndustryComplexity hidden_industry_complexity(const WeightedBipartite& employment,
                                              const FitnessResult& job_fitness) {
  const auto& jobs = employment.rows();
  const auto& industries = employment.cols();
  std::vector<double> weighted(industries.size(), 0.0);
  std::vector<double> total(industries.size(), 0.0);
  std::vector<std::string> missing_jobs;
  std::vector<std::optional<double>> fitness_of(jobs.size());
  for (std::size_t j = 0; j < jobs.size(); ++j) fitness_of[j] = job_fitness.fitness.find(jobs[j]);

  for (const auto& c : employment.cells()) {
    const auto& f = fitness_of[c.row];
    if (!f) {
      if (missing_jobs.empty() || missing_jobs.back() != jobs[c.row]) {
        missing_jobs.push_back(jobs[c.row]);
      }
      continue;
    }
    weighted[c.col] += c.value * *f;
    total[c.col] += c.value;
  }
  if (!missing_jobs.empty()) {
    std::sort(missing_jobs.begin(), missing_jobs.end());
    missing_jobs.erase(std::unique(missing_jobs.begin(), missing_jobs.end()), missing_jobs.end());
    throw ComputeError("employed jobs without fitness: " + join_ids(missing_jobs));
  }
  std::vector<std::string> empty_industries;
  IndustryComplexity out;
  out.provenance = ComplexityProvenance::hidden;
  for (std::size_t i = 0; i < industries.size(); ++i) {
    if (!(total[i] > 0.0)) {
      empty_industries.push_back(industries[i]);
      continue;
    }
    out.values.emplace(industries[i], weighted[i] / total[i]);
  }
  if (!empty_industries.empty()) {
    throw ComputeError("industries with zero total employment: " + join_ids(empty_industries));
  }
  return out;
}

CountyFitness hidden_county_fitness(const BinaryBipartite& m3, const IndustryComplexity& q) {
  std::vector<std::optional<double>> q_of(m3.cols().size());
  for (std::size_t i = 0; i < q_of.size(); ++i) q_of[i] = q.find(m3.cols()[i]);
  std::set<std::string> uncovered;
  std::vector<double> sums(m3.rows().size(), 0.0);
  std::vector<char> has_link(m3.rows().size(), 0);
  for (const auto& [c, i] : m3.links()) {
    if (!q_of[i]) {
      uncovered.insert(m3.cols()[i]);
      continue;
    }
    sums[c] += *q_of[i];
    has_link[c] = 1;
  }
  if (!uncovered.empty()) {
    throw ComputeError("industries without complexity: " +
                       join_ids({uncovered.begin(), uncovered.end()}));
  }
  CountyFitness out;
  out.provenance = FitnessProvenance::job_based;
  out.universe = m3.rows().ids();
  std::sort(out.universe.begin(), out.universe.end());
  for (std::size_t c = 0; c < sums.size(); ++c) {
    if (has_link[c]) out.values.emplace(m3.rows()[c], sums[c]);
  }
  mean_normalize(out.values);
  return out;
}

FitnessResult solve_job_fitness(const SkillImportanceTable& skills, SkillMeanRule rule,
                                const SolverConfig& cfg) {
  const auto m1 = binarize_skills(skills, rule);
  return solve_fitness(drop_empty(transpose(m1)).matrix, cfg);
}

ValueMap export_product_complexity(const std::map<int, WeightedBipartite>& exports,
                                   const QuotientSpec& spec, const SolverConfig& cfg,
                                   std::map<int, FitnessResult>* per_year) {
  if (exports.empty()) throw ComputeError("no export years");
  std::map<int, FitnessResult> solved;
  for (const auto& [year, w] : exports) {
    const auto mexp = binarize(balassa_quotient(w), spec);
    solved.emplace(year, solve_fitness(drop_empty(mexp).matrix, cfg));
  }
  auto avg = average_yearly_complexity(solved);
  if (per_year) *per_year = std::move(solved);
  return avg;
}

ValueMap average_yearly_complexity(const std::map<int, FitnessResult>& per_year) {
  std::map<std::string, std::pair<double, int>, std::less<>> acc;
  for (const auto& [year, result] : per_year) {
    const auto& s = result.complexity;
    for (std::size_t p = 0; p < s.size(); ++p) {
      auto& [sum, n] = acc[s.ids[p]];
      sum += s.values[p];
      ++n;
    }
  }
  ValueMap out;
  for (const auto& [id, sn] : acc) out.emplace(id, sn.first / sn.second);
  return out;
}

IndustryComplexity exogenous_industry_complexity(const ValueMap& product_complexity,
                                                 const ConcordanceMap& concordance,
                                                 const WeightedBipartite& exports,
                                                 std::string_view reference_country) {
  if (concordance.entries.empty()) throw ComputeError("concordance is empty");
  ValueMap ref_exports;
  if (auto row = exports.rows().find(reference_country)) {
    for (const auto& c : exports.cells()) {
      if (c.row == *row) ref_exports[exports.cols()[c.col]] += c.value;
    }
  }
  std::map<std::string, std::pair<double, double>, std::less<>> acc;
  for (const auto& e : concordance.normalized().entries) {
    auto q = product_complexity.find(e.hs_code);
    auto x = ref_exports.find(e.hs_code);
    if (q == product_complexity.end() || x == ref_exports.end()) continue;
    const double w = e.weight * x->second;
    if (!(w > 0.0)) continue;
    auto& [num, den] = acc[e.naics4];
    num += w * q->second;
    den += w;
  }
  IndustryComplexity out;
  out.provenance = ComplexityProvenance::revealed_export;
  for (const auto& [naics, nd] : acc) out.values.emplace(naics, nd.first / nd.second);
  return out;
}

CountyFitness exogenous_county_fitness(const BinaryBipartite& m3,
                                       const IndustryComplexity& q_exp) {
  std::vector<std::optional<double>> q_of(m3.cols().size());
  for (std::size_t i = 0; i < q_of.size(); ++i) q_of[i] = q_exp.find(m3.cols()[i]);
  std::vector<double> sums(m3.rows().size(), 0.0);
  std::vector<char> covered(m3.rows().size(), 0);
  for (const auto& [c, i] : m3.links()) {
    if (!q_of[i]) continue;
    sums[c] += *q_of[i];
    covered[c] = 1;
  }
  CountyFitness out;
  out.provenance = FitnessProvenance::exogenous_export;
  out.universe = m3.rows().ids();
  std::sort(out.universe.begin(), out.universe.end());
  for (std::size_t c = 0; c < sums.size(); ++c) {
    if (covered[c]) out.values.emplace(m3.rows()[c], sums[c]);
  }
  mean_normalize(out.values);
  return out;
}

CountyFitness endogenous_county_fitness(const BinaryBipartite& m3, const FitnessResult& result) {
  CountyFitness out;
  out.provenance = FitnessProvenance::endogenous;
  out.universe = m3.rows().ids();
  std::sort(out.universe.begin(), out.universe.end());
  const auto& s = result.fitness;
  for (std::size_t c = 0; c < s.size(); ++c) out.values.emplace(s.ids[c], s.values[c]);
  return out;
}

IndustryComplexity endogenous_industry_complexity(const FitnessResult& result) {
  IndustryComplexity out;
  out.provenance = ComplexityProvenance::endogenous;
  const auto& s = result.complexity;
  for (std::size_t i = 0; i < s.size(); ++i) out.values.emplace(s.ids[i], s.values[i]);
  return out;
}

DiversificationIndex diversification(const BinaryBipartite& m3,
                                     const std::set<std::string, std::less<>>* restrict_to) {
  DiversificationIndex out;
  out.restricted = restrict_to != nullptr;
  std::vector<char> counted(m3.cols().size(), 1);
  if (restrict_to) {
    for (std::size_t i = 0; i < counted.size(); ++i) {
      counted[i] = restrict_to->contains(m3.cols()[i]) ? 1 : 0;
    }
  }
  std::vector<int> degree(m3.rows().size(), 0);
  for (const auto& [c, i] : m3.links()) degree[c] += counted[i];
  for (std::size_t c = 0; c < degree.size(); ++c) out.values.emplace(m3.rows()[c], degree[c]);
  return out;
}

void write_industry_complexity(std::ostream& out, const IndustryComplexity& q) {
  csv::write_row(out, {"naics4", "complexity", "provenance"});
  for (const auto& [id, v] : q.values) {
    csv::write_row(out, {id, csv::format_double(v), to_string(q.provenance)});
  }
}

IndustryComplexity read_industry_complexity(std::istream& in, const std::string& source) {
  csv::Reader reader(in, source);
  reader.expect_header({"naics4", "complexity", "provenance"});
  IndustryComplexity q;
  bool first = true;
  while (reader.next()) {
    const auto prov = parse_complexity_provenance(reader.text(2));
    if (!first && prov != q.provenance) reader.fail("mixed provenance");
    q.provenance = prov;
    first = false;
    if (!q.values.emplace(reader.text(0), reader.number(1)).second) {
      reader.fail("duplicate industry " + reader.field(0));
    }
  }
  return q;
}

void write_county_fitness(std::ostream& out, const CountyFitness& f) {
  csv::write_row(out, {"fips", "fitness", "provenance", "covered"});
  for (const auto& id : f.universe) {
    auto v = f.find(id);
    csv::write_row(out, {id, v ? csv::format_double(*v) : std::string(), to_string(f.provenance),
                         v ? "true" : "false"});
  }
}

CountyFitness read_county_fitness(std::istream& in, const std::string& source) {
  csv::Reader reader(in, source);
  reader.expect_header({"fips", "fitness", "provenance", "covered"});
  CountyFitness f;
  bool first = true;
  while (reader.next()) {
    const auto prov = parse_fitness_provenance(reader.text(2));
    if (!first && prov != f.provenance) reader.fail("mixed provenance");
    f.provenance = prov;
    first = false;
    auto id = reader.text(0);
    f.universe.push_back(id);
    if (reader.boolean(3)) f.values.emplace(id, reader.number(1));
  }
  std::sort(f.universe.begin(), f.universe.end());
  return f;
}

void write_diversification(std::ostream& out, const std::vector<DiversificationIndex>& d) {
  csv::write_row(out, {"fips", "diversification", "restricted"});
  for (const auto& index : d) {
    for (const auto& [id, v] : index.values) {
      csv::write_row(out, {id, std::to_string(v), index.restricted ? "true" : "false"});
    }
  }
}

std::vector<DiversificationIndex> read_diversification(std::istream& in,
                                                       const std::string& source) {
  csv::Reader reader(in, source);
  reader.expect_header({"fips", "diversification", "restricted"});
  DiversificationIndex full, restricted;
  restricted.restricted = true;
  while (reader.next()) {
    auto& target = reader.boolean(2) ? restricted : full;
    target.values[reader.text(0)] = static_cast<int>(reader.integer(1));
  }
  std::vector<DiversificationIndex> out;
  if (!full.values.empty()) out.push_back(std::move(full));
  if (!restricted.values.empty()) out.push_back(std::move(restricted));
  return out;
}

}  // namespace ecomplex
