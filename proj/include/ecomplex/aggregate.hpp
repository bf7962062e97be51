#pragma once

// Cross-layer aggregations: job-based (hidden) industry complexity and county
// fitness, export-based (exogenous) industry complexity and county fitness,
// cross-year averaging of product complexity, and diversification counts.

#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ecomplex/efc.hpp"
#include "ecomplex/ingest.hpp"
#include "ecomplex/matrix.hpp"
#include "ecomplex/quotient.hpp"

namespace ecomplex {

enum class ComplexityProvenance { hidden, revealed_export, endogenous };
enum class FitnessProvenance { job_based, endogenous, exogenous_export };

std::string_view to_string(ComplexityProvenance p);
std::string_view to_string(FitnessProvenance p);
ComplexityProvenance parse_complexity_provenance(std::string_view name);
FitnessProvenance parse_fitness_provenance(std::string_view name);

using ValueMap = std::map<std::string, double, std::less<>>;

struct IndustryComplexity {
  ValueMap values;  // keys are the covered industries
  ComplexityProvenance provenance = ComplexityProvenance::hidden;

  std::set<std::string, std::less<>> coverage() const;
  std::optional<double> find(std::string_view naics4) const;
};

struct CountyFitness {
  ValueMap values;                  // mean one over covered counties
  std::vector<std::string> universe;  // every county considered, sorted
  FitnessProvenance provenance = FitnessProvenance::job_based;

  std::set<std::string, std::less<>> coverage() const;
  std::optional<double> find(std::string_view fips) const;
};

struct DiversificationIndex {
  std::map<std::string, int, std::less<>> values;
  bool restricted = false;
};

// Employment-weighted mean of job fitness per industry:
//   Q_i = sum_j N_ji F_j / sum_j N_ji
// `employment` is jobs x industries. Throws ComputeError naming industries
// with zero employment or employed jobs missing from `job_fitness`.
IndustryComplexity hidden_industry_complexity(const WeightedBipartite& employment,
                                              const FitnessResult& job_fitness);

// F_c = sum_i M_ci Q_i over counties x industries, mean-normalized over
// counties with at least one industry. Throws ComputeError listing industries
// of the matrix without complexity.
CountyFitness hidden_county_fitness(const BinaryBipartite& m3, const IndustryComplexity& q);

// Jobs x skills fitness: skill links binarized against the per-skill mean,
// transposed, emptied rows/columns dropped, then solved.
FitnessResult solve_job_fitness(const SkillImportanceTable& skills, SkillMeanRule rule,
                                const SolverConfig& cfg);

// Yearly countries x products RCA networks, each solved separately and
// averaged per product. `per_year` receives the yearly solves when given.
ValueMap export_product_complexity(const std::map<int, WeightedBipartite>& exports,
                                   const QuotientSpec& spec, const SolverConfig& cfg,
                                   std::map<int, FitnessResult>* per_year = nullptr);

// Per product, mean over the years in which it appears of that year's
// (mean-normalized) complexity.
ValueMap average_yearly_complexity(const std::map<int, FitnessResult>& per_year);

// Q_i = sum_{hs in i} w_hs Q_hs / sum w_hs with w_hs = normalized concordance
// weight x exports of `reference_country` summed over the columns of
// `exports` (countries x products). Industries without a mapped, exported,
// rated HS code are left uncovered. Throws ComputeError on an empty
// concordance.
IndustryComplexity exogenous_industry_complexity(const ValueMap& product_complexity,
                                                 const ConcordanceMap& concordance,
                                                 const WeightedBipartite& exports,
                                                 std::string_view reference_country);

// Sum over covered industries only; counties with no covered industry are
// left uncovered. Mean-normalized over covered counties.
CountyFitness exogenous_county_fitness(const BinaryBipartite& m3,
                                       const IndustryComplexity& q_exp);

// Fitness side of an iterated counties x industries solve, expressed over the
// county universe of `m3` (counties dropped before solving are uncovered).
CountyFitness endogenous_county_fitness(const BinaryBipartite& m3, const FitnessResult& result);
IndustryComplexity endogenous_industry_complexity(const FitnessResult& result);

// Row degree, optionally counting only industries in `restrict_to`.
DiversificationIndex diversification(const BinaryBipartite& m3,
                                     const std::set<std::string, std::less<>>* restrict_to = nullptr);

// `naics4,complexity,provenance`
void write_industry_complexity(std::ostream& out, const IndustryComplexity& q);
IndustryComplexity read_industry_complexity(std::istream& in, const std::string& source);
// `fips,fitness,provenance,covered` (one row per universe county)
void write_county_fitness(std::ostream& out, const CountyFitness& f);
CountyFitness read_county_fitness(std::istream& in, const std::string& source);
// `fips,diversification,restricted`
void write_diversification(std::ostream& out, const std::vector<DiversificationIndex>& d);
std::vector<DiversificationIndex> read_diversification(std::istream& in,
                                                       const std::string& source);

}  // namespace ecomplex
