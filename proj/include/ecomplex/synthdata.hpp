#pragma once

// Deterministic synthetic worlds built on the capability model: an actor
// performs an activity iff it holds every capability the activity requires.
//
// generate_quadripartite() produces a full input fixture family (skills,
// employment and wage bipartites, county wages, exports, panels,
// concordance) with planted regression effects. Network topology is drawn
// from integer-valued random decisions only; Gaussian noise enters the panel
// variables and the cell weights.

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ecomplex/aggregate.hpp"
#include "ecomplex/ingest.hpp"
#include "ecomplex/matrix.hpp"

namespace ecomplex {

struct CapabilityWorld {
  std::uint64_t seed = 0;
  std::vector<std::string> capabilities;
  AxisLabels actors;
  AxisLabels activities;
  // Capability indices, one set per actor / activity in axis order.
  std::vector<std::set<std::size_t>> endowments;
  std::vector<std::set<std::size_t>> requirements;
  std::map<std::string, double> planted_effects;

  // Throws ComputeError on empty or out-of-range capability sets.
  void validate() const;
};

// Link (actor, activity) iff requirements(activity) is a subset of
// endowments(actor).
BinaryBipartite realize_bipartite(const CapabilityWorld& world);

struct SynthSizes {
  int n_skills = 68;
  int n_jobs = 400;
  int n_industries = 220;
  int n_counties = 500;

  void validate() const;  // ConfigError unless every size >= 2
};

struct PlantedEffects {
  double wage_beta = 0.9;        // log wage per worker on hidden complexity
  double wage_noise = 0.05;
  double service_shift = 0.0;    // intercept shift of services in the wage equation
  double lp_beta = 0.2;          // labor-productivity growth on hidden complexity
  double lp_noise = 0.01;
  double fitness_beta = 0.02;    // GDP per capita growth on job-based fitness
  double convergence = -0.03;    // GDP per capita growth on base-year log GDP per capita
  double growth_noise = 0.02;
};

struct SynthOptions {
  int n_countries = 60;
  int n_products = 300;
  int first_export_year = 2012;
  int n_export_years = 10;
  int base_year = 2017;
  int horizon_year = 2022;
  double goods_fraction = 74.0 / 220.0;
  // Counties lacking the goods capability; they hold service industries only.
  double service_only_fraction = 0.35;
  // Goods industries left out of the concordance.
  double unmapped_goods_fraction = 0.3;
  // Counties whose horizon-year GDP per capita is left empty.
  double missing_gdp_fraction = 0.01;
  // Network industries without an industry-panel row.
  int unmatched_industries = 0;
  // Industries requiring a capability held by `rare_holders` counties only.
  int rare_industries = 0;
  int rare_holders = 1;
  std::string reference_country = "USA";
  PlantedEffects planted;

  void validate() const;
};

struct SyntheticWorld {
  std::uint64_t seed = 0;
  SynthSizes sizes;
  SynthOptions options;

  CapabilityWorld county_world;  // counties x industries
  CapabilityWorld export_world;  // countries x products

  SkillImportanceTable skills;
  WeightedBipartite employment;                        // jobs x industries, base year
  std::map<int, WeightedBipartite> job_wages;          // jobs x industries
  std::map<int, WeightedBipartite> county_wages;       // counties x industries
  std::map<int, WeightedBipartite> exports;            // countries x products
  IndustryPanel industry_panel;
  CountyPanel county_panel;
  ConcordanceMap concordance;

  // Construction facts used as ground truth by tests.
  std::vector<std::string> service_only_counties;
  std::vector<std::string> rare_industries;
  std::vector<std::string> rare_holders;
  std::size_t expected_exogenous_covered = 0;
  ValueMap q_hidden;  // hidden industry complexity the panel was planted on
};

// Throws ConfigError on sizes < 2 or invalid options.
SyntheticWorld generate_quadripartite(std::uint64_t seed, const SynthSizes& sizes,
                                      const SynthOptions& options = {});

// File names inside a fixture directory.
namespace fixture_files {
inline constexpr const char* skills = "skills.csv";
inline constexpr const char* job_wages = "wages_job_industry.csv";
inline constexpr const char* employment = "employment.csv";
inline constexpr const char* county_wages = "wages_county_industry.csv";
inline constexpr const char* exports = "exports.csv";
inline constexpr const char* industry_panel = "industry_panel.csv";
inline constexpr const char* county_panel = "county_panel.csv";
inline constexpr const char* concordance = "concordance.csv";
inline constexpr const char* manifest = "MANIFEST.csv";
inline constexpr const char* config = "pipeline.toml";
}  // namespace fixture_files

// Writes every input table, MANIFEST.csv (`key,value`) and a pipeline.toml
// pointing at them. Creates `dir` when missing.
void write_fixture(const SyntheticWorld& world, const std::filesystem::path& dir);

}  // namespace ecomplex
