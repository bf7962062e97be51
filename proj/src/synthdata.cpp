#include "ecomplex/synthdata.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "ecomplex/csv.hpp"
#include "ecomplex/errors.hpp"
#include "ecomplex/quotient.hpp"
#include "ecomplex/rng.hpp"

namespace ecomplex {

namespace {

// One RNG stream per generation step, so that changing one table's recipe
// leaves the draws of the others untouched.
enum Stream : std::uint64_t {
  kSkillStream = 1,
  kJobStream,
  kImportanceStream,
  kIndustryStream,
  kEmploymentStream,
  kJobWageStream,
  kCountryStream,
  kProductStream,
  kExportStream,
  kConcordanceStream,
  kCountyStream,
  kCountyWageStream,
  kIndustryPanelStream,
  kCountyPanelStream,
};

// Values pass through the 12-digit CSV format unchanged.
double round12(double v) {
  const auto s = csv::format_double(v);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

double round_to(double v, double step) { return std::round(v / step) * step; }

std::string fmt(const char* pattern, int a, int b = 0) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), pattern, a, b);
  return buf.data();
}

constexpr std::array kGoodsPrefixes = {"31", "32", "33", "21"};
constexpr std::array kServicePrefixes = {"42", "44", "48", "51", "52", "53", "54",
                                         "56", "61", "62", "71", "72", "81", "22"};
constexpr std::array kSocMajors = {11, 13, 15, 17, 19, 21, 23, 25, 27, 29, 31,
                                   33, 35, 37, 39, 41, 43, 45, 47, 49, 51, 53};
constexpr std::array kStates = {"01", "02", "04", "05", "06", "08", "09", "10", "11", "12",
                                "13", "15", "16", "17", "18", "19", "20", "21", "22", "23",
                                "24", "25", "26", "27", "28", "29", "30", "31", "32", "33",
                                "34", "35", "36", "37", "38", "39", "40", "41", "42", "44",
                                "45", "46", "47", "48", "49", "50", "51", "53", "54", "55"};
constexpr std::array kCountries = {
    "USA", "DEU", "CHN", "JPN", "KOR", "FRA", "ITA", "GBR", "CAN", "MEX", "BRA", "IND",
    "ESP", "NLD", "CHE", "SWE", "BEL", "AUT", "POL", "CZE", "HUN", "TUR", "RUS", "AUS",
    "IDN", "THA", "MYS", "SGP", "VNM", "PHL", "ZAF", "EGY", "NGA", "KEN", "MAR", "ARG",
    "CHL", "COL", "PER", "ECU", "SAU", "ARE", "ISR", "IRN", "PAK", "BGD", "LKA", "NZL",
    "NOR", "DNK", "FIN", "IRL", "PRT", "GRC", "ROU", "BGR", "UKR", "KAZ", "URY", "BOL"};

std::vector<std::string> naics_codes(int n_goods, int n_services) {
  std::vector<std::string> out;
  auto emit = [&](const auto& prefixes, int count) {
    std::vector<int> next(prefixes.size(), 11);
    for (int i = 0; i < count; ++i) {
      const auto p = static_cast<std::size_t>(i) % prefixes.size();
      out.push_back(std::string(prefixes[p]) + fmt("%02d", next[p]++));
    }
  };
  emit(kGoodsPrefixes, n_goods);
  emit(kServicePrefixes, n_services);
  return out;
}

std::string country_code(int i) {
  if (static_cast<std::size_t>(i) < kCountries.size()) return kCountries[static_cast<std::size_t>(i)];
  const int k = i - static_cast<int>(kCountries.size());
  return std::string("X") + static_cast<char>('A' + (k / 26) % 26) + static_cast<char>('A' + k % 26);
}

std::string hs_code(int p) { return fmt("%02d%04d", 1 + p % 96, 10 + 10 * (p / 96)); }

// Indices 0..n-1 in a seed-determined order.
std::vector<std::size_t> shuffled_indices(std::size_t n, CounterRng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  shuffle(idx, rng);
  return idx;
}

}  // namespace

// ---------------------------------------------------------------------------

void CapabilityWorld::validate() const {
  if (endowments.size() != actors.size() || requirements.size() != activities.size()) {
    throw ComputeError("capability world: one capability set per actor and activity required");
  }
  auto check = [&](const std::vector<std::set<std::size_t>>& sets, const AxisLabels& axis) {
    for (std::size_t i = 0; i < sets.size(); ++i) {
      if (sets[i].empty()) throw ComputeError("capability world: empty set for '" + axis[i] + "'");
      if (*sets[i].rbegin() >= capabilities.size()) {
        throw ComputeError("capability world: unknown capability for '" + axis[i] + "'");
      }
    }
  };
  check(endowments, actors);
  check(requirements, activities);
}

BinaryBipartite realize_bipartite(const CapabilityWorld& world) {
  world.validate();
  std::vector<CellKey> links;
  for (std::size_t a = 0; a < world.actors.size(); ++a) {
    const auto& have = world.endowments[a];
    for (std::size_t p = 0; p < world.activities.size(); ++p) {
      const auto& need = world.requirements[p];
      if (std::includes(have.begin(), have.end(), need.begin(), need.end())) links.emplace_back(a, p);
    }
  }
  return BinaryBipartite(world.actors, world.activities, std::move(links));
}

void SynthSizes::validate() const {
  if (n_skills < 2 || n_jobs < 2 || n_industries < 2 || n_counties < 2) {
    throw ConfigError("synthetic sizes must all be >= 2");
  }
  if (n_jobs > 22 * 900) throw ConfigError("n_jobs too large");
  if (n_industries > 1000) throw ConfigError("n_industries too large");
  if (n_counties > 50 * 499) throw ConfigError("n_counties too large");
}

void SynthOptions::validate() const {
  if (n_countries < 2 || n_products < 2) throw ConfigError("need >= 2 countries and products");
  if (n_export_years < 1) throw ConfigError("n_export_years must be >= 1");
  if (base_year >= horizon_year) throw ConfigError("base_year must precede horizon_year");
  auto fraction = [](double f, const char* name) {
    if (!(f >= 0.0 && f <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0, 1]");
  };
  fraction(goods_fraction, "goods_fraction");
  fraction(service_only_fraction, "service_only_fraction");
  fraction(unmapped_goods_fraction, "unmapped_goods_fraction");
  fraction(missing_gdp_fraction, "missing_gdp_fraction");
  if (unmatched_industries < 0 || rare_industries < 0 || rare_holders < 1) {
    throw ConfigError("unmatched_industries and rare_industries must be >= 0, rare_holders >= 1");
  }
  if (!(planted.wage_noise >= 0.0 && planted.lp_noise >= 0.0 && planted.growth_noise >= 0.0)) {
    throw ConfigError("noise scales must be >= 0");
  }
}

SyntheticWorld generate_quadripartite(std::uint64_t seed, const SynthSizes& sizes,
                                      const SynthOptions& opt) {
  sizes.validate();
  opt.validate();
  SyntheticWorld w;
  w.seed = seed;
  w.sizes = sizes;
  w.options = opt;
  const auto& pe = opt.planted;

  // --- skills x jobs --------------------------------------------------------
  const auto n_skills = static_cast<std::size_t>(sizes.n_skills);
  const auto n_jobs = static_cast<std::size_t>(sizes.n_jobs);
  std::vector<std::string> skill_ids, job_ids;
  for (std::size_t s = 0; s < n_skills; ++s) skill_ids.push_back(fmt("S%03d", static_cast<int>(s + 1)));
  for (std::size_t j = 0; j < n_jobs; ++j) {
    const int major = kSocMajors[j % kSocMajors.size()];
    job_ids.push_back(fmt("%02d-%04d", major, 1000 + 10 * static_cast<int>(j / kSocMajors.size())));
  }

  // Skills lean towards high- or low-level jobs; job level drives which
  // skills matter. This keeps the skill network far from nested.
  CounterRng skill_rng(seed, kSkillStream), job_rng(seed, kJobStream);
  std::vector<double> lean(n_skills), level(n_jobs);
  for (auto& a : lean) a = skill_rng.uniform(-1.0, 1.0);
  for (auto& u : level) u = job_rng.uniform();

  CounterRng imp_rng(seed, kImportanceStream);
  std::vector<std::vector<double>> importance(n_skills, std::vector<double>(n_jobs));
  for (std::size_t s = 0; s < n_skills; ++s) {
    for (std::size_t j = 0; j < n_jobs; ++j) {
      const double x = 0.5 + 0.4 * lean[s] * (level[j] - 0.5) + 0.12 * imp_rng.normal();
      importance[s][j] = round_to(std::clamp(1.0 + 4.0 * x, 1.0, 5.0), 0.01);
    }
  }
  auto skill_table = [&] {
    WeightedBuilder b(AxisKind::skill, AxisKind::job);
    for (std::size_t s = 0; s < n_skills; ++s) {
      for (std::size_t j = 0; j < n_jobs; ++j) b.add(skill_ids[s], job_ids[j], importance[s][j]);
    }
    return SkillImportanceTable{b.build()};
  };
  // Every job needs at least one skill above the skill mean.
  for (int attempt = 0;; ++attempt) {
    w.skills = skill_table();
    const auto m1 = binarize_skills(w.skills);
    const auto degrees = m1.col_degrees();
    bool ok = true;
    for (std::size_t c = 0; c < degrees.size(); ++c) {
      if (degrees[c] != 0) continue;
      ok = false;
      const auto j = static_cast<std::size_t>(
          std::find(job_ids.begin(), job_ids.end(), m1.cols()[c]) - job_ids.begin());
      importance[imp_rng.below(n_skills)][j] = 5.0;
    }
    if (ok) break;
    if (attempt > 100) throw ComputeError("generator: cannot give every job a skill link");
  }

  // --- industries and employment -------------------------------------------
  const auto n_ind = static_cast<std::size_t>(sizes.n_industries);
  const auto n_goods = static_cast<std::size_t>(
      std::clamp<long>(std::lround(opt.goods_fraction * static_cast<double>(n_ind)), 1,
                       static_cast<long>(n_ind) - 1));
  const auto industry_codes = naics_codes(static_cast<int>(n_goods), static_cast<int>(n_ind - n_goods));
  CounterRng ind_rng(seed, kIndustryStream);
  std::vector<double> ind_level(n_ind), ind_weight(n_ind);
  for (std::size_t i = 0; i < n_ind; ++i) {
    ind_level[i] = ind_rng.uniform();
    ind_weight[i] = std::exp(ind_rng.normal(0.0, 1.0));
  }

  CounterRng emp_rng(seed, kEmploymentStream), jw_rng(seed, kJobWageStream);
  WeightedBuilder emp(AxisKind::job, AxisKind::industry);
  WeightedBuilder job_wage(AxisKind::job, AxisKind::industry);
  std::vector<double> wage(n_jobs);
  for (std::size_t j = 0; j < n_jobs; ++j) wage[j] = std::exp(10.3 + 0.8 * level[j]);
  for (std::size_t i = 0; i < n_ind; ++i) {
    std::vector<std::size_t> employed;
    for (std::size_t j = 0; j < n_jobs; ++j) {
      const double d = (level[j] - ind_level[i]) / 0.2;
      if (emp_rng.bernoulli(0.6 * std::exp(-d * d))) employed.push_back(j);
    }
    if (employed.empty()) {
      std::size_t best = 0;
      for (std::size_t j = 1; j < n_jobs; ++j) {
        if (std::abs(level[j] - ind_level[i]) < std::abs(level[best] - ind_level[i])) best = j;
      }
      employed.push_back(best);
    }
    for (auto j : employed) {
      const double n = std::max(1.0, std::round(std::exp(emp_rng.normal(3.5, 1.2))));
      emp.add(job_ids[j], industry_codes[i], n);
      job_wage.add(job_ids[j], industry_codes[i], round12(n * wage[j] * std::exp(jw_rng.normal(0.0, 0.1))));
    }
  }
  for (const auto& j : job_ids) emp.add_row_id(j), job_wage.add_row_id(j);
  w.employment = emp.build();
  w.job_wages.emplace(opt.base_year, job_wage.build());

  const auto job_fitness = solve_job_fitness(w.skills, SkillMeanRule::rated_only, SolverConfig{});
  const auto q_hidden = hidden_industry_complexity(w.employment, job_fitness);
  w.q_hidden = q_hidden.values;

  // --- exports ---------------------------------------------------------------
  // Capability 0 is held by every country and required by every product;
  // capability 1 is missing from the reference country, so products needing
  // it carry no reference exports.
  const auto n_countries = static_cast<std::size_t>(opt.n_countries);
  const auto n_products = static_cast<std::size_t>(opt.n_products);
  constexpr std::size_t kExportCaps = 10;
  std::vector<std::string> country_ids, product_ids;
  for (std::size_t c = 0; c < n_countries; ++c) country_ids.push_back(country_code(static_cast<int>(c)));
  if (std::find(country_ids.begin(), country_ids.end(), opt.reference_country) == country_ids.end()) {
    country_ids.back() = opt.reference_country;
  }
  for (std::size_t p = 0; p < n_products; ++p) product_ids.push_back(hs_code(static_cast<int>(p)));
  const std::size_t n_anchor_products = std::max<std::size_t>(2, n_products / 20);

  auto& ew = w.export_world;
  ew.seed = seed;
  for (std::size_t k = 0; k < kExportCaps; ++k) ew.capabilities.push_back(fmt("x%d", static_cast<int>(k)));
  ew.actors = AxisLabels(AxisKind::country, country_ids);
  ew.activities = AxisLabels(AxisKind::product, product_ids);
  CounterRng country_rng(seed, kCountryStream), product_rng(seed, kProductStream);
  std::vector<double> country_size(n_countries), product_size(n_products);
  for (std::size_t c = 0; c < n_countries; ++c) {
    std::set<std::size_t> caps = {0};
    const double p = country_rng.uniform(0.3, 1.0);
    for (std::size_t k = 2; k < kExportCaps; ++k) {
      if (country_rng.bernoulli(p)) caps.insert(k);
    }
    if (country_rng.bernoulli(0.6)) caps.insert(1);
    if (country_ids[c] == opt.reference_country) {
      caps.clear();
      for (std::size_t k = 0; k < kExportCaps; ++k) caps.insert(k);
      caps.erase(1);
    } else if (c == 1 || (c == 0 && country_ids[0] != opt.reference_country)) {
      for (std::size_t k = 0; k < kExportCaps; ++k) caps.insert(k);  // one complete exporter
    }
    ew.endowments.push_back(std::move(caps));
    country_size[c] = std::exp(country_rng.normal(20.0, 1.0));
  }
  for (std::size_t p = 0; p < n_products; ++p) {
    std::set<std::size_t> caps = {0};
    const double s = product_rng.uniform(0.0, 0.35);
    for (std::size_t k = 2; k < kExportCaps; ++k) {
      if (product_rng.bernoulli(s)) caps.insert(k);
    }
    if (product_rng.bernoulli(0.2)) caps.insert(1);
    if (p < n_anchor_products) caps = {0};
    ew.requirements.push_back(std::move(caps));
    product_size[p] = std::exp(product_rng.normal(0.0, 1.0));
  }
  const auto export_links = realize_bipartite(ew);
  CounterRng x_rng(seed, kExportStream);
  std::vector<double> base_value(export_links.nnz());
  for (std::size_t l = 0; l < export_links.nnz(); ++l) {
    const auto [c, p] = export_links.links()[l];
    base_value[l] = country_size[c] * product_size[p] * std::exp(x_rng.normal(0.0, 0.5));
  }
  for (int y = 0; y < opt.n_export_years; ++y) {
    std::vector<RealCell> cells;
    for (std::size_t l = 0; l < export_links.nnz(); ++l) {
      const auto [c, p] = export_links.links()[l];
      cells.push_back({c, p, round12(base_value[l] * std::exp(x_rng.normal(0.0, 0.1)))});
    }
    w.exports.emplace(opt.first_export_year + y,
                      WeightedBipartite(ew.actors, ew.activities, std::move(cells)));
  }

  // --- concordance -------------------------------------------------------------
  CounterRng conc_rng(seed, kConcordanceStream);
  const std::size_t n_anchor_industries = std::min<std::size_t>(n_goods, 2);
  std::vector<std::size_t> goods_order(n_goods);
  std::iota(goods_order.begin(), goods_order.end(), 0);
  {
    std::vector<std::size_t> rest(goods_order.begin() + static_cast<long>(n_anchor_industries),
                                  goods_order.end());
    shuffle(rest, conc_rng);
    std::copy(rest.begin(), rest.end(), goods_order.begin() + static_cast<long>(n_anchor_industries));
  }
  const auto n_unmapped = std::min(
      n_goods - n_anchor_industries,
      static_cast<std::size_t>(std::lround(opt.unmapped_goods_fraction * static_cast<double>(n_goods))));
  const std::vector<std::size_t> mapped(goods_order.begin(),
                                        goods_order.end() - static_cast<long>(n_unmapped));
  for (std::size_t p = 0; p < n_products; ++p) {
    const auto primary = p < n_anchor_products ? p % n_anchor_industries : p % mapped.size();
    const auto first = mapped[primary];
    if (mapped.size() > 1 && p >= n_anchor_products && conc_rng.bernoulli(0.2)) {
      auto second = mapped[conc_rng.below(mapped.size())];
      if (second != first) {
        w.concordance.entries.push_back({product_ids[p], industry_codes[first], 0.6});
        w.concordance.entries.push_back({product_ids[p], industry_codes[second], 0.4});
        continue;
      }
    }
    w.concordance.entries.push_back({product_ids[p], industry_codes[first], 1.0});
  }
  std::sort(w.concordance.entries.begin(), w.concordance.entries.end(),
            [](const ConcordanceEntry& a, const ConcordanceEntry& b) {
              return std::tie(a.hs_code, a.naics4) < std::tie(b.hs_code, b.naics4);
            });

  const auto product_q = export_product_complexity(w.exports, QuotientSpec{}, SolverConfig{});
  const auto q_exp = exogenous_industry_complexity(product_q, w.concordance,
                                                   sum_over_years(w.exports), opt.reference_country);

  // --- counties x industries -------------------------------------------------
  // Capability 0 marks goods production, 1 is universal, 2 is the rare
  // capability, the rest are general.
  const auto n_cty = static_cast<std::size_t>(sizes.n_counties);
  constexpr std::size_t kCountyCaps = 11;
  auto& cw = w.county_world;
  cw.seed = seed;
  for (std::size_t k = 0; k < kCountyCaps; ++k) cw.capabilities.push_back(fmt("k%d", static_cast<int>(k)));

  const std::size_t n_states = std::clamp<std::size_t>(n_cty / 10, 2, kStates.size());
  std::vector<std::string> county_ids(n_cty);
  std::vector<int> per_state(n_states, 0);
  for (std::size_t c = 0; c < n_cty; ++c) {
    const auto s = c % n_states;
    county_ids[c] = std::string(kStates[s]) + fmt("%03d", 1 + 2 * per_state[s]++);
  }
  cw.actors = AxisLabels(AxisKind::county, county_ids);
  cw.activities = AxisLabels(AxisKind::industry, industry_codes);

  CounterRng county_rng(seed, kCountyStream);
  std::vector<char> is_rare(n_ind, 0);
  {
    // Rare industries: not anchors, drawn across sectors.
    std::vector<std::size_t> candidates;
    for (std::size_t i = n_anchor_industries; i < n_ind; ++i) {
      if (i != n_goods) candidates.push_back(i);  // n_goods is the basic service industry
    }
    shuffle(candidates, county_rng);
    const auto n_rare = std::min(candidates.size(), static_cast<std::size_t>(opt.rare_industries));
    for (std::size_t r = 0; r < n_rare; ++r) is_rare[candidates[r]] = 1;
  }
  for (std::size_t i = 0; i < n_ind; ++i) {
    const bool goods = i < n_goods;
    std::set<std::size_t> caps = {1};
    if (goods) caps.insert(0);
    const double s = county_rng.uniform(0.0, 0.4);
    for (std::size_t k = 3; k < kCountyCaps; ++k) {
      if (county_rng.bernoulli(s)) caps.insert(k);
    }
    if (i < n_anchor_industries || i == n_goods) caps = goods ? std::set<std::size_t>{0, 1} : std::set<std::size_t>{1};
    if (is_rare[i]) {
      caps.insert(2);
      w.rare_industries.push_back(industry_codes[i]);
    }
    cw.requirements.push_back(std::move(caps));
  }

  const auto order = shuffled_indices(n_cty, county_rng);
  const auto n_service_only = static_cast<std::size_t>(
      std::lround(opt.service_only_fraction * static_cast<double>(n_cty)));
  std::vector<char> service_only(n_cty, 0);
  for (std::size_t k = 0; k < n_service_only; ++k) service_only[order[k]] = 1;
  std::vector<double> development(n_cty), county_size(n_cty);
  for (std::size_t c = 0; c < n_cty; ++c) {
    development[c] = county_rng.uniform(0.35, 1.0);
    county_size[c] = std::exp(county_rng.normal(17.5, 1.0));
  }
  std::vector<std::size_t> holders;
  if (!w.rare_industries.empty()) {
    std::vector<std::size_t> eligible;
    for (std::size_t c = 0; c < n_cty; ++c) {
      if (!service_only[c]) eligible.push_back(c);
    }
    std::stable_sort(eligible.begin(), eligible.end(),
                     [&](std::size_t a, std::size_t b) { return development[a] > development[b]; });
    eligible.resize(std::min(eligible.size(), static_cast<std::size_t>(opt.rare_holders)));
    holders = eligible;
  }
  for (std::size_t c = 0; c < n_cty; ++c) {
    std::set<std::size_t> caps = {1};
    if (!service_only[c]) caps.insert(0);
    for (std::size_t k = 3; k < kCountyCaps; ++k) {
      if (county_rng.bernoulli(development[c])) caps.insert(k);
    }
    cw.endowments.push_back(std::move(caps));
  }
  for (auto c : holders) {
    for (std::size_t k = 0; k < kCountyCaps; ++k) cw.endowments[c].insert(k);
  }
  for (std::size_t c = 0; c < n_cty; ++c) {
    if (service_only[c]) w.service_only_counties.push_back(county_ids[c]);
  }
  for (auto c : holders) w.rare_holders.push_back(county_ids[c]);
  std::sort(w.service_only_counties.begin(), w.service_only_counties.end());
  std::sort(w.rare_holders.begin(), w.rare_holders.end());
  std::sort(w.rare_industries.begin(), w.rare_industries.end());

  const auto presence = realize_bipartite(cw);
  const auto present = presence.row_adjacency();

  // Wage bills: 70% spread over present industries, 30% on one specialty
  // industry. Diversified counties specialize in an export-covered goods
  // industry, service-only counties in a service industry, so every county
  // has a location quotient above one and coverage follows construction.
  CounterRng cwage_rng(seed, kCountyWageStream);
  WeightedBuilder cwages(AxisKind::county, AxisKind::industry);
  for (std::size_t c = 0; c < n_cty; ++c) {
    std::vector<std::size_t> pool;
    for (auto i : present[c]) {
      const bool goods = i < n_goods;
      if (service_only[c] ? !goods : (goods && q_exp.find(industry_codes[i]).has_value())) {
        pool.push_back(i);
      }
    }
    if (pool.empty()) throw ComputeError("generator: county without a specialty candidate");
    const auto specialty = pool[cwage_rng.below(pool.size())];
    std::vector<double> raw;
    double raw_sum = 0.0;
    for (auto i : present[c]) {
      raw.push_back(ind_weight[i] * std::exp(cwage_rng.normal(0.0, 0.5)));
      raw_sum += raw.back();
    }
    for (std::size_t k = 0; k < present[c].size(); ++k) {
      const auto i = present[c][k];
      double v = 0.7 * county_size[c] * raw[k] / raw_sum;
      if (i == specialty) v += 0.3 * county_size[c];
      cwages.add(county_ids[c], industry_codes[i], round12(v));
    }
  }
  w.county_wages.emplace(opt.base_year, cwages.build());
  w.expected_exogenous_covered = n_cty - n_service_only;

  const auto m3 = drop_empty(binarize(balassa_quotient(w.county_wages.at(opt.base_year)))).matrix;
  const auto f_jb = hidden_county_fitness(m3, q_hidden);

  // --- industry panel --------------------------------------------------------
  CounterRng ip_rng(seed, kIndustryPanelStream);
  std::vector<std::size_t> unmatched_order = shuffled_indices(n_ind, ip_rng);
  std::vector<char> unmatched(n_ind, 0);
  for (std::size_t k = 0; k < std::min<std::size_t>(n_ind, static_cast<std::size_t>(opt.unmatched_industries)); ++k) {
    unmatched[unmatched_order[k]] = 1;
  }
  for (std::size_t i = 0; i < n_ind; ++i) {
    const auto& id = industry_codes[i];
    // Draws happen for every industry so the panel of matched industries does
    // not depend on how many are unmatched.
    const double log_emp = ip_rng.normal(9.0, 1.0);
    const double log_rev_per_worker = ip_rng.normal(12.3, 0.5);
    const double cr4 = round_to(ip_rng.uniform(5.0, 85.0), 0.1);
    const double wage_noise = ip_rng.normal(0.0, pe.wage_noise);
    const double lp_noise = ip_rng.normal(0.0, pe.lp_noise);
    const double emp_change = ip_rng.normal(0.02, 0.05);
    const double wage_change = ip_rng.normal(0.08, 0.02);
    const double cr4_change = ip_rng.normal(0.0, 2.0);
    const double ppi = round_to(std::exp(ip_rng.normal(0.15, 0.05)), 0.0001);
    if (unmatched[i]) {
      w.industry_panel.unmatched.push_back(id);
      continue;
    }
    const bool service = naics_is_service(id);
    const double q = q_hidden.values.at(id);

    const double emp17 = std::max(1.0, std::round(std::exp(log_emp)));
    const double rev17 = round12(emp17 * std::exp(log_rev_per_worker));
    const double log_wl = 7.8 + pe.wage_beta * q + 0.18 * std::log(rev17) - 0.15 * std::log(emp17) +
                          0.002 * cr4 + (service ? pe.service_shift : 0.0) + wage_noise;
    const double comp17 = round12(emp17 * std::exp(log_wl));

    const double emp22 = std::max(1.0, std::round(emp17 * std::exp(emp_change)));
    const double lp = 0.01 + pe.lp_beta * q + lp_noise;
    const double rev22 = round12(std::exp(lp + std::log(rev17 / emp17)) * ppi * emp22);
    const double comp22 = round12(emp22 * std::exp(log_wl + wage_change));

    IndustryRecord rec;
    rec.is_service = service;
    rec.years[opt.base_year] = {rev17, emp17, comp17, cr4, 1.0};
    rec.years[opt.horizon_year] = {rev22, emp22, comp22,
                                   round_to(std::clamp(cr4 + cr4_change, 0.0, 100.0), 0.1), ppi};
    w.industry_panel.industries.emplace(id, std::move(rec));
  }
  std::sort(w.industry_panel.unmatched.begin(), w.industry_panel.unmatched.end());

  // --- county panel ----------------------------------------------------------
  CounterRng cp_rng(seed, kCountyPanelStream);
  std::vector<double> state_effect(n_states);
  for (auto& e : state_effect) e = cp_rng.normal(0.0, 0.01);
  const auto missing_order = shuffled_indices(n_cty, cp_rng);
  std::vector<char> missing(n_cty, 0);
  const auto n_missing = static_cast<std::size_t>(
      std::lround(opt.missing_gdp_fraction * static_cast<double>(n_cty)));
  for (std::size_t k = 0; k < n_missing; ++k) missing[missing_order[k]] = 1;
  for (std::size_t c = 0; c < n_cty; ++c) {
    const auto& id = county_ids[c];
    const double gdppc17 = round_to(std::exp(cp_rng.normal(10.8, 0.25)), 0.01);
    const double pop17 = std::max(100.0, std::round(std::exp(cp_rng.normal(10.0, 1.2))));
    const double pop22 = std::max(100.0, std::round(pop17 * std::exp(cp_rng.normal(0.02, 0.02))));
    const double noise = cp_rng.normal(0.0, pe.growth_noise);
    const double fitness = f_jb.find(id).value_or(1.0);
    const double growth = state_effect[c % n_states] + pe.fitness_beta * fitness +
                          pe.convergence * (std::log(gdppc17) - 10.8) + noise;
    CountyRecord rec;
    rec.state = id.substr(0, 2);
    rec.years[opt.base_year] = {gdppc17, pop17};
    rec.years[opt.horizon_year] = {missing[c] ? std::nullopt
                                              : std::optional<double>(round12(gdppc17 * std::exp(growth))),
                                   pop22};
    w.county_panel.counties.emplace(id, std::move(rec));
  }

  const std::map<std::string, double> planted = {
      {"wage_beta", pe.wage_beta},       {"wage_noise", pe.wage_noise},
      {"service_shift", pe.service_shift}, {"lp_beta", pe.lp_beta},
      {"lp_noise", pe.lp_noise},         {"fitness_beta", pe.fitness_beta},
      {"convergence", pe.convergence},   {"growth_noise", pe.growth_noise}};
  cw.planted_effects = planted;
  ew.planted_effects = planted;
  return w;
}

void write_fixture(const SyntheticWorld& w, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create '" + dir.string() + "': " + ec.message());
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + (dir / name).string() + "'");
    return out;
  };
  {
    auto out = open(fixture_files::skills);
    write_skill_job(out, w.skills);
  }
  {
    auto out = open(fixture_files::job_wages);
    write_yearly_bipartites(out, w.job_wages, "wage_bill_usd");
  }
  {
    auto out = open(fixture_files::employment);
    write_yearly_bipartites(out, {{w.options.base_year, w.employment}}, "employees");
  }
  {
    auto out = open(fixture_files::county_wages);
    write_yearly_bipartites(out, w.county_wages, "wage_bill_usd");
  }
  {
    auto out = open(fixture_files::exports);
    write_yearly_bipartites(out, w.exports, "export_usd");
  }
  {
    auto out = open(fixture_files::industry_panel);
    write_industry_panel(out, w.industry_panel);
  }
  {
    auto out = open(fixture_files::county_panel);
    write_county_panel(out, w.county_panel);
  }
  {
    auto out = open(fixture_files::concordance);
    write_concordance(out, w.concordance);
  }
  {
    auto out = open(fixture_files::manifest);
    const auto& o = w.options;
    csv::write_row(out, {"key", "value"});
    auto row = [&](std::string_view key, const std::string& value) { csv::write_row(out, {key, value}); };
    auto num = [&](std::string_view key, double v) { row(key, csv::format_double(v)); };
    row("seed", std::to_string(w.seed));
    row("rng", "splitmix64-counter");
    num("n_skills", w.sizes.n_skills);
    num("n_jobs", w.sizes.n_jobs);
    num("n_industries", w.sizes.n_industries);
    num("n_counties", w.sizes.n_counties);
    num("n_countries", o.n_countries);
    num("n_products", o.n_products);
    num("first_export_year", o.first_export_year);
    num("n_export_years", o.n_export_years);
    num("base_year", o.base_year);
    num("horizon_year", o.horizon_year);
    num("goods_fraction", o.goods_fraction);
    num("service_only_fraction", o.service_only_fraction);
    num("unmapped_goods_fraction", o.unmapped_goods_fraction);
    num("missing_gdp_fraction", o.missing_gdp_fraction);
    num("unmatched_industries", o.unmatched_industries);
    num("rare_industries", o.rare_industries);
    num("rare_holders", o.rare_holders);
    row("reference_country", o.reference_country);
    for (const auto& [k, v] : w.county_world.planted_effects) num("planted." + k, v);
    num("service_only_counties", static_cast<double>(w.service_only_counties.size()));
    num("expected_exogenous_covered", static_cast<double>(w.expected_exogenous_covered));
  }
  {
    auto out = open(fixture_files::config);
    const auto& o = w.options;
    out << "# Synthetic fixture, seed " << w.seed << "\n\n"
        << "[inputs]\n"
        << "skills = \"" << fixture_files::skills << "\"\n"
        << "job_wages = \"" << fixture_files::job_wages << "\"\n"
        << "employment = \"" << fixture_files::employment << "\"\n"
        << "county_wages = \"" << fixture_files::county_wages << "\"\n"
        << "exports = \"" << fixture_files::exports << "\"\n"
        << "industry_panel = \"" << fixture_files::industry_panel << "\"\n"
        << "county_panel = \"" << fixture_files::county_panel << "\"\n"
        << "concordance = \"" << fixture_files::concordance << "\"\n\n"
        << "[years]\n"
        << "base = " << o.base_year << "\n"
        << "horizon = " << o.horizon_year << "\n"
        << "export_first = " << o.first_export_year << "\n"
        << "export_last = " << (o.first_export_year + o.n_export_years - 1) << "\n\n"
        << "[exports]\n"
        << "reference_country = \"" << o.reference_country << "\"\n\n"
        << "[output]\n"
        << "dir = \"out\"\n";
  }
}

}  // namespace ecomplex
