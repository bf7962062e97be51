#include "ecomplex/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <tuple>

#include "ecomplex/csv.hpp"
#include "ecomplex/errors.hpp"

namespace ecomplex {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return in;
}

int read_year(const csv::Reader& reader, std::size_t column) {
  const long long y = reader.integer(column);
  if (y < 1000 || y > 9999) reader.fail("implausible year " + std::to_string(y));
  return static_cast<int>(y);
}

void require_positive(const csv::Reader& reader, const std::optional<double>& v,
                      const char* what) {
  if (v && !(*v > 0.0)) reader.fail(std::string(what) + " must be positive");
}

void require_nonnegative(const csv::Reader& reader, const std::optional<double>& v,
                         const char* what) {
  if (v && *v < 0.0) reader.fail(std::string(what) + " must be nonnegative");
}

std::string opt_number(const std::optional<double>& v) {
  return v ? csv::format_double(*v) : std::string();
}

}  // namespace

bool naics_is_service(std::string_view naics4) {
  const auto sector = naics4.substr(0, 2);
  return !(sector == "21" || sector == "31" || sector == "32" || sector == "33");
}

std::string_view id_column(AxisKind kind) {
  switch (kind) {
    case AxisKind::skill: return "skill_id";
    case AxisKind::job: return "soc_code";
    case AxisKind::industry: return "naics4";
    case AxisKind::county: return "fips";
    case AxisKind::country: return "country_iso3";
    case AxisKind::product: return "hs_code";
  }
  return "id";
}

const IndustryYear* IndustryPanel::find(std::string_view naics4, int year) const {
  auto it = industries.find(naics4);
  if (it == industries.end()) return nullptr;
  auto y = it->second.years.find(year);
  return y == it->second.years.end() ? nullptr : &y->second;
}

const CountyYear* CountyPanel::find(std::string_view fips, int year) const {
  auto it = counties.find(fips);
  if (it == counties.end()) return nullptr;
  auto y = it->second.years.find(year);
  return y == it->second.years.end() ? nullptr : &y->second;
}

ConcordanceMap ConcordanceMap::normalized() const {
  std::map<std::string, double, std::less<>> per_hs;
  for (const auto& e : entries) per_hs[e.hs_code] += e.weight;
  ConcordanceMap out = *this;
  for (auto& e : out.entries) e.weight /= per_hs[e.hs_code];
  return out;
}

SkillImportanceTable read_skill_job(std::istream& in, const std::string& source) {
  csv::Reader reader(in, source);
  reader.expect_header({"skill_id", "soc_code", "importance"});
  std::set<std::pair<std::string, std::string>> seen;
  WeightedBuilder builder(AxisKind::skill, AxisKind::job);
  std::size_t rows = 0;
  while (reader.next()) {
    auto skill = reader.text(0);
    auto job = reader.text(1);
    const double importance = reader.number(2);
    if (importance < 1.0 || importance > 5.0) {
      reader.fail("importance " + csv::format_double(importance) + " outside [1, 5]");
    }
    if (!seen.emplace(skill, job).second) {
      reader.fail("duplicate key (" + skill + ", " + job + ")");
    }
    builder.add(skill, job, importance);
    ++rows;
  }
  if (rows == 0) throw DataError(source + ": no data rows");
  return {builder.build()};
}

SkillImportanceTable load_skill_job(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_skill_job(in, path.string());
}

std::map<int, WeightedBipartite> read_yearly_bipartites(std::istream& in,
                                                        const std::string& source,
                                                        AxisKind row_kind, AxisKind col_kind,
                                                        std::string_view value_column) {
  csv::Reader reader(in, source);
  reader.expect_header({id_column(row_kind), id_column(col_kind), "year", value_column});
  std::map<int, WeightedBuilder> builders;
  while (reader.next()) {
    auto row = reader.text(0);
    auto col = reader.text(1);
    const int year = read_year(reader, 2);
    const auto value = reader.optional_number(3);
    if (!value) continue;  // suppressed cell
    if (*value < 0.0) reader.fail(std::string(value_column) + " must be nonnegative");
    auto it = builders.try_emplace(year, row_kind, col_kind).first;
    it->second.add(row, col, *value);
  }
  if (builders.empty()) throw DataError(source + ": no data rows");
  std::map<int, WeightedBipartite> out;
  for (const auto& [year, b] : builders) out.emplace(year, b.build());
  return out;
}

WeightedBipartite read_yearly_bipartite(std::istream& in, const std::string& source,
                                        AxisKind row_kind, AxisKind col_kind,
                                        std::string_view value_column, int year) {
  auto all = read_yearly_bipartites(in, source, row_kind, col_kind, value_column);
  auto it = all.find(year);
  if (it == all.end()) {
    throw DataError(source + ": no rows for year " + std::to_string(year));
  }
  return std::move(it->second);
}

WeightedBipartite load_wage_bipartite(const std::filesystem::path& path, AxisKind row_kind,
                                      AxisKind col_kind, int year) {
  auto in = open_input(path);
  return read_yearly_bipartite(in, path.string(), row_kind, col_kind, "wage_bill_usd", year);
}

WeightedBipartite load_employment(const std::filesystem::path& path, int year) {
  auto in = open_input(path);
  return read_yearly_bipartite(in, path.string(), AxisKind::job, AxisKind::industry,
                               "employees", year);
}

WeightedBipartite sum_over_years(const std::map<int, WeightedBipartite>& by_year) {
  if (by_year.empty()) return {};
  const auto& first = by_year.begin()->second;
  WeightedBuilder builder(first.rows().kind(), first.cols().kind());
  for (const auto& [year, m] : by_year) {
    for (const auto& id : m.rows().ids()) builder.add_row_id(id);
    for (const auto& id : m.cols().ids()) builder.add_col_id(id);
    for (const auto& c : m.cells()) builder.add(m.rows()[c.row], m.cols()[c.col], c.value);
  }
  return builder.build();
}

std::map<int, WeightedBipartite> read_exports(std::istream& in, const std::string& source) {
  return read_yearly_bipartites(in, source, AxisKind::country, AxisKind::product, "export_usd");
}

std::map<int, WeightedBipartite> load_exports(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_exports(in, path.string());
}

IndustryPanel read_industry_panel(std::istream& in, const std::string& source) {
  csv::Reader reader(in, source);
  reader.expect_header({"naics4", "year", "revenues_usd", "employees", "compensation_usd",
                        "cr4_pct", "ppi_index", "is_service"});
  IndustryPanel panel;
  std::map<std::string, std::optional<bool>> explicit_flag;
  while (reader.next()) {
    auto naics = reader.text(0);
    const int year = read_year(reader, 1);
    IndustryYear row;
    row.revenues_usd = reader.optional_number(2);
    row.employees = reader.optional_number(3);
    row.compensation_usd = reader.optional_number(4);
    row.cr4_pct = reader.optional_number(5);
    row.ppi_index = reader.optional_number(6);
    require_positive(reader, row.revenues_usd, "revenues_usd");
    require_positive(reader, row.employees, "employees");
    require_nonnegative(reader, row.compensation_usd, "compensation_usd");
    require_positive(reader, row.ppi_index, "ppi_index");
    if (row.cr4_pct && (*row.cr4_pct < 0.0 || *row.cr4_pct > 100.0)) {
      reader.fail("cr4_pct " + csv::format_double(*row.cr4_pct) + " outside [0, 100]");
    }
    const auto flag = reader.optional_boolean(7);
    auto& rec = panel.industries[naics];
    if (!rec.years.emplace(year, row).second) {
      reader.fail("duplicate key (" + naics + ", " + std::to_string(year) + ")");
    }
    auto& known = explicit_flag[naics];
    if (flag) {
      if (known && *known != *flag) reader.fail("conflicting is_service for " + naics);
      known = flag;
    }
  }
  if (panel.industries.empty()) throw DataError(source + ": no data rows");
  for (auto& [naics, rec] : panel.industries) {
    const auto& flag = explicit_flag[naics];
    rec.is_service = flag ? *flag : naics_is_service(naics);
  }
  return panel;
}

CountyPanel read_county_panel(std::istream& in, const std::string& source) {
  csv::Reader reader(in, source);
  reader.expect_header({"fips", "year", "gdp_per_capita", "population"});
  CountyPanel panel;
  while (reader.next()) {
    auto fips = reader.text(0);
    const int year = read_year(reader, 1);
    CountyYear row;
    row.gdp_per_capita = reader.optional_number(2);
    row.population = reader.optional_number(3);
    require_positive(reader, row.gdp_per_capita, "gdp_per_capita");
    require_nonnegative(reader, row.population, "population");
    auto& rec = panel.counties[fips];
    rec.state = fips.substr(0, 2);
    if (!rec.years.emplace(year, row).second) {
      reader.fail("duplicate key (" + fips + ", " + std::to_string(year) + ")");
    }
  }
  if (panel.counties.empty()) throw DataError(source + ": no data rows");
  return panel;
}

ConcordanceMap read_concordance(std::istream& in, const std::string& source) {
  csv::Reader reader(in, source);
  reader.expect_header({"hs_code", "naics4", "weight"});
  ConcordanceMap map;
  std::set<std::pair<std::string, std::string>> seen;
  while (reader.next()) {
    ConcordanceEntry e{reader.text(0), reader.text(1), reader.optional_number(2).value_or(1.0)};
    if (!(e.weight > 0.0)) reader.fail("concordance weight must be positive");
    if (!seen.emplace(e.hs_code, e.naics4).second) {
      reader.fail("duplicate key (" + e.hs_code + ", " + e.naics4 + ")");
    }
    map.entries.push_back(std::move(e));
  }
  if (map.entries.empty()) throw DataError(source + ": no data rows");
  std::sort(map.entries.begin(), map.entries.end(), [](const auto& a, const auto& b) {
    return std::tie(a.hs_code, a.naics4) < std::tie(b.hs_code, b.naics4);
  });
  return map;
}

Panels load_panels(const PanelPaths& paths, std::span<const std::string> industry_universe) {
  Panels out;
  {
    auto in = open_input(paths.industry_panel);
    out.industries = read_industry_panel(in, paths.industry_panel.string());
  }
  {
    auto in = open_input(paths.county_panel);
    out.counties = read_county_panel(in, paths.county_panel.string());
  }
  if (!paths.concordance.empty()) {
    auto in = open_input(paths.concordance);
    out.concordance = read_concordance(in, paths.concordance.string());
  }
  for (const auto& id : industry_universe) {
    if (!out.industries.industries.contains(id)) out.industries.unmatched.push_back(id);
  }
  std::sort(out.industries.unmatched.begin(), out.industries.unmatched.end());
  return out;
}

void write_skill_job(std::ostream& out, const SkillImportanceTable& table) {
  const auto& m = table.importance;
  csv::write_row(out, {"skill_id", "soc_code", "importance"});
  for (const auto& c : m.cells()) {
    csv::write_row(out, {m.rows()[c.row], m.cols()[c.col], csv::format_double(c.value)});
  }
}

void write_yearly_bipartites(std::ostream& out, const std::map<int, WeightedBipartite>& by_year,
                             std::string_view value_column) {
  if (by_year.empty()) return;
  const auto& first = by_year.begin()->second;
  csv::write_row(out, {id_column(first.rows().kind()), id_column(first.cols().kind()), "year",
                       value_column});
  for (const auto& [year, m] : by_year) {
    const auto y = std::to_string(year);
    for (const auto& c : m.cells()) {
      csv::write_row(out, {m.rows()[c.row], m.cols()[c.col], y, csv::format_double(c.value)});
    }
  }
}

void write_industry_panel(std::ostream& out, const IndustryPanel& panel) {
  csv::write_row(out, {"naics4", "year", "revenues_usd", "employees", "compensation_usd",
                       "cr4_pct", "ppi_index", "is_service"});
  for (const auto& [naics, rec] : panel.industries) {
    for (const auto& [year, y] : rec.years) {
      csv::write_row(out, {naics, std::to_string(year), opt_number(y.revenues_usd),
                           opt_number(y.employees), opt_number(y.compensation_usd),
                           opt_number(y.cr4_pct), opt_number(y.ppi_index),
                           rec.is_service ? "1" : "0"});
    }
  }
}

void write_county_panel(std::ostream& out, const CountyPanel& panel) {
  csv::write_row(out, {"fips", "year", "gdp_per_capita", "population"});
  for (const auto& [fips, rec] : panel.counties) {
    for (const auto& [year, y] : rec.years) {
      csv::write_row(out, {fips, std::to_string(year), opt_number(y.gdp_per_capita),
                           opt_number(y.population)});
    }
  }
}

void write_concordance(std::ostream& out, const ConcordanceMap& concordance) {
  csv::write_row(out, {"hs_code", "naics4", "weight"});
  for (const auto& e : concordance.entries) {
    csv::write_row(out, {e.hs_code, e.naics4, csv::format_double(e.weight)});
  }
}

}  // namespace ecomplex
