#pragma once

// Loaders and writers for the input table families. Every loader validates
// its schema, rejects malformed rows with line-numbered DataErrors and keeps
// entity codes as opaque strings.
//
// Schemas (header row mandatory):
//   skills                 skill_id,soc_code,importance
//   wages (job-industry)   soc_code,naics4,year,wage_bill_usd
//   wages (county-industry) fips,naics4,year,wage_bill_usd
//   employment             soc_code,naics4,year,employees
//   exports                country_iso3,hs_code,year,export_usd
//   industry panel         naics4,year,revenues_usd,employees,compensation_usd,cr4_pct,ppi_index,is_service
//   county panel           fips,year,gdp_per_capita,population
//   concordance            hs_code,naics4,weight
//
// Missing values are empty fields, never sentinel numbers.

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ecomplex/matrix.hpp"

namespace ecomplex {

// Skills x jobs, weights are importance scores in [1, 5].
struct SkillImportanceTable {
  WeightedBipartite importance;
};

struct IndustryYear {
  std::optional<double> revenues_usd;
  std::optional<double> employees;
  std::optional<double> compensation_usd;
  std::optional<double> cr4_pct;
  std::optional<double> ppi_index;
};

struct IndustryRecord {
  bool is_service = true;
  std::map<int, IndustryYear> years;
};

struct IndustryPanel {
  std::map<std::string, IndustryRecord, std::less<>> industries;
  // Industries of the network universe without a panel row.
  std::vector<std::string> unmatched;

  const IndustryYear* find(std::string_view naics4, int year) const;
};

struct CountyYear {
  std::optional<double> gdp_per_capita;
  std::optional<double> population;
};

struct CountyRecord {
  std::string state;  // two-digit FIPS prefix
  std::map<int, CountyYear> years;
};

struct CountyPanel {
  std::map<std::string, CountyRecord, std::less<>> counties;

  const CountyYear* find(std::string_view fips, int year) const;
};

struct ConcordanceEntry {
  std::string hs_code;
  std::string naics4;
  double weight = 1.0;
};

struct ConcordanceMap {
  // Sorted by (hs_code, naics4); pairs are unique.
  std::vector<ConcordanceEntry> entries;

  // Weights rescaled to sum to one over the industries of each HS code.
  ConcordanceMap normalized() const;
};

struct PanelPaths {
  std::filesystem::path industry_panel;
  std::filesystem::path county_panel;
  std::filesystem::path concordance;  // optional: empty path skips it
};

struct Panels {
  IndustryPanel industries;
  CountyPanel counties;
  ConcordanceMap concordance;
};

// Sector rule: NAICS prefixes 21 and 31-33 are goods, everything else service.
bool naics_is_service(std::string_view naics4);

SkillImportanceTable read_skill_job(std::istream& in, const std::string& source);
SkillImportanceTable load_skill_job(const std::filesystem::path& path);

// Generic `<row>,<col>,year,<value>` reader; returns the slice for `year`.
// Duplicate (row, col, year) rows are summed. Throws DataError when no row
// carries the requested year.
WeightedBipartite read_yearly_bipartite(std::istream& in, const std::string& source,
                                        AxisKind row_kind, AxisKind col_kind,
                                        std::string_view value_column, int year);
// All years at once.
std::map<int, WeightedBipartite> read_yearly_bipartites(std::istream& in,
                                                        const std::string& source,
                                                        AxisKind row_kind, AxisKind col_kind,
                                                        std::string_view value_column);

// Row kind job -> soc_code, county -> fips; column kind industry -> naics4.
WeightedBipartite load_wage_bipartite(const std::filesystem::path& path, AxisKind row_kind,
                                      AxisKind col_kind, int year);
WeightedBipartite load_employment(const std::filesystem::path& path, int year);

// Cell-wise sum over all years; axes are the union of the yearly axes.
WeightedBipartite sum_over_years(const std::map<int, WeightedBipartite>& by_year);

std::map<int, WeightedBipartite> read_exports(std::istream& in, const std::string& source);
std::map<int, WeightedBipartite> load_exports(const std::filesystem::path& path);

IndustryPanel read_industry_panel(std::istream& in, const std::string& source);
CountyPanel read_county_panel(std::istream& in, const std::string& source);
ConcordanceMap read_concordance(std::istream& in, const std::string& source);

// `industry_universe` (when non-empty) flags network industries that have no
// panel row; they are listed in IndustryPanel::unmatched.
Panels load_panels(const PanelPaths& paths,
                   std::span<const std::string> industry_universe = {});

// Column header name used for an axis kind in the input files.
std::string_view id_column(AxisKind kind);

// Writers produce exactly the schemas above (12 significant digits).
void write_skill_job(std::ostream& out, const SkillImportanceTable& table);
void write_yearly_bipartites(std::ostream& out, const std::map<int, WeightedBipartite>& by_year,
                             std::string_view value_column);
void write_industry_panel(std::ostream& out, const IndustryPanel& panel);
void write_county_panel(std::ostream& out, const CountyPanel& panel);
void write_concordance(std::ostream& out, const ConcordanceMap& concordance);

}  // namespace ecomplex
