#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "ecomplex/econometrics.hpp"
#include "ecomplex/errors.hpp"
#include "ecomplex/pipeline.hpp"

namespace ecomplex {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kSchema = R"(# ecomplex pipeline configuration (TOML)
#
# Relative paths are resolved against the directory of the config file.

[inputs]
skills         = "skills.csv"                 # skill_id,soc_code,importance
job_wages      = "wages_job_industry.csv"     # soc_code,naics4,year,wage_bill_usd
employment     = "employment.csv"             # soc_code,naics4,year,employees
county_wages   = "wages_county_industry.csv"  # fips,naics4,year,wage_bill_usd
industry_panel = "industry_panel.csv"         # naics4,year,revenues_usd,employees,compensation_usd,cr4_pct,ppi_index,is_service
county_panel   = "county_panel.csv"           # fips,year,gdp_per_capita,population
exports        = "exports.csv"                # optional: country_iso3,hs_code,year,export_usd
concordance    = "concordance.csv"            # optional: hs_code,naics4,weight

[years]
base         = 2017   # wage, employment and panel base year
horizon      = 2022   # growth horizon, must exceed base
export_first = 2012   # export years averaged for product complexity
export_last  = 2021
# export_years = [2012, 2013]   # explicit list, overrides export_first/last

[solver]
max_iterations  = 1000
rel_tolerance   = 1e-10
underflow_floor = 1e-14
rank_window     = 50

[quotient]
threshold  = 1.0           # links where quotient > threshold
skill_mean = "rated_only"  # or "all_with_zeros"

[exports]
reference_country = "USA"  # country whose exports weight the concordance

[output]
dir = "out"

[models]
run = ["T1.m1", "T1.m2", "T1.m3", "T1.m4", "T1.m5",
       "T2.m1", "T2.m2", "T2.m3", "T2.m4", "T2.m5",
       "T4.m1", "T4.m2", "T4.m3"]

[report]
bins           = 30    # log10 fitness histogram bins
min_prominence = 0.05  # mode prominence, fraction of counties
outlier_iqr    = 3.0   # revealed < q1 - k * IQR is an outlier; negative disables

[run]
strict = false  # fail on any coverage gap
)";

const std::map<std::string, std::set<std::string>, std::less<>> kKeys = {
    {"inputs",
     {"skills", "job_wages", "employment", "county_wages", "industry_panel", "county_panel",
      "exports", "concordance"}},
    {"years", {"base", "horizon", "export_first", "export_last", "export_years"}},
    {"solver", {"max_iterations", "rel_tolerance", "underflow_floor", "rank_window"}},
    {"quotient", {"threshold", "skill_mean"}},
    {"exports", {"reference_country"}},
    {"output", {"dir"}},
    {"models", {"run"}},
    {"report", {"bins", "min_prominence", "outlier_iqr"}},
    {"run", {"strict"}},
};

class Reader {
 public:
  Reader(const toml::table& root, std::string source) : root_(root), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError(source_ + ": " + key + ": " + what);
  }

  const toml::node* node(std::string_view section, std::string_view key) const {
    const auto* t = root_[section].as_table();
    return t ? t->get(key) : nullptr;
  }

  std::optional<std::string> string(std::string_view section, std::string_view key) const {
    const auto* n = node(section, key);
    if (!n) return std::nullopt;
    if (auto v = n->value<std::string>()) return *v;
    fail(std::string(section) + "." + std::string(key), "expected a string");
  }

  std::optional<long long> integer(std::string_view section, std::string_view key) const {
    const auto* n = node(section, key);
    if (!n) return std::nullopt;
    if (n->is_integer()) return n->value<long long>();
    fail(std::string(section) + "." + std::string(key), "expected an integer");
  }

  std::optional<double> real(std::string_view section, std::string_view key) const {
    const auto* n = node(section, key);
    if (!n) return std::nullopt;
    if (n->is_number()) return n->value<double>();
    fail(std::string(section) + "." + std::string(key), "expected a number");
  }

  std::optional<bool> boolean(std::string_view section, std::string_view key) const {
    const auto* n = node(section, key);
    if (!n) return std::nullopt;
    if (n->is_boolean()) return n->value<bool>();
    fail(std::string(section) + "." + std::string(key), "expected true or false");
  }

  const toml::array* array(std::string_view section, std::string_view key) const {
    const auto* n = node(section, key);
    if (!n) return nullptr;
    if (const auto* a = n->as_array()) return a;
    fail(std::string(section) + "." + std::string(key), "expected an array");
  }

 private:
  const toml::table& root_;
  std::string source_;
};

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string relative_to(const fs::path& p, const fs::path& base) {
  if (p.empty()) return {};
  auto rel = p.lexically_relative(base);
  return (rel.empty() ? p : rel).generic_string();
}

std::string real_text(double v) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s.precision(12);
  s << v;
  auto out = s.str();
  if (out.find_first_of(".en") == std::string::npos) out += ".0";
  return out;
}

}  // namespace

PipelineConfig::PipelineConfig() {
  for (int y = 2012; y <= 2021; ++y) export_years.push_back(y);
  models = known_models();
}

void PipelineConfig::validate() const {
  if (base_year >= horizon_year) throw ConfigError("years.base must be smaller than years.horizon");
  try {
    solver.validate();
    quotient.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (has_exports() && export_years.empty()) throw ConfigError("no export years configured");
  if (distribution.bins < 1) throw ConfigError("report.bins must be >= 1");
  if (!(distribution.min_prominence >= 0.0)) throw ConfigError("report.min_prominence must be >= 0");
  const auto& known = known_models();
  for (const auto& m : models) {
    if (std::find(known.begin(), known.end(), m) == known.end()) {
      throw ConfigError("unknown model '" + m + "'");
    }
  }
  if (output_dir.empty()) throw ConfigError("output.dir is empty");
  const std::pair<const char*, const fs::path*> required[] = {
      {"skills", &inputs.skills},
      {"job_wages", &inputs.job_wages},
      {"employment", &inputs.employment},
      {"county_wages", &inputs.county_wages},
      {"industry_panel", &inputs.industry_panel},
      {"county_panel", &inputs.county_panel},
  };
  for (const auto& [name, path] : required) {
    if (path->empty()) throw ConfigError(std::string("inputs.") + name + " is required");
  }
  const std::pair<const char*, const fs::path*> files[] = {
      {"skills", &inputs.skills},
      {"job_wages", &inputs.job_wages},
      {"employment", &inputs.employment},
      {"county_wages", &inputs.county_wages},
      {"industry_panel", &inputs.industry_panel},
      {"county_panel", &inputs.county_panel},
      {"exports", &inputs.exports},
      {"concordance", &inputs.concordance},
  };
  for (const auto& [name, path] : files) {
    if (!path->empty() && !fs::is_regular_file(*path)) {
      throw ConfigError(std::string("inputs.") + name + ": cannot read '" + path->string() + "'");
    }
  }
}

PipelineConfig parse_config(std::string_view text, const fs::path& base_dir,
                            const std::string& source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << source << ":" << e.source().begin.line << ": " << e.description();
    throw ConfigError(msg.str());
  }
  for (const auto& [section, node] : root) {
    auto known = kKeys.find(section.str());
    if (known == kKeys.end()) throw ConfigError(source + ": unknown section [" + std::string(section.str()) + "]");
    const auto* t = node.as_table();
    if (!t) throw ConfigError(source + ": '" + std::string(section.str()) + "' must be a table");
    for (const auto& [key, value] : *t) {
      if (!known->second.count(std::string(key.str()))) {
        throw ConfigError(source + ": unknown key " + std::string(section.str()) + "." +
                          std::string(key.str()));
      }
    }
  }

  Reader r(root, source);
  PipelineConfig cfg;
  auto path = [&](std::string_view key) -> fs::path {
    auto v = r.string("inputs", key);
    if (!v || v->empty()) return {};
    fs::path p(*v);
    return p.is_absolute() ? p : (base_dir / p).lexically_normal();
  };
  cfg.inputs.skills = path("skills");
  cfg.inputs.job_wages = path("job_wages");
  cfg.inputs.employment = path("employment");
  cfg.inputs.county_wages = path("county_wages");
  cfg.inputs.industry_panel = path("industry_panel");
  cfg.inputs.county_panel = path("county_panel");
  cfg.inputs.exports = path("exports");
  cfg.inputs.concordance = path("concordance");

  cfg.base_year = static_cast<int>(r.integer("years", "base").value_or(cfg.base_year));
  cfg.horizon_year = static_cast<int>(r.integer("years", "horizon").value_or(cfg.horizon_year));
  if (const auto* years = r.array("years", "export_years")) {
    cfg.export_years.clear();
    for (const auto& y : *years) {
      if (!y.is_integer()) r.fail("years.export_years", "expected integers");
      cfg.export_years.push_back(static_cast<int>(*y.value<long long>()));
    }
    std::sort(cfg.export_years.begin(), cfg.export_years.end());
    cfg.export_years.erase(std::unique(cfg.export_years.begin(), cfg.export_years.end()),
                           cfg.export_years.end());
  } else {
    const auto first = r.integer("years", "export_first").value_or(2012);
    const auto last = r.integer("years", "export_last").value_or(2021);
    if (first > last) r.fail("years.export_first", "must not exceed export_last");
    cfg.export_years.clear();
    for (auto y = first; y <= last; ++y) cfg.export_years.push_back(static_cast<int>(y));
  }

  cfg.solver.max_iterations =
      static_cast<int>(r.integer("solver", "max_iterations").value_or(cfg.solver.max_iterations));
  cfg.solver.rel_tolerance = r.real("solver", "rel_tolerance").value_or(cfg.solver.rel_tolerance);
  cfg.solver.underflow_floor =
      r.real("solver", "underflow_floor").value_or(cfg.solver.underflow_floor);
  cfg.solver.rank_window =
      static_cast<int>(r.integer("solver", "rank_window").value_or(cfg.solver.rank_window));

  cfg.quotient.threshold = r.real("quotient", "threshold").value_or(cfg.quotient.threshold);
  if (auto rule = r.string("quotient", "skill_mean")) {
    if (*rule == "rated_only") {
      cfg.skill_mean = SkillMeanRule::rated_only;
    } else if (*rule == "all_with_zeros") {
      cfg.skill_mean = SkillMeanRule::all_with_zeros;
    } else {
      r.fail("quotient.skill_mean", "expected \"rated_only\" or \"all_with_zeros\"");
    }
  }
  cfg.reference_country =
      r.string("exports", "reference_country").value_or(cfg.reference_country);

  const auto out = r.string("output", "dir").value_or("out");
  cfg.output_dir = fs::path(out).is_absolute() ? fs::path(out) : (base_dir / out).lexically_normal();

  if (const auto* models = r.array("models", "run")) {
    cfg.models.clear();
    for (const auto& m : *models) {
      if (!m.is_string()) r.fail("models.run", "expected strings");
      cfg.models.push_back(*m.value<std::string>());
    }
  }
  cfg.distribution.bins = static_cast<int>(r.integer("report", "bins").value_or(cfg.distribution.bins));
  cfg.distribution.min_prominence =
      r.real("report", "min_prominence").value_or(cfg.distribution.min_prominence);
  cfg.distribution.underflow_floor = cfg.solver.underflow_floor;
  cfg.outliers.iqr_multiplier = r.real("report", "outlier_iqr").value_or(cfg.outliers.iqr_multiplier);
  cfg.strict = r.boolean("run", "strict").value_or(false);
  return cfg;
}

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const auto base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  return parse_config(buf.str(), base, path.string());
}

std::string render_config(const PipelineConfig& cfg, const fs::path& base_dir) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  auto p = [&](const fs::path& path) { return quote(relative_to(path, base_dir)); };
  s << "[inputs]\n"
    << "skills = " << p(cfg.inputs.skills) << "\n"
    << "job_wages = " << p(cfg.inputs.job_wages) << "\n"
    << "employment = " << p(cfg.inputs.employment) << "\n"
    << "county_wages = " << p(cfg.inputs.county_wages) << "\n"
    << "industry_panel = " << p(cfg.inputs.industry_panel) << "\n"
    << "county_panel = " << p(cfg.inputs.county_panel) << "\n"
    << "exports = " << p(cfg.inputs.exports) << "\n"
    << "concordance = " << p(cfg.inputs.concordance) << "\n\n"
    << "[years]\n"
    << "base = " << cfg.base_year << "\n"
    << "horizon = " << cfg.horizon_year << "\n"
    << "export_years = [";
  for (std::size_t i = 0; i < cfg.export_years.size(); ++i) {
    s << (i ? ", " : "") << cfg.export_years[i];
  }
  s << "]\n\n"
    << "[solver]\n"
    << "max_iterations = " << cfg.solver.max_iterations << "\n"
    << "rel_tolerance = " << real_text(cfg.solver.rel_tolerance) << "\n"
    << "underflow_floor = " << real_text(cfg.solver.underflow_floor) << "\n"
    << "rank_window = " << cfg.solver.rank_window << "\n\n"
    << "[quotient]\n"
    << "threshold = " << real_text(cfg.quotient.threshold) << "\n"
    << "skill_mean = \""
    << (cfg.skill_mean == SkillMeanRule::rated_only ? "rated_only" : "all_with_zeros") << "\"\n\n"
    << "[exports]\n"
    << "reference_country = " << quote(cfg.reference_country) << "\n\n"
    << "[output]\n"
    << "dir = " << p(cfg.output_dir) << "\n\n"
    << "[models]\n"
    << "run = [";
  for (std::size_t i = 0; i < cfg.models.size(); ++i) s << (i ? ", " : "") << quote(cfg.models[i]);
  s << "]\n\n"
    << "[report]\n"
    << "bins = " << cfg.distribution.bins << "\n"
    << "min_prominence = " << real_text(cfg.distribution.min_prominence) << "\n"
    << "outlier_iqr = " << real_text(cfg.outliers.iqr_multiplier) << "\n\n"
    << "[run]\n"
    << "strict = " << (cfg.strict ? "true" : "false") << "\n";
  return s.str();
}

std::string_view config_schema() { return kSchema; }

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace ecomplex
