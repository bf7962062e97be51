#include "ecomplex/econometrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "ecomplex/csv.hpp"
#include "ecomplex/errors.hpp"

namespace ecomplex {

namespace {

double t_two_sided_p(double t, double df) {
  if (!std::isfinite(t)) return 0.0;
  boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

double f_upper_p(double f, double df1, double df2) {
  if (!std::isfinite(f)) return 0.0;
  if (f <= 0.0) return 1.0;
  boost::math::fisher_f dist(df1, df2);
  return boost::math::cdf(boost::math::complement(dist, f));
}

std::optional<double> lookup(const ValueMap& m, const std::string& id) {
  auto it = m.find(id);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

}  // namespace

// ---------------------------------------------------------------------------
// Macro variables

MacroVariables derive_macro_variables(const IndustryPanel& industries, const CountyPanel& counties,
                                      int base_year, int horizon_year) {
  if (base_year >= horizon_year) throw ConfigError("base_year must precede horizon_year");
  MacroVariables out;
  auto exclude = [&](const std::string& id, const std::string& why) {
    out.exclusions.push_back({id, why});
  };
  const auto base = std::to_string(base_year);
  const auto horizon = std::to_string(horizon_year);

  for (const auto& [id, rec] : industries.industries) {
    out.is_service.emplace(id, rec.is_service ? 1.0 : 0.0);
    const auto* b = industries.find(id, base_year);
    const auto* h = industries.find(id, horizon_year);
    if (!b) {
      exclude(id, "no " + base + " row");
      continue;
    }
    if (b->compensation_usd && b->employees) {
      if (*b->compensation_usd > 0.0) {
        out.log_wage_per_worker.emplace(id, std::log(*b->compensation_usd / *b->employees));
      } else {
        exclude(id, "log wage: nonpositive compensation");
      }
    }
    if (b->revenues_usd) out.log_revenues.emplace(id, std::log(*b->revenues_usd));
    if (b->employees) out.log_employees.emplace(id, std::log(*b->employees));
    if (b->cr4_pct) out.cr4.emplace(id, *b->cr4_pct);
    if (!h) {
      exclude(id, "labor productivity growth: no " + horizon + " row");
    } else if (b->revenues_usd && b->employees && b->ppi_index && h->revenues_usd &&
               h->employees && h->ppi_index) {
      const double deflator = *h->ppi_index / *b->ppi_index;
      out.lp_growth.emplace(id, std::log((*h->revenues_usd / deflator) / *h->employees) -
                                    std::log(*b->revenues_usd / *b->employees));
    } else {
      exclude(id, "labor productivity growth: missing revenues, employees or ppi");
    }
  }

  for (const auto& [id, rec] : counties.counties) {
    out.state.emplace(id, rec.state);
    const auto* b = counties.find(id, base_year);
    const auto* h = counties.find(id, horizon_year);
    if (!b || !b->gdp_per_capita) {
      exclude(id, "no " + base + " GDP per capita");
      continue;
    }
    out.log_gdppc.emplace(id, std::log(*b->gdp_per_capita));
    if (!h || !h->gdp_per_capita) {
      exclude(id, "GDP per capita growth: no " + horizon + " value");
      continue;
    }
    out.gdppc_growth.emplace(id, std::log(*h->gdp_per_capita) - std::log(*b->gdp_per_capita));
  }
  return out;
}

// ---------------------------------------------------------------------------
// OLS

std::string_view to_string(CovarianceType t) {
  switch (t) {
    case CovarianceType::classical: return "classical";
    case CovarianceType::hc1: return "hc1";
    case CovarianceType::cluster: return "cluster";
  }
  return "unknown";
}

std::optional<std::size_t> DesignMatrix::column_index(std::string_view name) const {
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] == name) return j;
  }
  return std::nullopt;
}

std::optional<std::size_t> RegressionResult::index_of(std::string_view name) const {
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] == name) return j;
  }
  return std::nullopt;
}

double RegressionResult::coefficient(std::string_view name) const {
  auto j = index_of(name);
  if (!j) throw ComputeError("no coefficient named '" + std::string(name) + "'");
  return coefficients(static_cast<Eigen::Index>(*j));
}

double RegressionResult::std_error(std::string_view name) const {
  auto j = index_of(name);
  if (!j) throw ComputeError("no coefficient named '" + std::string(name) + "'");
  return std_errors(static_cast<Eigen::Index>(*j));
}

double RegressionResult::p_value(std::string_view name) const {
  auto j = index_of(name);
  if (!j) throw ComputeError("no coefficient named '" + std::string(name) + "'");
  return p_values(static_cast<Eigen::Index>(*j));
}

RegressionResult ols_fit(const DesignMatrix& d, const CovarianceSpec& se) {
  const auto n = d.x.rows();
  const auto k = d.x.cols();
  if (d.y.size() != n || static_cast<Eigen::Index>(d.columns.size()) != k) {
    throw ComputeError("design matrix dimensions are inconsistent");
  }
  if (n <= k) {
    throw ComputeError("regression needs more observations than columns (n=" +
                       std::to_string(n) + ", k=" + std::to_string(k) + ")");
  }
  if (!d.x.allFinite() || !d.y.allFinite()) throw ComputeError("design matrix has non-finite cells");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d.x);
  if (qr.rank() < k) {
    std::string names;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index j = qr.rank(); j < k; ++j) {
      names += (names.empty() ? "" : ", ") + d.columns[static_cast<std::size_t>(perm(j))];
    }
    throw ComputeError("design matrix is rank deficient; collinear columns: " + names);
  }

  RegressionResult r;
  r.columns = d.columns;
  r.n = static_cast<std::size_t>(n);
  r.k = static_cast<std::size_t>(k);
  r.covariance_type = se.type;
  r.coefficients = qr.solve(d.y);
  r.residuals = d.y - d.x * r.coefficients;

  // (X'X)^-1 = P R^-1 R^-T P'
  const Eigen::MatrixXd upper =
      qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv =
      upper.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
  const Eigen::MatrixXd perm = qr.colsPermutation();
  const Eigen::MatrixXd bread = perm * (r_inv * r_inv.transpose()) * perm.transpose();

  r.rss = r.residuals.squaredNorm();
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  r.df_resid = nd - kd;

  switch (se.type) {
    case CovarianceType::classical:
      r.covariance = (r.rss / (nd - kd)) * bread;
      break;
    case CovarianceType::hc1: {
      const Eigen::MatrixXd scaled = d.x.array().colwise() * r.residuals.array();
      const Eigen::MatrixXd meat = scaled.transpose() * scaled;
      r.covariance = (nd / (nd - kd)) * bread * meat * bread;
      break;
    }
    case CovarianceType::cluster: {
      if (se.cluster_ids.size() != static_cast<std::size_t>(n)) {
        throw ComputeError("cluster ids must match the number of observations");
      }
      std::map<std::string, Eigen::VectorXd> scores;
      for (Eigen::Index i = 0; i < n; ++i) {
        auto [it, fresh] = scores.try_emplace(se.cluster_ids[static_cast<std::size_t>(i)]);
        if (fresh) it->second = Eigen::VectorXd::Zero(k);
        it->second += d.x.row(i).transpose() * r.residuals(i);
      }
      if (scores.size() < 2) throw ComputeError("cluster-robust covariance needs >= 2 clusters");
      Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(k, k);
      for (const auto& [g, u] : scores) meat += u * u.transpose();
      const double groups = static_cast<double>(scores.size());
      const double scale = groups / (groups - 1.0) * (nd - 1.0) / (nd - kd);
      r.covariance = scale * bread * meat * bread;
      r.clusters = scores.size();
      r.df_resid = groups - 1.0;
      break;
    }
  }
  r.covariance = 0.5 * (r.covariance + r.covariance.transpose());
  r.std_errors = r.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
  r.t_stats.resize(k);
  r.p_values.resize(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double t = r.std_errors(j) > 0.0
                         ? r.coefficients(j) / r.std_errors(j)
                         : std::copysign(std::numeric_limits<double>::infinity(),
                                         r.coefficients(j));
    r.t_stats(j) = t;
    r.p_values(j) = r.coefficients(j) == 0.0 && r.std_errors(j) == 0.0
                        ? 1.0
                        : t_two_sided_p(t, r.df_resid);
  }

  const bool intercept = d.has_intercept();
  if (intercept) {
    r.tss = (d.y.array() - d.y.mean()).square().sum();
  } else {
    r.tss = d.y.squaredNorm();
  }
  r.r2 = r.tss > 0.0 ? 1.0 - r.rss / r.tss : 1.0;
  r.adj_r2 = 1.0 - (1.0 - r.r2) * (intercept ? nd - 1.0 : nd) / (nd - kd);

  const double sigma2 = std::max(r.rss / nd, std::numeric_limits<double>::min());
  r.log_likelihood = -0.5 * nd * (std::log(2.0 * std::numbers::pi) + std::log(sigma2) + 1.0);
  r.aic = -2.0 * r.log_likelihood + 2.0 * kd;
  r.bic = -2.0 * r.log_likelihood + kd * std::log(nd);
  r.aic_no_const = nd * std::log(sigma2) + 2.0 * kd;
  r.bic_no_const = nd * std::log(sigma2) + kd * std::log(nd);

  std::vector<std::string> slopes;
  for (std::size_t j = 0; j < d.columns.size(); ++j) {
    const bool fe = j < d.fixed_effect.size() && d.fixed_effect[j];
    if (d.columns[j] != "const" && !fe) slopes.push_back(d.columns[j]);
  }
  if (!slopes.empty()) {
    const auto w = wald_test(r, slopes);
    r.f_stat = w.f_stat;
    r.f_pvalue = w.p_value;
    r.f_df_num = w.df_num;
  }
  return r;
}

WaldTest wald_test(const RegressionResult& r, const std::vector<std::string>& names) {
  if (names.empty()) throw ComputeError("wald test needs at least one restriction");
  const auto q = static_cast<Eigen::Index>(names.size());
  Eigen::VectorXd b(q);
  Eigen::MatrixXd v(q, q);
  std::vector<Eigen::Index> idx;
  for (const auto& name : names) {
    auto j = r.index_of(name);
    if (!j) throw ComputeError("wald test: no coefficient named '" + name + "'");
    idx.push_back(static_cast<Eigen::Index>(*j));
  }
  for (Eigen::Index a = 0; a < q; ++a) {
    b(a) = r.coefficients(idx[static_cast<std::size_t>(a)]);
    for (Eigen::Index c = 0; c < q; ++c) {
      v(a, c) = r.covariance(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(c)]);
    }
  }
  WaldTest w;
  w.df_num = static_cast<std::size_t>(q);
  w.df_den = r.df_resid;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(v);
  if (!lu.isInvertible()) {
    w.f_stat = b.isZero(0.0) ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    w.f_stat = b.dot(lu.solve(b)) / static_cast<double>(q);
  }
  w.p_value = f_upper_p(w.f_stat, static_cast<double>(q), w.df_den);
  return w;
}

std::string_view to_string(ChowVariant v) {
  return v == ChowVariant::all_deltas ? "all_deltas" : "deltas_excluding_intercept";
}

ChowTestResult chow_test(const RegressionResult& full, ChowVariant variant) {
  std::vector<std::string> names;
  for (const auto& c : full.columns) {
    const bool intercept_shift = c == "serv";
    const bool slope_shift = c.starts_with("serv_x_");
    if (slope_shift || (intercept_shift && variant == ChowVariant::all_deltas)) {
      names.push_back(c);
    }
  }
  if (names.empty()) throw ComputeError("chow test: model has no service interaction columns");
  const auto w = wald_test(full, names);
  return {variant, w.f_stat, w.df_num, w.df_den, w.p_value};
}

std::string significance_stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  if (p < 0.1) return "+";
  return "";
}

// ---------------------------------------------------------------------------
// Model battery

namespace {

struct ModelShape {
  std::string response;
  std::vector<std::string> regressors;
  enum class Sample { all, goods, services, revealed, exogenous } sample = Sample::all;
  bool interactions = false;
  bool state_effects = false;
};

std::optional<ModelShape> shape_of(std::string_view id) {
  using S = ModelShape::Sample;
  const std::vector<std::string> hidden = {"Q_hidden", "log_revenues", "log_emp", "cr4"};
  const std::vector<std::string> revealed = {"Q_revealed", "log_revenues", "log_emp", "cr4"};
  for (const auto* table : {"T1", "T2"}) {
    const std::string response = std::string(table) == "T1" ? "log_wage_per_worker" : "lp_growth";
    const std::string prefix = std::string(table) + ".m";
    if (id == prefix + "1") return ModelShape{response, revealed, S::revealed};
    if (id == prefix + "2") return ModelShape{response, hidden, S::goods};
    if (id == prefix + "3") return ModelShape{response, hidden, S::services};
    if (id == prefix + "4") return ModelShape{response, hidden, S::all};
    if (id == prefix + "5") return ModelShape{response, hidden, S::all, true};
  }
  if (id == "T4.m1") {
    return ModelShape{"gdppc_growth", {"log_gdppc", "divers", "F_job_based"}, S::all, false, true};
  }
  if (id == "T4.m2") {
    return ModelShape{"gdppc_growth", {"log_gdppc", "divers", "F_endogenous"}, S::all, false, true};
  }
  if (id == "T4.m3") {
    return ModelShape{"gdppc_growth", {"log_gdppc", "divers_res", "F_exogenous"}, S::exogenous,
                      false, true};
  }
  return std::nullopt;
}

const ValueMap* variable(const ModelInputs& in, const std::string& name) {
  static const std::map<std::string, std::function<const ValueMap*(const ModelInputs&)>> table = {
      {"log_wage_per_worker", [](const ModelInputs& m) { return &m.macro.log_wage_per_worker; }},
      {"lp_growth", [](const ModelInputs& m) { return &m.macro.lp_growth; }},
      {"log_revenues", [](const ModelInputs& m) { return &m.macro.log_revenues; }},
      {"log_emp", [](const ModelInputs& m) { return &m.macro.log_employees; }},
      {"cr4", [](const ModelInputs& m) { return &m.macro.cr4; }},
      {"Q_hidden", [](const ModelInputs& m) { return &m.q_hidden; }},
      {"Q_revealed", [](const ModelInputs& m) { return &m.q_revealed; }},
      {"gdppc_growth", [](const ModelInputs& m) { return &m.macro.gdppc_growth; }},
      {"log_gdppc", [](const ModelInputs& m) { return &m.macro.log_gdppc; }},
      {"divers", [](const ModelInputs& m) { return &m.divers; }},
      {"divers_res", [](const ModelInputs& m) { return &m.divers_res; }},
      {"F_job_based", [](const ModelInputs& m) { return &m.f_job_based; }},
      {"F_endogenous", [](const ModelInputs& m) { return &m.f_endogenous; }},
      {"F_exogenous", [](const ModelInputs& m) { return &m.f_exogenous; }},
  };
  auto it = table.find(name);
  return it == table.end() ? nullptr : it->second(in);
}

}  // namespace

const std::vector<std::string>& known_models() {
  static const std::vector<std::string> ids = {"T1.m1", "T1.m2", "T1.m3", "T1.m4", "T1.m5",
                                               "T2.m1", "T2.m2", "T2.m3", "T2.m4", "T2.m5",
                                               "T4.m1", "T4.m2", "T4.m3"};
  return ids;
}

BuiltModel build_model(std::string_view model_id, const ModelInputs& inputs) {
  const auto shape = shape_of(model_id);
  if (!shape) throw ConfigError("unknown model '" + std::string(model_id) + "'");

  std::vector<std::string> needed = shape->regressors;
  needed.insert(needed.begin(), shape->response);
  std::vector<const ValueMap*> maps;
  std::string absent;
  for (const auto& name : needed) {
    const auto* m = variable(inputs, name);
    if (!m || m->empty()) absent += (absent.empty() ? "" : ", ") + name;
    maps.push_back(m);
  }
  const bool county_model = shape->state_effects;
  if (!county_model && (shape->interactions || shape->sample == ModelShape::Sample::goods ||
                        shape->sample == ModelShape::Sample::services) &&
      inputs.macro.is_service.empty()) {
    absent += (absent.empty() ? "" : ", ") + std::string("is_service");
  }
  if (!absent.empty()) {
    throw ComputeError("model " + std::string(model_id) + ": missing input columns: " + absent);
  }

  // Candidate entities: every id of the response or the first regressor.
  std::set<std::string> candidates;
  for (const auto* m : {maps[0], maps[1]}) {
    for (const auto& [id, v] : *m) candidates.insert(id);
  }

  BuiltModel built;
  built.id = std::string(model_id);
  std::vector<std::vector<double>> rows;
  std::vector<std::string> obs;
  std::vector<std::string> states;
  for (const auto& id : candidates) {
    std::optional<double> serv;
    if (!county_model) serv = lookup(inputs.macro.is_service, id);
    using S = ModelShape::Sample;
    if (shape->sample == S::goods || shape->sample == S::services) {
      if (!serv) {
        ++built.dropped_missing;
        continue;
      }
      if ((*serv == 1.0) != (shape->sample == S::services)) continue;
    }
    std::vector<double> values;
    bool complete = true;
    for (const auto* m : maps) {
      auto v = lookup(*m, id);
      if (!v) {
        complete = false;
        break;
      }
      values.push_back(*v);
    }
    std::optional<std::string> state;
    if (county_model) {
      auto it = inputs.macro.state.find(id);
      if (it != inputs.macro.state.end()) state = it->second;
      else complete = false;
    }
    if (shape->interactions && !serv) complete = false;
    if (!complete) {
      ++built.dropped_missing;
      continue;
    }
    if (shape->interactions) {
      values.push_back(*serv);
      for (std::size_t r = 0; r < shape->regressors.size(); ++r) {
        values.push_back(*serv * values[r + 1]);
      }
    }
    rows.push_back(std::move(values));
    obs.push_back(id);
    if (state) states.push_back(*state);
  }

  std::vector<std::string> columns = {"const"};
  columns.insert(columns.end(), shape->regressors.begin(), shape->regressors.end());
  if (shape->interactions) {
    columns.push_back("serv");
    for (const auto& r : shape->regressors) columns.push_back("serv_x_" + r);
  }
  std::vector<std::string> state_levels;
  if (county_model) {
    std::set<std::string> levels(states.begin(), states.end());
    state_levels.assign(levels.begin(), levels.end());
    for (std::size_t s = 1; s < state_levels.size(); ++s) {
      columns.push_back("state_" + state_levels[s]);
    }
  }

  auto& d = built.design;
  d.observations = obs;
  d.columns = columns;
  d.response = shape->response;
  d.fixed_effect.assign(columns.size(), false);
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto k = static_cast<Eigen::Index>(columns.size());
  d.x = Eigen::MatrixXd::Zero(n, k);
  d.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    d.y(i) = row[0];
    d.x(i, 0) = 1.0;
    for (std::size_t j = 1; j < row.size(); ++j) d.x(i, static_cast<Eigen::Index>(j)) = row[j];
  }
  if (county_model) {
    const auto first_fe = static_cast<Eigen::Index>(1 + shape->regressors.size());
    for (Eigen::Index j = first_fe; j < k; ++j) d.fixed_effect[static_cast<std::size_t>(j)] = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& st = states[static_cast<std::size_t>(i)];
      auto pos = std::lower_bound(state_levels.begin(), state_levels.end(), st) -
                 state_levels.begin();
      if (pos > 0) d.x(i, first_fe + pos - 1) = 1.0;
    }
    built.covariance = {CovarianceType::cluster, states};
  } else {
    built.covariance = {CovarianceType::hc1, {}};
  }
  return built;
}

// ---------------------------------------------------------------------------
// Reports

void write_coefficients_csv(std::ostream& out, const std::vector<ModelRun>& runs) {
  csv::write_row(out, {"model_id", "term", "coefficient", "std_error", "p_value", "stars"});
  for (const auto& run : runs) {
    const auto& r = run.result;
    for (std::size_t j = 0; j < r.columns.size(); ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      csv::write_row(out, {run.model.id, r.columns[j], csv::format_double(r.coefficients(jj)),
                           csv::format_double(r.std_errors(jj)),
                           csv::format_double(r.p_values(jj)),
                           significance_stars(r.p_values(jj))});
    }
  }
}

void write_summary_csv(std::ostream& out, const std::vector<ModelRun>& runs) {
  csv::write_row(out, {"model_id", "r2", "adj_r2", "aic", "bic", "f_stat", "f_pvalue", "n"});
  for (const auto& run : runs) {
    const auto& r = run.result;
    csv::write_row(out, {run.model.id, csv::format_double(r.r2), csv::format_double(r.adj_r2),
                         csv::format_double(r.aic), csv::format_double(r.bic),
                         csv::format_double(r.f_stat), csv::format_double(r.f_pvalue),
                         std::to_string(r.n)});
  }
}

void write_chow_csv(std::ostream& out, const std::vector<ModelRun>& runs) {
  csv::write_row(out, {"model_id", "variant", "f_stat", "df_num", "df_den", "p_value"});
  for (const auto& run : runs) {
    for (const auto& c : run.chow) {
      csv::write_row(out, {run.model.id, to_string(c.variant), csv::format_double(c.f_stat),
                           std::to_string(c.df_num), csv::format_double(c.df_den),
                           csv::format_double(c.p_value)});
    }
  }
}

void render_table(std::ostream& out, const std::string& title, const std::vector<ModelRun>& runs) {
  constexpr int kLabel = 28;
  constexpr int kCell = 13;
  auto fixed = [](double v, int digits) {
    std::ostringstream s;
    s.imbue(std::locale::classic());
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
  };
  std::vector<std::string> terms;
  bool any_fe = false;
  for (const auto& run : runs) {
    for (std::size_t j = 0; j < run.result.columns.size(); ++j) {
      const auto& c = run.result.columns[j];
      if (j < run.model.design.fixed_effect.size() && run.model.design.fixed_effect[j]) {
        any_fe = true;
        continue;
      }
      if (c != "const" && std::find(terms.begin(), terms.end(), c) == terms.end()) {
        terms.push_back(c);
      }
    }
  }
  terms.push_back("const");

  out << title << '\n';
  out << std::string(kLabel + kCell * runs.size(), '-') << '\n';
  out << std::left << std::setw(kLabel) << "";
  for (std::size_t m = 0; m < runs.size(); ++m) {
    out << std::right << std::setw(kCell) << ("[" + runs[m].model.id + "]");
  }
  out << '\n';
  for (const auto& term : terms) {
    out << std::left << std::setw(kLabel) << term;
    for (const auto& run : runs) {
      auto j = run.result.index_of(term);
      out << std::right << std::setw(kCell)
          << (j ? fixed(run.result.coefficients(static_cast<Eigen::Index>(*j)), 3) +
                      significance_stars(run.result.p_values(static_cast<Eigen::Index>(*j)))
                : std::string());
    }
    out << '\n' << std::left << std::setw(kLabel) << "";
    for (const auto& run : runs) {
      auto j = run.result.index_of(term);
      out << std::right << std::setw(kCell)
          << (j ? "(" + fixed(run.result.std_errors(static_cast<Eigen::Index>(*j)), 3) + ")"
                : std::string());
    }
    out << '\n';
  }
  out << std::string(kLabel + kCell * runs.size(), '-') << '\n';
  auto stat_row = [&](const char* label, auto getter) {
    out << std::left << std::setw(kLabel) << label;
    for (const auto& run : runs) out << std::right << std::setw(kCell) << getter(run.result);
    out << '\n';
  };
  stat_row("R2", [&](const RegressionResult& r) { return fixed(r.r2, 3); });
  stat_row("Adj. R2", [&](const RegressionResult& r) { return fixed(r.adj_r2, 3); });
  stat_row("AIC", [&](const RegressionResult& r) { return fixed(r.aic, 2); });
  stat_row("BIC", [&](const RegressionResult& r) { return fixed(r.bic, 2); });
  stat_row("F-statistic", [&](const RegressionResult& r) { return fixed(r.f_stat, 3); });
  stat_row("p-value (F)", [&](const RegressionResult& r) { return fixed(r.f_pvalue, 3); });
  stat_row("Observations", [&](const RegressionResult& r) { return std::to_string(r.n); });
  if (any_fe) {
    stat_row("State fixed effects", [&](const RegressionResult&) { return std::string("yes"); });
  }
  out << std::string(kLabel + kCell * runs.size(), '-') << '\n';
  out << "Standard errors in parentheses (" << to_string(runs.empty()
                                                             ? CovarianceType::hc1
                                                             : runs.front().result.covariance_type)
      << "). + p<0.1, * p<0.05, ** p<0.01, *** p<0.001\n";
}

}  // namespace ecomplex
