#pragma once

// Macro variables and the regression program used to validate complexity
// measures: wage levels and labor-productivity growth of industries, and GDP
// per capita growth of counties with state fixed effects.

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ecomplex/aggregate.hpp"
#include "ecomplex/ingest.hpp"

namespace ecomplex {

struct Exclusion {
  std::string id;
  std::string reason;
};

struct MacroVariables {
  // Industry level, base year unless noted.
  ValueMap log_wage_per_worker;  // log(compensation / employees)
  ValueMap lp_growth;            // PPI-deflated log output per worker, base -> horizon
  ValueMap log_revenues;
  ValueMap log_employees;
  ValueMap cr4;
  ValueMap is_service;  // 1 service, 0 goods
  // County level.
  ValueMap log_gdppc;     // base year
  ValueMap gdppc_growth;  // log difference base -> horizon
  std::map<std::string, std::string, std::less<>> state;
  std::vector<Exclusion> exclusions;
};

MacroVariables derive_macro_variables(const IndustryPanel& industries, const CountyPanel& counties,
                                      int base_year = 2017, int horizon_year = 2022);

enum class CovarianceType { classical, hc1, cluster };

std::string_view to_string(CovarianceType t);

struct CovarianceSpec {
  CovarianceType type = CovarianceType::hc1;
  std::vector<std::string> cluster_ids;  // one per observation (cluster only)
};

struct DesignMatrix {
  std::vector<std::string> observations;
  std::vector<std::string> columns;  // includes "const" unless suppressed
  Eigen::MatrixXd x;
  std::string response;
  Eigen::VectorXd y;
  // Fixed-effect dummy columns are excluded from the overall F test.
  std::vector<bool> fixed_effect;

  std::optional<std::size_t> column_index(std::string_view name) const;
  bool has_intercept() const { return column_index("const").has_value(); }
};

struct RegressionResult {
  std::vector<std::string> columns;
  Eigen::VectorXd coefficients;
  Eigen::MatrixXd covariance;
  CovarianceType covariance_type = CovarianceType::hc1;
  Eigen::VectorXd std_errors;
  Eigen::VectorXd t_stats;
  Eigen::VectorXd p_values;
  Eigen::VectorXd residuals;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t clusters = 0;
  double df_resid = 0.0;  // denominator df for t and F tests
  double rss = 0.0;
  double tss = 0.0;
  double r2 = 0.0;
  double adj_r2 = 0.0;
  double log_likelihood = 0.0;
  double aic = 0.0;  // full Gaussian log-likelihood
  double bic = 0.0;
  double aic_no_const = 0.0;  // n log(RSS/n) + 2k
  double bic_no_const = 0.0;
  double f_stat = 0.0;
  double f_pvalue = 1.0;
  std::size_t f_df_num = 0;

  std::optional<std::size_t> index_of(std::string_view name) const;
  double coefficient(std::string_view name) const;
  double std_error(std::string_view name) const;
  double p_value(std::string_view name) const;
};

// Least squares via column-pivoted QR. Throws ComputeError on n <= k, rank
// deficiency (naming the collinear columns) or fewer than two clusters.
RegressionResult ols_fit(const DesignMatrix& d, const CovarianceSpec& se = {});

struct WaldTest {
  double f_stat = 0.0;
  std::size_t df_num = 0;
  double df_den = 0.0;
  double p_value = 1.0;
};

// Joint test that the named coefficients are zero, F = W / q using the
// result's covariance. Throws ComputeError on an empty or unknown list.
WaldTest wald_test(const RegressionResult& r, const std::vector<std::string>& names);

enum class ChowVariant { all_deltas, deltas_excluding_intercept };

struct ChowTestResult {
  ChowVariant variant = ChowVariant::all_deltas;
  double f_stat = 0.0;
  std::size_t df_num = 0;
  double df_den = 0.0;
  double p_value = 1.0;
};

std::string_view to_string(ChowVariant v);

// Tests the service-interaction coefficients ("serv", "serv_x_*").
ChowTestResult chow_test(const RegressionResult& full, ChowVariant variant);

// Significance stars: + 10%, * 5%, ** 1%, *** 0.1%.
std::string significance_stars(double p_value);

// Upstream measures feeding the published model shapes.
struct ModelInputs {
  MacroVariables macro;
  ValueMap q_hidden;
  ValueMap q_revealed;
  ValueMap f_job_based;
  ValueMap f_endogenous;
  ValueMap f_exogenous;
  ValueMap divers;
  ValueMap divers_res;
};

struct BuiltModel {
  std::string id;
  DesignMatrix design;
  CovarianceSpec covariance;
  std::size_t dropped_missing = 0;
};

// Known ids: T1.m1..T1.m5 (log wage per worker), T2.m1..T2.m5
// (labor-productivity growth), T4.m1..T4.m3 (GDP per capita growth with state
// fixed effects and state-clustered errors).
const std::vector<std::string>& known_models();
BuiltModel build_model(std::string_view model_id, const ModelInputs& inputs);

struct ModelRun {
  BuiltModel model;
  RegressionResult result;
  std::vector<ChowTestResult> chow;  // only for interaction models
};

// `model_id,term,coefficient,std_error,p_value,stars`
void write_coefficients_csv(std::ostream& out, const std::vector<ModelRun>& runs);
// `model_id,r2,adj_r2,aic,bic,f_stat,f_pvalue,n`
void write_summary_csv(std::ostream& out, const std::vector<ModelRun>& runs);
// `model_id,variant,f_stat,df_num,df_den,p_value`
void write_chow_csv(std::ostream& out, const std::vector<ModelRun>& runs);
// Side-by-side plain-text table, coefficients with standard errors below.
void render_table(std::ostream& out, const std::string& title, const std::vector<ModelRun>& runs);

}  // namespace ecomplex
