#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "ecomplex/econometrics.hpp"
#include "ecomplex/errors.hpp"
#include "support.hpp"

using namespace ecomplex;

namespace {

DesignMatrix simple(const std::vector<double>& x, const std::vector<double>& y) {
  DesignMatrix d;
  d.columns = {"x", "const"};
  d.x.resize(static_cast<Eigen::Index>(x.size()), 2);
  d.y.resize(static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    d.x(static_cast<Eigen::Index>(i), 0) = x[i];
    d.x(static_cast<Eigen::Index>(i), 1) = 1.0;
    d.y(static_cast<Eigen::Index>(i)) = y[i];
    d.observations.push_back("o" + std::to_string(i));
  }
  d.response = "y";
  return d;
}

}  // namespace

TEST_CASE("macro variables") {
  IndustryPanel ind;
  ind.industries["3111"].is_service = false;
  ind.industries["3111"].years[2017] = {1000.0, 4.0, 100.0, 40.0, 1.2};
  ind.industries["3111"].years[2022] = {1000.0, 4.0, 120.0, 40.0, 1.2};
  CountyPanel cty;
  cty.counties["06037"].state = "06";
  cty.counties["06037"].years[2017] = {40000.0, 1e6};
  cty.counties["06037"].years[2022] = {80000.0, 1e6};
  cty.counties["06001"].state = "06";
  cty.counties["06001"].years[2017] = {40000.0, 1e6};
  cty.counties["06001"].years[2022] = {std::nullopt, 1e6};
  const auto m = derive_macro_variables(ind, cty);
  CHECK(m.log_wage_per_worker.at("3111") == doctest::Approx(std::log(25.0)));
  CHECK(m.lp_growth.at("3111") == doctest::Approx(0.0));
  CHECK(m.is_service.at("3111") == 0.0);
  CHECK(m.gdppc_growth.at("06037") == doctest::Approx(0.6931471805599453));
  CHECK_FALSE(m.gdppc_growth.count("06001"));
  CHECK(m.log_gdppc.count("06001"));
  CHECK(m.exclusions.size() == 1);
  CHECK(m.state.at("06001") == "06");
  CHECK_THROWS_AS(derive_macro_variables(ind, cty, 2022, 2017), ConfigError);
}

TEST_CASE("perfect linear fit") {
  const auto r = ols_fit(simple({1, 2, 3, 4}, {3, 5, 7, 9}));
  CHECK(r.coefficient("x") == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.coefficient("const") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.residuals.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("five-point fixture against the oracle") {
  const auto d = simple({1, 2, 3, 4, 5}, {2, 2.5, 3.9, 4.1, 5.2});
  const auto r = ols_fit(d, {CovarianceType::hc1, {}});
  CHECK(r.coefficient("const") == doctest::Approx(1.14).epsilon(1e-12));
  CHECK(r.coefficient("x") == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(r.std_error("const") == doctest::Approx(0.19595917942265409).epsilon(1e-10));
  CHECK(r.std_error("x") == doctest::Approx(0.048989794855663585).epsilon(1e-10));
  CHECK(r.p_value("const") == doctest::Approx(0.010113069903013741).epsilon(1e-8));
  CHECK(r.p_value("x") == doctest::Approx(0.00049967260790788164).epsilon(1e-8));
  CHECK(r.r2 == doctest::Approx(0.9621166566446181).epsilon(1e-12));
  CHECK(r.adj_r2 == doctest::Approx(0.94948887552615746).epsilon(1e-12));
  CHECK(r.log_likelihood == doctest::Approx(0.37471759373867108).epsilon(1e-10));
  CHECK(r.aic == doctest::Approx(3.2505648125226578).epsilon(1e-10));
  CHECK(r.bic == doctest::Approx(2.4694406373908584).epsilon(1e-10));
  CHECK(r.f_stat == doctest::Approx(266.66666666666646).epsilon(1e-9));
  CHECK(r.f_pvalue == doctest::Approx(0.00049967260790788174).epsilon(1e-8));

  const auto c = ols_fit(d, {CovarianceType::classical, {}});
  CHECK(c.std_error("const") == doctest::Approx(0.3039736830714132).epsilon(1e-10));
  CHECK(c.std_error("x") == doctest::Approx(0.091651513899116813).epsilon(1e-10));
  CHECK(c.f_stat == doctest::Approx(76.190476190476147).epsilon(1e-9));
  CHECK(c.f_pvalue == doctest::Approx(0.0031657073709799328).epsilon(1e-8));
}

TEST_CASE("two-cluster covariance against the oracle") {
  auto d = simple({0.0, 1.0, 2.0, 3.0, 0.5, 1.5, 2.5, 3.5}, {1.0, 2.9, 5.2, 6.8, 2.1, 3.7, 6.2, 7.9});
  CovarianceSpec se{CovarianceType::cluster, {"a", "a", "a", "a", "b", "b", "b", "b"}};
  const auto r = ols_fit(d, se);
  CHECK(r.clusters == 2);
  CHECK(r.df_resid == 1.0);
  CHECK(r.coefficient("x") == doctest::Approx(1.980952380952381).epsilon(1e-12));
  // Oracle covariance in (const, x) order; the design here is (x, const).
  CHECK(r.covariance(1, 1) == doctest::Approx(0.00016534391534391124).epsilon(1e-9));
  CHECK(r.covariance(0, 0) == doctest::Approx(0.00010582010582010512).epsilon(1e-9));
  CHECK(r.covariance(0, 1) == doctest::Approx(-0.00013227513227513017).epsilon(1e-9));
  CHECK(r.p_value("const") == doctest::Approx(0.0081179536458172597).epsilon(1e-7));
  CHECK(r.p_value("x") == doctest::Approx(0.0033058738648532914).epsilon(1e-7));

  CovarianceSpec one{CovarianceType::cluster, std::vector<std::string>(8, "a")};
  CHECK_THROWS_AS(ols_fit(d, one), ComputeError);
}

TEST_CASE("random designs match the normal-equations oracle") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 40, k = 4;
    DesignMatrix d;
    d.columns = {"a", "b", "c", "const"};
    d.x.resize(n, k);
    d.y.resize(n);
    std::vector<std::string> groups;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < 3; ++j) d.x(i, j) = z(rng);
      d.x(i, 3) = 1.0;
      d.y(i) = 0.5 * d.x(i, 0) - d.x(i, 2) + z(rng) * (1.0 + std::abs(d.x(i, 1)));
      groups.push_back("g" + std::to_string(i % 7));
    }
    for (const std::string type : {"classical", "hc1", "cluster"}) {
      CovarianceSpec se;
      se.type = type == "classical" ? CovarianceType::classical
                : type == "hc1"     ? CovarianceType::hc1
                                    : CovarianceType::cluster;
      if (type == "cluster") se.cluster_ids = groups;
      const auto r = ols_fit(d, se);
      const auto o = support::ols_oracle(d.x, d.y, type, groups);
      CHECK((r.coefficients - o.beta).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((r.covariance - o.cov).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("rank deficiency names the collinear column") {
  DesignMatrix d = simple({1, 2, 3, 4}, {1, 3, 2, 5});
  d.columns = {"x", "const", "x2"};
  d.x.conservativeResize(4, 3);
  d.x.col(2) = 2.0 * d.x.col(0);
  try {
    ols_fit(d);
    FAIL("expected rank deficiency");
  } catch (const ComputeError& e) {
    CHECK(std::string(e.what()).find("collinear") != std::string::npos);
  }
  CHECK_THROWS_AS(ols_fit(simple({1, 2}, {1, 2})), ComputeError);
}

TEST_CASE("fixed-effect dummies agree with within transformation") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> z;
  const int groups = 5, per = 12, n = groups * per;
  DesignMatrix d;
  d.columns = {"x"};
  for (int g = 1; g < groups; ++g) d.columns.push_back("state_" + std::to_string(g));
  d.columns.push_back("const");
  const auto k = static_cast<Eigen::Index>(d.columns.size());
  d.x = Eigen::MatrixXd::Zero(n, k);
  d.y.resize(n);
  Eigen::VectorXd x(n), y(n);
  for (int i = 0; i < n; ++i) {
    const int g = i / per;
    x(i) = z(rng) + g;
    y(i) = 1.5 * x(i) + 2.0 * g + z(rng);
    d.x(i, 0) = x(i);
    if (g > 0) d.x(i, g) = 1.0;
    d.x(i, k - 1) = 1.0;
    d.y(i) = y(i);
  }
  d.fixed_effect.assign(static_cast<std::size_t>(k), false);
  for (int g = 1; g < groups; ++g) d.fixed_effect[static_cast<std::size_t>(g)] = true;
  const auto full = ols_fit(d, {CovarianceType::classical, {}});
  CHECK(full.f_df_num == 1);

  Eigen::VectorXd xd = x, yd = y;
  for (int g = 0; g < groups; ++g) {
    xd.segment(g * per, per).array() -= x.segment(g * per, per).mean();
    yd.segment(g * per, per).array() -= y.segment(g * per, per).mean();
  }
  const double beta = xd.dot(yd) / xd.squaredNorm();
  CHECK(std::abs(full.coefficient("x") - beta) <= 1e-8);
}

TEST_CASE("chow test and wald restrictions") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> z;
  const int n = 200;
  DesignMatrix d;
  d.columns = {"x", "serv", "serv_x_x", "const"};
  d.x.resize(n, 4);
  d.y.resize(n);
  for (int i = 0; i < n; ++i) {
    const double s = i % 2;
    const double x = z(rng);
    d.x.row(i) << x, s, s * x, 1.0;
    d.y(i) = 1.0 + x + 3.0 * s + 0.2 * z(rng);
  }
  const auto r = ols_fit(d);
  const auto all = chow_test(r, ChowVariant::all_deltas);
  CHECK(all.df_num == 2);
  CHECK(all.p_value < 1e-3);
  const auto slopes = chow_test(r, ChowVariant::deltas_excluding_intercept);
  CHECK(slopes.df_num == 1);
  CHECK_THROWS_AS(wald_test(r, {}), ComputeError);
  CHECK_THROWS_AS(wald_test(r, {"nope"}), ComputeError);
  const auto w = wald_test(r, {"x"});
  CHECK(w.f_stat == doctest::Approx(std::pow(r.coefficient("x") / r.std_error("x"), 2)));
}

TEST_CASE("significance stars") {
  CHECK(significance_stars(0.0005) == "***");
  CHECK(significance_stars(0.005) == "**");
  CHECK(significance_stars(0.03) == "*");
  CHECK(significance_stars(0.07) == "+");
  CHECK(significance_stars(0.2).empty());
}

TEST_CASE("model shapes") {
  ModelInputs in;
  for (int i = 0; i < 30; ++i) {
    const auto id = std::to_string(3100 + i * 79);
    const double v = i;
    in.macro.log_wage_per_worker[id] = 10.0 + 0.1 * v + std::sin(v);
    in.macro.lp_growth[id] = 0.01 * v;
    in.macro.log_revenues[id] = 15.0 + std::cos(v);
    in.macro.log_employees[id] = 8.0 + std::sin(2.0 * v);
    in.macro.cr4[id] = 20.0 + v;
    in.macro.is_service[id] = id[0] >= '4' ? 1.0 : 0.0;
    in.q_hidden[id] = 1.0 + 0.01 * std::cos(3.0 * v);
  }
  in.q_hidden.erase(in.q_hidden.begin());
  const auto m4 = build_model("T1.m4", in);
  CHECK(m4.design.columns ==
        std::vector<std::string>{"const", "Q_hidden", "log_revenues", "log_emp", "cr4"});
  CHECK(m4.design.observations.size() == 29);
  CHECK(m4.dropped_missing == 1);
  CHECK(m4.covariance.type == CovarianceType::hc1);
  CHECK_THROWS_AS(build_model("T1.m1", in), ComputeError);
  CHECK_THROWS(build_model("T9.m1", in));

  for (int c = 0; c < 40; ++c) {
    const std::string fips = (c % 4 == 0 ? "01" : c % 4 == 1 ? "06" : c % 4 == 2 ? "36" : "48") +
                             std::to_string(100 + c);
    in.macro.state[fips] = fips.substr(0, 2);
    in.macro.log_gdppc[fips] = 10.5 + 0.01 * c;
    in.macro.gdppc_growth[fips] = 0.02 * std::sin(c);
    in.f_job_based[fips] = 1.0 + 0.3 * std::cos(c);
    in.divers[fips] = 10 + c % 7;
  }
  const auto t4 = build_model("T4.m1", in);
  CHECK(t4.covariance.type == CovarianceType::cluster);
  CHECK(t4.design.column_index("state_06"));
  CHECK_FALSE(t4.design.column_index("state_01"));
  const auto fe = std::count(t4.design.fixed_effect.begin(), t4.design.fixed_effect.end(), true);
  CHECK(fe == 3);
  const auto r = ols_fit(t4.design, t4.covariance);
  CHECK(r.clusters == 4);
  CHECK(r.f_df_num == 3);

  std::vector<ModelRun> runs = {{t4, r, {}}};
  std::ostringstream table;
  render_table(table, "T4", runs);
  CHECK(table.str().find("State fixed effects") != std::string::npos);
  CHECK(table.str().find("state_06") == std::string::npos);
}
