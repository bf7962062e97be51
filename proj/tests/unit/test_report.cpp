#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ecomplex/errors.hpp"
#include "ecomplex/report.hpp"
#include "ecomplex/rng.hpp"

using namespace ecomplex;

namespace {

IndustryComplexity complexity(std::initializer_list<std::pair<const char*, double>> v) {
  IndustryComplexity q;
  for (const auto& [k, x] : v) q.values.emplace(k, x);
  return q;
}

CountyFitness fitness(const std::vector<double>& values) {
  CountyFitness f;
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto id = "c" + std::to_string(10000 + i);
    f.universe.push_back(id);
    f.values.emplace(id, values[i]);
  }
  return f;
}

}  // namespace

TEST_CASE("type-7 quantiles") {
  std::vector<double> s = {7.0, 1.0, 3.0, 3.0, 10.0, -2.0, 4.5};
  std::sort(s.begin(), s.end());
  // Reference values from numpy.quantile (linear interpolation).
  CHECK(quantile(s, 0.25) == doctest::Approx(2.0));
  CHECK(quantile(s, 0.5) == doctest::Approx(3.0));
  CHECK(quantile(s, 0.75) == doctest::Approx(5.75));
  CHECK(quantile(s, 0.9) == doctest::Approx(8.2));
  CHECK(quantile(s, 0.0) == -2.0);
  CHECK(quantile(s, 1.0) == 10.0);
  CHECK_THROWS_AS(quantile(std::vector<double>{}, 0.5), ComputeError);
}

TEST_CASE("scatter of identical measures lies on the diagonal") {
  const auto q = complexity({{"a", 1.0}, {"b", 2.0}, {"c", 0.5}});
  const auto r = report_scatter(q, q);
  CHECK(r.points.size() == 3);
  for (const auto& p : r.points) {
    CHECK(p.hidden == p.revealed);
    CHECK_FALSE(p.is_outlier);
  }
}

TEST_CASE("outlier rule flags extreme low revealed values") {
  IndustryComplexity hidden, revealed;
  for (int i = 0; i < 20; ++i) {
    const auto id = "i" + std::to_string(10 + i);
    hidden.values[id] = 1.0;
    revealed.values[id] = 1.0 + 0.05 * i;
  }
  revealed.values["i10"] = -5.0;
  revealed.values["i11"] = 0.0;
  const auto r = report_scatter(hidden, revealed);
  // Type-7 quartiles computed with numpy.quantile.
  CHECK(r.q1 == doctest::Approx(1.2375));
  CHECK(r.q3 == doctest::Approx(1.7125));
  CHECK(r.cutoff == doctest::Approx(-0.1875));
  int flagged = 0;
  for (const auto& p : r.points) flagged += p.is_outlier;
  CHECK(flagged == 1);
  CHECK(r.points.front().is_outlier);

  std::ostringstream csv, outl, svg;
  write_scatter_csv(csv, r);
  write_outlier_csv(outl, r);
  write_scatter_svg(svg, r);
  CHECK(csv.str().find("i10,1,-5,true") != std::string::npos);
  CHECK(outl.str() == "naics4,hidden,revealed\ni10,1,-5\n");
  CHECK(svg.str().find("1 outlier(s) not shown: i10") != std::string::npos);
  CHECK(svg.str().find("<title>i10</title>") == std::string::npos);

  OutlierRule off{-1.0};
  const auto none = report_scatter(hidden, revealed, off);
  for (const auto& p : none.points) CHECK_FALSE(p.is_outlier);
}

TEST_CASE("disjoint coverage") {
  CHECK_THROWS_AS(report_scatter(complexity({{"a", 1.0}}), complexity({{"b", 1.0}})), ComputeError);
}

TEST_CASE("mode counting") {
  const std::vector<std::size_t> one = {0, 1, 4, 9, 4, 1, 0};
  CHECK(count_modes(one, 1.0) == 1);
  const std::vector<std::size_t> two = {5, 9, 2, 0, 0, 3, 8, 3};
  CHECK(count_modes(two, 2.0) == 2);
  // A small bump does not reach the prominence threshold.
  const std::vector<std::size_t> bump = {2, 9, 4, 5, 3, 1};
  CHECK(count_modes(bump, 2.0) == 1);
  // Equal-height twin peaks separated by a deep valley are both modes.
  const std::vector<std::size_t> twins = {6, 0, 6};
  CHECK(count_modes(twins, 2.0) == 2);
  // Plateaus count once.
  const std::vector<std::size_t> flat = {1, 5, 5, 5, 1};
  CHECK(count_modes(flat, 2.0) == 1);
}

TEST_CASE("distribution of a single log-normal is unimodal") {
  CounterRng rng(17, 3);
  std::vector<double> v;
  for (int i = 0; i < 2000; ++i) v.push_back(std::exp(rng.normal(0.0, 0.4)));
  const auto r = report_distribution(fitness(v));
  CHECK(r.modes == 1);
  CHECK(r.counts.size() == 30);
  CHECK(r.below_floor_fraction == 0.0);
}

TEST_CASE("constant fitness gives one bin") {
  const auto r = report_distribution(fitness({1.0, 1.0, 1.0}));
  CHECK(r.counts.size() == 1);
  CHECK(r.counts[0] == 3);
  CHECK(r.modes == 1);
  std::ostringstream out;
  write_histogram_csv(out, r);
  CHECK(out.str() == "bin,log10_lower,log10_upper,count\n0,0,0,3\n");
}

TEST_CASE("near-zero values form their own mode") {
  std::vector<double> v(60, 1.0);
  for (int i = 0; i < 40; ++i) v[i] = 1e-20 * (1.0 + 0.01 * i);
  for (int i = 40; i < 60; ++i) v[i] = 1.0 + 0.02 * i;
  v.push_back(0.0);
  const auto r = report_distribution(fitness(v));
  CHECK(r.modes == 2);
  CHECK(r.nonpositive == 1);
  CHECK(r.below_floor_fraction == doctest::Approx(41.0 / 61.0));
}

TEST_CASE("choropleth has one row per universe county") {
  CountyFitness f = fitness({1.0, 2.0});
  f.universe.push_back("c99999");
  std::ostringstream out;
  report_choropleth(out, f);
  CHECK(out.str() == "fips,value,covered\nc10000,1,true\nc10001,2,true\nc99999,,false\n");
}
