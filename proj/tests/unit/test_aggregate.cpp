#include <doctest.h>

#include <sstream>

#include "ecomplex/aggregate.hpp"
#include "ecomplex/errors.hpp"
#include "support.hpp"

using namespace ecomplex;

namespace {

FitnessResult job_fitness(std::vector<std::string> ids, std::vector<double> values) {
  FitnessResult r;
  r.fitness.status.assign(ids.size(), EntityStatus::converged);
  r.fitness.ids = AxisLabels(AxisKind::job, std::move(ids));
  r.fitness.values = std::move(values);
  return r;
}

WeightedBipartite employment(std::initializer_list<std::tuple<const char*, const char*, double>> cells) {
  WeightedBuilder b(AxisKind::job, AxisKind::industry);
  for (const auto& [j, i, v] : cells) b.add(j, i, v);
  return b.build();
}

FitnessResult yearly(std::vector<std::string> products, std::vector<double> values) {
  FitnessResult r;
  r.complexity.status.assign(products.size(), EntityStatus::converged);
  r.complexity.ids = AxisLabels(AxisKind::product, std::move(products));
  r.complexity.values = std::move(values);
  return r;
}

}  // namespace

TEST_CASE("hidden industry complexity is the employment-weighted mean") {
  const auto f = job_fitness({"j1", "j2"}, {1.0, 3.0});
  CHECK(hidden_industry_complexity(employment({{"j1", "i", 1}, {"j2", "i", 1}}), f).values.at("i") ==
        doctest::Approx(2.0).epsilon(1e-15));
  CHECK(hidden_industry_complexity(employment({{"j1", "i", 3}, {"j2", "i", 1}}), f).values.at("i") ==
        doctest::Approx(1.5).epsilon(1e-15));
  const auto single = job_fitness({"j"}, {2.3});
  CHECK(hidden_industry_complexity(employment({{"j", "i", 40}}), single).values.at("i") == 2.3);

  CHECK_THROWS_AS(hidden_industry_complexity(employment({{"j9", "i", 1}}), f), ComputeError);
  WeightedBuilder b(AxisKind::job, AxisKind::industry);
  b.add("j1", "i", 1);
  b.add_col_id("empty");
  CHECK_THROWS_AS(hidden_industry_complexity(b.build(), f), ComputeError);
}

TEST_CASE("hidden county fitness") {
  IndustryComplexity q;
  q.values = {{"c000", 1.0}, {"c001", 5.0}};
  const auto f = hidden_county_fitness(support::binary({{1, 0}, {1, 1}}), q);
  CHECK(f.values.at("r000") == doctest::Approx(1.0 / 3.5));
  CHECK(f.values.at("r001") == doctest::Approx(6.0 / 3.5));

  IndustryComplexity q2;
  q2.values = {{"c000", 2.0}, {"c001", 6.0}};
  const auto g = hidden_county_fitness(support::binary({{1, 0}, {0, 1}}), q2);
  CHECK(g.values.at("r000") == doctest::Approx(0.5));
  CHECK(g.values.at("r001") == doctest::Approx(1.5));

  const auto same = hidden_county_fitness(support::binary({{1, 0}, {1, 0}}), q2);
  CHECK(same.values.at("r000") == doctest::Approx(1.0));

  IndustryComplexity partial;
  partial.values = {{"c000", 1.0}};
  CHECK_THROWS_AS(hidden_county_fitness(support::binary({{1, 1}}), partial), ComputeError);
}

TEST_CASE("yearly product complexity averaging") {
  std::map<int, FitnessResult> years;
  years[2012] = yearly({"a", "b"}, {1.0, 1.2});
  years[2013] = yearly({"a", "b"}, {3.0, 1.2});
  years[2014] = yearly({"b"}, {1.2});
  const auto avg = average_yearly_complexity(years);
  CHECK(avg.at("a") == doctest::Approx(2.0));
  CHECK(avg.at("b") == doctest::Approx(1.2));
}

TEST_CASE("exogenous industry complexity") {
  ValueMap products = {{"h1", 1.0}, {"h2", 3.0}, {"h3", 7.0}};
  ConcordanceMap conc;
  conc.entries = {{"h1", "i1", 1.0}, {"h2", "i1", 1.0}, {"h3", "i2", 1.0}, {"h1", "i3", 1.0}};
  WeightedBuilder b(AxisKind::country, AxisKind::product);
  b.add("USA", "h1", 10);
  b.add("USA", "h2", 10);
  b.add("FRA", "h3", 5);
  const auto q = exogenous_industry_complexity(products, conc, b.build(), "USA");
  // h1 is split between i1 and i3 with weight 1/2 each: (0.5*10*1 + 10*3) / (5 + 10).
  CHECK(q.values.at("i1") == doctest::Approx(35.0 / 15.0));
  CHECK(q.values.at("i3") == doctest::Approx(1.0));
  CHECK_FALSE(q.find("i2"));  // no U.S. exports of h3
  CHECK(q.provenance == ComplexityProvenance::revealed_export);

  ConcordanceMap single;
  single.entries = {{"h2", "i9", 1.0}};
  CHECK(exogenous_industry_complexity(products, single, b.build(), "USA").values.at("i9") == 3.0);

  ConcordanceMap two;
  two.entries = {{"h1", "i1", 1.0}, {"h2", "i1", 1.0}};
  CHECK(exogenous_industry_complexity(products, two, b.build(), "USA").values.at("i1") ==
        doctest::Approx(2.0));
  CHECK_THROWS_AS(exogenous_industry_complexity(products, {}, b.build(), "USA"), ComputeError);
}

TEST_CASE("exogenous county fitness covers counties with a covered industry") {
  IndustryComplexity q;
  q.values = {{"c000", 2.0}};
  const auto f = exogenous_county_fitness(support::binary({{1, 1}, {0, 1}, {1, 0}}), q);
  CHECK(f.universe.size() == 3);
  CHECK(f.values.size() == 2);
  CHECK_FALSE(f.find("r001"));
  CHECK(f.values.at("r000") == doctest::Approx(1.0));
  CHECK(f.provenance == FitnessProvenance::exogenous_export);
}

TEST_CASE("diversification") {
  support::Dense row(1, std::vector<int>(20, 0));
  for (int c = 0; c < 17; ++c) row[0][c] = 1;
  row.push_back(std::vector<int>(20, 0));
  row[1][0] = 1;
  const auto m = support::binary(row);
  const auto d = diversification(m);
  CHECK(d.values.at("r000") == 17);
  const std::set<std::string, std::less<>> keep = {"c000", "c005"};
  const auto r = diversification(m, &keep);
  CHECK(r.restricted);
  CHECK(r.values.at("r000") == 2);
  CHECK(r.values.at("r001") <= d.values.at("r001"));

  const auto e = diversification(support::binary({{1, 0}, {0, 0}}));
  CHECK(e.values.at("r001") == 0);
}

TEST_CASE("endogenous measures come from the iterated solve") {
  const auto m3 = support::binary({{1, 1, 1}, {1, 1, 0}, {0, 1, 1}, {0, 0, 0}});
  const auto solved = solve_fitness(drop_empty(m3).matrix);
  const auto f = endogenous_county_fitness(m3, solved);
  CHECK(f.universe.size() == 4);
  CHECK(f.values.size() == 3);
  CHECK(f.provenance == FitnessProvenance::endogenous);
  CHECK(endogenous_industry_complexity(solved).values.size() == 3);
}

TEST_CASE("artifact round trips") {
  IndustryComplexity q;
  q.values = {{"3111", 0.5}, {"5111", 1.25}};
  std::ostringstream out;
  write_industry_complexity(out, q);
  std::istringstream in(out.str());
  const auto back = read_industry_complexity(in, "q");
  CHECK(back.values == q.values);

  CountyFitness f;
  f.values = {{"01001", 2.0}};
  f.universe = {"01001", "01003"};
  f.provenance = FitnessProvenance::exogenous_export;
  std::ostringstream fo;
  write_county_fitness(fo, f);
  std::istringstream fi(fo.str());
  const auto fb = read_county_fitness(fi, "f");
  CHECK(fb.values == f.values);
  CHECK(fb.universe == f.universe);
  CHECK(fb.provenance == f.provenance);
}

TEST_CASE("provenance names") {
  for (auto p : {FitnessProvenance::job_based, FitnessProvenance::endogenous,
                 FitnessProvenance::exogenous_export}) {
    CHECK(parse_fitness_provenance(to_string(p)) == p);
  }
  for (auto p : {ComplexityProvenance::hidden, ComplexityProvenance::revealed_export,
                 ComplexityProvenance::endogenous}) {
    CHECK(parse_complexity_provenance(to_string(p)) == p);
  }
}
