#include <doctest.h>

#include <random>
#include <sstream>

#include "ecomplex/efc.hpp"
#include "ecomplex/errors.hpp"
#include "support.hpp"

using namespace ecomplex;

namespace {

void check_all_ones(const FitnessResult& r) {
  for (double v : r.fitness.values) CHECK(std::abs(v - 1.0) <= 1e-12);
  for (double v : r.complexity.values) CHECK(std::abs(v - 1.0) <= 1e-12);
}

}  // namespace

TEST_CASE("complete matrix converges immediately") {
  const auto r = solve_fitness(support::binary({{1, 1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 1}}));
  check_all_ones(r);
  CHECK(r.stop_rule == StopRule::converged);
  CHECK(r.iterations_used <= 2);
}

TEST_CASE("identity matrix is a fixed point") {
  support::Dense id(5, std::vector<int>(5, 0));
  for (int i = 0; i < 5; ++i) id[i][i] = 1;
  const auto r = solve_fitness(support::binary(id));
  check_all_ones(r);
  CHECK(r.stop_rule == StopRule::converged);
}

TEST_CASE("nested two by two matrix") {
  // Rows A = {p1, p2}, B = {p2}. Reference values from the independent
  // oracle script after 1..5 iterations.
  const support::Dense nested = {{1, 1}, {0, 1}};
  const double f_a[] = {4.0 / 3.0, 1.5, 1.6, 5.0 / 3.0, 12.0 / 7.0};
  const double q_1[] = {4.0 / 3.0, 1.5, 1.6, 5.0 / 3.0, 12.0 / 7.0};
  for (int n = 1; n <= 5; ++n) {
    SolverConfig cfg;
    cfg.max_iterations = n;
    const auto r = solve_fitness(support::binary(nested), cfg);
    CHECK(r.iterations_used == n);
    CHECK(r.stop_rule == StopRule::max_iterations);
    CHECK(r.fitness.values[0] == doctest::Approx(f_a[n - 1]).epsilon(1e-12));
    CHECK(r.fitness.values[1] == doctest::Approx(2.0 - f_a[n - 1]).epsilon(1e-12));
    CHECK(r.complexity.values[0] == doctest::Approx(q_1[n - 1]).epsilon(1e-12));
    CHECK(r.fitness.values[0] > r.fitness.values[1]);
    CHECK(r.complexity.values[0] > r.complexity.values[1]);
  }
}

TEST_CASE("three by three reference fixed point") {
  const auto r = solve_fitness(support::binary({{1, 1, 1}, {1, 1, 0}, {0, 1, 1}}));
  CHECK(r.stop_rule == StopRule::converged);
  const double f[] = {1.3416407864998738, 0.82917960675006308, 0.82917960675006308};
  const double q[] = {1.1458980337503155, 0.70820393249936919, 1.1458980337503155};
  for (int i = 0; i < 3; ++i) {
    CHECK(r.fitness.values[i] == doctest::Approx(f[i]).epsilon(1e-8));
    CHECK(r.complexity.values[i] == doctest::Approx(q[i]).epsilon(1e-8));
  }
}

TEST_CASE("matches the naive iteration on random matrices") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto dense = support::random_connected(rng, 3 + trial % 8, 4 + trial % 12, 0.45);
    const auto r = solve_fitness(support::binary(dense));
    const auto ref = support::naive_efc(dense, r.iterations_used);
    for (std::size_t i = 0; i < r.fitness.size(); ++i) {
      if (r.fitness.status[i] == EntityStatus::underflow) continue;
      CHECK(std::abs(r.fitness.values[i] - ref.fitness[i]) <= 1e-8 * std::max(1.0, ref.fitness[i]));
    }
    for (std::size_t i = 0; i < r.complexity.size(); ++i) {
      if (r.complexity.status[i] == EntityStatus::underflow) continue;
      CHECK(std::abs(r.complexity.values[i] - ref.complexity[i]) <=
            1e-8 * std::max(1.0, ref.complexity[i]));
    }
  }
}

TEST_CASE("underflow freezes entities and ranks them last") {
  // Triangular matrices drive the least diversified rows towards zero
  // (algebraically, so a coarse floor is used to reach it quickly).
  support::Dense tri(6, std::vector<int>(6, 0));
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c <= 5 - r; ++c) tri[r][c] = 1;
  }
  SolverConfig cfg;
  cfg.underflow_floor = 1e-3;
  const auto res = solve_fitness(support::binary(tri), cfg);
  CHECK(res.stop_rule != StopRule::converged);
  REQUIRE_FALSE(res.underflowed_ids().empty());
  std::vector<std::string> frozen_rows;
  for (std::size_t i = 0; i < res.fitness.size(); ++i) {
    if (res.fitness.status[i] == EntityStatus::underflow) frozen_rows.push_back(res.fitness.ids[i]);
  }
  REQUIRE_FALSE(frozen_rows.empty());
  const auto ranking = rank_of(res, Side::fitness);
  CHECK(ranking.front() == "r000");
  for (std::size_t i = 0; i < frozen_rows.size(); ++i) {
    CHECK(ranking[ranking.size() - frozen_rows.size() + i] == frozen_rows[i]);
  }
  for (std::size_t i = 0; i < res.fitness.size(); ++i) {
    if (res.fitness.status[i] == EntityStatus::underflow) {
      CHECK(res.fitness.values[i] < cfg.underflow_floor);
    }
  }
}

TEST_CASE("ranking ties break by id") {
  FitnessResult r;
  r.fitness.ids = AxisLabels(AxisKind::county, {"b", "a", "c"});
  r.fitness.values = {1.0, 1.0, 2.0};
  r.fitness.status.assign(3, EntityStatus::converged);
  CHECK(rank_of(r, Side::fitness) == std::vector<std::string>{"c", "a", "b"});
}

TEST_CASE("initial conditions do not matter") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  const auto dense = support::random_connected(rng, 8, 10, 0.5);
  const auto base = solve_fitness(support::binary(dense));
  for (int trial = 0; trial < 5; ++trial) {
    SolverConfig cfg;
    cfg.initial_fitness = std::vector<double>(8);
    cfg.initial_complexity = std::vector<double>(10);
    for (auto& v : *cfg.initial_fitness) v = u(rng);
    for (auto& v : *cfg.initial_complexity) v = u(rng);
    const auto r = solve_fitness(support::binary(dense), cfg);
    CHECK(rank_of(r, Side::fitness) == rank_of(base, Side::fitness));
  }
}

TEST_CASE("solver preconditions") {
  CHECK_THROWS_AS(solve_fitness(support::binary({{1, 0}, {1, 0}})), ComputeError);
  SolverConfig cfg;
  cfg.rel_tolerance = 0.0;
  CHECK_THROWS(cfg.validate());
  cfg = {};
  cfg.initial_fitness = std::vector<double>{1.0, -1.0};
  CHECK_THROWS(solve_fitness(support::binary({{1, 1}, {0, 1}}), cfg));
}

TEST_CASE("fitness dump round trip") {
  const auto r = solve_fitness(support::binary({{1, 1, 0}, {0, 1, 1}, {1, 1, 1}}));
  std::ostringstream out;
  write_fitness_csv(out, r);
  std::istringstream in(out.str());
  const auto back = read_fitness_csv(in, "f", AxisKind::county, AxisKind::industry);
  CHECK(back.fitness.ids == r.fitness.ids);
  CHECK(back.complexity.ids == r.complexity.ids);
  for (std::size_t i = 0; i < r.fitness.size(); ++i) {
    CHECK(back.fitness.values[i] == doctest::Approx(r.fitness.values[i]).epsilon(1e-11));
  }
}
