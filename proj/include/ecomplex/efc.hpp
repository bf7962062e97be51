#pragma once

// Fitness-Complexity fixed-point solver.
//
// For a binary matrix M with "actor" rows and "activity" columns:
//
//   F_r^(n) = sum_c M_rc Q_c^(n-1)
//   Q_c^(n) = 1 / sum_r M_rc / F_r^(n-1)
//
// and both vectors are divided by their arithmetic mean after every
// iteration. Jobs x skills and counties x industries use the same engine.
//
// Stopping rules:
//   converged        max relative change of every live value < rel_tolerance
//   underflow        as above, with some values frozen below underflow_floor
//   max_iterations   iteration budget exhausted (not an error)
//
// Values falling below underflow_floor are frozen at their last value and
// flagged. Frozen entries enter the map at their zero limit: a frozen
// complexity adds nothing to fitness sums, and an activity with a frozen
// holder has complexity zero (Q_c <= F_r for every holder r). Live values are
// rescaled so that each vector keeps mean one. Rank stability of live values
// is tracked as a diagnostic.

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ecomplex/matrix.hpp"

namespace ecomplex {

struct SolverConfig {
  int max_iterations = 1000;
  double rel_tolerance = 1e-10;
  double underflow_floor = 1e-14;
  double initial_value = 1.0;
  // Consecutive iterations with an unchanged ranking required to call the
  // ranking stable.
  int rank_window = 50;
  // Optional strictly positive starting vectors (row / column order).
  std::optional<std::vector<double>> initial_fitness;
  std::optional<std::vector<double>> initial_complexity;

  void validate() const;
};

enum class StopRule { converged, underflow, max_iterations };
enum class EntityStatus { converged, underflow, max_iter };

std::string_view to_string(StopRule rule);
std::string_view to_string(EntityStatus status);
EntityStatus parse_entity_status(std::string_view name);

struct SideValues {
  AxisLabels ids;
  std::vector<double> values;
  std::vector<EntityStatus> status;

  std::optional<double> find(std::string_view id) const;
  std::size_t size() const noexcept { return values.size(); }
};

struct FitnessResult {
  SideValues fitness;     // rows of the solved matrix
  SideValues complexity;  // columns of the solved matrix
  int iterations_used = 0;
  StopRule stop_rule = StopRule::max_iterations;
  // Max relative change over live values, one entry per iteration.
  std::vector<double> max_rel_change;
  // Consecutive trailing iterations with an unchanged ranking of live values.
  int rank_stable_iterations = 0;
  bool rank_stable = false;

  std::vector<std::string> underflowed_ids() const;
};

// Throws ComputeError on an empty matrix or one with empty rows/columns.
FitnessResult solve_fitness(const BinaryBipartite& m, const SolverConfig& cfg = {});

enum class Side { fitness, complexity };

// Ids by value descending, ties broken by id; underflowed ids last, by id.
std::vector<std::string> rank_of(const FitnessResult& result, Side side);

// `entity_id,side,value,status`.
void write_fitness_csv(std::ostream& out, const FitnessResult& result);
// Reads back a dump written by write_fitness_csv. Iteration diagnostics are
// not part of the dump and come back empty.
FitnessResult read_fitness_csv(std::istream& in, const std::string& source,
                               AxisKind row_kind, AxisKind col_kind);

}  // namespace ecomplex
