#include "ecomplex/efc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ecomplex/csv.hpp"
#include "ecomplex/errors.hpp"

namespace ecomplex {

namespace {

// Rescales live entries so the whole vector has mean one; frozen entries
// keep their value. Does nothing once every entry is frozen.
void normalize(std::vector<double>& v, const std::vector<char>& frozen) {
  double frozen_sum = 0.0;
  double live_sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) (frozen[i] ? frozen_sum : live_sum) += v[i];
  if (!(live_sum > 0.0)) return;
  const double scale = (static_cast<double>(v.size()) - frozen_sum) / live_sum;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!frozen[i]) v[i] *= scale;
  }
}

// Order of live entries by value descending, index ascending on ties.
std::vector<std::size_t> live_order(const std::vector<double>& v,
                                    const std::vector<char>& frozen) {
  std::vector<std::size_t> idx;
  idx.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!frozen[i]) idx.push_back(i);
  }
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return v[a] != v[b] ? v[a] > v[b] : a < b;
  });
  return idx;
}

std::vector<double> initial_vector(const std::optional<std::vector<double>>& given,
                                   std::size_t n, double fill, const char* what) {
  if (!given) return std::vector<double>(n, fill);
  if (given->size() != n) {
    throw ConfigError(std::string("initial ") + what + " vector has wrong length");
  }
  for (double x : *given) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw ConfigError(std::string("initial ") + what + " values must be positive");
    }
  }
  return *given;
}

}  // namespace

void SolverConfig::validate() const {
  if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (!(rel_tolerance > 0.0)) throw ConfigError("rel_tolerance must be > 0");
  if (!(underflow_floor > 0.0)) throw ConfigError("underflow_floor must be > 0");
  if (!(initial_value > 0.0)) throw ConfigError("initial_value must be > 0");
  if (rank_window < 1) throw ConfigError("rank_window must be >= 1");
}

std::string_view to_string(StopRule rule) {
  switch (rule) {
    case StopRule::converged: return "converged";
    case StopRule::underflow: return "underflow";
    case StopRule::max_iterations: return "max_iterations";
  }
  return "unknown";
}

std::string_view to_string(EntityStatus status) {
  switch (status) {
    case EntityStatus::converged: return "converged";
    case EntityStatus::underflow: return "underflow";
    case EntityStatus::max_iter: return "max_iter";
  }
  return "unknown";
}

EntityStatus parse_entity_status(std::string_view name) {
  if (name == "converged") return EntityStatus::converged;
  if (name == "underflow") return EntityStatus::underflow;
  if (name == "max_iter") return EntityStatus::max_iter;
  throw DataError("unknown status '" + std::string(name) + "'");
}

std::optional<double> SideValues::find(std::string_view id) const {
  auto i = ids.find(id);
  if (!i) return std::nullopt;
  return values[*i];
}

std::vector<std::string> FitnessResult::underflowed_ids() const {
  std::vector<std::string> out;
  for (const auto* side : {&fitness, &complexity}) {
    for (std::size_t i = 0; i < side->size(); ++i) {
      if (side->status[i] == EntityStatus::underflow) out.push_back(side->ids[i]);
    }
  }
  return out;
}

FitnessResult solve_fitness(const BinaryBipartite& m, const SolverConfig& cfg) {
  cfg.validate();
  if (m.empty()) throw ComputeError("fitness solver: empty matrix");
  const auto row_adj = m.row_adjacency();
  const auto col_adj = m.col_adjacency();
  for (std::size_t r = 0; r < row_adj.size(); ++r) {
    if (row_adj[r].empty()) {
      throw ComputeError("fitness solver: empty row '" + m.rows()[r] + "' (drop_empty first)");
    }
  }
  for (std::size_t c = 0; c < col_adj.size(); ++c) {
    if (col_adj[c].empty()) {
      throw ComputeError("fitness solver: empty column '" + m.cols()[c] +
                         "' (drop_empty first)");
    }
  }

  const std::size_t n_rows = row_adj.size();
  const std::size_t n_cols = col_adj.size();
  auto fitness = initial_vector(cfg.initial_fitness, n_rows, cfg.initial_value, "fitness");
  auto complexity =
      initial_vector(cfg.initial_complexity, n_cols, cfg.initial_value, "complexity");
  std::vector<char> f_frozen(n_rows, 0), q_frozen(n_cols, 0);
  std::vector<double> f_change(n_rows, 0.0), q_change(n_cols, 0.0);
  std::vector<double> f_next(n_rows), q_next(n_cols);

  FitnessResult result;
  std::vector<std::size_t> prev_f_order, prev_q_order;
  int stable_run = 0;
  bool stopped = false;

  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    for (std::size_t r = 0; r < n_rows; ++r) {
      if (f_frozen[r]) {
        f_next[r] = fitness[r];
        continue;
      }
      double sum = 0.0;
      for (std::size_t c : row_adj[r]) {
        if (!q_frozen[c]) sum += complexity[c];
      }
      f_next[r] = sum;
    }
    for (std::size_t c = 0; c < n_cols; ++c) {
      if (q_frozen[c]) {
        q_next[c] = complexity[c];
        continue;
      }
      double inv = 0.0;
      bool dead_holder = false;
      for (std::size_t r : col_adj[c]) {
        dead_holder = dead_holder || f_frozen[r];
        inv += 1.0 / fitness[r];
      }
      q_next[c] = dead_holder ? 0.0 : 1.0 / inv;
    }
    normalize(f_next, f_frozen);
    normalize(q_next, q_frozen);

    double max_change = 0.0;
    auto track = [&](const std::vector<double>& next, const std::vector<double>& prev,
                     std::vector<char>& frozen, std::vector<double>& change) {
      for (std::size_t i = 0; i < next.size(); ++i) {
        if (frozen[i]) continue;
        change[i] = std::abs(next[i] - prev[i]) / prev[i];
        if (next[i] < cfg.underflow_floor) {
          frozen[i] = 1;
        } else {
          max_change = std::max(max_change, change[i]);
        }
      }
    };
    track(f_next, fitness, f_frozen, f_change);
    track(q_next, complexity, q_frozen, q_change);
    fitness.swap(f_next);
    complexity.swap(q_next);
    result.max_rel_change.push_back(max_change);
    result.iterations_used = iter;

    auto f_order = live_order(fitness, f_frozen);
    auto q_order = live_order(complexity, q_frozen);
    if (f_order == prev_f_order && q_order == prev_q_order) {
      ++stable_run;
    } else {
      stable_run = 0;
    }
    prev_f_order = std::move(f_order);
    prev_q_order = std::move(q_order);

    if (max_change < cfg.rel_tolerance) {
      stopped = true;
      break;
    }
  }

  const bool any_frozen = std::any_of(f_frozen.begin(), f_frozen.end(), [](char x) { return x; }) ||
                          std::any_of(q_frozen.begin(), q_frozen.end(), [](char x) { return x; });
  result.stop_rule = !stopped    ? StopRule::max_iterations
                     : any_frozen ? StopRule::underflow
                                  : StopRule::converged;
  result.rank_stable_iterations = stable_run;
  result.rank_stable = stable_run >= cfg.rank_window || stopped;

  auto side = [&](const AxisLabels& ids, std::vector<double> values,
                  const std::vector<char>& frozen, const std::vector<double>& change) {
    SideValues s{ids, std::move(values), {}};
    s.status.reserve(s.values.size());
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      s.status.push_back(frozen[i] ? EntityStatus::underflow
                         : change[i] < cfg.rel_tolerance ? EntityStatus::converged
                                                         : EntityStatus::max_iter);
    }
    return s;
  };
  result.fitness = side(m.rows(), std::move(fitness), f_frozen, f_change);
  result.complexity = side(m.cols(), std::move(complexity), q_frozen, q_change);
  return result;
}

std::vector<std::string> rank_of(const FitnessResult& result, Side which) {
  const auto& s = which == Side::fitness ? result.fitness : result.complexity;
  std::vector<std::size_t> idx(s.size());
  std::iota(idx.begin(), idx.end(), 0);
  auto under = [&](std::size_t i) { return s.status[i] == EntityStatus::underflow; };
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (under(a) != under(b)) return under(b);
    if (!under(a) && s.values[a] != s.values[b]) return s.values[a] > s.values[b];
    return s.ids[a] < s.ids[b];
  });
  std::vector<std::string> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(s.ids[i]);
  return out;
}

void write_fitness_csv(std::ostream& out, const FitnessResult& result) {
  csv::write_row(out, {"entity_id", "side", "value", "status"});
  auto emit = [&](const SideValues& s, std::string_view side) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      csv::write_row(out, {s.ids[i], side, csv::format_double(s.values[i]),
                           to_string(s.status[i])});
    }
  };
  emit(result.fitness, "fitness");
  emit(result.complexity, "complexity");
}

FitnessResult read_fitness_csv(std::istream& in, const std::string& source, AxisKind row_kind,
                               AxisKind col_kind) {
  csv::Reader reader(in, source);
  reader.expect_header({"entity_id", "side", "value", "status"});
  std::vector<std::string> f_ids, q_ids;
  FitnessResult result;
  bool all_converged = true, any_underflow = false;
  while (reader.next()) {
    auto id = reader.text(0);
    auto side = reader.text(1);
    const double value = reader.number(2);
    const auto status = parse_entity_status(reader.text(3));
    all_converged = all_converged && status != EntityStatus::max_iter;
    any_underflow = any_underflow || status == EntityStatus::underflow;
    SideValues* target = nullptr;
    if (side == "fitness") {
      f_ids.push_back(id);
      target = &result.fitness;
    } else if (side == "complexity") {
      q_ids.push_back(id);
      target = &result.complexity;
    } else {
      reader.fail("unknown side '" + side + "'");
    }
    target->values.push_back(value);
    target->status.push_back(status);
  }
  try {
    result.fitness.ids = AxisLabels(row_kind, std::move(f_ids));
    result.complexity.ids = AxisLabels(col_kind, std::move(q_ids));
  } catch (const ComputeError& e) {
    throw DataError(source + ": " + e.what());
  }
  result.stop_rule = !all_converged ? StopRule::max_iterations
                     : any_underflow ? StopRule::underflow
                                     : StopRule::converged;
  return result;
}

}  // namespace ecomplex
