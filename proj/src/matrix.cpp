#include "ecomplex/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "ecomplex/errors.hpp"

namespace ecomplex {

namespace {

constexpr std::pair<AxisKind, std::string_view> kAxisNames[] = {
    {AxisKind::skill, "skill"},     {AxisKind::job, "job"},
    {AxisKind::industry, "industry"}, {AxisKind::county, "county"},
    {AxisKind::country, "country"}, {AxisKind::product, "product"},
};

bool key_less(const RealCell& a, const RealCell& b) {
  return std::tie(a.row, a.col) < std::tie(b.row, b.col);
}

void check_ranges(const AxisLabels& rows, const AxisLabels& cols, std::size_t r,
                  std::size_t c) {
  if (r >= rows.size() || c >= cols.size()) {
    throw ComputeError("cell index out of range");
  }
}

std::vector<std::string> checked_order(const AxisLabels& axis,
                                       std::span<const std::string> order,
                                       const char* what) {
  if (order.size() != axis.size()) {
    throw ComputeError(std::string(what) + " order is not a permutation (size mismatch)");
  }
  std::set<std::string_view> seen;
  for (const auto& id : order) {
    if (!axis.contains(id) || !seen.insert(id).second) {
      throw ComputeError(std::string(what) + " order is not a permutation (id '" + id + "')");
    }
  }
  return {order.begin(), order.end()};
}

}  // namespace

std::string_view to_string(AxisKind kind) {
  for (const auto& [k, name] : kAxisNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

AxisKind parse_axis_kind(std::string_view name) {
  for (const auto& [k, n] : kAxisNames) {
    if (n == name) return k;
  }
  throw ComputeError("unknown axis kind '" + std::string(name) + "'");
}

AxisLabels::AxisLabels(AxisKind kind, std::vector<std::string> ids)
    : kind_(kind), ids_(std::move(ids)) {
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], i).second) {
      throw ComputeError("duplicate id '" + ids_[i] + "' on " +
                         std::string(to_string(kind_)) + " axis");
    }
  }
}

AxisLabels AxisLabels::sorted(AxisKind kind, std::vector<std::string> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return AxisLabels(kind, std::move(ids));
}

std::optional<std::size_t> AxisLabels::find(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t AxisLabels::index_of(std::string_view id) const {
  auto i = find(id);
  if (!i) {
    throw ComputeError("id '" + std::string(id) + "' not on " +
                       std::string(to_string(kind_)) + " axis");
  }
  return *i;
}

namespace detail {

SparseReal::SparseReal(AxisLabels rows, AxisLabels cols, std::vector<RealCell> cells)
    : rows_(std::move(rows)), cols_(std::move(cols)), cells_(std::move(cells)) {
  std::sort(cells_.begin(), cells_.end(), key_less);
  for (std::size_t k = 0; k < cells_.size(); ++k) {
    check_ranges(rows_, cols_, cells_[k].row, cells_[k].col);
    if (k > 0 && cells_[k - 1].row == cells_[k].row && cells_[k - 1].col == cells_[k].col) {
      throw ComputeError("duplicate cell (" + rows_[cells_[k].row] + ", " +
                         cols_[cells_[k].col] + ")");
    }
  }
}

std::optional<double> SparseReal::find(std::size_t row, std::size_t col) const {
  RealCell probe{row, col, 0.0};
  auto it = std::lower_bound(cells_.begin(), cells_.end(), probe, key_less);
  if (it == cells_.end() || it->row != row || it->col != col) return std::nullopt;
  return it->value;
}

double SparseReal::at(std::size_t row, std::size_t col) const {
  return find(row, col).value_or(0.0);
}

double SparseReal::at(std::string_view row_id, std::string_view col_id) const {
  auto r = rows_.find(row_id);
  auto c = cols_.find(col_id);
  if (!r || !c) return 0.0;
  return at(*r, *c);
}

}  // namespace detail

namespace {

std::vector<RealCell> positive_only(std::vector<RealCell> cells) {
  for (const auto& c : cells) {
    if (!std::isfinite(c.value) || c.value < 0.0) {
      throw ComputeError("weights must be finite and nonnegative");
    }
  }
  std::erase_if(cells, [](const RealCell& c) { return c.value == 0.0; });
  return cells;
}

}  // namespace

WeightedBipartite::WeightedBipartite(AxisLabels rows, AxisLabels cols,
                                     std::vector<RealCell> cells)
    : SparseReal(std::move(rows), std::move(cols), positive_only(std::move(cells))) {}

double WeightedBipartite::total() const {
  double sum = 0.0;
  for (const auto& c : cells_) sum += c.value;
  return sum;
}

QuotientMatrix::QuotientMatrix(AxisLabels rows, AxisLabels cols, std::vector<RealCell> cells)
    : SparseReal(std::move(rows), std::move(cols), positive_only(std::move(cells))) {}

BinaryBipartite::BinaryBipartite(AxisLabels rows, AxisLabels cols, std::vector<CellKey> links)
    : rows_(std::move(rows)), cols_(std::move(cols)), links_(std::move(links)) {
  std::sort(links_.begin(), links_.end());
  links_.erase(std::unique(links_.begin(), links_.end()), links_.end());
  for (const auto& [r, c] : links_) check_ranges(rows_, cols_, r, c);
}

bool BinaryBipartite::contains(std::size_t row, std::size_t col) const {
  return std::binary_search(links_.begin(), links_.end(), CellKey{row, col});
}

bool BinaryBipartite::contains(std::string_view row_id, std::string_view col_id) const {
  auto r = rows_.find(row_id);
  auto c = cols_.find(col_id);
  return r && c && contains(*r, *c);
}

std::vector<std::size_t> BinaryBipartite::row_degrees() const {
  std::vector<std::size_t> deg(rows_.size(), 0);
  for (const auto& [r, c] : links_) ++deg[r];
  return deg;
}

std::vector<std::size_t> BinaryBipartite::col_degrees() const {
  std::vector<std::size_t> deg(cols_.size(), 0);
  for (const auto& [r, c] : links_) ++deg[c];
  return deg;
}

std::vector<std::vector<std::size_t>> BinaryBipartite::row_adjacency() const {
  std::vector<std::vector<std::size_t>> adj(rows_.size());
  for (const auto& [r, c] : links_) adj[r].push_back(c);
  return adj;
}

std::vector<std::vector<std::size_t>> BinaryBipartite::col_adjacency() const {
  std::vector<std::vector<std::size_t>> adj(cols_.size());
  for (const auto& [r, c] : links_) adj[c].push_back(r);
  return adj;
}

void WeightedBuilder::add(const std::string& row_id, const std::string& col_id,
                          double weight) {
  if (!std::isfinite(weight) || weight < 0.0) {
    throw ComputeError("weight for (" + row_id + ", " + col_id +
                       ") must be finite and nonnegative");
  }
  cells_[{row_id, col_id}] += weight;
}

WeightedBipartite WeightedBuilder::build() const {
  std::vector<std::string> row_ids = extra_rows_;
  std::vector<std::string> col_ids = extra_cols_;
  for (const auto& [key, w] : cells_) {
    row_ids.push_back(key.first);
    col_ids.push_back(key.second);
  }
  auto rows = AxisLabels::sorted(row_kind_, std::move(row_ids));
  auto cols = AxisLabels::sorted(col_kind_, std::move(col_ids));
  std::vector<RealCell> cells;
  cells.reserve(cells_.size());
  for (const auto& [key, w] : cells_) {
    cells.push_back({rows.index_of(key.first), cols.index_of(key.second), w});
  }
  return WeightedBipartite(std::move(rows), std::move(cols), std::move(cells));
}

std::vector<double> row_sums(const WeightedBipartite& m) {
  std::vector<double> sums(m.rows().size(), 0.0);
  for (const auto& c : m.cells()) sums[c.row] += c.value;
  return sums;
}

std::vector<double> col_sums(const WeightedBipartite& m) {
  std::vector<double> sums(m.cols().size(), 0.0);
  for (const auto& c : m.cells()) sums[c.col] += c.value;
  return sums;
}

DropReport drop_empty(const BinaryBipartite& m) {
  const auto rdeg = m.row_degrees();
  const auto cdeg = m.col_degrees();
  DropReport report;
  std::vector<std::string> row_ids, col_ids;
  for (std::size_t r = 0; r < rdeg.size(); ++r) {
    (rdeg[r] > 0 ? row_ids : report.removed_rows).push_back(m.rows()[r]);
  }
  for (std::size_t c = 0; c < cdeg.size(); ++c) {
    (cdeg[c] > 0 ? col_ids : report.removed_cols).push_back(m.cols()[c]);
  }
  if (row_ids.empty() || col_ids.empty()) {
    throw ComputeError("matrix is empty after dropping empty rows and columns");
  }
  AxisLabels rows(m.rows().kind(), std::move(row_ids));
  AxisLabels cols(m.cols().kind(), std::move(col_ids));
  std::vector<CellKey> links;
  links.reserve(m.nnz());
  for (const auto& [r, c] : m.links()) {
    links.emplace_back(rows.index_of(m.rows()[r]), cols.index_of(m.cols()[c]));
  }
  report.matrix = BinaryBipartite(std::move(rows), std::move(cols), std::move(links));
  return report;
}

BinaryBipartite permute(const BinaryBipartite& m, std::span<const std::string> row_order,
                        std::span<const std::string> col_order) {
  AxisLabels rows(m.rows().kind(), checked_order(m.rows(), row_order, "row"));
  AxisLabels cols(m.cols().kind(), checked_order(m.cols(), col_order, "column"));
  std::vector<CellKey> links;
  links.reserve(m.nnz());
  for (const auto& [r, c] : m.links()) {
    links.emplace_back(rows.index_of(m.rows()[r]), cols.index_of(m.cols()[c]));
  }
  return BinaryBipartite(std::move(rows), std::move(cols), std::move(links));
}

BinaryBipartite transpose(const BinaryBipartite& m) {
  std::vector<CellKey> links;
  links.reserve(m.nnz());
  for (const auto& [r, c] : m.links()) links.emplace_back(c, r);
  return BinaryBipartite(m.cols(), m.rows(), std::move(links));
}

WeightedBipartite transpose(const WeightedBipartite& m) {
  std::vector<RealCell> cells;
  cells.reserve(m.nnz());
  for (const auto& c : m.cells()) cells.push_back({c.col, c.row, c.value});
  return WeightedBipartite(m.cols(), m.rows(), std::move(cells));
}

WeightedBipartite restrict_rows(const WeightedBipartite& m, std::span<const std::string> keep) {
  std::vector<std::string> ids;
  for (const auto& id : keep) {
    if (m.rows().contains(id)) ids.push_back(id);
  }
  auto rows = AxisLabels::sorted(m.rows().kind(), std::move(ids));
  std::vector<RealCell> cells;
  for (const auto& c : m.cells()) {
    if (auto r = rows.find(m.rows()[c.row])) cells.push_back({*r, c.col, c.value});
  }
  return WeightedBipartite(std::move(rows), m.cols(), std::move(cells));
}

}  // namespace ecomplex
