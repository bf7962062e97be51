#pragma once

// Labeled sparse bipartite matrices shared by every stage of the pipeline.
//
// Axes carry opaque string identifiers (SOC codes, NAICS codes, FIPS codes,
// HS codes, ISO3 country codes). Codes are never parsed as numbers so that
// leading zeros survive. Cells are stored as a sorted flat dictionary of
// keys: iteration is always row-major in axis order, which makes every
// downstream reduction deterministic.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ecomplex {

enum class AxisKind { skill, job, industry, county, country, product };

std::string_view to_string(AxisKind kind);
AxisKind parse_axis_kind(std::string_view name);

class AxisLabels {
 public:
  AxisLabels() = default;
  // Keeps the given order; throws ComputeError on duplicate ids.
  AxisLabels(AxisKind kind, std::vector<std::string> ids);

  // Sorts lexicographically and removes duplicates.
  static AxisLabels sorted(AxisKind kind, std::vector<std::string> ids);

  AxisKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::string& operator[](std::size_t i) const { return ids_[i]; }

  std::optional<std::size_t> find(std::string_view id) const;
  // Throws ComputeError when the id is not on the axis.
  std::size_t index_of(std::string_view id) const;
  bool contains(std::string_view id) const { return find(id).has_value(); }

  friend bool operator==(const AxisLabels& a, const AxisLabels& b) {
    return a.kind_ == b.kind_ && a.ids_ == b.ids_;
  }

 private:
  AxisKind kind_ = AxisKind::skill;
  std::vector<std::string> ids_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

struct RealCell {
  std::size_t row;
  std::size_t col;
  double value;

  friend bool operator==(const RealCell&, const RealCell&) = default;
};

using CellKey = std::pair<std::size_t, std::size_t>;

namespace detail {

// Shared storage of the real-valued matrix types. Cells are unique, sorted
// row-major and strictly positive.
class SparseReal {
 public:
  SparseReal() = default;
  SparseReal(AxisLabels rows, AxisLabels cols, std::vector<RealCell> cells);

  const AxisLabels& rows() const noexcept { return rows_; }
  const AxisLabels& cols() const noexcept { return cols_; }
  std::span<const RealCell> cells() const noexcept { return cells_; }
  std::size_t nnz() const noexcept { return cells_.size(); }

  // Zero for absent cells.
  double at(std::size_t row, std::size_t col) const;
  double at(std::string_view row_id, std::string_view col_id) const;
  std::optional<double> find(std::size_t row, std::size_t col) const;

  friend bool operator==(const SparseReal&, const SparseReal&) = default;

 protected:
  AxisLabels rows_;
  AxisLabels cols_;
  std::vector<RealCell> cells_;
};

}  // namespace detail

// Nonnegative weights (wage bills, export values, employment, importance
// scores). Zero weights are not stored.
class WeightedBipartite : public detail::SparseReal {
 public:
  WeightedBipartite() = default;
  // Throws ComputeError on negative/non-finite weights, duplicate cells or
  // out-of-range indices. Zero-weight cells are dropped.
  WeightedBipartite(AxisLabels rows, AxisLabels cols, std::vector<RealCell> cells);

  double total() const;
};

// Balassa-type quotients; present only where the underlying weight was > 0.
class QuotientMatrix : public detail::SparseReal {
 public:
  QuotientMatrix() = default;
  QuotientMatrix(AxisLabels rows, AxisLabels cols, std::vector<RealCell> cells);
};

class BinaryBipartite {
 public:
  BinaryBipartite() = default;
  // Duplicate links are merged; out-of-range indices throw ComputeError.
  BinaryBipartite(AxisLabels rows, AxisLabels cols, std::vector<CellKey> links);

  const AxisLabels& rows() const noexcept { return rows_; }
  const AxisLabels& cols() const noexcept { return cols_; }
  std::span<const CellKey> links() const noexcept { return links_; }
  std::size_t nnz() const noexcept { return links_.size(); }
  bool empty() const noexcept { return links_.empty(); }

  bool contains(std::size_t row, std::size_t col) const;
  bool contains(std::string_view row_id, std::string_view col_id) const;

  std::vector<std::size_t> row_degrees() const;
  std::vector<std::size_t> col_degrees() const;
  // Column indices per row, ascending.
  std::vector<std::vector<std::size_t>> row_adjacency() const;
  // Row indices per column, ascending.
  std::vector<std::vector<std::size_t>> col_adjacency() const;

  friend bool operator==(const BinaryBipartite&, const BinaryBipartite&) = default;

 private:
  AxisLabels rows_;
  AxisLabels cols_;
  std::vector<CellKey> links_;
};

// Accumulates (row id, col id, weight) triples; repeated keys are summed.
// build() produces lexicographically sorted axes.
class WeightedBuilder {
 public:
  WeightedBuilder(AxisKind row_kind, AxisKind col_kind)
      : row_kind_(row_kind), col_kind_(col_kind) {}

  void add(const std::string& row_id, const std::string& col_id, double weight);
  // Registers ids that must appear on an axis even without positive cells.
  void add_row_id(const std::string& id) { extra_rows_.push_back(id); }
  void add_col_id(const std::string& id) { extra_cols_.push_back(id); }

  WeightedBipartite build() const;

 private:
  AxisKind row_kind_;
  AxisKind col_kind_;
  std::map<std::pair<std::string, std::string>, double> cells_;
  std::vector<std::string> extra_rows_;
  std::vector<std::string> extra_cols_;
};

std::vector<double> row_sums(const WeightedBipartite& m);
std::vector<double> col_sums(const WeightedBipartite& m);

struct DropReport {
  BinaryBipartite matrix;
  std::vector<std::string> removed_rows;
  std::vector<std::string> removed_cols;
};

// Removes rows and columns without links. Throws ComputeError when nothing
// is left.
DropReport drop_empty(const BinaryBipartite& m);

// Reorders both axes; orders must be permutations of the existing ids.
BinaryBipartite permute(const BinaryBipartite& m,
                        std::span<const std::string> row_order,
                        std::span<const std::string> col_order);

BinaryBipartite transpose(const BinaryBipartite& m);
WeightedBipartite transpose(const WeightedBipartite& m);

// Keeps only the listed rows (ids absent from the matrix are ignored).
WeightedBipartite restrict_rows(const WeightedBipartite& m,
                                std::span<const std::string> keep);

}  // namespace ecomplex
