#include "ecomplex/quotient.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ecomplex/csv.hpp"
#include "ecomplex/errors.hpp"

namespace ecomplex {

void QuotientSpec::validate() const {
  if (!(threshold > 0.0) || !std::isfinite(threshold)) {
    throw ConfigError("quotient threshold must be positive");
  }
}

QuotientMatrix balassa_quotient(const WeightedBipartite& w) {
  const auto rsum = row_sums(w);
  const auto csum = col_sums(w);
  const double total = w.total();
  if (!(total > 0.0)) throw ComputeError("balassa quotient of a matrix with zero total weight");

  std::vector<RealCell> cells;
  cells.reserve(w.nnz());
  for (const auto& c : w.cells()) {
    const double q = (c.value / csum[c.col]) / (rsum[c.row] / total);
    cells.push_back({c.row, c.col, q});
  }
  return QuotientMatrix(w.rows(), w.cols(), std::move(cells));
}

BinaryBipartite binarize(const QuotientMatrix& q, const QuotientSpec& spec) {
  spec.validate();
  std::vector<CellKey> links;
  for (const auto& c : q.cells()) {
    if (c.value > spec.threshold) links.emplace_back(c.row, c.col);
  }
  return BinaryBipartite(q.rows(), q.cols(), std::move(links));
}

BinaryBipartite binarize_skills(const SkillImportanceTable& table, SkillMeanRule rule) {
  const auto& m = table.importance;
  if (m.nnz() == 0) throw ComputeError("skill importance table is empty");
  const std::size_t n_rows = m.rows().size();
  std::vector<double> count(n_rows, 0.0);
  std::vector<double> low(n_rows, std::numeric_limits<double>::infinity());
  for (const auto& c : m.cells()) {
    count[c.row] += 1.0;
    low[c.row] = std::min(low[c.row], c.value);
  }
  if (rule == SkillMeanRule::all_with_zeros) {
    for (std::size_t r = 0; r < n_rows; ++r) {
      if (count[r] < static_cast<double>(m.cols().size())) low[r] = 0.0;
      count[r] = static_cast<double>(m.cols().size());
    }
  }
  // Mean accumulated relative to the row minimum so a constant row reproduces
  // its value exactly and never links to itself.
  std::vector<double> excess(n_rows, 0.0);
  for (const auto& c : m.cells()) excess[c.row] += c.value - low[c.row];
  std::vector<CellKey> links;
  for (const auto& c : m.cells()) {
    const double mean = low[c.row] + excess[c.row] / count[c.row];
    if (c.value > mean) links.emplace_back(c.row, c.col);
  }
  return BinaryBipartite(m.rows(), m.cols(), std::move(links));
}

void write_quotient_csv(std::ostream& out, const QuotientMatrix& q) {
  csv::write_row(out, {"row_id", "col_id", "quotient"});
  for (const auto& c : q.cells()) {
    csv::write_row(out, {q.rows()[c.row], q.cols()[c.col], csv::format_double(c.value)});
  }
}

void write_binary_csv(std::ostream& out, const BinaryBipartite& m) {
  csv::write_row(out, {"row_id", "col_id"});
  for (const auto& [r, c] : m.links()) csv::write_row(out, {m.rows()[r], m.cols()[c]});
}

BinaryBipartite read_binary_csv(std::istream& in, const std::string& source, AxisKind row_kind,
                                AxisKind col_kind) {
  csv::Reader reader(in, source);
  reader.expect_header({"row_id", "col_id"});
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<std::string> rows, cols;
  while (reader.next()) {
    pairs.emplace_back(reader.text(0), reader.text(1));
    rows.push_back(pairs.back().first);
    cols.push_back(pairs.back().second);
  }
  auto row_axis = AxisLabels::sorted(row_kind, std::move(rows));
  auto col_axis = AxisLabels::sorted(col_kind, std::move(cols));
  std::vector<CellKey> links;
  links.reserve(pairs.size());
  for (const auto& [r, c] : pairs) links.emplace_back(row_axis.index_of(r), col_axis.index_of(c));
  return BinaryBipartite(std::move(row_axis), std::move(col_axis), std::move(links));
}

}  // namespace ecomplex
