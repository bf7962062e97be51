#pragma once

// Balassa-family quotients (RCA for exports, IWQ for job-industry wage bills,
// WLQ for county-industry wage bills) and their thresholding into binary
// networks. All three quotients share one formula:
//
//   Q_rc = (w_rc / sum_r' w_r'c) / (sum_c' w_rc' / sum_r'c' w_r'c')
//
// which is symmetric in the roles of rows and columns.

#include <istream>
#include <ostream>
#include <string>

#include "ecomplex/ingest.hpp"
#include "ecomplex/matrix.hpp"

namespace ecomplex {

struct QuotientSpec {
  double threshold = 1.0;  // links are kept where quotient > threshold

  void validate() const;
};

// Throws ComputeError when the total weight is zero.
QuotientMatrix balassa_quotient(const WeightedBipartite& w);

BinaryBipartite binarize(const QuotientMatrix& q, const QuotientSpec& spec = {});

// Which occupations enter the per-skill mean importance.
enum class SkillMeanRule {
  rated_only,      // occupations with a recorded importance for the skill
  all_with_zeros,  // every occupation on the axis; unrated pairs count as 0
};

// Link (skill, job) iff importance strictly exceeds the skill's mean.
BinaryBipartite binarize_skills(const SkillImportanceTable& table,
                                SkillMeanRule rule = SkillMeanRule::rated_only);

// `row_id,col_id,quotient` with 12 significant digits.
void write_quotient_csv(std::ostream& out, const QuotientMatrix& q);

// `row_id,col_id`, one row per link. Reading rebuilds sorted axes from the
// links, so rows or columns without links do not survive a round trip.
void write_binary_csv(std::ostream& out, const BinaryBipartite& m);
BinaryBipartite read_binary_csv(std::istream& in, const std::string& source, AxisKind row_kind,
                                AxisKind col_kind);

}  // namespace ecomplex
