#pragma once

// Report artifacts: hidden-vs-revealed scatter (CSV, SVG, outlier sidecar),
// county fitness distribution diagnostics and choropleth-ready CSVs.

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ecomplex/aggregate.hpp"

namespace ecomplex {

// Type-7 sample quantile (linear interpolation between order statistics) of
// ascending `sorted`, p in [0, 1].
double quantile(std::span<const double> sorted, double p);

struct OutlierRule {
  // A point is an outlier when revealed < q1 - iqr_multiplier * IQR, with
  // quartiles of the revealed values over the plotted set. Disabled when
  // negative.
  double iqr_multiplier = 3.0;
};

struct ScatterPoint {
  std::string id;
  double hidden = 0.0;
  double revealed = 0.0;
  bool is_outlier = false;
};

struct ScatterReport {
  std::vector<ScatterPoint> points;  // intersection of coverages, sorted by id
  double q1 = 0.0;
  double q3 = 0.0;
  double cutoff = 0.0;  // revealed values below this are outliers
};

// Throws ComputeError when the coverages do not intersect.
ScatterReport report_scatter(const IndustryComplexity& hidden, const IndustryComplexity& revealed,
                             const OutlierRule& rule = {});

// `naics4,hidden,revealed,is_outlier`
void write_scatter_csv(std::ostream& out, const ScatterReport& report);
// Outliers only: `naics4,hidden,revealed`
void write_outlier_csv(std::ostream& out, const ScatterReport& report);
// Scatter of the non-outlier points; outliers are listed in a caption.
void write_scatter_svg(std::ostream& out, const ScatterReport& report);

// Histogram of log10 fitness over covered counties with strictly positive
// values. A histogram mode is a local maximum of the zero-padded counts whose
// topographic prominence reaches `min_prominence` x (number of values).
struct DistributionOptions {
  int bins = 30;
  double underflow_floor = 1e-14;
  double min_prominence = 0.05;
};

struct DistributionReport {
  FitnessProvenance provenance = FitnessProvenance::job_based;
  std::size_t n = 0;           // covered counties
  std::size_t nonpositive = 0;  // excluded from the log histogram
  double lower = 0.0;          // log10 range of the histogram
  double upper = 0.0;
  std::vector<std::size_t> counts;
  int modes = 0;
  double below_floor_fraction = 0.0;
};

DistributionReport report_distribution(const CountyFitness& f, const DistributionOptions& opt = {});

// Number of prominent local maxima of `counts` (padded with zeros on both
// sides), prominence threshold in absolute counts.
int count_modes(std::span<const std::size_t> counts, double min_prominence);

// `bin,log10_lower,log10_upper,count`
void write_histogram_csv(std::ostream& out, const DistributionReport& report);
// `provenance,n,nonpositive,bins,modes,below_floor_fraction`
void write_distribution_summary_csv(std::ostream& out,
                                    const std::vector<DistributionReport>& reports);

// `fips,value,covered`, one row per county of the universe.
void report_choropleth(std::ostream& out, const CountyFitness& f);

}  // namespace ecomplex
