#include "ecomplex/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ecomplex/csv.hpp"
#include "ecomplex/errors.hpp"

namespace ecomplex {

double quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw ComputeError("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * std::clamp(p, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

ScatterReport report_scatter(const IndustryComplexity& hidden, const IndustryComplexity& revealed,
                             const OutlierRule& rule) {
  ScatterReport r;
  for (const auto& [id, x] : hidden.values) {
    if (auto y = revealed.find(id)) r.points.push_back({id, x, *y, false});
  }
  if (r.points.empty()) throw ComputeError("scatter: hidden and revealed coverages are disjoint");
  std::vector<double> ys;
  for (const auto& p : r.points) ys.push_back(p.revealed);
  std::sort(ys.begin(), ys.end());
  r.q1 = quantile(ys, 0.25);
  r.q3 = quantile(ys, 0.75);
  r.cutoff = rule.iqr_multiplier < 0.0 ? -std::numeric_limits<double>::infinity()
                                       : r.q1 - rule.iqr_multiplier * (r.q3 - r.q1);
  for (auto& p : r.points) p.is_outlier = p.revealed < r.cutoff;
  return r;
}

void write_scatter_csv(std::ostream& out, const ScatterReport& report) {
  csv::write_row(out, {"naics4", "hidden", "revealed", "is_outlier"});
  for (const auto& p : report.points) {
    csv::write_row(out, {p.id, csv::format_double(p.hidden), csv::format_double(p.revealed),
                         p.is_outlier ? "true" : "false"});
  }
}

void write_outlier_csv(std::ostream& out, const ScatterReport& report) {
  csv::write_row(out, {"naics4", "hidden", "revealed"});
  for (const auto& p : report.points) {
    if (p.is_outlier) {
      csv::write_row(out, {p.id, csv::format_double(p.hidden), csv::format_double(p.revealed)});
    }
  }
}

void write_scatter_svg(std::ostream& out, const ScatterReport& report) {
  constexpr double kW = 480, kH = 400, kLeft = 60, kRight = 20, kTop = 20, kBottom = 70;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  std::size_t outliers = 0;
  for (const auto& p : report.points) {
    if (p.is_outlier) {
      ++outliers;
      continue;
    }
    x0 = std::min(x0, p.hidden), x1 = std::max(x1, p.hidden);
    y0 = std::min(y0, p.revealed), y1 = std::max(y1, p.revealed);
  }
  if (outliers == report.points.size()) x0 = y0 = 0.0, x1 = y1 = 1.0;
  if (x1 <= x0) x0 -= 0.5, x1 += 0.5;
  if (y1 <= y0) y0 -= 0.5, y1 += 0.5;
  auto fx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * (kW - kLeft - kRight); };
  auto fy = [&](double y) { return kH - kBottom - (y - y0) / (y1 - y0) * (kH - kTop - kBottom); };
  auto num = [](double v) { return csv::format_double(std::round(v * 100.0) / 100.0); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kH - kBottom << "\" x2=\"" << kW - kRight
      << "\" y2=\"" << kH - kBottom << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kH - kBottom << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = x0 + (x1 - x0) * t / 4.0, yv = y0 + (y1 - y0) * t / 4.0;
    out << "<text x=\"" << num(fx(xv)) << "\" y=\"" << kH - kBottom + 14
        << "\" text-anchor=\"middle\">" << csv::format_double(std::round(xv * 1000) / 1000)
        << "</text>\n";
    out << "<text x=\"" << kLeft - 4 << "\" y=\"" << num(fy(yv) + 4)
        << "\" text-anchor=\"end\">" << csv::format_double(std::round(yv * 1000) / 1000)
        << "</text>\n";
  }
  out << "<text x=\"" << (kLeft + kW - kRight) / 2 << "\" y=\"" << kH - kBottom + 32
      << "\" text-anchor=\"middle\">hidden complexity</text>\n";
  out << "<text transform=\"translate(14," << (kTop + kH - kBottom) / 2
      << ") rotate(-90)\" text-anchor=\"middle\">revealed complexity</text>\n";
  for (const auto& p : report.points) {
    if (p.is_outlier) continue;
    out << "<circle cx=\"" << num(fx(p.hidden)) << "\" cy=\"" << num(fy(p.revealed))
        << "\" r=\"3\" fill=\"steelblue\" fill-opacity=\"0.7\"><title>" << p.id
        << "</title></circle>\n";
  }
  out << "<text x=\"" << kLeft << "\" y=\"" << kH - 12 << "\">" << outliers
      << " outlier(s) not shown";
  if (outliers > 0) {
    out << ":";
    for (const auto& p : report.points) {
      if (p.is_outlier) out << ' ' << p.id;
    }
  }
  out << "</text>\n</svg>\n";
}

int count_modes(std::span<const std::size_t> counts, double min_prominence) {
  std::vector<double> h;
  h.reserve(counts.size() + 2);
  h.push_back(0.0);
  for (auto c : counts) h.push_back(static_cast<double>(c));
  h.push_back(0.0);
  int modes = 0;
  std::size_t i = 1;
  while (i + 1 < h.size()) {
    // Plateau [i, j) of equal heights.
    std::size_t j = i;
    while (j + 1 < h.size() && h[j + 1] == h[i]) ++j;
    const bool peak = h[i] > h[i - 1] && j + 1 < h.size() && h[i] > h[j + 1];
    if (peak) {
      // Equal heights to the left count as higher so that tied peaks are
      // not both credited with full prominence.
      double left_min = h[i];
      for (std::size_t k = i; k-- > 0;) {
        if (h[k] >= h[i]) break;
        left_min = std::min(left_min, h[k]);
      }
      double right_min = h[i];
      for (std::size_t k = j + 1; k < h.size(); ++k) {
        if (h[k] > h[i]) break;
        right_min = std::min(right_min, h[k]);
      }
      if (h[i] - std::max(left_min, right_min) >= min_prominence) ++modes;
    }
    i = j + 1;
  }
  return modes;
}

DistributionReport report_distribution(const CountyFitness& f, const DistributionOptions& opt) {
  if (opt.bins < 1) throw ConfigError("histogram needs >= 1 bin");
  DistributionReport r;
  r.provenance = f.provenance;
  r.n = f.values.size();
  std::vector<double> logs;
  std::size_t below = 0;
  for (const auto& [id, v] : f.values) {
    if (v < opt.underflow_floor) ++below;
    if (v > 0.0) {
      logs.push_back(std::log10(v));
    } else {
      ++r.nonpositive;
    }
  }
  r.below_floor_fraction = r.n == 0 ? 0.0 : static_cast<double>(below) / static_cast<double>(r.n);
  if (logs.empty()) return r;
  const auto [lo, hi] = std::minmax_element(logs.begin(), logs.end());
  r.lower = *lo;
  r.upper = *hi;
  // Spreads below 1e-9 decades are treated as constant.
  const bool constant = r.upper - r.lower < 1e-9;
  r.counts.assign(constant ? 1 : static_cast<std::size_t>(opt.bins), 0);
  for (double x : logs) {
    std::size_t b = 0;
    if (!constant) {
      b = static_cast<std::size_t>((x - r.lower) / (r.upper - r.lower) * opt.bins);
      b = std::min(b, r.counts.size() - 1);
    }
    ++r.counts[b];
  }
  r.modes = count_modes(r.counts, opt.min_prominence * static_cast<double>(logs.size()));
  return r;
}

void write_histogram_csv(std::ostream& out, const DistributionReport& report) {
  csv::write_row(out, {"bin", "log10_lower", "log10_upper", "count"});
  const auto bins = report.counts.size();
  for (std::size_t b = 0; b < bins; ++b) {
    const double width = (report.upper - report.lower) / static_cast<double>(bins);
    const double lo = report.lower + width * static_cast<double>(b);
    const double hi = b + 1 == bins ? report.upper : lo + width;
    csv::write_row(out, {std::to_string(b), csv::format_double(lo), csv::format_double(hi),
                         std::to_string(report.counts[b])});
  }
}

void write_distribution_summary_csv(std::ostream& out,
                                    const std::vector<DistributionReport>& reports) {
  csv::write_row(out, {"provenance", "n", "nonpositive", "bins", "modes", "below_floor_fraction"});
  for (const auto& r : reports) {
    csv::write_row(out, {to_string(r.provenance), std::to_string(r.n), std::to_string(r.nonpositive),
                         std::to_string(r.counts.size()), std::to_string(r.modes),
                         csv::format_double(r.below_floor_fraction)});
  }
}

void report_choropleth(std::ostream& out, const CountyFitness& f) {
  csv::write_row(out, {"fips", "value", "covered"});
  for (const auto& id : f.universe) {
    auto v = f.find(id);
    csv::write_row(out, {id, v ? csv::format_double(*v) : "", v ? "true" : "false"});
  }
}

}  // namespace ecomplex
