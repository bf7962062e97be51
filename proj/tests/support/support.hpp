#pragma once

// Helpers shared by the unit and acceptance tests: dense builders, random
// matrices, and reference implementations written independently of the
// library (plain loops and normal equations).

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ecomplex/matrix.hpp"

namespace support {

using Dense = std::vector<std::vector<int>>;

inline std::vector<std::string> ids(const std::string& prefix, std::size_t n) {
  // Zero-padded so that lexicographic order equals index order.
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto s = std::to_string(i);
    out.push_back(prefix + std::string(3 - std::min<std::size_t>(3, s.size()), '0') + s);
  }
  return out;
}

inline ecomplex::BinaryBipartite binary(const Dense& m,
                                        ecomplex::AxisKind rk = ecomplex::AxisKind::county,
                                        ecomplex::AxisKind ck = ecomplex::AxisKind::industry) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  std::vector<ecomplex::CellKey> links;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (m[r][c]) links.emplace_back(r, c);
    }
  }
  return {ecomplex::AxisLabels(rk, ids("r", rows)), ecomplex::AxisLabels(ck, ids("c", cols)),
          std::move(links)};
}

inline ecomplex::WeightedBipartite weighted(const std::vector<std::vector<double>>& m,
                                            ecomplex::AxisKind rk = ecomplex::AxisKind::county,
                                            ecomplex::AxisKind ck = ecomplex::AxisKind::industry) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  std::vector<ecomplex::RealCell> cells;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (m[r][c] != 0.0) cells.push_back({r, c, m[r][c]});
    }
  }
  return {ecomplex::AxisLabels(rk, ids("r", rows)), ecomplex::AxisLabels(ck, ids("c", cols)),
          std::move(cells)};
}

// Random binary matrix without empty rows or columns whose bipartite graph
// is connected.
inline Dense random_connected(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                              double density) {
  std::bernoulli_distribution coin(density);
  for (;;) {
    Dense m(rows, std::vector<int>(cols, 0));
    for (auto& row : m) {
      for (auto& v : row) v = coin(rng) ? 1 : 0;
    }
    // Union-find over rows (0..rows-1) and columns (rows..rows+cols-1).
    std::vector<std::size_t> parent(rows + cols);
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        if (m[r][c]) parent[find(r)] = find(rows + c);
      }
    }
    bool connected = true;
    for (std::size_t i = 1; i < parent.size(); ++i) connected &= find(i) == find(0);
    if (connected) return m;
  }
}

struct NaiveEfc {
  std::vector<double> fitness;
  std::vector<double> complexity;
};

// Plain transcription of the coupled map with mean normalization, no
// freezing, no convergence test.
inline NaiveEfc naive_efc(const Dense& m, int iterations, std::vector<double> f = {},
                          std::vector<double> q = {}) {
  const std::size_t rows = m.size(), cols = m[0].size();
  if (f.empty()) f.assign(rows, 1.0);
  if (q.empty()) q.assign(cols, 1.0);
  for (int it = 0; it < iterations; ++it) {
    std::vector<double> fn(rows, 0.0), qn(cols, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        if (m[r][c]) fn[r] += q[c];
      }
    }
    for (std::size_t c = 0; c < cols; ++c) {
      double s = 0.0;
      for (std::size_t r = 0; r < rows; ++r) {
        if (m[r][c]) s += 1.0 / f[r];
      }
      qn[c] = 1.0 / s;
    }
    double fm = 0.0, qm = 0.0;
    for (double v : fn) fm += v;
    for (double v : qn) qm += v;
    fm /= static_cast<double>(rows);
    qm /= static_cast<double>(cols);
    for (auto& v : fn) v /= fm;
    for (auto& v : qn) v /= qm;
    f.swap(fn);
    q.swap(qn);
  }
  return {f, q};
}

struct OlsOracle {
  Eigen::VectorXd beta;
  Eigen::MatrixXd cov;
};

// Normal equations with an explicit inverse; covariance "classical", "hc1"
// or "cluster" (groups must then be given).
inline OlsOracle ols_oracle(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                            const std::string& type, const std::vector<std::string>& groups = {}) {
  const double n = static_cast<double>(x.rows()), k = static_cast<double>(x.cols());
  const Eigen::MatrixXd xtx_inv = (x.transpose() * x).inverse();
  OlsOracle o;
  o.beta = xtx_inv * x.transpose() * y;
  const Eigen::VectorXd e = y - x * o.beta;
  if (type == "classical") {
    o.cov = xtx_inv * (e.squaredNorm() / (n - k));
  } else if (type == "hc1") {
    Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(x.cols(), x.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      meat += e(i) * e(i) * x.row(i).transpose() * x.row(i);
    }
    o.cov = xtx_inv * meat * xtx_inv * (n / (n - k));
  } else {
    std::vector<std::string> labels = groups;
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(x.cols(), x.cols());
    for (const auto& g : labels) {
      Eigen::VectorXd s = Eigen::VectorXd::Zero(x.cols());
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        if (groups[static_cast<std::size_t>(i)] == g) s += x.row(i).transpose() * e(i);
      }
      meat += s * s.transpose();
    }
    const double gs = static_cast<double>(labels.size());
    o.cov = xtx_inv * meat * xtx_inv * (gs / (gs - 1.0)) * ((n - 1.0) / (n - k));
  }
  return o;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("ecomplex_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace support
