// Copyright 2026 The sgsample Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "sgs/errors.hpp"
#include "sgs/gaussian.hpp"
#include "sgs/rng.hpp"

namespace sgs {

// A finite set of points in R^p, one row per point. Equal-size sets are the
// empirical proxies between which transport distances are computed.
struct SampleSet {
  Eigen::MatrixXd points;

  explicit SampleSet(Eigen::MatrixXd pts) : points(std::move(pts)) {
    if (points.rows() < 1) {
      throw std::invalid_argument("SampleSet: need at least one point");
    }
    if (!points.allFinite()) {
      throw std::invalid_argument("SampleSet: points must be finite");
    }
  }

  int count() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }
};

namespace detail {

// Exact minimum-cost perfect matching on a dense square cost matrix via
// shortest augmenting paths with dual potentials, O(N^3). Returns the
// column matched to each row.
inline std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      int j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n);
  for (int j = 1; j <= n; ++j) row_to_col[match[j] - 1] = j - 1;
  return row_to_col;
}

// Lexicographic order on flattened point arrays; used to canonicalize the
// argument order so that w2_empirical(a, b) == w2_empirical(b, a) exactly.
inline bool points_before(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double x = a.data()[i];
    const double y = b.data()[i];
    if (x != y) return x < y;
  }
  return false;
}

}  // namespace detail

// Wasserstein-2 distance between two Gaussian laws (Bures formula):
//   W2^2 = ||mu1 - mu2||^2 + tr(S1 + S2 - 2 (S1^{1/2} S2 S1^{1/2})^{1/2}).
// Covariances must be symmetric PSD within `tol`; eigenvalues in [-tol, 0)
// are clamped to zero.
inline double w2_gaussian(const GaussianLaw& a, const GaussianLaw& b,
                          double tol = 1e-8) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("w2_gaussian: dimension mismatch");
  }
  const Eigen::MatrixXd sa = symmetrize_psd(a.cov, tol);
  const Eigen::MatrixXd sb = symmetrize_psd(b.cov, tol);
  const Eigen::MatrixXd root_a = psd_sqrt(sa);
  const Eigen::MatrixXd inner = root_a * sb * root_a;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (inner + inner.transpose()));
  const double cross = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  const double sq = (a.mean - b.mean).squaredNorm() + sa.trace() +
                    sb.trace() - 2.0 * cross;
  return std::sqrt(std::max(0.0, sq));
}

// Wasserstein-2 distance between equal-size empirical measures: the exact
// minimum-cost perfect matching under squared Euclidean costs,
// sqrt(mean matched squared distance). Sets are capped at 4096 points
// (the solver is cubic).
inline double w2_empirical(const SampleSet& a, const SampleSet& b) {
  if (a.count() != b.count()) {
    throw std::invalid_argument("w2_empirical: sets must have equal size");
  }
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("w2_empirical: dimension mismatch");
  }
  constexpr int kMaxPoints = 4096;
  if (a.count() > kMaxPoints) {
    throw ResourceLimit("w2_empirical: set size exceeds 4096");
  }
  const bool swap = detail::points_before(b.points, a.points);
  const Eigen::MatrixXd& lhs = swap ? b.points : a.points;
  const Eigen::MatrixXd& rhs = swap ? a.points : b.points;
  const int n = a.count();
  Eigen::MatrixXd cost(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      cost(i, j) = (lhs.row(i) - rhs.row(j)).squaredNorm();
    }
  }
  const std::vector<int> match = detail::min_cost_assignment(cost);
  double total = 0.0;
  for (int i = 0; i < n; ++i) total += cost(i, match[i]);
  return std::sqrt(total / n);
}

// Empirical W2 between a sample set and a Gaussian law, averaged over
// `reps` reference sets drawn from the law. Deterministic given the seed.
struct W2Estimate {
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<double> replicates;
};

inline W2Estimate w2_empirical_vs_gaussian(const SampleSet& a,
                                           const GaussianLaw& law, int reps,
                                           std::uint64_t seed) {
  if (reps < 1) {
    throw std::invalid_argument("w2_empirical_vs_gaussian: reps must be >= 1");
  }
  if (a.dim() != law.dim()) {
    throw std::invalid_argument("w2_empirical_vs_gaussian: dimension mismatch");
  }
  RngStream rng(seed);
  W2Estimate est;
  est.replicates.reserve(reps);
  for (int r = 0; r < reps; ++r) {
    const SampleSet ref(sample(law, a.count(), rng));
    est.replicates.push_back(w2_empirical(a, ref));
  }
  double sum = 0.0;
  for (double v : est.replicates) sum += v;
  est.mean = sum / reps;
  double ss = 0.0;
  for (double v : est.replicates) ss += (v - est.mean) * (v - est.mean);
  est.stddev = std::sqrt(ss / reps);
  return est;
}

// Monotone (sorted) matching value in one dimension; the classic oracle the
// assignment solver is cross-checked against.
inline double w2_sorted_1d(const SampleSet& a, const SampleSet& b) {
  if (a.dim() != 1 || b.dim() != 1) {
    throw std::invalid_argument("w2_sorted_1d: points must be scalar");
  }
  if (a.count() != b.count()) {
    throw std::invalid_argument("w2_sorted_1d: sets must have equal size");
  }
  std::vector<double> xs(a.points.data(), a.points.data() + a.count());
  std::vector<double> ys(b.points.data(), b.points.data() + b.count());
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    total += (xs[i] - ys[i]) * (xs[i] - ys[i]);
  }
  return std::sqrt(total / static_cast<double>(xs.size()));
}

}  // namespace sgs
