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
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "sgs/errors.hpp"
#include "sgs/gaussian.hpp"
#include "sgs/potentials.hpp"

namespace sgs {

// Exact description of an affine-Gaussian chain
//   theta_{k+1} = C (theta_k - mu) + mu + sqrt(v) xi_k,   xi_k ~ N(0, I).
// For a quadratic potential with Hessian A and minimizer mu this covers both
// LMC (C = I - hA, v = 2h) and idealized-noise SGD (v = h^2 n(n-b)/b).
// The contraction is either a scalar c (isotropic) or a symmetric matrix.
struct AffineChainSpec {
  std::variant<double, Eigen::MatrixXd> contraction;
  Eigen::VectorXd drift_target;
  double noise_variance = 0.0;
};

// Per-coordinate noise variance of the idealized SGD model: n(n-b)/b.
// Accepts real-valued b in [1, n].
inline double isotropic_noise_variance(double n, double b) {
  if (!(b >= 1.0 && b <= n)) {
    throw std::invalid_argument(
        "isotropic_noise_variance: need 1 <= b <= n");
  }
  return n * (n - b) / b;
}

inline AffineChainSpec lmc_affine_spec(const DecomposableTarget& target,
                                       double h) {
  if (!target.hessian || !target.stationary) {
    throw UnsupportedTarget("lmc_affine_spec: target has no closed-form law");
  }
  return AffineChainSpec{
      Eigen::MatrixXd(Eigen::MatrixXd::Identity(target.dim, target.dim) -
                      h * *target.hessian),
      target.stationary->mean, 2.0 * h};
}

inline AffineChainSpec idealized_affine_spec(const DecomposableTarget& target,
                                             double h, double b) {
  if (!target.hessian || !target.stationary) {
    throw UnsupportedTarget(
        "idealized_affine_spec: target has no closed-form law");
  }
  return AffineChainSpec{
      Eigen::MatrixXd(Eigen::MatrixXd::Identity(target.dim, target.dim) -
                      h * *target.hessian),
      target.stationary->mean,
      h * h * isotropic_noise_variance(target.n, b)};
}

namespace detail {

// Accumulated per-mode variance after k steps: v * sum_{j<k} c^{2j}.
inline double geometric_variance(double c, double v, std::int64_t k) {
  if (k == 0) return 0.0;
  const double c2 = c * c;
  if (std::abs(1.0 - c2) < 1e-15) return v * static_cast<double>(k);
  return v * (1.0 - std::pow(c2, static_cast<double>(k))) / (1.0 - c2);
}

}  // namespace detail

// Exact law of the k-th iterate: mean_k = mu + C^k (theta0 - mu) and
// cov_k from the recursion cov_{k+1} = C cov_k C' + v I, started at zero.
inline GaussianLaw gaussian_chain_law(const AffineChainSpec& spec,
                                      const Eigen::VectorXd& theta0,
                                      std::int64_t k) {
  if (k < 0) throw std::invalid_argument("gaussian_chain_law: k must be >= 0");
  const Eigen::VectorXd centered = theta0 - spec.drift_target;
  if (std::holds_alternative<double>(spec.contraction)) {
    const double c = std::get<double>(spec.contraction);
    const double ck = std::pow(c, static_cast<double>(k));
    const double var = detail::geometric_variance(c, spec.noise_variance, k);
    const auto p = theta0.size();
    return GaussianLaw{spec.drift_target + ck * centered,
                       var * Eigen::MatrixXd::Identity(p, p)};
  }
  const Eigen::MatrixXd& C = std::get<Eigen::MatrixXd>(spec.contraction);
  if (C.rows() != C.cols() || C.rows() != theta0.size()) {
    throw std::invalid_argument("gaussian_chain_law: contraction shape");
  }
  if ((C - C.transpose()).cwiseAbs().maxCoeff() >
      1e-10 * std::max(1.0, C.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument(
        "gaussian_chain_law: contraction matrix must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 *
                                                    (C + C.transpose()));
  const Eigen::MatrixXd& U = es.eigenvectors();
  const Eigen::VectorXd& d = es.eigenvalues();
  Eigen::VectorXd dk(d.size());
  Eigen::VectorXd var(d.size());
  for (int i = 0; i < d.size(); ++i) {
    dk[i] = std::pow(d[i], static_cast<double>(k));
    var[i] = detail::geometric_variance(d[i], spec.noise_variance, k);
  }
  const Eigen::VectorXd mean =
      spec.drift_target + U * (dk.asDiagonal() * (U.transpose() * centered));
  const Eigen::MatrixXd cov = U * var.asDiagonal() * U.transpose();
  return GaussianLaw{mean, cov};
}

// Stationary law of the chain (k -> infinity); requires spectral radius < 1.
inline GaussianLaw stationary_chain_law(const AffineChainSpec& spec) {
  if (std::holds_alternative<double>(spec.contraction)) {
    const double c = std::get<double>(spec.contraction);
    if (!(std::abs(c) < 1.0)) {
      throw std::invalid_argument(
          "stationary_chain_law: |contraction| must be < 1");
    }
    const auto p = spec.drift_target.size();
    return GaussianLaw{spec.drift_target,
                       spec.noise_variance / (1.0 - c * c) *
                           Eigen::MatrixXd::Identity(p, p)};
  }
  const Eigen::MatrixXd& C = std::get<Eigen::MatrixXd>(spec.contraction);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 *
                                                    (C + C.transpose()));
  if (es.eigenvalues().cwiseAbs().maxCoeff() >= 1.0) {
    throw std::invalid_argument(
        "stationary_chain_law: spectral radius must be < 1");
  }
  Eigen::VectorXd var(es.eigenvalues().size());
  for (int i = 0; i < var.size(); ++i) {
    const double c = es.eigenvalues()[i];
    var[i] = spec.noise_variance / (1.0 - c * c);
  }
  return GaussianLaw{spec.drift_target, es.eigenvectors() * var.asDiagonal() *
                                            es.eigenvectors().transpose()};
}

namespace detail {

// Compensated accumulator; the variance formula cancels large terms.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - compensation_;
    const double t = sum_ + y;
    compensation_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

inline double binomial_checked(int n, int b, double guard) {
  double c = 1.0;
  for (int i = 1; i <= b; ++i) {
    c *= static_cast<double>(n - b + i) / static_cast<double>(i);
    if (c > guard) return c;
  }
  return c;
}

}  // namespace detail

// Closed-form variance of X = (n/b) * sum_{i in I} a_i over uniformly random
// size-b subsets I:
//   V[X] = ((n-b)/b) sum_i a_i^2 + ((b-n)/(nb-b)) sum_{i != j} a_i a_j.
inline double subset_estimator_variance_formula(std::span<const double> a,
                                                int b) {
  const int n = static_cast<int>(a.size());
  if (n < 2) {
    throw std::invalid_argument(
        "subset_estimator_variance_formula: need n >= 2");
  }
  if (b < 1 || b > n) {
    throw std::invalid_argument(
        "subset_estimator_variance_formula: need 1 <= b <= n");
  }
  detail::KahanSum sum;
  detail::KahanSum sum_sq;
  for (double x : a) {
    sum.add(x);
    sum_sq.add(x * x);
  }
  const double cross = sum.value() * sum.value() - sum_sq.value();
  const double nb = static_cast<double>(n);
  const double bb = static_cast<double>(b);
  detail::KahanSum v;
  v.add((nb - bb) / bb * sum_sq.value());
  v.add((bb - nb) / (nb * bb - bb) * cross);
  return v.value();
}

// Exact population variance of X by enumerating all C(n,b) subsets in
// lexicographic order with running sums. Guarded at 10^6 subsets. Uses a
// two-pass computation so that the degenerate b = n case is exactly zero.
inline double subset_estimator_variance_bruteforce(std::span<const double> a,
                                                   int b) {
  const int n = static_cast<int>(a.size());
  if (n < 2) {
    throw std::invalid_argument(
        "subset_estimator_variance_bruteforce: need n >= 2");
  }
  if (b < 1 || b > n) {
    throw std::invalid_argument(
        "subset_estimator_variance_bruteforce: need 1 <= b <= n");
  }
  constexpr double kGuard = 1e6;
  if (detail::binomial_checked(n, b, kGuard) > kGuard) {
    throw ResourceLimit(
        "subset_estimator_variance_bruteforce: C(n,b) exceeds 10^6");
  }
  std::vector<double> values;
  std::vector<int> idx(b);
  std::vector<double> partial(b + 1, 0.0);
  const double scale = static_cast<double>(n) / static_cast<double>(b);
  // Depth-first walk over lexicographic combinations, carrying prefix sums.
  int depth = 0;
  idx[0] = -1;
  while (depth >= 0) {
    ++idx[depth];
    if (idx[depth] > n - (b - depth)) {
      --depth;
      continue;
    }
    partial[depth + 1] = partial[depth] + a[idx[depth]];
    if (depth + 1 == b) {
      values.push_back(scale * partial[b]);
    } else {
      ++depth;
      idx[depth] = idx[depth - 1];
    }
  }
  detail::KahanSum mean_acc;
  for (double v : values) mean_acc.add(v);
  const double mean = mean_acc.value() / static_cast<double>(values.size());
  detail::KahanSum var_acc;
  for (double v : values) var_acc.add((v - mean) * (v - mean));
  return var_acc.value() / static_cast<double>(values.size());
}

}  // namespace sgs
