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
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "sgs/gaussian.hpp"
#include "sgs/rng.hpp"

namespace sgs {

// A differentiable target potential f with certified constants:
// f is m-strongly convex and its gradient is M-Lipschitz; L, when present,
// bounds the operator-norm Lipschitz constant of the Hessian. Constants are
// declared, not estimated; validate_constants provides a randomized audit.
// Potentials are normalized so that f >= 0 everywhere.
struct Potential {
  int dim = 0;
  double m = 0.0;
  double M = 0.0;
  std::optional<double> L;
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
};

// A sum-decomposable target f = sum_i g_i with per-component constants:
// every g_i is m_g-strongly convex with M_g-Lipschitz gradient, so f
// inherits m = n*m_g, M = n*M_g and, when present, L = n*L_g.
struct DecomposableTarget {
  int dim = 0;
  int n = 0;
  double m_g = 0.0;
  double M_g = 0.0;
  std::optional<double> L_g;
  std::function<double(int, const Eigen::VectorXd&)> component_value;
  std::function<Eigen::VectorXd(int, const Eigen::VectorXd&)>
      component_gradient;
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;

  // Set by the quadratic factories: the exact stationary law pi and the
  // (constant) Hessian of f. Absent for non-quadratic targets.
  std::optional<GaussianLaw> stationary;
  std::optional<Eigen::MatrixXd> hessian;

  double m() const { return n * m_g; }
  double M() const { return n * M_g; }
  std::optional<double> L() const {
    return L_g ? std::optional<double>(n * *L_g) : std::nullopt;
  }
  double kappa() const { return M_g / m_g; }

  Potential aggregate() const {
    return Potential{dim, m(), M(), L(), value, gradient};
  }
};

// Target with components g_i(theta) = (m_g/2)*||theta - z_i||^2, shifted by
// a common constant so that min f = 0. The stationary law is
// N(mean(z_i), (n*m_g)^{-1} I). kappa = 1 and L_g = 0 by construction.
// `centers` holds one center per row (n x p).
inline DecomposableTarget make_isotropic_gaussian_target(
    double m_g, const Eigen::MatrixXd& centers) {
  const int n = static_cast<int>(centers.rows());
  const int p = static_cast<int>(centers.cols());
  if (p < 1) throw std::invalid_argument("isotropic_gaussian: need p >= 1");
  if (n < 1) throw std::invalid_argument("isotropic_gaussian: need n >= 1");
  if (!(m_g > 0.0)) {
    throw std::invalid_argument("isotropic_gaussian: need m_g > 0");
  }
  if (!centers.allFinite()) {
    throw std::invalid_argument("isotropic_gaussian: centers must be finite");
  }
  const Eigen::VectorXd mean = centers.colwise().mean().transpose();
  // min over theta of sum_i (m_g/2)||theta - z_i||^2, attained at the mean.
  double min_value = 0.0;
  for (int i = 0; i < n; ++i) {
    min_value +=
        0.5 * m_g * (centers.row(i).transpose() - mean).squaredNorm();
  }
  const double shift_per_component = min_value / n;

  DecomposableTarget t;
  t.dim = p;
  t.n = n;
  t.m_g = m_g;
  t.M_g = m_g;
  t.L_g = 0.0;
  t.component_value = [m_g, centers, shift_per_component](
                          int i, const Eigen::VectorXd& theta) {
    return 0.5 * m_g * (theta - centers.row(i).transpose()).squaredNorm() -
           shift_per_component;
  };
  t.component_gradient = [m_g, centers](int i, const Eigen::VectorXd& theta) {
    return Eigen::VectorXd(m_g * (theta - centers.row(i).transpose()));
  };
  // f(theta) = (n*m_g/2)||theta - mean||^2, exactly >= 0.
  t.value = [n, m_g, mean](const Eigen::VectorXd& theta) {
    return 0.5 * n * m_g * (theta - mean).squaredNorm();
  };
  t.gradient = [n, m_g, mean](const Eigen::VectorXd& theta) {
    return Eigen::VectorXd(n * m_g * (theta - mean));
  };
  t.stationary = GaussianLaw::isotropic(mean, 1.0 / (n * m_g));
  t.hessian = n * m_g * Eigen::MatrixXd::Identity(p, p);
  return t;
}

// Ridge-regression posterior potential: components
//   g_i(theta) = (1/2)(y_i - x_i' theta)^2 + (lambda/(2n))||theta||^2,
// shifted so that min f = 0. Per-component constants m_g = lambda/n and
// M_g = lambda/n + max_i ||x_i||^2; L_g = 0 (quadratic). The stationary law
// is N(mu, A^{-1}) with A = X'X + lambda*I and mu = A^{-1} X'y.
inline DecomposableTarget make_ridge_target(const Eigen::MatrixXd& X,
                                            const Eigen::VectorXd& y,
                                            double lambda) {
  const int n = static_cast<int>(X.rows());
  const int p = static_cast<int>(X.cols());
  if (!(lambda > 0.0)) throw std::invalid_argument("ridge: need lambda > 0");
  if (n < 1) throw std::invalid_argument("ridge: need n >= 1");
  if (y.size() != n) {
    throw std::invalid_argument("ridge: y must have one entry per row of X");
  }
  if (!X.allFinite() || !y.allFinite()) {
    throw std::invalid_argument("ridge: design and responses must be finite");
  }
  const Eigen::MatrixXd A =
      X.transpose() * X + lambda * Eigen::MatrixXd::Identity(p, p);
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
  const Eigen::VectorXd mu = ldlt.solve(X.transpose() * y);
  const double min_value =
      0.5 * (y - X * mu).squaredNorm() + 0.5 * lambda * mu.squaredNorm();
  const double shift_per_component = min_value / n;
  double max_row_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    max_row_sq = std::max(max_row_sq, X.row(i).squaredNorm());
  }

  DecomposableTarget t;
  t.dim = p;
  t.n = n;
  t.m_g = lambda / n;
  t.M_g = lambda / n + max_row_sq;
  t.L_g = 0.0;
  t.component_value = [X, y, lambda, n, shift_per_component](
                          int i, const Eigen::VectorXd& theta) {
    const double r = y[i] - X.row(i).dot(theta);
    return 0.5 * r * r + 0.5 * (lambda / n) * theta.squaredNorm() -
           shift_per_component;
  };
  t.component_gradient = [X, y, lambda, n](int i,
                                           const Eigen::VectorXd& theta) {
    const double r = X.row(i).dot(theta) - y[i];
    return Eigen::VectorXd(r * X.row(i).transpose() +
                           (lambda / n) * theta);
  };
  // Completed square: f(theta) = (1/2)(theta - mu)' A (theta - mu), >= 0.
  t.value = [A, mu](const Eigen::VectorXd& theta) {
    const Eigen::VectorXd d = theta - mu;
    return 0.5 * d.dot(A * d);
  };
  t.gradient = [X, y, lambda](const Eigen::VectorXd& theta) {
    return Eigen::VectorXd(X.transpose() * (X * theta - y) + lambda * theta);
  };
  t.stationary = GaussianLaw{
      mu, ldlt.solve(Eigen::MatrixXd::Identity(p, p))};
  t.hessian = A;
  return t;
}

// Randomized audit of declared constants. Samples `trials` point pairs
// uniformly from the box [-5, 5]^p and reports the worst violation of the
// strong-convexity and gradient-Lipschitz inequalities. For decomposable
// targets the per-component inequalities (with m_g, M_g) are audited as
// well, together with gradient consistency: analytic gradients against
// central finite differences (step 1e-5 * (1 + ||theta||)) and the identity
// grad f = sum_i grad g_i. The audit passes iff both inequality violations
// are within `tolerance`; the consistency errors are reported alongside.
struct ValidationReport {
  int trials = 0;
  double tolerance = 0.0;
  double worst_strong_convexity_violation = 0.0;
  double worst_smoothness_violation = 0.0;
  double worst_gradient_error = 0.0;
  double worst_component_sum_error = 0.0;
  bool passed = false;
};

namespace detail {

inline Eigen::VectorXd box_point(int p, RngStream& rng, double half_width) {
  Eigen::VectorXd x(p);
  for (int i = 0; i < p; ++i) {
    x[i] = half_width * (2.0 * rng.uniform01() - 1.0);
  }
  return x;
}

template <class Value, class Gradient>
inline void audit_pair(const Value& value, const Gradient& gradient, double m,
                       double M, const Eigen::VectorXd& a,
                       const Eigen::VectorXd& b, ValidationReport& report) {
  const Eigen::VectorXd ga = gradient(a);
  const Eigen::VectorXd gb = gradient(b);
  const double gap = (a - b).norm();
  const double sc = value(a) + ga.dot(b - a) + 0.5 * m * gap * gap - value(b);
  const double sm = (ga - gb).norm() - M * gap;
  report.worst_strong_convexity_violation =
      std::max(report.worst_strong_convexity_violation, sc);
  report.worst_smoothness_violation =
      std::max(report.worst_smoothness_violation, sm);
}

template <class Value>
inline Eigen::VectorXd central_difference(const Value& value,
                                          const Eigen::VectorXd& theta) {
  const double step = 1e-5 * (1.0 + theta.norm());
  Eigen::VectorXd g(theta.size());
  Eigen::VectorXd probe = theta;
  for (int i = 0; i < theta.size(); ++i) {
    probe[i] = theta[i] + step;
    const double hi = value(probe);
    probe[i] = theta[i] - step;
    const double lo = value(probe);
    probe[i] = theta[i];
    g[i] = (hi - lo) / (2.0 * step);
  }
  return g;
}

}  // namespace detail

inline ValidationReport validate_constants(const Potential& f, int trials,
                                           double tolerance,
                                           std::uint64_t seed = 20260810) {
  if (trials < 1) {
    throw std::invalid_argument("validate_constants: trials must be >= 1");
  }
  ValidationReport report;
  report.trials = trials;
  report.tolerance = tolerance;
  RngStream rng(seed);
  for (int t = 0; t < trials; ++t) {
    const Eigen::VectorXd a = detail::box_point(f.dim, rng, 5.0);
    const Eigen::VectorXd b = detail::box_point(f.dim, rng, 5.0);
    detail::audit_pair(f.value, f.gradient, f.m, f.M, a, b, report);
    const Eigen::VectorXd fd = detail::central_difference(f.value, a);
    report.worst_gradient_error = std::max(
        report.worst_gradient_error, (fd - f.gradient(a)).cwiseAbs().maxCoeff());
  }
  report.passed = report.worst_strong_convexity_violation <= tolerance &&
                  report.worst_smoothness_violation <= tolerance;
  return report;
}

inline ValidationReport validate_constants(const DecomposableTarget& target,
                                           int trials, double tolerance,
                                           std::uint64_t seed = 20260810) {
  if (trials < 1) {
    throw std::invalid_argument("validate_constants: trials must be >= 1");
  }
  ValidationReport report;
  report.trials = trials;
  report.tolerance = tolerance;
  RngStream rng(seed);
  for (int t = 0; t < trials; ++t) {
    const Eigen::VectorXd a = detail::box_point(target.dim, rng, 5.0);
    const Eigen::VectorXd b = detail::box_point(target.dim, rng, 5.0);
    detail::audit_pair(target.value, target.gradient, target.m(), target.M(),
                       a, b, report);
    for (int i = 0; i < target.n; ++i) {
      const auto vi = [&](const Eigen::VectorXd& x) {
        return target.component_value(i, x);
      };
      const auto gi = [&](const Eigen::VectorXd& x) {
        return target.component_gradient(i, x);
      };
      detail::audit_pair(vi, gi, target.m_g, target.M_g, a, b, report);
    }
    const Eigen::VectorXd fd = detail::central_difference(target.value, a);
    report.worst_gradient_error =
        std::max(report.worst_gradient_error,
                 (fd - target.gradient(a)).cwiseAbs().maxCoeff());
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(target.dim);
    for (int i = 0; i < target.n; ++i) {
      sum += target.component_gradient(i, a);
    }
    report.worst_component_sum_error =
        std::max(report.worst_component_sum_error,
                 (sum - target.gradient(a)).cwiseAbs().maxCoeff());
  }
  report.passed = report.worst_strong_convexity_violation <= tolerance &&
                  report.worst_smoothness_violation <= tolerance;
  return report;
}

}  // namespace sgs
