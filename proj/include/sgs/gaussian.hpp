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
#include <stdexcept>
#include <string>

#include "sgs/rng.hpp"

namespace sgs {

// A Gaussian law N(mean, cov). Covariances are kept symmetric; callers that
// assemble covariances from noisy estimates should pass them through
// symmetrize_psd first.
struct GaussianLaw {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  int dim() const { return static_cast<int>(mean.size()); }

  static GaussianLaw point_mass(const Eigen::VectorXd& at) {
    return {at, Eigen::MatrixXd::Zero(at.size(), at.size())};
  }

  static GaussianLaw isotropic(const Eigen::VectorXd& mean, double variance) {
    if (variance < 0.0) {
      throw std::invalid_argument("GaussianLaw::isotropic: negative variance");
    }
    const auto p = mean.size();
    return {mean, variance * Eigen::MatrixXd::Identity(p, p)};
  }
};

// Symmetrizes and clamps eigenvalues at zero. Rejects inputs whose asymmetry
// or most negative eigenvalue exceeds `tol` relative to the matrix scale.
inline Eigen::MatrixXd symmetrize_psd(const Eigen::MatrixXd& m,
                                      double tol = 1e-8) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("symmetrize_psd: matrix must be square");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol * scale) {
    throw std::invalid_argument("symmetrize_psd: matrix is not symmetric");
  }
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.eigenvalues().minCoeff() < -tol * scale) {
    throw std::invalid_argument(
        "symmetrize_psd: eigenvalue below -tolerance (" +
        std::to_string(es.eigenvalues().minCoeff()) + ")");
  }
  const Eigen::VectorXd clamped = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * clamped.asDiagonal() *
         es.eigenvectors().transpose();
}

// Symmetric square root with eigenvalue clamping at zero.
inline Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 *
                                                    (m + m.transpose()));
  const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

// Draws `count` points from the law; one row per point. Consumes exactly
// count * dim normal values from the stream.
inline Eigen::MatrixXd sample(const GaussianLaw& law, int count,
                              RngStream& rng) {
  if (count < 1) {
    throw std::invalid_argument("sample: count must be positive");
  }
  const int p = law.dim();
  const Eigen::MatrixXd root = psd_sqrt(law.cov);
  Eigen::MatrixXd out(count, p);
  Eigen::VectorXd z(p);
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < p; ++j) z[j] = rng.normal();
    out.row(i) = (law.mean + root * z).transpose();
  }
  return out;
}

}  // namespace sgs
