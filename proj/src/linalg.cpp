// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 risim contributors

#include "risim/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace risim {

Eigen::MatrixXcd hermitian_sqrt(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(hermitianize(m));
  Eigen::VectorXd lam = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * lam.cwiseSqrt().asDiagonal() * eig.eigenvectors().adjoint();
}

Eigen::MatrixXcd hermitian_pinv(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(hermitianize(m));
  const Eigen::VectorXd& lam = eig.eigenvalues();
  double cutoff = 1e-12 * std::max(lam.cwiseAbs().maxCoeff(), 0.0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam(i) > cutoff) inv(i) = 1.0 / lam(i);
  }
  return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().adjoint();
}

double log2_det_hpd(const Eigen::MatrixXcd& m, const char* singular_message) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(hermitianize(m), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& lam = eig.eigenvalues();
  double lam_max = lam.maxCoeff();
  if (lam.minCoeff() <= 1e-13 * std::max(lam_max, 0.0)) {
    throw std::runtime_error(singular_message);
  }
  return lam.array().log2().sum();
}

}  // namespace risim
