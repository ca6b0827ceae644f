// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 risim contributors

#pragma once

#include <Eigen/Dense>

namespace risim {

// Symmetrizes away the skew part that roundoff introduces in products that are
// Hermitian in exact arithmetic.
inline Eigen::MatrixXcd hermitianize(const Eigen::MatrixXcd& m) {
  return 0.5 * (m + m.adjoint());
}

// Principal square root of a Hermitian PSD matrix via eigendecomposition,
// negative eigenvalues (roundoff) clamped to zero.
Eigen::MatrixXcd hermitian_sqrt(const Eigen::MatrixXcd& m);

// Moore-Penrose pseudo-inverse of a Hermitian PSD matrix. Eigenvalues below
// 1e-12 * lambda_max are treated as zero.
Eigen::MatrixXcd hermitian_pinv(const Eigen::MatrixXcd& m);

// log2 det of a Hermitian positive definite matrix. Throws std::runtime_error
// with the given message when the matrix is numerically singular
// (lambda_min <= 1e-13 * lambda_max) or indefinite.
double log2_det_hpd(const Eigen::MatrixXcd& m, const char* singular_message);

}  // namespace risim
