// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 risim contributors

#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "risim/reflector.hpp"

namespace risim {

struct ScfOptions {
  double eps = 1e-4;      // stop when |h_i - h_{i-1}| < eps
  int max_iter = 500;
  // Diagonal shift. Defaults to lambda_bound(q), which guarantees descent and
  // pre-projection modulus >= 1; overriding it forfeits those guarantees.
  std::optional<double> lambda_shift;
};

struct ScfResult {
  Eigen::VectorXcd theta;              // final projected iterate, exactly unit modulus
  Eigen::VectorXd x;                   // last solution of the linearized step, 2N+1
  std::vector<double> objective_trace; // h at the initial point and each accepted iterate
  int iterations = 0;                  // linear solves performed
  double pre_projection_modulus_error = 0.0;  // max_n ||theta_n| - 1| at the last step
  double lambda_shift = 0.0;           // shift actually used
};

// Descent-guaranteeing shift N/8 * lambda_max(A_r^H A_r) + ||A_r^H a_r||_2.
double lambda_bound(const ReflectorQuadratic& q);

// Linearized constraint matrix B, (N+1) x (2N+1): row n has cos(arg theta_n)
// at column n and sin(arg theta_n) at column n+N; the last row picks the
// homogenization slot. Rows are orthonormal. A zero entry in theta has no
// phase and throws std::domain_error "undefined phase".
Eigen::MatrixXd scf_constraint_matrix(const Eigen::VectorXcd& theta_prev);

// One equality-constrained step: minimizes x^T (big_r + lambda I) x subject
// to B x = 1, i.e. x = Rb^-1 B^T (B Rb^-1 B^T)^-1 1 with Rb = 2(R + lambda I).
// Throws std::runtime_error "degenerate constraint system" when B Rb^-1 B^T
// is not positive definite.
Eigen::VectorXd scf_step(const RealLift& lift, const Eigen::MatrixXd& b_mat);

// Sequential convex-feasibility loop over projected iterates. theta_init must
// be unit modulus; the returned iterate is its phase projection after the
// last accepted step.
ScfResult scf_solve(const ReflectorQuadratic& q, const Eigen::VectorXcd& theta_init,
                    const ScfOptions& opts = {});

// Norm of 2(R + lambda I)x + sum_n 2 eta_n E_n x minimized over the
// multipliers eta (closed form, the E_n have disjoint supports). Zero at an
// exact KKT point of the lifted problem.
double reflector_stationarity_residual(const RealLift& lift, const Eigen::VectorXd& x);

}  // namespace risim
