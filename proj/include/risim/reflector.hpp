// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 risim contributors

#pragma once

#include <Eigen/Dense>

#include "risim/channel.hpp"
#include "risim/wmmse.hpp"

namespace risim {

// Reflection subproblem in least-squares form: for fixed transceiver filters
// the weighted MSE equals ||a_r - A_r theta||^2 + c_const over unit-modulus
// theta. c_const is nonnegative and independent of theta.
struct ReflectorQuadratic {
  Eigen::VectorXcd a_r;    // N_s * N
  Eigen::MatrixXcd a_mat;  // (N_s * N) x N
  double c_const = 0.0;

  int n() const { return static_cast<int>(a_mat.cols()); }
};

// Real homogenized form of the same objective: with x = [Re theta; Im theta; 1],
// x^T big_r x = ||a_r - A_r theta||^2.
struct RealLift {
  Eigen::MatrixXd p_mat;       // 2N x 2N, real embedding of A_r^H A_r
  Eigen::VectorXd t_vec;       // 2N, real embedding of A_r^H a_r
  double r_scal = 0.0;         // ||a_r||^2
  Eigen::MatrixXd big_r;       // (2N+1) x (2N+1), [P -t; -t^T r], PSD
  double lambda_shift = 0.0;   // diagonal shift the solvers add to big_r
};

// Assembles (a_r, A_r, c_const) from a channel realization and the current
// transceiver state. noise_power enters only the constant term.
ReflectorQuadratic build_reflector_quadratic(const ChannelSet& ch,
                                             const TransceiverState& state,
                                             double noise_power);

// ||a_r - A_r theta||^2 + c_const.
double eval_reflector_objective(const ReflectorQuadratic& q, const Eigen::VectorXcd& theta);

RealLift lift_to_real(const ReflectorQuadratic& q, double lambda_shift);

// Diagonal indicator E_index of the quadratic constraint x^T E x = 1.
// index in [0, N-1] selects the pair (index, index+N) tied to |theta_index|^2;
// index == N selects the homogenization slot 2N. Out of range throws.
Eigen::MatrixXd unit_constraint_indicator(int index, int n);

}  // namespace risim
