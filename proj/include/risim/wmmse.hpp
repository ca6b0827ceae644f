// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 risim contributors

#pragma once

#include <Eigen/Dense>

#include "risim/channel.hpp"

namespace risim {

struct SystemConfig {
  int n_streams = 4;
  double power_budget = 1.0;  // transmit power P, linear
  double noise_power = 1.0;   // sigma^2, linear
};

// One operating point of the link. weight is the Hermitian PD matrix of the
// weighted-MSE surrogate; theta holds the unit-modulus reflection
// coefficients.
struct TransceiverState {
  Eigen::MatrixXcd precoder;  // N_tx x N_s
  Eigen::MatrixXcd combiner;  // N_rx x N_s
  Eigen::MatrixXcd weight;    // N_s x N_s
  Eigen::VectorXcd theta;     // N
};

// H_eq = G^H diag(theta) H + H_d.
Eigen::MatrixXcd effective_channel(const ChannelSet& ch, const Eigen::VectorXcd& theta);

// Symbol-error covariance E for unit-power Gaussian symbols:
// (I - C^H H W_s)(I - C^H H W_s)^H + sigma^2 C^H C with C the combiner.
Eigen::MatrixXcd mse_matrix(const Eigen::MatrixXcd& h_eq, const Eigen::MatrixXcd& precoder,
                            const Eigen::MatrixXcd& combiner, double noise_power);

// Rate through the combiner output, log2 det(I + Gram^-1 B B^H / sigma^2)
// with B = C^H H W_s and Gram = C^H C. Throws std::runtime_error
// "singular combiner Gram" when the combiner is rank deficient.
double achievable_rate(const Eigen::MatrixXcd& h_eq, const Eigen::MatrixXcd& precoder,
                       const Eigen::MatrixXcd& combiner, double noise_power);

// Rate implied by an MSE matrix: log2 det(E^-1). Matches achievable_rate
// whenever the combiner is the MMSE one.
double rate_from_mse(const Eigen::MatrixXcd& e);

// Linear MMSE combiner (sigma^2 I + H W_s W_s^H H^H)^-1 H W_s. Also the
// minimizer of trace(W E) over combiners for any Hermitian PD W.
Eigen::MatrixXcd mmse_combiner(const Eigen::MatrixXcd& h_eq, const Eigen::MatrixXcd& precoder,
                               double noise_power);

// W = E^-1. Throws std::runtime_error "MSE matrix singular" when the smallest
// eigenvalue of E is at or below 1e-12.
Eigen::MatrixXcd weight_update(const Eigen::MatrixXcd& e);

// Solves sum_i phi_i / (lam_i + mu)^2 = power for mu > 0 by bisection on
// [0, sqrt(sum phi / power)]. Requires the left side to exceed power at
// mu = 0 (a water level exists); all-zero phi throws std::runtime_error
// "zero objective coupling".
double bisection_mu(const Eigen::VectorXd& lam, const Eigen::VectorXd& phi, double power);

struct PrecoderResult {
  Eigen::MatrixXcd precoder;
  double mu = 0.0;  // power multiplier actually used (0 on the interior branch)
};

// Weighted-MMSE transmit filter (H^H C W C^H H + mu I)^-1 H^H C W with mu the
// smallest nonnegative multiplier putting the solution inside the power ball.
PrecoderResult precoder_update(const Eigen::MatrixXcd& h_eq, const Eigen::MatrixXcd& combiner,
                               const Eigen::MatrixXcd& weight, double power);

// Surrogate objective trace(W E) - log2 det(W). Each WMMSE block update is
// its exact minimizer over the corresponding variable.
double wmse_objective(const Eigen::MatrixXcd& h_eq, const Eigen::MatrixXcd& precoder,
                      const Eigen::MatrixXcd& combiner, const Eigen::MatrixXcd& weight,
                      double noise_power);

}  // namespace risim
