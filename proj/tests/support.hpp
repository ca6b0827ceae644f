// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 risim contributors

#pragma once

#include <complex>

#include <Eigen/Dense>

#include "risim/channel.hpp"
#include "risim/reflector.hpp"
#include "risim/rng.hpp"
#include "risim/wmmse.hpp"

namespace risim::test {

inline Eigen::MatrixXcd random_matrix(SplitMix64& rng, int rows, int cols) {
  Eigen::MatrixXcd m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = rng.next_cnormal();
  }
  return m;
}

inline Eigen::VectorXcd random_unit_theta(SplitMix64& rng, int n) {
  Eigen::VectorXcd t(n);
  for (int i = 0; i < n; ++i) t(i) = std::polar(1.0, rng.uniform(0.0, 2.0 * M_PI));
  return t;
}

// Hermitian positive definite with eigenvalues in [0.5, 1.5].
inline Eigen::MatrixXcd random_hpd(SplitMix64& rng, int n) {
  Eigen::MatrixXcd a = random_matrix(rng, n, n);
  Eigen::MatrixXcd g = a * a.adjoint() / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (g + g.adjoint()));
  Eigen::VectorXd lam = eig.eigenvalues();
  double lo = lam.minCoeff(), hi = lam.maxCoeff();
  Eigen::VectorXd mapped(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    mapped(i) = hi > lo ? 0.5 + (lam(i) - lo) / (hi - lo) : 1.0;
  }
  return eig.eigenvectors() * mapped.asDiagonal() * eig.eigenvectors().adjoint();
}

inline ChannelSet random_channel(std::uint64_t seed, int n, int n_tx, int n_rx) {
  ChannelDrawConfig cfg;
  cfg.n_tx = n_tx;
  cfg.n_rx = n_rx;
  cfg.ris_geometry = ArrayGeometry::near_square(n);
  cfg.seed = seed;
  return draw_channels(cfg);
}

// Random but internally consistent operating point: power-feasible precoder,
// nonzero combiner, Hermitian PD weight, unit-modulus phases.
inline TransceiverState random_state(SplitMix64& rng, const ChannelSet& ch, int n_streams,
                                     double power) {
  TransceiverState st;
  int n_tx = static_cast<int>(ch.h_direct.cols());
  int n_rx = static_cast<int>(ch.h_direct.rows());
  int n = static_cast<int>(ch.h_tx_ris.rows());
  st.precoder = random_matrix(rng, n_tx, n_streams);
  st.precoder *= std::sqrt(power) / st.precoder.norm();
  st.combiner = random_matrix(rng, n_rx, n_streams);
  st.weight = random_hpd(rng, n_streams);
  st.theta = random_unit_theta(rng, n);
  return st;
}

// Weighted MSE trace(W * E(theta)) computed the direct way, used as the
// independent oracle for the least-squares reflector form.
inline double direct_weighted_mse(const ChannelSet& ch, const TransceiverState& st,
                                  const Eigen::VectorXcd& theta, double noise_power) {
  Eigen::MatrixXcd h_eq = effective_channel(ch, theta);
  Eigen::MatrixXcd e = mse_matrix(h_eq, st.precoder, st.combiner, noise_power);
  return (st.weight * e).trace().real();
}

}  // namespace risim::test
