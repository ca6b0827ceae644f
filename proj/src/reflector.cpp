// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 risim contributors

#include "risim/reflector.hpp"

#include <stdexcept>

#include "risim/linalg.hpp"

namespace risim {

ReflectorQuadratic build_reflector_quadratic(const ChannelSet& ch,
                                             const TransceiverState& state,
                                             double noise_power) {
  const Eigen::Index n = ch.h_tx_ris.rows();
  const Eigen::Index n_s = state.precoder.cols();
  if (state.combiner.cols() != n_s) throw std::invalid_argument("combiner stream mismatch");
  if (ch.g_rx_ris.rows() != n) throw std::invalid_argument("reflector dimension mismatch");

  Eigen::MatrixXcd g_bar = state.combiner.adjoint() * ch.g_rx_ris.adjoint();   // N_s x N
  Eigen::MatrixXcd h_bar = ch.h_tx_ris * state.precoder;                       // N x N_s
  Eigen::MatrixXcd hd_bar = state.combiner.adjoint() * ch.h_direct * state.precoder;

  Eigen::MatrixXcd r_y = hermitianize(h_bar * h_bar.adjoint());
  Eigen::MatrixXcd r_y_sqrt = hermitian_sqrt(r_y);
  Eigen::MatrixXcd r_y_pinv = hermitian_pinv(r_y);
  Eigen::MatrixXcd w_sqrt = hermitian_sqrt(state.weight);

  Eigen::MatrixXcd id_s = Eigen::MatrixXcd::Identity(n_s, n_s);
  Eigen::MatrixXcd w_x = (id_s - hd_bar) * h_bar.adjoint() * r_y_pinv;         // N_s x N

  ReflectorQuadratic q;
  Eigen::MatrixXcd target = w_sqrt * w_x * r_y_sqrt;                           // N_s x N
  q.a_r = target.reshaped();                                                    // column-major vec

  Eigen::MatrixXcd wg = w_sqrt * g_bar;                                        // N_s x N
  q.a_mat.resize(n_s * n, n);
  q.a_mat.setZero();
  for (Eigen::Index k = 0; k < n; ++k) {
    // Column k is conj(column k of R_y^(1/2)) Kronecker column k of W^(1/2) G_bar,
    // from vec(M diag(theta) K) = sum_k theta_k (K^T col k) kron (M col k).
    for (Eigen::Index i = 0; i < n; ++i) {
      q.a_mat.block(i * n_s, k, n_s, 1) = std::conj(r_y_sqrt(i, k)) * wg.col(k);
    }
  }

  // Constant gap between the least-squares form and the true weighted MSE:
  // the part of (I - Hd_bar) outside the row space of h_bar^H, plus the noise
  // term. Both are nonnegative.
  Eigen::MatrixXcd q_proj = h_bar.adjoint() * r_y_pinv * h_bar;                // N_s x N_s
  Eigen::MatrixXcd defect = w_sqrt * (id_s - hd_bar) * (id_s - q_proj);
  double noise_term =
      noise_power * (state.combiner.adjoint() * state.combiner * state.weight).trace().real();
  q.c_const = defect.squaredNorm() + noise_term;
  return q;
}

double eval_reflector_objective(const ReflectorQuadratic& q, const Eigen::VectorXcd& theta) {
  if (theta.size() != q.a_mat.cols()) throw std::invalid_argument("theta dimension mismatch");
  return (q.a_r - q.a_mat * theta).squaredNorm() + q.c_const;
}

RealLift lift_to_real(const ReflectorQuadratic& q, double lambda_shift) {
  const Eigen::Index n = q.a_mat.cols();
  Eigen::MatrixXcd gram = hermitianize(q.a_mat.adjoint() * q.a_mat);
  Eigen::VectorXcd v = q.a_mat.adjoint() * q.a_r;

  RealLift lift;
  lift.p_mat.resize(2 * n, 2 * n);
  lift.p_mat.topLeftCorner(n, n) = gram.real();
  lift.p_mat.topRightCorner(n, n) = -gram.imag();
  lift.p_mat.bottomLeftCorner(n, n) = gram.imag();
  lift.p_mat.bottomRightCorner(n, n) = gram.real();

  lift.t_vec.resize(2 * n);
  lift.t_vec.head(n) = v.real();
  lift.t_vec.tail(n) = v.imag();

  lift.r_scal = q.a_r.squaredNorm();

  lift.big_r.resize(2 * n + 1, 2 * n + 1);
  lift.big_r.topLeftCorner(2 * n, 2 * n) = lift.p_mat;
  lift.big_r.topRightCorner(2 * n, 1) = -lift.t_vec;
  lift.big_r.bottomLeftCorner(1, 2 * n) = -lift.t_vec.transpose();
  lift.big_r(2 * n, 2 * n) = lift.r_scal;

  lift.lambda_shift = lambda_shift;
  return lift;
}

Eigen::MatrixXd unit_constraint_indicator(int index, int n) {
  if (n < 1) throw std::invalid_argument("constraint dimension must be positive");
  if (index < 0 || index > n) throw std::out_of_range("constraint index out of range");
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(2 * n + 1, 2 * n + 1);
  if (index < n) {
    e(index, index) = 1.0;
    e(index + n, index + n) = 1.0;
  } else {
    e(2 * n, 2 * n) = 1.0;
  }
  return e;
}

}  // namespace risim
