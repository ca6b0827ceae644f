// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 risim contributors

#include "risim/wmmse.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "risim/linalg.hpp"

namespace risim {

Eigen::MatrixXcd effective_channel(const ChannelSet& ch, const Eigen::VectorXcd& theta) {
  if (ch.h_tx_ris.rows() != ch.g_rx_ris.rows() || theta.size() != ch.h_tx_ris.rows()) {
    throw std::invalid_argument("reflector dimension mismatch");
  }
  if (ch.h_direct.rows() != ch.g_rx_ris.cols() || ch.h_direct.cols() != ch.h_tx_ris.cols()) {
    throw std::invalid_argument("direct channel dimension mismatch");
  }
  return ch.g_rx_ris.adjoint() * theta.asDiagonal() * ch.h_tx_ris + ch.h_direct;
}

Eigen::MatrixXcd mse_matrix(const Eigen::MatrixXcd& h_eq, const Eigen::MatrixXcd& precoder,
                            const Eigen::MatrixXcd& combiner, double noise_power) {
  const Eigen::Index n_s = precoder.cols();
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Identity(n_s, n_s) -
                       combiner.adjoint() * h_eq * precoder;
  Eigen::MatrixXcd e = t * t.adjoint() + noise_power * combiner.adjoint() * combiner;
  return hermitianize(e);
}

double achievable_rate(const Eigen::MatrixXcd& h_eq, const Eigen::MatrixXcd& precoder,
                       const Eigen::MatrixXcd& combiner, double noise_power) {
  Eigen::MatrixXcd gram = hermitianize(combiner.adjoint() * combiner);
  Eigen::MatrixXcd b = combiner.adjoint() * h_eq * precoder;
  double logdet_gram = log2_det_hpd(gram, "singular combiner Gram");
  Eigen::MatrixXcd signal = gram + (1.0 / noise_power) * b * b.adjoint();
  double logdet_signal = log2_det_hpd(signal, "singular combiner Gram");
  return std::max(logdet_signal - logdet_gram, 0.0);
}

double rate_from_mse(const Eigen::MatrixXcd& e) {
  return -log2_det_hpd(e, "MSE matrix singular");
}

Eigen::MatrixXcd mmse_combiner(const Eigen::MatrixXcd& h_eq, const Eigen::MatrixXcd& precoder,
                               double noise_power) {
  const Eigen::Index n_rx = h_eq.rows();
  Eigen::MatrixXcd hp = h_eq * precoder;
  Eigen::MatrixXcd cov = hermitianize(hp * hp.adjoint()) +
                         noise_power * Eigen::MatrixXcd::Identity(n_rx, n_rx);
  return cov.llt().solve(hp);
}

Eigen::MatrixXcd weight_update(const Eigen::MatrixXcd& e) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(hermitianize(e));
  const Eigen::VectorXd& lam = eig.eigenvalues();
  if (lam.minCoeff() <= 1e-12) {
    throw std::runtime_error("MSE matrix singular");
  }
  return hermitianize(eig.eigenvectors() * lam.cwiseInverse().asDiagonal() *
                      eig.eigenvectors().adjoint());
}

double bisection_mu(const Eigen::VectorXd& lam, const Eigen::VectorXd& phi, double power) {
  if (lam.size() != phi.size()) throw std::invalid_argument("lam/phi size mismatch");
  if (phi.maxCoeff() <= 0.0) throw std::runtime_error("zero objective coupling");
  auto traced_power = [&](double mu) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
      double d = lam(i) + mu;
      if (d <= 0.0) return std::numeric_limits<double>::infinity();
      s += phi(i) / (d * d);
    }
    return s;
  };
  double lo = 0.0;
  double hi = std::sqrt(phi.sum() / power);  // traced_power(hi) <= power by construction
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double p = traced_power(mid);
    if (std::abs(p - power) <= 1e-10 * power) return mid;
    (p > power ? lo : hi) = mid;
    if (hi - lo <= 1e-15 * std::max(hi, 1.0)) break;
  }
  return 0.5 * (lo + hi);
}

PrecoderResult precoder_update(const Eigen::MatrixXcd& h_eq, const Eigen::MatrixXcd& combiner,
                               const Eigen::MatrixXcd& weight, double power) {
  if (power <= 0.0) throw std::invalid_argument("power budget must be positive");
  Eigen::MatrixXcd m = h_eq.adjoint() * combiner;  // N_tx x N_s
  Eigen::MatrixXcd rhs = m * weight;
  const Eigen::Index n_tx = h_eq.cols();

  if (rhs.norm() == 0.0) {
    return {Eigen::MatrixXcd::Zero(n_tx, rhs.cols()), 0.0};
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(hermitianize(m * weight * m.adjoint()));
  Eigen::VectorXd lam = eig.eigenvalues().cwiseMax(0.0);
  Eigen::MatrixXcd k = eig.eigenvectors().adjoint() * rhs;
  Eigen::VectorXd phi = k.rowwise().squaredNorm();

  // Interior branch: mu = 0 whenever the unconstrained solution already fits
  // in the power ball. Directions with numerically zero curvature and zero
  // coupling carry no power and are dropped from the test.
  double lam_floor = 1e-12 * std::max(lam.maxCoeff(), 1.0);
  double phi_floor = 1e-14 * phi.sum();
  double p0 = 0.0;
  bool unbounded = false;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam(i) > lam_floor) {
      p0 += phi(i) / (lam(i) * lam(i));
    } else if (phi(i) > phi_floor) {
      unbounded = true;  // coupling into a flat direction; power diverges at mu = 0
    }
  }

  double mu = 0.0;
  Eigen::VectorXd inv_shift(lam.size());
  if (!unbounded && p0 <= power) {
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
      inv_shift(i) = lam(i) > lam_floor ? 1.0 / lam(i) : 0.0;
    }
  } else {
    mu = bisection_mu(lam, phi, power);
    inv_shift = (lam.array() + mu).inverse();
  }
  Eigen::MatrixXcd precoder = eig.eigenvectors() * inv_shift.asDiagonal() * k;
  return {precoder, mu};
}

double wmse_objective(const Eigen::MatrixXcd& h_eq, const Eigen::MatrixXcd& precoder,
                      const Eigen::MatrixXcd& combiner, const Eigen::MatrixXcd& weight,
                      double noise_power) {
  Eigen::MatrixXcd e = mse_matrix(h_eq, precoder, combiner, noise_power);
  double traced = (weight * e).trace().real();
  return traced - log2_det_hpd(weight, "weight matrix singular");
}

}  // namespace risim
