// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 risim contributors

#include "risim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "risim/linalg.hpp"

namespace risim {

namespace {

// Rate from channel-gram eigenvalues: allocate power over the strongest
// modes so that every active mode sits at the common water level.
double waterfill_from_eigenvalues(std::vector<double> lam, double power, double noise_power,
                                  int n_streams) {
  std::sort(lam.begin(), lam.end(), std::greater<>());
  if (static_cast<int>(lam.size()) > n_streams) lam.resize(n_streams);
  while (!lam.empty() && lam.back() <= 0.0) lam.pop_back();
  if (lam.empty()) return 0.0;

  std::vector<double> inv_gain(lam.size());
  for (size_t i = 0; i < lam.size(); ++i) inv_gain[i] = noise_power / lam[i];

  // Largest active set whose water level clears the weakest member.
  size_t active = lam.size();
  double level = 0.0;
  for (; active >= 1; --active) {
    double s = 0.0;
    for (size_t i = 0; i < active; ++i) s += inv_gain[i];
    level = (power + s) / static_cast<double>(active);
    if (level > inv_gain[active - 1]) break;
  }
  double rate = 0.0;
  for (size_t i = 0; i < active; ++i) {
    rate += std::log2(level / inv_gain[i]);
  }
  return rate;
}

// Eigenvalues of a 2x2 Hermitian matrix in closed form; avoids an iterative
// solver in the innermost grid loop.
void eig2x2(const Eigen::Matrix2cd& a, double& lo, double& hi) {
  double tr = a(0, 0).real() + a(1, 1).real();
  double det = a(0, 0).real() * a(1, 1).real() - std::norm(a(0, 1));
  double disc = std::sqrt(std::max(tr * tr - 4.0 * det, 0.0));
  lo = 0.5 * (tr - disc);
  hi = 0.5 * (tr + disc);
}

}  // namespace

double waterfilling_capacity(const Eigen::MatrixXcd& h_eq, double power, double noise_power,
                             int n_streams) {
  if (power <= 0.0 || noise_power <= 0.0) throw std::invalid_argument("invalid power levels");
  if (n_streams < 1) throw std::invalid_argument("stream count must be positive");
  Eigen::MatrixXcd gram = h_eq.rows() <= h_eq.cols()
                              ? hermitianize(h_eq * h_eq.adjoint())
                              : hermitianize(h_eq.adjoint() * h_eq);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
  std::vector<double> lam(eig.eigenvalues().data(),
                          eig.eigenvalues().data() + eig.eigenvalues().size());
  return waterfill_from_eigenvalues(std::move(lam), power, noise_power, n_streams);
}

GridOracleResult grid_search_best_rate(const ChannelSet& ch, const SystemConfig& sys,
                                       int grid_points) {
  const Eigen::Index n = ch.h_tx_ris.rows();
  if (n > 3) throw std::invalid_argument("grid oracle limited to 3 reflector elements");
  if (grid_points < 1) throw std::invalid_argument("grid must have at least one point");

  // H_eq(theta) = H_d + sum_k theta_k * (conj of G row k)^T (H row k):
  // precompute the rank-one pieces once, then sweep phases.
  std::vector<Eigen::MatrixXcd> pieces(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    pieces[k] = ch.g_rx_ris.row(k).adjoint() * ch.h_tx_ris.row(k);
  }
  std::vector<std::complex<double>> phases(grid_points);
  for (int g = 0; g < grid_points; ++g) {
    phases[g] = std::polar(1.0, 2.0 * M_PI * g / static_cast<double>(grid_points));
  }

  const bool two_by_two = ch.h_direct.rows() == 2 && ch.h_direct.cols() == 2;
  GridOracleResult best;
  best.best_rate = -1.0;
  std::vector<int> idx(n, 0);
  Eigen::MatrixXcd h_eq;
  while (true) {
    h_eq = ch.h_direct;
    for (Eigen::Index k = 0; k < n; ++k) h_eq += phases[idx[k]] * pieces[k];

    double rate;
    if (two_by_two) {
      double lo, hi;
      eig2x2(h_eq.adjoint() * h_eq, lo, hi);
      rate = waterfill_from_eigenvalues({lo, hi}, sys.power_budget, sys.noise_power,
                                        sys.n_streams);
    } else {
      rate = waterfilling_capacity(h_eq, sys.power_budget, sys.noise_power, sys.n_streams);
    }
    if (rate > best.best_rate) {
      best.best_rate = rate;
      best.best_theta.resize(n);
      for (Eigen::Index k = 0; k < n; ++k) best.best_theta(k) = phases[idx[k]];
    }

    Eigen::Index carry = 0;
    while (carry < n && ++idx[carry] == grid_points) {
      idx[carry] = 0;
      ++carry;
    }
    if (carry == n) break;
  }
  return best;
}

}  // namespace risim
