// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 risim contributors

#pragma once

#include <cstdint>
#include <stdexcept>

#include <Eigen/Dense>

#include "risim/reflector.hpp"

namespace risim {

// Homogenized objective matrix: theta_bar^H r_r theta_bar = ||a_r - A_r theta||^2
// for theta_bar = [theta; 1]. Hermitian PSD.
struct SdrProblem {
  Eigen::MatrixXcd r_r;  // (N+1) x (N+1)
};

struct SdrResiduals {
  double primal_infeas = 0.0;  // consensus gap and unit-diagonal violation
  double dual_infeas = 0.0;
  double gap = 0.0;            // objective agreement between the two splits
};

struct SdrSolution {
  Eigen::MatrixXcd big_theta;  // Hermitian PSD, unit diagonal within tol
  double objective = 0.0;      // trace(big_theta * r_r), the relaxation lower bound
  SdrResiduals residuals;
  int iterations = 0;
};

struct SdrOptions {
  double tol = 1e-6;
  int max_iter = 5000;
  int trials = 500;        // Gaussian randomization candidates
  std::uint64_t seed = 0;
};

class SdrConvergenceError : public std::runtime_error {
 public:
  SdrConvergenceError(const SdrResiduals& res, int iterations)
      : std::runtime_error("semidefinite relaxation did not converge"),
        residuals(res),
        iterations(iterations) {}
  SdrResiduals residuals;
  int iterations;
};

SdrProblem build_rr(const ReflectorQuadratic& q);

// Splitting method on the elliptope {X PSD, diag(X) = 1}: alternate an
// affine update (exact diagonal) with a projection onto the PSD cone,
// dual-ascent on their consensus. Deterministic; throws SdrConvergenceError
// when the residuals fail to reach tol within max_iter sweeps.
SdrSolution solve_unit_diag_sdp(const SdrProblem& prob, double tol = 1e-6, int max_iter = 5000);

// Draws `trials` vectors from CN(0, big_theta), rotates each to the phase
// reference of its last entry, and keeps the unit-modulus candidate with the
// smallest objective (first trial wins ties). Deterministic in seed.
Eigen::VectorXcd gaussian_randomize(const SdrSolution& sol, const ReflectorQuadratic& q,
                                    int trials, std::uint64_t seed);

Eigen::VectorXcd sdr_solve(const ReflectorQuadratic& q, const SdrOptions& opts = {});

}  // namespace risim
