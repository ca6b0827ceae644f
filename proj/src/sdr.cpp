// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 risim contributors

#include "risim/sdr.hpp"

#include <cmath>
#include <complex>

#include "risim/linalg.hpp"
#include "risim/rng.hpp"

namespace risim {

namespace {

Eigen::MatrixXcd project_psd(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(hermitianize(m));
  Eigen::VectorXd lam = eig.eigenvalues().cwiseMax(0.0);
  return hermitianize(eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().adjoint());
}

double inner(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a * b).trace().real();
}

}  // namespace

SdrProblem build_rr(const ReflectorQuadratic& q) {
  const Eigen::Index n = q.a_mat.cols();
  SdrProblem prob;
  prob.r_r.resize(n + 1, n + 1);
  prob.r_r.topLeftCorner(n, n) = hermitianize(q.a_mat.adjoint() * q.a_mat);
  Eigen::VectorXcd v = q.a_mat.adjoint() * q.a_r;
  prob.r_r.topRightCorner(n, 1) = -v;
  prob.r_r.bottomLeftCorner(1, n) = -v.adjoint();
  prob.r_r(n, n) = q.a_r.squaredNorm();
  return prob;
}

SdrSolution solve_unit_diag_sdp(const SdrProblem& prob, double tol, int max_iter) {
  const Eigen::Index n1 = prob.r_r.rows();
  if (prob.r_r.cols() != n1 || n1 < 1) throw std::invalid_argument("objective matrix not square");
  if (tol <= 0.0 || max_iter < 1) throw std::invalid_argument("invalid solver parameters");
  const Eigen::MatrixXcd c = hermitianize(prob.r_r);

  double rho = std::max(c.norm() / static_cast<double>(n1), 1e-6);
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Identity(n1, n1);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n1, n1);
  Eigen::MatrixXcd x(n1, n1);

  SdrResiduals res;
  int it = 0;
  for (it = 1; it <= max_iter; ++it) {
    x = z - u - c / rho;
    x.diagonal().setOnes();

    Eigen::MatrixXcd z_old = z;
    z = project_psd(x + u);
    u += x - z;

    double scale_x = std::max({1.0, x.norm(), z.norm()});
    double primal = (x - z).norm() / scale_x;
    double diag_err = (z.diagonal().real().array() - 1.0).abs().maxCoeff();
    res.primal_infeas = std::max(primal, diag_err);
    res.dual_infeas = rho * (z - z_old).norm() / std::max(1.0, rho * u.norm());
    double fx = inner(c, x);
    double fz = inner(c, z);
    res.gap = std::abs(fx - fz) / (1.0 + std::abs(fx) + std::abs(fz));

    if (res.primal_infeas <= tol && res.dual_infeas <= tol && res.gap <= tol) break;

    // Residual balancing keeps the two splits progressing at similar speed.
    if (it % 20 == 0) {
      if (res.primal_infeas > 10.0 * res.dual_infeas) {
        rho *= 2.0;
        u /= 2.0;
      } else if (res.dual_infeas > 10.0 * res.primal_infeas) {
        rho /= 2.0;
        u *= 2.0;
      }
    }
  }
  if (res.primal_infeas > tol || res.dual_infeas > tol || res.gap > tol) {
    throw SdrConvergenceError(res, max_iter);
  }

  SdrSolution sol;
  sol.big_theta = z;  // PSD exactly; diagonal within the primal residual
  sol.objective = inner(c, z);
  sol.residuals = res;
  sol.iterations = it;
  return sol;
}

Eigen::VectorXcd gaussian_randomize(const SdrSolution& sol, const ReflectorQuadratic& q,
                                    int trials, std::uint64_t seed) {
  const Eigen::Index n = q.a_mat.cols();
  if (sol.big_theta.rows() != n + 1) throw std::invalid_argument("solution dimension mismatch");
  if (trials < 1) throw std::invalid_argument("trial count must be positive");

  // Covariance factor from the eigendecomposition. Roundoff-scale eigenvalues
  // are dropped entirely, not just clamped: a rank-one covariance must yield
  // exactly rank-one samples or the recovered phases pick up sqrt(eps) noise.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(hermitianize(sol.big_theta));
  Eigen::VectorXd lam = eig.eigenvalues().cwiseMax(0.0);
  double lam_floor = 1e-12 * lam.maxCoeff();
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam(i) <= lam_floor) lam(i) = 0.0;
  }
  Eigen::MatrixXcd factor = eig.eigenvectors() * lam.cwiseSqrt().asDiagonal();

  // Objective in homogenized quadratic form, cheaper per candidate than the
  // least-squares residual.
  Eigen::MatrixXcd gram = hermitianize(q.a_mat.adjoint() * q.a_mat);
  Eigen::VectorXcd v = q.a_mat.adjoint() * q.a_r;
  double r0 = q.a_r.squaredNorm();

  SplitMix64 rng(seed);
  Eigen::VectorXcd best;
  double best_h = 0.0;
  Eigen::VectorXcd w(n + 1);
  for (int t = 0; t < trials; ++t) {
    for (Eigen::Index i = 0; i <= n; ++i) w(i) = rng.next_cnormal();
    Eigen::VectorXcd xi = factor * w;
    double ref = std::arg(xi(n));
    Eigen::VectorXcd cand(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      cand(i) = std::polar(1.0, std::arg(xi(i)) - ref);
    }
    double h = r0 - 2.0 * (cand.adjoint() * v)(0).real() +
               (cand.adjoint() * gram * cand)(0).real() + q.c_const;
    if (t == 0 || h < best_h) {
      best_h = h;
      best = cand;
    }
  }
  return best;
}

Eigen::VectorXcd sdr_solve(const ReflectorQuadratic& q, const SdrOptions& opts) {
  SdrSolution sol = solve_unit_diag_sdp(build_rr(q), opts.tol, opts.max_iter);
  return gaussian_randomize(sol, q, opts.trials, opts.seed);
}

}  // namespace risim
