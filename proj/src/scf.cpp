// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 risim contributors

#include "risim/scf.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "risim/linalg.hpp"

namespace risim {

namespace {

// h(theta) through the lifted quadratic form: x^T R x + c with
// x = [Re theta; Im theta; 1]. Cheaper than forming a_r - A_r theta and
// identical by construction of the lift.
double lifted_objective(const ReflectorQuadratic& q, const RealLift& lift,
                        const Eigen::VectorXcd& theta) {
  const Eigen::Index n = theta.size();
  Eigen::VectorXd x(2 * n + 1);
  x.head(n) = theta.real();
  x.segment(n, n) = theta.imag();
  x(2 * n) = 1.0;
  return x.dot(lift.big_r * x) + q.c_const;
}

Eigen::VectorXcd phase_project(const Eigen::VectorXcd& raw, const Eigen::VectorXcd& fallback) {
  Eigen::VectorXcd out(raw.size());
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    double mag = std::abs(raw(i));
    out(i) = mag > 0.0 ? raw(i) / mag : fallback(i);
  }
  return out;
}

}  // namespace

double lambda_bound(const ReflectorQuadratic& q) {
  Eigen::MatrixXcd gram = hermitianize(q.a_mat.adjoint() * q.a_mat);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
  double lam_max = std::max(eig.eigenvalues().maxCoeff(), 0.0);
  double n = static_cast<double>(q.a_mat.cols());
  return n / 8.0 * lam_max + (q.a_mat.adjoint() * q.a_r).norm();
}

Eigen::MatrixXd scf_constraint_matrix(const Eigen::VectorXcd& theta_prev) {
  const Eigen::Index n = theta_prev.size();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n + 1, 2 * n + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    double mag = std::abs(theta_prev(i));
    if (mag == 0.0) throw std::domain_error("undefined phase");
    double arg = std::arg(theta_prev(i));
    b(i, i) = std::cos(arg);
    b(i, i + n) = std::sin(arg);
  }
  b(n, 2 * n) = 1.0;
  return b;
}

Eigen::VectorXd scf_step(const RealLift& lift, const Eigen::MatrixXd& b_mat) {
  const Eigen::Index dim = lift.big_r.rows();
  if (b_mat.cols() != dim) throw std::invalid_argument("constraint matrix dimension mismatch");
  Eigen::MatrixXd rb = 2.0 * (lift.big_r +
                              lift.lambda_shift * Eigen::MatrixXd::Identity(dim, dim));
  Eigen::LLT<Eigen::MatrixXd> rb_llt(rb);
  if (rb_llt.info() != Eigen::Success) {
    throw std::invalid_argument("shifted objective matrix not positive definite");
  }
  Eigen::MatrixXd y = rb_llt.solve(b_mat.transpose());
  Eigen::MatrixXd s = b_mat * y;
  Eigen::LLT<Eigen::MatrixXd> s_llt(0.5 * (s + s.transpose()));
  if (s_llt.info() != Eigen::Success) {
    throw std::runtime_error("degenerate constraint system");
  }
  Eigen::VectorXd z = s_llt.solve(Eigen::VectorXd::Ones(b_mat.rows()));
  return y * z;
}

ScfResult scf_solve(const ReflectorQuadratic& q, const Eigen::VectorXcd& theta_init,
                    const ScfOptions& opts) {
  const Eigen::Index n = q.a_mat.cols();
  if (theta_init.size() != n) throw std::invalid_argument("theta dimension mismatch");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(theta_init(i)) == 0.0) throw std::domain_error("undefined phase");
  }

  double lambda = opts.lambda_shift.value_or(lambda_bound(q));
  // A strictly positive floor keeps the step well posed on degenerate inputs
  // (all-zero quadratic); the step then reproduces the previous iterate.
  double data_scale = q.a_mat.squaredNorm() + q.a_r.squaredNorm();
  lambda = std::max(lambda, 1e-12 * (1.0 + data_scale));

  RealLift lift = lift_to_real(q, lambda);
  const Eigen::Index dim = 2 * n + 1;
  Eigen::MatrixXd rb = 2.0 * (lift.big_r + lambda * Eigen::MatrixXd::Identity(dim, dim));
  Eigen::LLT<Eigen::MatrixXd> rb_llt(rb);
  if (rb_llt.info() != Eigen::Success) {
    throw std::runtime_error("degenerate constraint system");
  }
  // Inverse computed once; every step only recombines its columns because the
  // constraint rows have two nonzeros each.
  Eigen::MatrixXd k_inv = rb_llt.solve(Eigen::MatrixXd::Identity(dim, dim));

  ScfResult res;
  res.lambda_shift = lambda;
  res.theta = phase_project(theta_init, theta_init);
  res.x.resize(dim);
  res.x.head(n) = res.theta.real();
  res.x.segment(n, n) = res.theta.imag();
  res.x(2 * n) = 1.0;
  double h_prev = lifted_objective(q, lift, res.theta);
  res.objective_trace.push_back(h_prev);

  Eigen::MatrixXd y(dim, n + 1);
  Eigen::MatrixXd s(n + 1, n + 1);
  for (int it = 1; it <= opts.max_iter; ++it) {
    Eigen::VectorXd c = res.theta.real();  // cos(arg) of the unit-modulus iterate
    Eigen::VectorXd sn = res.theta.imag();
    for (Eigen::Index j = 0; j < n; ++j) {
      y.col(j) = c(j) * k_inv.col(j) + sn(j) * k_inv.col(j + n);
    }
    y.col(n) = k_inv.col(2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
      s.row(i) = c(i) * y.row(i) + sn(i) * y.row(i + n);
    }
    s.row(n) = y.row(2 * n);

    Eigen::LLT<Eigen::MatrixXd> s_llt(0.5 * (s + s.transpose()));
    if (s_llt.info() != Eigen::Success) {
      throw std::runtime_error("degenerate constraint system");
    }
    Eigen::VectorXd z = s_llt.solve(Eigen::VectorXd::Ones(n + 1));
    res.x.noalias() = y * z;
    res.x(2 * n) = 1.0;

    Eigen::VectorXcd raw(n);
    for (Eigen::Index i = 0; i < n; ++i) raw(i) = {res.x(i), res.x(i + n)};
    res.pre_projection_modulus_error = (raw.cwiseAbs().array() - 1.0).abs().maxCoeff();
    res.theta = phase_project(raw, res.theta);
    res.iterations = it;

    double h = lifted_objective(q, lift, res.theta);
    res.objective_trace.push_back(h);
    if (std::abs(h - h_prev) < opts.eps) break;
    h_prev = h;
  }
  return res;
}

double reflector_stationarity_residual(const RealLift& lift, const Eigen::VectorXd& x) {
  const Eigen::Index dim = lift.big_r.rows();
  const Eigen::Index n = (dim - 1) / 2;
  if (x.size() != dim) throw std::invalid_argument("lifted iterate dimension mismatch");
  Eigen::VectorXd g = 2.0 * (lift.big_r * x + lift.lambda_shift * x);
  Eigen::VectorXd r = g;
  // The constraint gradients 2 E_k x live on disjoint index pairs, so the
  // least-squares multipliers decouple coordinate-wise.
  for (Eigen::Index k = 0; k < n; ++k) {
    double nn = x(k) * x(k) + x(k + n) * x(k + n);
    if (nn > 0.0) {
      double eta = -(x(k) * g(k) + x(k + n) * g(k + n)) / (2.0 * nn);
      r(k) += 2.0 * eta * x(k);
      r(k + n) += 2.0 * eta * x(k + n);
    }
  }
  if (x(2 * n) != 0.0) r(2 * n) = 0.0;  // last multiplier absorbs its coordinate exactly
  return r.norm();
}

}  // namespace risim
