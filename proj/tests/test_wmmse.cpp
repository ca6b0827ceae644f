// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 risim contributors

#include "risim/wmmse.hpp"

#include <cmath>
#include <complex>

#include "doctest.h"
#include "risim/linalg.hpp"
#include "support.hpp"

using namespace risim;
using test::random_channel;
using test::random_hpd;
using test::random_matrix;
using test::random_unit_theta;

TEST_CASE("effective channel composes the reflected and direct paths") {
  SplitMix64 rng(21);
  ChannelSet ch = random_channel(100, 4, 3, 2);

  SUBCASE("zero reflected path leaves the direct channel") {
    ch.g_rx_ris.setZero();
    Eigen::VectorXcd theta = random_unit_theta(rng, 4);
    CHECK((effective_channel(ch, theta) - ch.h_direct).norm() == 0.0);
  }

  SUBCASE("all-ones phases add the unweighted product") {
    Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(4);
    Eigen::MatrixXcd expect = ch.g_rx_ris.adjoint() * ch.h_tx_ris + ch.h_direct;
    CHECK((effective_channel(ch, ones) - expect).norm() < 1e-14);
  }

  SUBCASE("dimension mismatch throws") {
    Eigen::VectorXcd bad = Eigen::VectorXcd::Ones(5);
    CHECK_THROWS_AS(effective_channel(ch, bad), std::invalid_argument);
  }
}

TEST_CASE("mse matrix: zero filters give the identity") {
  ChannelSet ch = random_channel(101, 4, 3, 3);
  Eigen::MatrixXcd h = effective_channel(ch, Eigen::VectorXcd::Ones(4));
  Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(3, 2);
  Eigen::MatrixXcd e = mse_matrix(h, zero, zero, 0.7);
  CHECK((e - Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-15);
}

TEST_CASE("mse matrix with the MMSE combiner matches its closed form") {
  // Independent route: E = I - W_s^H H^H (sigma^2 I + H W_s W_s^H H^H)^-1 H W_s.
  SplitMix64 rng(22);
  for (int t = 0; t < 10; ++t) {
    ChannelSet ch = random_channel(200 + t, 6, 4, 3);
    Eigen::VectorXcd theta = random_unit_theta(rng, 6);
    Eigen::MatrixXcd h = effective_channel(ch, theta);
    Eigen::MatrixXcd ws = random_matrix(rng, 4, 2);
    double sigma2 = 0.4;

    Eigen::MatrixXcd wd = mmse_combiner(h, ws, sigma2);
    Eigen::MatrixXcd e = mse_matrix(h, ws, wd, sigma2);

    Eigen::MatrixXcd hp = h * ws;
    Eigen::MatrixXcd cov =
        sigma2 * Eigen::MatrixXcd::Identity(3, 3) + hp * hp.adjoint();
    Eigen::MatrixXcd closed =
        Eigen::MatrixXcd::Identity(2, 2) - hp.adjoint() * cov.inverse() * hp;
    CHECK((e - closed).norm() < 1e-10);

    // PSD within roundoff.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(e, Eigen::EigenvaluesOnly);
    CHECK(eig.eigenvalues().minCoeff() > -1e-10);
  }
}

TEST_CASE("mmse combiner is stationary for the weighted trace") {
  // Finite-difference check: perturbing any real coordinate of the combiner
  // cannot reduce trace(W E) to first order.
  SplitMix64 rng(23);
  ChannelSet ch = random_channel(300, 4, 3, 3);
  Eigen::VectorXcd theta = random_unit_theta(rng, 4);
  Eigen::MatrixXcd h = effective_channel(ch, theta);
  Eigen::MatrixXcd ws = random_matrix(rng, 3, 2);
  Eigen::MatrixXcd w = random_hpd(rng, 2);
  double sigma2 = 0.6;
  Eigen::MatrixXcd wd = mmse_combiner(h, ws, sigma2);

  auto objective = [&](const Eigen::MatrixXcd& c) {
    return (w * mse_matrix(h, ws, c, sigma2)).trace().real();
  };
  double base = objective(wd);
  double step = 1e-6;
  double max_grad = 0.0;
  for (int i = 0; i < wd.rows(); ++i) {
    for (int j = 0; j < wd.cols(); ++j) {
      for (std::complex<double> dir : {std::complex<double>(1, 0), std::complex<double>(0, 1)}) {
        Eigen::MatrixXcd p = wd;
        p(i, j) += step * dir;
        Eigen::MatrixXcd m = wd;
        m(i, j) -= step * dir;
        max_grad = std::max(max_grad, std::abs(objective(p) - objective(m)) / (2.0 * step));
      }
    }
  }
  CHECK(max_grad < 1e-6);
  CHECK(base > 0.0);
}

TEST_CASE("scalar mmse combiner matches the textbook formula") {
  ChannelSet ch;
  ch.h_tx_ris = Eigen::MatrixXcd::Zero(1, 1);
  ch.g_rx_ris = Eigen::MatrixXcd::Zero(1, 1);
  ch.h_direct = Eigen::MatrixXcd::Constant(1, 1, std::complex<double>(0.8, -0.3));
  Eigen::MatrixXcd h = effective_channel(ch, Eigen::VectorXcd::Ones(1));
  Eigen::MatrixXcd ws = Eigen::MatrixXcd::Constant(1, 1, 1.3);
  double sigma2 = 0.25;
  std::complex<double> expect =
      h(0, 0) * ws(0, 0) / (sigma2 + std::norm(h(0, 0) * ws(0, 0)));
  CHECK(std::abs(mmse_combiner(h, ws, sigma2)(0, 0) - expect) < 1e-12);
}

TEST_CASE("achievable rate: SISO closed form, zero precoder, and rank checks") {
  ChannelSet ch;
  ch.h_tx_ris = Eigen::MatrixXcd::Zero(1, 1);
  ch.g_rx_ris = Eigen::MatrixXcd::Zero(1, 1);
  ch.h_direct = Eigen::MatrixXcd::Constant(1, 1, std::complex<double>(0.6, 0.45));
  Eigen::MatrixXcd h = effective_channel(ch, Eigen::VectorXcd::Ones(1));
  double p = 2.0, sigma2 = 0.5;
  Eigen::MatrixXcd ws = Eigen::MatrixXcd::Constant(1, 1, std::sqrt(p));
  // Any nonzero combiner gives the same SISO rate.
  for (double c : {1.0, 0.3, -2.0}) {
    Eigen::MatrixXcd wd = Eigen::MatrixXcd::Constant(1, 1, c);
    double expect = std::log2(1.0 + p * std::norm(h(0, 0)) / sigma2);
    CHECK(achievable_rate(h, ws, wd, sigma2) == doctest::Approx(expect).epsilon(1e-12));
  }

  Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(1, 1);
  Eigen::MatrixXcd wd = Eigen::MatrixXcd::Constant(1, 1, 1.0);
  CHECK(achievable_rate(h, zero, wd, sigma2) == 0.0);
  CHECK_THROWS_WITH_AS(achievable_rate(h, ws, zero, sigma2), "singular combiner Gram",
                       std::runtime_error);
}

TEST_CASE("rate equals log2 det inverse MSE under the MMSE combiner") {
  SplitMix64 rng(24);
  for (int t = 0; t < 25; ++t) {
    ChannelSet ch = random_channel(400 + t, 5, 4, 4);
    Eigen::VectorXcd theta = random_unit_theta(rng, 5);
    Eigen::MatrixXcd h = effective_channel(ch, theta);
    Eigen::MatrixXcd ws = random_matrix(rng, 4, 3);
    double sigma2 = 0.8;
    Eigen::MatrixXcd wd = mmse_combiner(h, ws, sigma2);
    double r1 = achievable_rate(h, ws, wd, sigma2);
    double r2 = rate_from_mse(mse_matrix(h, ws, wd, sigma2));
    CHECK(std::abs(r1 - r2) <= 1e-9);
  }
}

TEST_CASE("weight update inverts the MSE matrix") {
  SplitMix64 rng(25);
  Eigen::MatrixXcd e = random_hpd(rng, 4);
  Eigen::MatrixXcd w = weight_update(e);
  CHECK((w * e - Eigen::MatrixXcd::Identity(4, 4)).norm() < 1e-12);
  CHECK((weight_update(Eigen::MatrixXcd::Identity(3, 3)) -
         Eigen::MatrixXcd::Identity(3, 3))
            .norm() < 1e-14);

  Eigen::MatrixXcd singular = Eigen::MatrixXcd::Zero(2, 2);
  singular(0, 0) = 1.0;
  CHECK_THROWS_WITH_AS(weight_update(singular), "MSE matrix singular", std::runtime_error);
}

TEST_CASE("bisection solves the power equation") {
  SUBCASE("unit curvature analytic point") {
    Eigen::VectorXd lam = Eigen::VectorXd::Ones(1);
    Eigen::VectorXd phi = Eigen::VectorXd::Constant(1, 4.0);
    // 4 / (1 + mu)^2 = 1 at mu = 1.
    CHECK(bisection_mu(lam, phi, 1.0) == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("random instances satisfy the equation") {
    SplitMix64 rng(26);
    for (int t = 0; t < 20; ++t) {
      Eigen::VectorXd lam(4), phi(4);
      for (int i = 0; i < 4; ++i) {
        lam(i) = rng.uniform(0.0, 2.0);
        phi(i) = rng.uniform(0.1, 3.0);
      }
      double power = rng.uniform(0.2, 2.0);
      // Only valid when the unconstrained power exceeds the budget.
      double p0 = 0.0;
      for (int i = 0; i < 4; ++i) p0 += phi(i) / ((lam(i) + 1e-12) * (lam(i) + 1e-12));
      if (p0 <= power) continue;
      double mu = bisection_mu(lam, phi, power);
      double achieved = 0.0;
      for (int i = 0; i < 4; ++i) achieved += phi(i) / ((lam(i) + mu) * (lam(i) + mu));
      CHECK(achieved == doctest::Approx(power).epsilon(1e-8));
    }
  }
  SUBCASE("zero coupling throws") {
    Eigen::VectorXd lam = Eigen::VectorXd::Ones(2);
    Eigen::VectorXd phi = Eigen::VectorXd::Zero(2);
    CHECK_THROWS_WITH_AS(bisection_mu(lam, phi, 1.0), "zero objective coupling",
                         std::runtime_error);
  }
}

TEST_CASE("precoder update: power feasibility and the two branches") {
  SplitMix64 rng(27);
  for (int t = 0; t < 20; ++t) {
    ChannelSet ch = random_channel(500 + t, 5, 4, 3);
    Eigen::VectorXcd theta = random_unit_theta(rng, 5);
    Eigen::MatrixXcd h = effective_channel(ch, theta);
    Eigen::MatrixXcd wd = random_matrix(rng, 3, 2);
    Eigen::MatrixXcd w = random_hpd(rng, 2);
    double power = 1.0;
    PrecoderResult pr = precoder_update(h, wd, w, power);
    double used = pr.precoder.squaredNorm();
    CHECK(used <= power + 1e-8);
    CHECK(pr.mu >= 0.0);
    if (pr.mu > 0.0) {
      // Active constraint: the budget is spent.
      CHECK(used == doctest::Approx(power).epsilon(1e-6));
    }
    // Stationarity of the Lagrangian at the returned point.
    Eigen::MatrixXcd m = h.adjoint() * wd;
    Eigen::MatrixXcd grad =
        m * w * m.adjoint() * pr.precoder - m * w + pr.mu * pr.precoder;
    CHECK(grad.norm() < 1e-7 * std::max(1.0, (m * w).norm()));
  }
}

TEST_CASE("precoder update interior branch solves the normal equations") {
  // A tiny weight shrinks the unconstrained solution inside the power ball.
  SplitMix64 rng(28);
  ChannelSet ch = random_channel(600, 4, 3, 3);
  Eigen::MatrixXcd h = effective_channel(ch, random_unit_theta(rng, 4));
  Eigen::MatrixXcd wd = random_matrix(rng, 3, 2);
  Eigen::MatrixXcd w = 1e-4 * random_hpd(rng, 2);
  PrecoderResult pr = precoder_update(h, wd, w, 10.0);
  CHECK(pr.mu == 0.0);
  Eigen::MatrixXcd m = h.adjoint() * wd;
  Eigen::MatrixXcd lhs = m * w * m.adjoint() * pr.precoder;
  CHECK((lhs - m * w).norm() < 1e-8 * (m * w).norm());
}

TEST_CASE("scalar precoder closed form") {
  ChannelSet ch;
  ch.h_tx_ris = Eigen::MatrixXcd::Zero(1, 1);
  ch.g_rx_ris = Eigen::MatrixXcd::Zero(1, 1);
  ch.h_direct = Eigen::MatrixXcd::Constant(1, 1, std::complex<double>(1.1, 0.2));
  Eigen::MatrixXcd h = effective_channel(ch, Eigen::VectorXcd::Ones(1));
  Eigen::MatrixXcd wd = Eigen::MatrixXcd::Constant(1, 1, std::complex<double>(0.7, -0.1));
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Constant(1, 1, 3.0);
  double power = 0.04;  // small enough to activate the constraint
  PrecoderResult pr = precoder_update(h, wd, w, power);
  CHECK(pr.mu > 0.0);
  CHECK(pr.precoder.squaredNorm() == doctest::Approx(power).epsilon(1e-8));
  // Closed form: w_s = m w / (|m|^2 w + mu) with m = conj(h) w_d, and the
  // active multiplier mu = |m| w / sqrt(P) - |m|^2 w.
  std::complex<double> m = std::conj(h(0, 0)) * wd(0, 0);
  double mu_expect = std::abs(m) * 3.0 / std::sqrt(power) - std::norm(m) * 3.0;
  CHECK(pr.mu == doctest::Approx(mu_expect).epsilon(1e-7));
  std::complex<double> ws_expect = m * 3.0 / (std::norm(m) * 3.0 + pr.mu);
  CHECK(std::abs(pr.precoder(0, 0) - ws_expect) < 1e-9);
}

TEST_CASE("one block sweep never increases the surrogate objective") {
  SplitMix64 rng(29);
  for (int t = 0; t < 20; ++t) {
    ChannelSet ch = random_channel(700 + t, 6, 4, 4);
    Eigen::VectorXcd theta = random_unit_theta(rng, 6);
    Eigen::MatrixXcd h = effective_channel(ch, theta);
    TransceiverState st = test::random_state(rng, ch, 3, 1.0);
    double sigma2 = 0.5;

    double f0 = wmse_objective(h, st.precoder, st.combiner, st.weight, sigma2);
    st.combiner = mmse_combiner(h, st.precoder, sigma2);
    double f1 = wmse_objective(h, st.precoder, st.combiner, st.weight, sigma2);
    st.weight = weight_update(mse_matrix(h, st.precoder, st.combiner, sigma2));
    double f2 = wmse_objective(h, st.precoder, st.combiner, st.weight, sigma2);
    st.precoder = precoder_update(h, st.combiner, st.weight, 1.0).precoder;
    double f3 = wmse_objective(h, st.precoder, st.combiner, st.weight, sigma2);

    CHECK(f1 <= f0 + 1e-9);
    CHECK(f2 <= f1 + 1e-9);
    CHECK(f3 <= f2 + 1e-9);
  }
}
