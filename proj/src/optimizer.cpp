// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 risim contributors

#include "risim/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "risim/linalg.hpp"
#include "risim/rng.hpp"

namespace risim {

namespace {

constexpr std::uint64_t kRandomRisTag = 0x7261;  // substream tags within opts.seed
constexpr std::uint64_t kSdrRoundTag = 0x5d4;

void validate(const ChannelSet& ch, const SystemConfig& sys) {
  if (sys.n_streams < 1) throw std::invalid_argument("stream count must be positive");
  if (sys.power_budget <= 0.0) throw std::invalid_argument("power budget must be positive");
  if (sys.noise_power <= 0.0) throw std::invalid_argument("noise power must be positive");
  const Eigen::Index n_tx = ch.h_direct.cols();
  const Eigen::Index n_rx = ch.h_direct.rows();
  if (sys.n_streams > std::min(n_tx, n_rx)) {
    throw std::invalid_argument("stream count exceeds antenna count");
  }
}

// Dominant right singular vectors of the initial effective channel, scaled to
// spend the full budget evenly across streams.
Eigen::MatrixXcd initial_precoder(const Eigen::MatrixXcd& h_eq, const SystemConfig& sys) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(h_eq, Eigen::ComputeThinV);
  Eigen::MatrixXcd v = svd.matrixV().leftCols(sys.n_streams);
  return std::sqrt(sys.power_budget / sys.n_streams) * v;
}

}  // namespace

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::SCF: return "scf";
    case Variant::SDR: return "sdr";
    case Variant::RANDOM_RIS: return "random_ris";
    case Variant::NO_RIS: return "no_ris";
  }
  throw std::invalid_argument("unknown variant");
}

OptimizationResult run_joint_optimization(const ChannelSet& ch, const SystemConfig& sys,
                                          const AlgorithmOptions& opts) {
  validate(ch, sys);
  auto t0 = std::chrono::steady_clock::now();

  // Variants operate on a local copy: NO_RIS removes the reflected path, so
  // every downstream formula degenerates to the direct link.
  ChannelSet work = ch;
  if (opts.variant == Variant::NO_RIS) work.g_rx_ris.setZero();
  const Eigen::Index n = work.h_tx_ris.rows();
  const bool adapt_theta = opts.variant == Variant::SCF || opts.variant == Variant::SDR;

  TransceiverState st;
  st.theta = Eigen::VectorXcd::Ones(n);
  if (opts.variant == Variant::RANDOM_RIS) {
    SplitMix64 rng(derive_seed(opts.seed, {kRandomRisTag}));
    for (Eigen::Index i = 0; i < n; ++i) {
      st.theta(i) = std::polar(1.0, rng.uniform(0.0, 2.0 * M_PI));
    }
  }

  Eigen::MatrixXcd h_eq = effective_channel(work, st.theta);
  st.precoder = initial_precoder(h_eq, sys);
  st.weight = Eigen::MatrixXcd::Identity(sys.n_streams, sys.n_streams);
  st.combiner = Eigen::MatrixXcd::Zero(work.g_rx_ris.cols(), sys.n_streams);

  OptimizationResult out;
  auto log_chain = [&] {
    out.objective_chain.push_back(
        wmse_objective(h_eq, st.precoder, st.combiner, st.weight, sys.noise_power));
  };

  double f_prev = 0.0;
  for (int t = 1; t <= opts.max_outer; ++t) {
    st.combiner = mmse_combiner(h_eq, st.precoder, sys.noise_power);
    log_chain();

    Eigen::MatrixXcd e = mse_matrix(h_eq, st.precoder, st.combiner, sys.noise_power);
    st.weight = weight_update(e);
    log_chain();

    PrecoderResult pr = precoder_update(h_eq, st.combiner, st.weight, sys.power_budget);
    st.precoder = pr.precoder;
    out.mu = pr.mu;
    log_chain();

    if (adapt_theta) {
      ReflectorQuadratic q = build_reflector_quadratic(work, st, sys.noise_power);
      if (opts.variant == Variant::SCF) {
        ScfOptions so;
        so.eps = opts.scf_eps;
        so.max_iter = opts.scf_max_iter;
        so.lambda_shift = opts.lambda_shift;
        ScfResult sr = scf_solve(q, st.theta, so);
        st.theta = sr.theta;
        out.lambda_shift = sr.lambda_shift;
      } else {
        SdrOptions so;
        so.tol = opts.sdr_tol;
        so.max_iter = opts.sdr_max_iter;
        so.trials = opts.sdr_trials;
        // Fresh rounding draws each sweep, still deterministic in opts.seed.
        so.seed = derive_seed(opts.seed, {kSdrRoundTag, static_cast<std::uint64_t>(t)});
        st.theta = sdr_solve(q, so);
      }
      h_eq = effective_channel(work, st.theta);
      log_chain();
    }

    double f = out.objective_chain.back();
    out.objective_trace.push_back(f);
    out.outer_iterations = t;
    if (t > 1 && std::abs(f - f_prev) < opts.outer_tol * std::max(std::abs(f_prev), 1e-12)) {
      break;
    }
    f_prev = f;
  }

  if (opts.quant_bits) {
    st.theta = quantize_phases(st.theta, *opts.quant_bits);
    h_eq = effective_channel(work, st.theta);
    // One transceiver resweep against the quantized surface.
    st.combiner = mmse_combiner(h_eq, st.precoder, sys.noise_power);
    st.weight = weight_update(mse_matrix(h_eq, st.precoder, st.combiner, sys.noise_power));
    PrecoderResult pr = precoder_update(h_eq, st.combiner, st.weight, sys.power_budget);
    st.precoder = pr.precoder;
    out.mu = pr.mu;
  }

  Metrics m = compute_metrics(work, sys, st);
  out.rate = m.rate;
  out.nmse = m.nmse;
  out.channel_power = m.channel_power;
  out.state = std::move(st);
  out.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

Eigen::VectorXcd quantize_phases(const Eigen::VectorXcd& theta, int bits) {
  if (bits < 1 || bits > 30) throw std::invalid_argument("quantizer bits out of range");
  const long levels = 1L << bits;
  const double step = 2.0 * M_PI / static_cast<double>(levels);
  Eigen::VectorXcd out(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    long idx = std::lround(std::arg(theta(i)) / step);
    idx = ((idx % levels) + levels) % levels;  // wrap the +-pi seam onto the grid
    out(i) = std::polar(1.0, step * static_cast<double>(idx));
  }
  return out;
}

Metrics compute_metrics(const ChannelSet& ch, const SystemConfig& sys,
                        const TransceiverState& state) {
  Eigen::MatrixXcd h_eq = effective_channel(ch, state.theta);
  Metrics m;
  m.channel_power = h_eq.squaredNorm();
  Eigen::MatrixXcd e = mse_matrix(h_eq, state.precoder, state.combiner, sys.noise_power);
  m.nmse = e.trace().real() / static_cast<double>(sys.n_streams);

  // The rate depends on the combiner only through its column space, so feed
  // achievable_rate a rank-revealing orthonormal basis instead of the raw
  // filter: a converged receiver may drop a stream at low SNR (zero combiner
  // column), which would otherwise trip the full-column-rank precondition.
  m.rate = 0.0;
  if (state.precoder.norm() != 0.0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(state.combiner);
    qr.setThreshold(1e-12);
    const Eigen::Index rank = qr.rank();
    if (rank > 0) {
      Eigen::MatrixXcd basis = qr.householderQ() *
                               Eigen::MatrixXcd::Identity(state.combiner.rows(), rank);
      m.rate = achievable_rate(h_eq, state.precoder, basis, sys.noise_power);
    }
  }
  return m;
}

KktResidual kkt_residual(const ChannelSet& ch, const SystemConfig& sys,
                         const TransceiverState& state, double mu, const RealLift& lift) {
  Eigen::MatrixXcd h_eq = effective_channel(ch, state.theta);
  Eigen::MatrixXcd hc = h_eq.adjoint() * state.combiner;  // N_tx x N_s

  KktResidual r;
  Eigen::MatrixXcd grad = hc * state.weight * hc.adjoint() * state.precoder -
                          hc * state.weight + mu * state.precoder;
  r.precoder_res = grad.norm();

  const Eigen::Index n = state.theta.size();
  Eigen::VectorXd x(2 * n + 1);
  x.head(n) = state.theta.real();
  x.segment(n, n) = state.theta.imag();
  x(2 * n) = 1.0;
  r.reflector_res = reflector_stationarity_residual(lift, x);

  double power_gap = std::abs(state.precoder.squaredNorm() - sys.power_budget);
  double unit_gap = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    unit_gap = std::max(unit_gap, std::abs(x(k) * x(k) + x(k + n) * x(k + n) - 1.0));
  }
  r.feasibility_res = std::max(mu > 0.0 ? power_gap : 0.0, unit_gap);
  return r;
}

}  // namespace risim
