// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 risim contributors

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "risim/reflector.hpp"
#include "risim/scf.hpp"
#include "risim/sdr.hpp"
#include "risim/wmmse.hpp"

namespace risim {

enum class Variant { SCF, SDR, RANDOM_RIS, NO_RIS };

std::string variant_name(Variant v);

struct AlgorithmOptions {
  Variant variant = Variant::SCF;
  double outer_tol = 1e-4;   // relative change of the surrogate objective
  int max_outer = 100;
  double scf_eps = 1e-4;
  int scf_max_iter = 500;
  double sdr_tol = 1e-6;
  int sdr_max_iter = 5000;
  int sdr_trials = 500;
  std::uint64_t seed = 0;    // randomized-rounding trials and RANDOM_RIS draw
  std::optional<int> quant_bits;  // quantize final phases to 2^bits levels
  std::optional<double> lambda_shift;
};

struct OptimizationResult {
  TransceiverState state;
  // Surrogate objective trace(W E) - log2 det(W) at the end of each outer
  // iteration, and after every block update (combiner, weight, precoder,
  // reflector) in update order. Reflector-free variants log three per sweep.
  std::vector<double> objective_trace;
  std::vector<double> objective_chain;
  double rate = 0.0;           // bits/s/Hz
  double nmse = 0.0;           // trace(E) / N_s
  double channel_power = 0.0;  // ||H_eq||_F^2
  int outer_iterations = 0;
  double wall_time_ms = 0.0;
  double mu = 0.0;             // power multiplier of the last precoder update
  double lambda_shift = 0.0;   // shift of the last reflector solve (0 if none)
};

struct Metrics {
  double rate = 0.0;
  double nmse = 0.0;
  double channel_power = 0.0;
};

struct KktResidual {
  double precoder_res = 0.0;
  double reflector_res = 0.0;
  double feasibility_res = 0.0;
};

// Alternating optimization of combiner, weight, precoder and reflection
// phases until the surrogate objective stalls. Variants: SCF / SDR pick the
// reflector solver; RANDOM_RIS draws theta once (uniform phases) and only
// adapts the transceiver; NO_RIS removes the reflected path entirely.
OptimizationResult run_joint_optimization(const ChannelSet& ch, const SystemConfig& sys,
                                          const AlgorithmOptions& opts = {});

// Nearest point of the 2^bits-level uniform phase grid, wrapping across +-pi.
Eigen::VectorXcd quantize_phases(const Eigen::VectorXcd& theta, int bits);

// rate / nmse / channel power of a given operating point. A zero precoder
// carries no information: rate 0 regardless of the combiner.
Metrics compute_metrics(const ChannelSet& ch, const SystemConfig& sys,
                        const TransceiverState& state);

// Stationarity and feasibility residuals of the joint problem at a candidate
// point. mu is the precoder power multiplier in force; lift fixes the
// reflector shift lambda.
KktResidual kkt_residual(const ChannelSet& ch, const SystemConfig& sys,
                         const TransceiverState& state, double mu, const RealLift& lift);

}  // namespace risim
