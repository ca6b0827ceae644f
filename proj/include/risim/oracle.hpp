// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 risim contributors

#pragma once

#include <Eigen/Dense>

#include "risim/channel.hpp"
#include "risim/wmmse.hpp"

namespace risim {

// Capacity of a fixed MIMO channel under a total power budget and a stream
// cap: water-filling over the top n_streams eigenvalues of H^H H. This equals
// the rate of a fully converged transceiver at fixed reflection phases, which
// makes it an independent reference for the alternating solver.
double waterfilling_capacity(const Eigen::MatrixXcd& h_eq, double power, double noise_power,
                             int n_streams);

struct GridOracleResult {
  double best_rate = 0.0;
  Eigen::VectorXcd best_theta;
};

// Exhaustive search over a uniform phase grid (grid_points per reflector
// element), scoring each point with waterfilling_capacity. Only sized for
// very small surfaces; N > 3 throws.
GridOracleResult grid_search_best_rate(const ChannelSet& ch, const SystemConfig& sys,
                                       int grid_points);

}  // namespace risim
