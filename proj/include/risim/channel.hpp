// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 risim contributors

#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace risim {

// Planar or linear array. A ULA is the count_y == 1 special case of the UPA,
// so one response routine covers both.
struct ArrayGeometry {
  int count_x = 1;
  int count_y = 1;
  double spacing_ratio = 0.5;  // element spacing over carrier wavelength

  int size() const { return count_x * count_y; }

  static ArrayGeometry ula(int n, double spacing = 0.5) { return {n, 1, spacing}; }
  static ArrayGeometry upa(int nx, int ny, double spacing = 0.5) { return {nx, ny, spacing}; }

  // Factors n as nx * ny with nx the largest divisor <= sqrt(n), so element
  // sweeps keep the panel as square as possible (16 -> 4x4, 32 -> 4x8,
  // 128 -> 8x16). Prime n degenerates to a 1 x n strip.
  static ArrayGeometry near_square(int n, double spacing = 0.5);
};

struct ChannelDrawConfig {
  int n_tx = 4;                  // transmit antennas (ULA)
  int n_rx = 4;                  // receive antennas (ULA)
  ArrayGeometry ris_geometry;    // reflecting surface
  int n_clusters = 8;
  int n_paths = 10;              // rays per cluster
  double tx_rx_spacing = 0.5;    // spacing ratio of the tx/rx ULAs
  std::uint64_t seed = 0;
};

// One narrowband channel realization. Naming follows the cascaded link:
// tx --h_tx_ris--> RIS --(adjoint of g_rx_ris)--> rx, plus the direct path.
struct ChannelSet {
  Eigen::MatrixXcd h_tx_ris;  // N x N_tx
  Eigen::MatrixXcd g_rx_ris;  // N x N_rx
  Eigen::MatrixXcd h_direct;  // N_rx x N_tx
};

// Unit-norm ULA steering vector, element k proportional to
// exp(-j 2 pi spacing k sin(phi)).
Eigen::VectorXcd ula_response(double phi, int m, double spacing_ratio);

// UPA response: ula(azimuth, nx) Kronecker ula(elevation, ny). Unit norm.
Eigen::VectorXcd upa_response(double phi_az, double phi_el, int nx, int ny,
                              double spacing_ratio);

// Clustered multipath draw. Path gains are unit-variance complex Gaussian;
// azimuth and departure angles are uniform on [0, 2pi), elevation uniform on
// [-pi/2, pi/2). Scaling keeps E||H||_F^2 equal to the product of the two
// array sizes. Deterministic in cfg.seed; the three matrices use independent
// derived substreams so changing one never shifts the others.
ChannelSet draw_channels(const ChannelDrawConfig& cfg);

// Deterministic digest of a realization, used to confirm that paired sweep
// cells really saw identical channels.
std::uint64_t channel_checksum(const ChannelSet& ch);

}  // namespace risim
