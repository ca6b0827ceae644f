// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 risim contributors

#include "risim/channel.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "risim/rng.hpp"

namespace risim {

namespace {

// Draws one clustered-multipath matrix: sum over n_cl * n_p rays of
// gain * a_out(angles) * a_in(angle)^H, normalized so the expected squared
// Frobenius norm equals rows * cols. a_out may be planar; a_in is a ULA.
// Per-ray draw order (gain, azimuth, elevation, departure) is part of the
// reproducibility contract.
Eigen::MatrixXcd draw_cluster_matrix(const ArrayGeometry& out_geom, int in_count,
                                     double in_spacing, int n_clusters, int n_paths,
                                     SplitMix64& rng) {
  const int rows = out_geom.size();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rows, in_count);
  for (int c = 0; c < n_clusters; ++c) {
    for (int p = 0; p < n_paths; ++p) {
      std::complex<double> gain = rng.next_cnormal();
      double az = rng.uniform(0.0, 2.0 * M_PI);
      double el = rng.uniform(-M_PI / 2.0, M_PI / 2.0);
      double dep = rng.uniform(0.0, 2.0 * M_PI);
      Eigen::VectorXcd a_out = upa_response(az, el, out_geom.count_x, out_geom.count_y,
                                            out_geom.spacing_ratio);
      Eigen::VectorXcd a_in = ula_response(dep, in_count, in_spacing);
      m.noalias() += gain * a_out * a_in.adjoint();
    }
  }
  double scale = std::sqrt(static_cast<double>(rows) * in_count /
                           (static_cast<double>(n_clusters) * n_paths));
  return scale * m;
}

void hash_matrix(const Eigen::MatrixXcd& m, std::uint64_t& h) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      h = derive_seed(h, {std::bit_cast<std::uint64_t>(m(i, j).real()),
                          std::bit_cast<std::uint64_t>(m(i, j).imag())});
    }
  }
}

}  // namespace

ArrayGeometry ArrayGeometry::near_square(int n, double spacing) {
  if (n < 1) throw std::invalid_argument("array size must be positive");
  int nx = 1;
  for (int d = 1; d * d <= n; ++d) {
    if (n % d == 0) nx = d;
  }
  return {nx, n / nx, spacing};
}

Eigen::VectorXcd ula_response(double phi, int m, double spacing_ratio) {
  if (m < 1) throw std::invalid_argument("array size must be positive");
  Eigen::VectorXcd a(m);
  double step = -2.0 * M_PI * spacing_ratio * std::sin(phi);
  double norm = 1.0 / std::sqrt(static_cast<double>(m));
  for (int k = 0; k < m; ++k) {
    a(k) = std::polar(norm, step * k);
  }
  return a;
}

Eigen::VectorXcd upa_response(double phi_az, double phi_el, int nx, int ny,
                              double spacing_ratio) {
  Eigen::VectorXcd ax = ula_response(phi_az, nx, spacing_ratio);
  Eigen::VectorXcd ay = ula_response(phi_el, ny, spacing_ratio);
  Eigen::VectorXcd a(nx * ny);
  for (int i = 0; i < nx; ++i) {
    a.segment(i * ny, ny) = ax(i) * ay;
  }
  return a;
}

ChannelSet draw_channels(const ChannelDrawConfig& cfg) {
  if (cfg.n_tx < 1 || cfg.n_rx < 1 || cfg.ris_geometry.size() < 1) {
    throw std::invalid_argument("channel dimensions must be positive");
  }
  if (cfg.n_clusters < 1 || cfg.n_paths < 1) {
    throw std::invalid_argument("cluster and path counts must be positive");
  }
  SplitMix64 rng_h(derive_seed(cfg.seed, {0}));
  SplitMix64 rng_g(derive_seed(cfg.seed, {1}));
  SplitMix64 rng_d(derive_seed(cfg.seed, {2}));

  ChannelSet ch;
  ch.h_tx_ris = draw_cluster_matrix(cfg.ris_geometry, cfg.n_tx, cfg.tx_rx_spacing,
                                    cfg.n_clusters, cfg.n_paths, rng_h);
  ch.g_rx_ris = draw_cluster_matrix(cfg.ris_geometry, cfg.n_rx, cfg.tx_rx_spacing,
                                    cfg.n_clusters, cfg.n_paths, rng_g);
  ch.h_direct = draw_cluster_matrix(ArrayGeometry::ula(cfg.n_rx, cfg.tx_rx_spacing),
                                    cfg.n_tx, cfg.tx_rx_spacing, cfg.n_clusters,
                                    cfg.n_paths, rng_d);
  return ch;
}

std::uint64_t channel_checksum(const ChannelSet& ch) {
  std::uint64_t h = 0x8d5fb1c4a7e92d63ull;
  hash_matrix(ch.h_tx_ris, h);
  hash_matrix(ch.g_rx_ris, h);
  hash_matrix(ch.h_direct, h);
  return h;
}

}  // namespace risim
