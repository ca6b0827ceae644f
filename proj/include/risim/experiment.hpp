// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 risim contributors

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "risim/channel.hpp"
#include "risim/optimizer.hpp"

namespace risim {

enum class SweepAxis { SNR_DB, N_ELEMENTS, N_TX, N_STREAMS, QUANT_BITS };

std::string axis_name(SweepAxis axis);

// One Monte-Carlo experiment: sweep one axis, run each listed algorithm on
// the same channel draws, repeat over seeds. Everything not swept comes from
// the base fields below.
struct ExperimentSpec {
  SweepAxis axis = SweepAxis::SNR_DB;
  std::vector<double> values;
  std::vector<Variant> algorithms = {Variant::SCF};
  int num_seeds = 1;
  std::uint64_t base_seed = 1;

  int n_tx = 4;
  int n_rx = 4;
  int n_streams = 4;
  int n_elements = 32;
  std::optional<std::pair<int, int>> ris_shape;  // explicit nx x ny panel
  double snr_db = 0.0;  // transmit power is fixed at 1, so sigma^2 = 10^(-snr/10)
  int n_clusters = 8;
  int n_paths = 10;
  double spacing = 0.5;

  AlgorithmOptions solver;          // tolerance/iteration template, variant ignored
  std::optional<int> quant_bits;    // applied to every algorithm unless swept
  std::string output;               // CSV/SVG base name; CLI defaults it to the file stem
  bool timing = false;              // real wall times break byte-identical reruns
  int oracle_grid = 0;              // phase-grid points for the oracle command, 0 = auto
};

// Flat key=value format, '#' starts a comment. Unknown keys, malformed
// numbers and inconsistent dimensions throw std::invalid_argument with a
// "line N:" prefix where applicable. Only `axis` and `values` are required.
ExperimentSpec parse_spec(const std::string& text);
ExperimentSpec parse_spec_file(const std::string& path);

// One (value, seed) grid point with everything derived: channel draw config
// (seeded so algorithms share the realization), system config after the axis
// override, and the solver template.
struct SweepCell {
  double value = 0.0;
  int seed_index = 0;
  ChannelDrawConfig channel_cfg;
  SystemConfig sys;
  AlgorithmOptions solver_template;
};

std::vector<SweepCell> enumerate_cells(const ExperimentSpec& spec);

// Solver options for one algorithm in a cell. Randomized substreams are keyed
// by the variant, not the list position, so reordering the algorithm list
// cannot change any draw.
AlgorithmOptions cell_options(const SweepCell& cell, Variant v);

struct ResultRow {
  std::string axis;
  double value = 0.0;
  std::string algorithm;
  int seed = 0;
  double rate_bps_hz = 0.0;
  double nmse = 0.0;
  double channel_power = 0.0;
  int iterations = 0;
  double wall_time_ms = 0.0;
  std::string status;  // "ok" or "failed: <reason>"
  std::uint64_t checksum = 0;  // channel digest, not serialized
};

// Runs every (value, seed, algorithm) combination. Solver failures become
// rows with a failure status instead of aborting the sweep. jobs > 1 spreads
// cells over that many threads; results are identical either way.
std::vector<ResultRow> run_sweep(const ExperimentSpec& spec, int jobs = 1);

// Pinned CSV schema, LF line endings, 17 significant digits so doubles
// round-trip exactly.
std::string format_csv(const std::vector<ResultRow>& rows);
void write_csv(const std::vector<ResultRow>& rows, const std::string& path);

}  // namespace risim
