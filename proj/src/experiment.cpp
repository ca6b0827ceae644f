// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 risim contributors

#include "risim/experiment.hpp"

#include <atomic>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "risim/rng.hpp"

namespace risim {

namespace {

constexpr std::uint64_t kAlgoTag = 0xa150;

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail_at(int line, const std::string& msg) {
  throw std::invalid_argument("line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& s, int line) {
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    fail_at(line, "malformed number '" + s + "'");
  }
  if (pos != s.size()) fail_at(line, "malformed number '" + s + "'");
  return v;
}

std::uint64_t parse_uint64(const std::string& s, int line) {
  size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    fail_at(line, "malformed seed '" + s + "'");
  }
  if (pos != s.size()) fail_at(line, "malformed seed '" + s + "'");
  return v;
}

long parse_int(const std::string& s, int line) {
  double v = parse_double(s, line);
  long i = std::lround(v);
  if (static_cast<double>(i) != v) fail_at(line, "expected an integer, got '" + s + "'");
  return i;
}

bool parse_bool(const std::string& s, int line) {
  if (s == "on" || s == "true" || s == "1") return true;
  if (s == "off" || s == "false" || s == "0") return false;
  fail_at(line, "expected on/off, got '" + s + "'");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

SweepAxis parse_axis(const std::string& s, int line) {
  if (s == "snr_db") return SweepAxis::SNR_DB;
  if (s == "n_elements") return SweepAxis::N_ELEMENTS;
  if (s == "n_tx") return SweepAxis::N_TX;
  if (s == "n_streams") return SweepAxis::N_STREAMS;
  if (s == "quant_bits") return SweepAxis::QUANT_BITS;
  fail_at(line, "unknown axis '" + s + "'");
}

Variant parse_variant(const std::string& s, int line) {
  if (s == "scf") return Variant::SCF;
  if (s == "sdr") return Variant::SDR;
  if (s == "random_ris") return Variant::RANDOM_RIS;
  if (s == "no_ris") return Variant::NO_RIS;
  fail_at(line, "unknown algorithm '" + s + "'");
}

double snr_db_to_noise(double snr_db, double power) {
  return power / std::pow(10.0, snr_db / 10.0);
}

// Axis-specific validation so bad sweeps fail at parse time, not mid-run.
void validate_spec(const ExperimentSpec& spec) {
  if (spec.values.empty()) throw std::invalid_argument("missing required key 'values'");
  for (size_t i = 1; i < spec.values.size(); ++i) {
    if (spec.values[i] <= spec.values[i - 1]) {
      throw std::invalid_argument("sweep values must be strictly increasing");
    }
  }
  auto require_integers = [&](double min_allowed, const char* what) {
    for (double v : spec.values) {
      if (v != std::floor(v) || v < min_allowed) {
        throw std::invalid_argument(std::string("sweep values for ") + what +
                                    " must be integers >= " + std::to_string((int)min_allowed));
      }
    }
  };
  int min_antennas = std::min(spec.n_tx, spec.n_rx);
  switch (spec.axis) {
    case SweepAxis::SNR_DB:
      break;
    case SweepAxis::N_ELEMENTS:
      require_integers(1, "n_elements");
      break;
    case SweepAxis::N_TX:
      require_integers(1, "n_tx");
      for (double v : spec.values) {
        if (spec.n_streams > std::min(static_cast<int>(v), spec.n_rx)) {
          throw std::invalid_argument("n_streams exceeds antenna count at sweep value " +
                                      std::to_string(static_cast<int>(v)));
        }
      }
      break;
    case SweepAxis::N_STREAMS:
      require_integers(1, "n_streams");
      if (spec.values.back() > min_antennas) {
        throw std::invalid_argument("n_streams exceeds antenna count at sweep value " +
                                    std::to_string(static_cast<int>(spec.values.back())));
      }
      break;
    case SweepAxis::QUANT_BITS:
      require_integers(0, "quant_bits");  // 0 means continuous phases
      break;
  }
  if (spec.axis != SweepAxis::N_STREAMS && spec.n_streams > min_antennas) {
    throw std::invalid_argument("n_streams exceeds antenna count");
  }
  if (spec.num_seeds < 1) throw std::invalid_argument("seeds must be positive");
  if (spec.algorithms.empty()) throw std::invalid_argument("algorithm list is empty");
  if (spec.ris_shape && spec.ris_shape->first * spec.ris_shape->second != spec.n_elements) {
    throw std::invalid_argument("ris_nx * ris_ny must equal n_elements");
  }
}

std::string sanitize_status(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return out;
}

void append_double(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

std::string axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::SNR_DB: return "snr_db";
    case SweepAxis::N_ELEMENTS: return "n_elements";
    case SweepAxis::N_TX: return "n_tx";
    case SweepAxis::N_STREAMS: return "n_streams";
    case SweepAxis::QUANT_BITS: return "quant_bits";
  }
  throw std::invalid_argument("unknown axis");
}

ExperimentSpec parse_spec(const std::string& text) {
  ExperimentSpec spec;
  std::optional<int> ris_nx, ris_ny;
  bool have_axis = false;

  std::stringstream ss(text);
  std::string raw;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    std::string s = raw.substr(0, raw.find('#'));
    s = trim(s);
    if (s.empty()) continue;
    size_t eq = s.find('=');
    if (eq == std::string::npos) fail_at(line, "expected key = value");
    std::string key = trim(s.substr(0, eq));
    std::string val = trim(s.substr(eq + 1));
    if (val.empty()) fail_at(line, "empty value for key '" + key + "'");

    if (key == "axis") {
      spec.axis = parse_axis(val, line);
      have_axis = true;
    } else if (key == "values") {
      spec.values.clear();
      for (const std::string& item : split_list(val)) {
        spec.values.push_back(parse_double(item, line));
      }
    } else if (key == "algorithms") {
      spec.algorithms.clear();
      for (const std::string& item : split_list(val)) {
        spec.algorithms.push_back(parse_variant(item, line));
      }
    } else if (key == "seeds") {
      spec.num_seeds = static_cast<int>(parse_int(val, line));
    } else if (key == "base_seed") {
      spec.base_seed = parse_uint64(val, line);
    } else if (key == "n_tx") {
      spec.n_tx = static_cast<int>(parse_int(val, line));
    } else if (key == "n_rx") {
      spec.n_rx = static_cast<int>(parse_int(val, line));
    } else if (key == "n_streams") {
      spec.n_streams = static_cast<int>(parse_int(val, line));
    } else if (key == "n_elements") {
      spec.n_elements = static_cast<int>(parse_int(val, line));
    } else if (key == "ris_nx") {
      ris_nx = static_cast<int>(parse_int(val, line));
    } else if (key == "ris_ny") {
      ris_ny = static_cast<int>(parse_int(val, line));
    } else if (key == "snr_db") {
      spec.snr_db = parse_double(val, line);
    } else if (key == "n_clusters") {
      spec.n_clusters = static_cast<int>(parse_int(val, line));
    } else if (key == "n_paths") {
      spec.n_paths = static_cast<int>(parse_int(val, line));
    } else if (key == "spacing") {
      spec.spacing = parse_double(val, line);
    } else if (key == "outer_tol") {
      spec.solver.outer_tol = parse_double(val, line);
    } else if (key == "max_outer") {
      spec.solver.max_outer = static_cast<int>(parse_int(val, line));
    } else if (key == "scf_eps") {
      spec.solver.scf_eps = parse_double(val, line);
    } else if (key == "scf_max_iter") {
      spec.solver.scf_max_iter = static_cast<int>(parse_int(val, line));
    } else if (key == "sdr_tol") {
      spec.solver.sdr_tol = parse_double(val, line);
    } else if (key == "sdr_max_iter") {
      spec.solver.sdr_max_iter = static_cast<int>(parse_int(val, line));
    } else if (key == "sdr_trials") {
      spec.solver.sdr_trials = static_cast<int>(parse_int(val, line));
    } else if (key == "quant_bits") {
      spec.quant_bits = static_cast<int>(parse_int(val, line));
    } else if (key == "output") {
      spec.output = val;
    } else if (key == "timing") {
      spec.timing = parse_bool(val, line);
    } else if (key == "oracle_grid") {
      spec.oracle_grid = static_cast<int>(parse_int(val, line));
    } else {
      fail_at(line, "unknown key '" + key + "'");
    }
  }

  if (!have_axis) throw std::invalid_argument("missing required key 'axis'");
  if (ris_nx.has_value() != ris_ny.has_value()) {
    throw std::invalid_argument("ris_nx and ris_ny must be given together");
  }
  if (ris_nx) spec.ris_shape = std::make_pair(*ris_nx, *ris_ny);
  validate_spec(spec);
  return spec;
}

ExperimentSpec parse_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open spec file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str());
}

std::vector<SweepCell> enumerate_cells(const ExperimentSpec& spec) {
  std::vector<SweepCell> cells;
  cells.reserve(spec.values.size() * spec.num_seeds);
  for (double value : spec.values) {
    for (int k = 0; k < spec.num_seeds; ++k) {
      SweepCell cell;
      cell.value = value;
      cell.seed_index = k;

      int n_elements = spec.n_elements;
      int n_tx = spec.n_tx;
      if (spec.axis == SweepAxis::N_ELEMENTS) n_elements = static_cast<int>(value);
      if (spec.axis == SweepAxis::N_TX) n_tx = static_cast<int>(value);

      cell.channel_cfg.n_tx = n_tx;
      cell.channel_cfg.n_rx = spec.n_rx;
      cell.channel_cfg.ris_geometry =
          (spec.ris_shape && spec.axis != SweepAxis::N_ELEMENTS)
              ? ArrayGeometry::upa(spec.ris_shape->first, spec.ris_shape->second, spec.spacing)
              : ArrayGeometry::near_square(n_elements, spec.spacing);
      cell.channel_cfg.n_clusters = spec.n_clusters;
      cell.channel_cfg.n_paths = spec.n_paths;
      cell.channel_cfg.tx_rx_spacing = spec.spacing;
      cell.channel_cfg.seed = derive_seed(
          spec.base_seed,
          {std::bit_cast<std::uint64_t>(value), static_cast<std::uint64_t>(k)});

      cell.sys.power_budget = 1.0;
      cell.sys.n_streams =
          spec.axis == SweepAxis::N_STREAMS ? static_cast<int>(value) : spec.n_streams;
      double snr = spec.axis == SweepAxis::SNR_DB ? value : spec.snr_db;
      cell.sys.noise_power = snr_db_to_noise(snr, cell.sys.power_budget);

      cell.solver_template = spec.solver;
      cell.solver_template.quant_bits = spec.quant_bits;
      if (spec.axis == SweepAxis::QUANT_BITS) {
        cell.solver_template.quant_bits =
            value >= 1.0 ? std::optional<int>(static_cast<int>(value)) : std::nullopt;
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

AlgorithmOptions cell_options(const SweepCell& cell, Variant v) {
  AlgorithmOptions opts = cell.solver_template;
  opts.variant = v;
  opts.seed = derive_seed(cell.channel_cfg.seed,
                          {kAlgoTag, static_cast<std::uint64_t>(v)});
  return opts;
}

std::vector<ResultRow> run_sweep(const ExperimentSpec& spec, int jobs) {
  if (jobs < 1) throw std::invalid_argument("job count must be positive");
  std::vector<SweepCell> cells = enumerate_cells(spec);
  const size_t n_alg = spec.algorithms.size();
  std::vector<ResultRow> rows(cells.size() * n_alg);

  auto run_cell = [&](size_t ci) {
    const SweepCell& cell = cells[ci];
    ChannelSet ch = draw_channels(cell.channel_cfg);
    std::uint64_t digest = channel_checksum(ch);
    for (size_t a = 0; a < n_alg; ++a) {
      ResultRow& row = rows[ci * n_alg + a];
      row.axis = axis_name(spec.axis);
      row.value = cell.value;
      row.algorithm = variant_name(spec.algorithms[a]);
      row.seed = cell.seed_index;
      row.checksum = digest;
      try {
        OptimizationResult res =
            run_joint_optimization(ch, cell.sys, cell_options(cell, spec.algorithms[a]));
        row.rate_bps_hz = res.rate;
        row.nmse = res.nmse;
        row.channel_power = res.channel_power;
        row.iterations = res.outer_iterations;
        row.wall_time_ms = spec.timing ? res.wall_time_ms : 0.0;
        row.status = "ok";
      } catch (const std::exception& ex) {
        row.status = "failed: " + sanitize_status(ex.what());
      }
    }
  };

  if (jobs == 1 || cells.size() <= 1) {
    for (size_t ci = 0; ci < cells.size(); ++ci) run_cell(ci);
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&] {
      for (size_t ci = next.fetch_add(1); ci < cells.size(); ci = next.fetch_add(1)) {
        run_cell(ci);
      }
    };
    std::vector<std::thread> pool;
    size_t n_threads = std::min<size_t>(jobs, cells.size());
    pool.reserve(n_threads);
    for (size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  return rows;
}

std::string format_csv(const std::vector<ResultRow>& rows) {
  std::string out = "axis,value,algorithm,seed,rate_bps_hz,nmse,channel_power,"
                    "iterations,wall_time_ms,status\n";
  for (const ResultRow& r : rows) {
    out += r.axis;
    out += ',';
    append_double(out, r.value);
    out += ',';
    out += r.algorithm;
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    append_double(out, r.rate_bps_hz);
    out += ',';
    append_double(out, r.nmse);
    out += ',';
    append_double(out, r.channel_power);
    out += ',';
    out += std::to_string(r.iterations);
    out += ',';
    append_double(out, r.wall_time_ms);
    out += ',';
    out += r.status;
    out += '\n';
  }
  return out;
}

void write_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << format_csv(rows);
}

}  // namespace risim
