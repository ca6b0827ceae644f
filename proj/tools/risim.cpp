// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 risim contributors

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "risim/experiment.hpp"
#include "risim/oracle.hpp"
#include "risim/plot.hpp"

namespace {

constexpr int kExitSpecError = 2;
constexpr int kExitFailedCell = 3;

// RIS_SIM_SEED trumps the base_seed in the file; handy for quick reruns
// without editing the spec.
void apply_env_seed(risim::ExperimentSpec& spec) {
  const char* env = std::getenv("RIS_SIM_SEED");
  if (env == nullptr) return;
  std::string s(env);
  size_t pos = 0;
  unsigned long long v = std::stoull(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("RIS_SIM_SEED is not an integer");
  spec.base_seed = v;
}

std::string output_base(const risim::ExperimentSpec& spec, const std::string& spec_path) {
  if (!spec.output.empty()) return spec.output;
  return std::filesystem::path(spec_path).stem().string();
}

void print_summary(const std::vector<risim::ResultRow>& rows) {
  std::map<std::pair<double, std::string>, std::pair<double, int>> agg;
  int failures = 0;
  for (const risim::ResultRow& r : rows) {
    if (r.status != "ok") {
      ++failures;
      continue;
    }
    auto& slot = agg[{r.value, r.algorithm}];
    slot.first += r.rate_bps_hz;
    slot.second += 1;
  }
  std::printf("%12s  %-12s  %14s  %6s\n", "value", "algorithm", "mean rate", "seeds");
  for (const auto& [key, sum_count] : agg) {
    std::printf("%12g  %-12s  %14.6f  %6d\n", key.first, key.second.c_str(),
                sum_count.first / sum_count.second, sum_count.second);
  }
  if (failures > 0) std::printf("failed rows: %d\n", failures);
}

int cmd_run(const std::string& spec_path, const std::string& out_dir, int seeds_override,
            bool plot, int jobs, bool timing) {
  risim::ExperimentSpec spec;
  try {
    spec = risim::parse_spec_file(spec_path);
    apply_env_seed(spec);
    if (seeds_override > 0) spec.num_seeds = seeds_override;
    if (timing) spec.timing = true;
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "spec error: %s\n", ex.what());
    return kExitSpecError;
  }

  std::vector<risim::ResultRow> rows = risim::run_sweep(spec, jobs);

  std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  std::string base = output_base(spec, spec_path);
  std::string csv_path = (dir / (base + ".csv")).string();
  risim::write_csv(rows, csv_path);
  std::printf("wrote %s\n", csv_path.c_str());
  if (plot) {
    std::string svg_path = (dir / (base + ".svg")).string();
    risim::render_plot(rows, svg_path);
    std::printf("wrote %s\n", svg_path.c_str());
  }
  print_summary(rows);

  for (const risim::ResultRow& r : rows) {
    if (r.status != "ok") return kExitFailedCell;
  }
  return 0;
}

int cmd_oracle(const std::string& spec_path) {
  risim::ExperimentSpec spec;
  try {
    spec = risim::parse_spec_file(spec_path);
    apply_env_seed(spec);
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "spec error: %s\n", ex.what());
    return kExitSpecError;
  }

  std::vector<risim::SweepCell> cells = risim::enumerate_cells(spec);
  risim::Variant variant = spec.algorithms.front();
  bool failed = false;
  double worst_gap = 0.0;
  std::printf("%12s  %6s  %14s  %14s  %12s\n", "value", "seed", "solver rate", "oracle rate",
              "gap");
  for (const risim::SweepCell& cell : cells) {
    int n = cell.channel_cfg.ris_geometry.size();
    if (n > 3) {
      std::fprintf(stderr, "spec error: oracle needs at most 3 reflector elements, got %d\n", n);
      return kExitSpecError;
    }
    int grid = spec.oracle_grid > 0 ? spec.oracle_grid : (n <= 2 ? 720 : 120);
    risim::ChannelSet ch = risim::draw_channels(cell.channel_cfg);
    try {
      risim::OptimizationResult res =
          risim::run_joint_optimization(ch, cell.sys, risim::cell_options(cell, variant));
      risim::GridOracleResult oracle = risim::grid_search_best_rate(ch, cell.sys, grid);
      double gap = oracle.best_rate - res.rate;
      worst_gap = std::max(worst_gap, std::abs(gap));
      std::printf("%12g  %6d  %14.9f  %14.9f  %12.3e\n", cell.value, cell.seed_index, res.rate,
                  oracle.best_rate, gap);
    } catch (const std::exception& ex) {
      std::printf("%12g  %6d  failed: %s\n", cell.value, cell.seed_index, ex.what());
      failed = true;
    }
  }
  std::printf("max |gap|: %.3e\n", worst_gap);
  return failed ? kExitFailedCell : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS-assisted MIMO link simulator"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string out_dir = ".";
  int seeds_override = 0;
  int jobs = 1;
  bool plot = false;
  bool timing = false;

  CLI::App* run = app.add_subcommand("run", "run a sweep and write CSV (optionally SVG)");
  run->add_option("spec", spec_path, "experiment spec file")->required();
  run->add_option("--out", out_dir, "output directory (default .)");
  run->add_option("--seeds", seeds_override, "override the seed count");
  run->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  run->add_flag("--plot", plot, "also render an SVG plot");
  run->add_flag("--timing", timing, "record real wall times (breaks byte-identical reruns)");

  CLI::App* oracle = app.add_subcommand("oracle", "compare against the exhaustive phase grid");
  oracle->add_option("spec", spec_path, "experiment spec file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(spec_path, out_dir, seeds_override, plot, jobs, timing);
    return cmd_oracle(spec_path);
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
}
