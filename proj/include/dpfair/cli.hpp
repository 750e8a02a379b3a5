// Copyright (c) 2026 the dpfair authors. MIT license; see LICENSE.
//
// Front-end plumbing shared by the command-line binary and the tests:
// run configuration with key=value config-file parsing, the gamma x epsilon
// sweep engine with a repeat-averaged summary, and the CSV writers for every
// subcommand. Flag handling itself lives in the binary; everything here is
// exercised directly by unit tests.
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dpfair/dataset.hpp"
#include "dpfair/inprocess.hpp"
#include "dpfair/postprocess.hpp"
#include "dpfair/separation.hpp"

namespace dpfair {

// All knobs of every subcommand, with fixed defaults (no wall-clock seeding
// anywhere). Unknown keys and unparsable values are reported as usage errors
// (std::invalid_argument); anything not mentioned keeps its default.
struct RunConfig {
  // Shared.
  std::uint64_t seed = 1;
  std::string data;  // dataset CSV; empty means generate the synthetic set below
  std::string out = "out.csv";
  std::string summary_out;  // empty: out with ".csv" replaced by ".summary.csv"
  std::string algorithm = "postprocess";  // or "inprocess"
  std::string fairness = "odds";          // or "fpr"
  bool aware = false;                     // group-aware hypothesis class
  bool discriminators = false;            // include group indicators/complements
  int thresholds = 7;                     // stump thresholds per feature

  // Privacy.
  double epsilon = 1.0;
  double delta = 1e-7;
  double beta = 0.05;

  // Single-run fairness target and game knobs.
  double gamma = 0.1;
  double bound_b = 1.0;
  int t_override = 0;
  double eta_override = 0.0;
  double public_min_q = 0.0;

  // Synthetic-data generation (also used when `data` is empty).
  std::uint64_t gen_seed = 7;
  std::size_t gen_m = 2000;
  int gen_groups = 2;
  int gen_dim = 4;
  double gen_bias = 0.3;

  // Sweep.
  std::vector<double> gamma_grid;  // default: 21 points on [0, 0.5]
  std::vector<double> eps_grid;    // default: {0.5, 1, 5, inf}
  std::size_t repeats = 1;
  std::size_t replicate = 1;  // dataset copies stacked before the sweep
  std::size_t workers = 0;    // 0: hardware concurrency

  // Separation scan grids.
  std::vector<double> sep_gammas{0.05, 0.1, 0.2};
  std::vector<std::size_t> sep_ms{40, 80, 160, 400};

  RunConfig();

  // Throws std::invalid_argument naming the offending field.
  void validate() const;

  std::string summary_path() const;
};

// Applies one key=value pair. Throws std::invalid_argument for unknown keys
// ("unknown config key: ...") or bad values ("invalid value for ...").
void apply_config_kv(RunConfig& config, const std::string& key, const std::string& value);

// key=value lines; blank lines and lines starting with '#' are skipped.
// Errors mention the 1-based line number.
void load_config_file(RunConfig& config, const std::string& path);

// Comma-separated doubles; "inf" is accepted. Used for grid-valued keys.
std::vector<double> parse_double_list(const std::string& text);
std::vector<std::size_t> parse_size_list(const std::string& text);

// Loads config.data, or generates the synthetic dataset when the path is
// empty; applies config.replicate by stacking copies.
Dataset resolve_dataset(const RunConfig& config);

struct SweepRow {
  std::string algorithm;
  double gamma = 0.0;
  double eps = 0.0;
  std::uint64_t seed = 0;  // the derived per-point seed
  double err_hat = 0.0;
  double max_violation = 0.0;
  std::string status;  // ok | infeasible | precondition-violation
};

struct SweepSummary {
  std::string algorithm;
  double gamma = 0.0;
  double eps = 0.0;
  std::size_t n = 0;  // ok rows only
  double err_mean = 0.0, err_std = 0.0;
  double violation_mean = 0.0, violation_std = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;          // grid order: gamma outer, eps, repeat
  std::vector<SweepSummary> summaries;  // one per (gamma, eps) cell, grid order
};

// Runs the full grid. Point (i, j, r) uses Rng(derive_seed(config.seed, p))
// where p is the flattened grid index, so results are reproducible and
// independent of the worker count. Per-point failures become row statuses;
// the summary averages ok rows only (sample standard deviation, 0 for n < 2).
SweepResult run_sweep(const RunConfig& config, const Dataset& data);

void write_sweep_csv(const SweepResult& result, std::ostream& rows_out,
                     std::ostream& summary_out);
void write_separation_csv(const std::vector<SensitivityRow>& rows, std::ostream& out);
void write_postprocess_csv(const PostprocessReport& report, std::ostream& out);
void write_inprocess_csv(const InprocessReport& report, std::ostream& out);

// Subcommand drivers used by the binary: return 0 on success and throw on
// failure (std::invalid_argument for config misuse, std::runtime_error for
// I/O and computation errors). Single runs whose pipeline ends in a recorded
// failure status still exit 0 -- the status lands in the CSV.
int cmd_gen(const RunConfig& config);
int cmd_single(const RunConfig& config);
int cmd_sweep(const RunConfig& config);
int cmd_separation(const RunConfig& config);

}  // namespace dpfair
