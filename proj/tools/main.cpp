// Copyright (c) 2026 the dpfair authors. MIT license; see LICENSE.
//
// Command-line front end. Subcommands: gen, single, sweep, separation.
// Options mirror the key=value config-file keys one to one; when both a
// config file and a flag set the same key, the flag wins. Exit codes:
// 0 success, 1 usage error, 2 runtime error.
#include <exception>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "dpfair/cli.hpp"

namespace {

using KvList = std::vector<std::pair<std::string, std::string>>;

// Declares one --key option on every subcommand; values are queued and
// applied after the config file so flags always override it.
void add_kv_option(CLI::App& cmd, KvList& pending, const std::string& key,
                   const std::string& description) {
  cmd.add_option_function<std::string>(
      "--" + key, [&pending, key](const std::string& value) { pending.emplace_back(key, value); },
      description);
}

void add_kv_flag(CLI::App& cmd, KvList& pending, const std::string& key,
                 const std::string& description) {
  cmd.add_flag_function(
      "--" + key,
      [&pending, key](std::int64_t count) {
        if (count > 0) pending.emplace_back(key, "true");
      },
      description);
}

void add_common_options(CLI::App& cmd, KvList& pending, std::string& config_path) {
  cmd.add_option("--config", config_path, "key=value config file (flags override it)");
  add_kv_option(cmd, pending, "seed", "base RNG seed (default 1)");
  add_kv_option(cmd, pending, "out", "output CSV path");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fair classification with a differentially private protected attribute"};
  app.require_subcommand(1);

  std::string config_path;
  KvList pending;

  CLI::App* gen = app.add_subcommand("gen", "generate the planted-bias synthetic dataset CSV");
  add_common_options(*gen, pending, config_path);
  add_kv_option(*gen, pending, "gen-seed", "generator seed (default 7)");
  add_kv_option(*gen, pending, "gen-m", "number of records (default 2000)");
  add_kv_option(*gen, pending, "gen-groups", "number of protected groups (default 2)");
  add_kv_option(*gen, pending, "gen-dim", "feature dimension (default 4)");
  add_kv_option(*gen, pending, "gen-bias", "planted bias strength (default 0.3)");

  CLI::App* single = app.add_subcommand("single", "one training run, report CSV");
  CLI::App* sweep = app.add_subcommand("sweep", "gamma x eps grid, rows + summary CSVs");
  for (CLI::App* cmd : {single, sweep}) {
    add_common_options(*cmd, pending, config_path);
    add_kv_option(*cmd, pending, "data", "dataset CSV (empty: generate synthetic in memory)");
    add_kv_option(*cmd, pending, "algorithm", "postprocess | inprocess (default postprocess)");
    add_kv_option(*cmd, pending, "fairness", "odds | fpr (default odds)");
    add_kv_flag(*cmd, pending, "aware", "group-aware hypothesis class");
    add_kv_flag(*cmd, pending, "discriminators", "include group indicator classifiers");
    add_kv_option(*cmd, pending, "thresholds", "stump thresholds per feature (default 7)");
    add_kv_option(*cmd, pending, "eps", "privacy budget epsilon, inf for non-private");
    add_kv_option(*cmd, pending, "delta", "privacy parameter delta (default 1e-7)");
    add_kv_option(*cmd, pending, "beta", "confidence parameter beta (default 0.05)");
    add_kv_option(*cmd, pending, "B", "dual player L1 bound (default 1)");
    add_kv_option(*cmd, pending, "T", "iteration-count override (0: closed form)");
    add_kv_option(*cmd, pending, "eta", "learning-rate override (0: closed form)");
    add_kv_option(*cmd, pending, "min-q", "public lower bound on group-label mass");
    add_kv_option(*cmd, pending, "gen-seed", "generator seed when no data file is given");
    add_kv_option(*cmd, pending, "gen-m", "synthetic record count when no data file is given");
    add_kv_option(*cmd, pending, "gen-bias", "synthetic bias when no data file is given");
  }
  add_kv_option(*single, pending, "gamma", "fairness slack gamma (default 0.1)");
  add_kv_option(*sweep, pending, "gamma-grid", "comma-separated gamma values");
  add_kv_option(*sweep, pending, "eps-grid", "comma-separated eps values (inf allowed)");
  add_kv_option(*sweep, pending, "repeats", "repeats per grid point (default 1)");
  add_kv_option(*sweep, pending, "replicate", "stacked dataset copies (default 1)");
  add_kv_option(*sweep, pending, "workers", "worker threads (0: hardware)");
  add_kv_option(*sweep, pending, "summary", "summary CSV path");

  CLI::App* separation =
      app.add_subcommand("separation", "blind vs aware sensitivity-gap table");
  add_common_options(*separation, pending, config_path);
  add_kv_option(*separation, pending, "sep-gammas", "comma-separated gamma grid");
  add_kv_option(*separation, pending, "sep-ms", "comma-separated dataset sizes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    dpfair::RunConfig config;
    if (!config_path.empty()) dpfair::load_config_file(config, config_path);
    for (const auto& [key, value] : pending) dpfair::apply_config_kv(config, key, value);

    if (gen->parsed()) return dpfair::cmd_gen(config);
    if (single->parsed()) return dpfair::cmd_single(config);
    if (sweep->parsed()) return dpfair::cmd_sweep(config);
    return dpfair::cmd_separation(config);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
