// Copyright (c) 2026 the dpfair authors. MIT license; see LICENSE.
#include "dpfair/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <thread>

#include "dpfair/mechanisms.hpp"
#include "dpfair/random.hpp"

namespace dpfair {
namespace {

std::string trim(const std::string& s) {
  std::size_t begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  std::size_t end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid value for " + key + ": " + value);
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  try {
    // stoull silently wraps negative input; reject it up front.
    if (value.find('-') != std::string::npos) throw std::invalid_argument("negative");
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid value for " + key + ": " + value);
  }
}

int to_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid value for " + key + ": " + value);
  }
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw std::invalid_argument("invalid value for " + key + ": " + value);
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    parts.push_back(trim(text.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return parts;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* status_name(RunStatus status) {
  switch (status) {
    case RunStatus::kOk:
      return "ok";
    case RunStatus::kInfeasible:
      return "infeasible";
    default:
      return "precondition-violation";
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

HypothesisClass build_class(const RunConfig& config, const Dataset& data) {
  const ClassMode mode = config.aware ? ClassMode::kAAware : ClassMode::kABlind;
  return build_stump_class(data, config.thresholds, mode, config.discriminators);
}

GameConfig game_config(const RunConfig& config, double gamma, double eps) {
  GameConfig gc;
  gc.gamma = gamma;
  gc.bound_b = config.bound_b;
  gc.privacy.epsilon = eps;
  gc.privacy.delta = config.delta;
  gc.privacy.beta = config.beta;
  gc.mode = config.fairness == "fpr" ? FairnessMode::kFprOnly : FairnessMode::kOdds;
  gc.selection = config.aware ? HypothesisSelection::kAwareMembers
                              : HypothesisSelection::kBlindLabellings;
  gc.t_override = config.t_override;
  gc.eta_override = config.eta_override;
  gc.public_min_q = config.public_min_q;
  return gc;
}

InprocessReport failed_inprocess_report(const RunConfig& config, double gamma, double eps,
                                        const std::string& message) {
  InprocessReport report;
  report.status = RunStatus::kPreconditionViolation;
  report.message = message;
  report.gamma = gamma;
  report.epsilon = eps;
  report.delta = config.delta;
  report.bound_b = config.bound_b;
  report.err_hat = std::nan("");
  report.max_delta_fp = std::nan("");
  report.max_delta_tp = std::nan("");
  report.nu = std::nan("");
  report.eta = std::nan("");
  return report;
}

SweepRow sweep_point(const RunConfig& config, const Dataset& data, const HypothesisClass* klass,
                     double gamma, double eps, std::uint64_t point_seed) {
  SweepRow row;
  row.algorithm = config.algorithm;
  row.gamma = gamma;
  row.eps = eps;
  row.seed = point_seed;
  row.err_hat = std::nan("");
  row.max_violation = std::nan("");
  Rng rng(point_seed);
  try {
    if (config.algorithm == "postprocess") {
      PrivacyParams privacy;
      privacy.epsilon = eps;
      privacy.delta = config.delta;
      privacy.beta = config.beta;
      const PostprocessReport report = dp_postprocess(data, gamma, privacy, rng);
      row.status = status_name(report.status);
      if (report.status == RunStatus::kOk) {
        row.err_hat = report.err_hat;
        row.max_violation = std::max(report.max_delta_fp, report.max_delta_tp);
      }
    } else {
      const GameTranscript transcript = run_game(data, *klass, game_config(config, gamma, eps), rng);
      const InprocessReport report = certify_outputs(transcript, data, *klass);
      row.status = status_name(report.status);
      row.err_hat = report.err_hat;
      row.max_violation = config.fairness == "fpr"
                              ? report.max_delta_fp
                              : std::max(report.max_delta_fp, report.max_delta_tp);
    }
  } catch (const std::exception&) {
    row.status = "precondition-violation";
    row.err_hat = std::nan("");
    row.max_violation = std::nan("");
  }
  return row;
}

}  // namespace

RunConfig::RunConfig() {
  gamma_grid.reserve(21);
  for (int i = 0; i <= 20; ++i) gamma_grid.push_back(static_cast<double>(i) * 0.025);
  eps_grid = {0.5, 1.0, 5.0, kEpsInf};
}

void RunConfig::validate() const {
  if (algorithm != "postprocess" && algorithm != "inprocess") {
    throw std::invalid_argument("algorithm must be postprocess or inprocess");
  }
  if (fairness != "odds" && fairness != "fpr") {
    throw std::invalid_argument("fairness must be odds or fpr");
  }
  if (gamma_grid.empty()) throw std::invalid_argument("gamma-grid must be non-empty");
  if (eps_grid.empty()) throw std::invalid_argument("eps-grid must be non-empty");
  if (sep_gammas.empty()) throw std::invalid_argument("sep-gammas must be non-empty");
  if (sep_ms.empty()) throw std::invalid_argument("sep-ms must be non-empty");
  if (repeats == 0) throw std::invalid_argument("repeats must be at least 1");
  if (replicate == 0) throw std::invalid_argument("replicate must be at least 1");
  if (thresholds < 1) throw std::invalid_argument("thresholds must be at least 1");
  if (gen_m == 0) throw std::invalid_argument("gen-m must be positive");
  if (gen_groups < 2) throw std::invalid_argument("gen-groups must be at least 2");
  if (gen_dim < 1) throw std::invalid_argument("gen-dim must be at least 1");
  if (out.empty()) throw std::invalid_argument("out must be non-empty");
}

std::string RunConfig::summary_path() const {
  if (!summary_out.empty()) return summary_out;
  const std::string suffix = ".csv";
  if (out.size() > suffix.size() &&
      out.compare(out.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return out.substr(0, out.size() - suffix.size()) + ".summary.csv";
  }
  return out + ".summary.csv";
}

void apply_config_kv(RunConfig& config, const std::string& key, const std::string& value) {
  if (key == "seed") {
    config.seed = to_u64(key, value);
  } else if (key == "data") {
    config.data = value;
  } else if (key == "out") {
    config.out = value;
  } else if (key == "summary") {
    config.summary_out = value;
  } else if (key == "algorithm") {
    config.algorithm = value;
  } else if (key == "fairness") {
    config.fairness = value;
  } else if (key == "aware") {
    config.aware = to_bool(key, value);
  } else if (key == "discriminators") {
    config.discriminators = to_bool(key, value);
  } else if (key == "thresholds") {
    config.thresholds = to_int(key, value);
  } else if (key == "eps") {
    config.epsilon = to_double(key, value);
  } else if (key == "delta") {
    config.delta = to_double(key, value);
  } else if (key == "beta") {
    config.beta = to_double(key, value);
  } else if (key == "gamma") {
    config.gamma = to_double(key, value);
  } else if (key == "B") {
    config.bound_b = to_double(key, value);
  } else if (key == "T") {
    config.t_override = to_int(key, value);
  } else if (key == "eta") {
    config.eta_override = to_double(key, value);
  } else if (key == "min-q") {
    config.public_min_q = to_double(key, value);
  } else if (key == "gen-seed") {
    config.gen_seed = to_u64(key, value);
  } else if (key == "gen-m") {
    config.gen_m = static_cast<std::size_t>(to_u64(key, value));
  } else if (key == "gen-groups") {
    config.gen_groups = to_int(key, value);
  } else if (key == "gen-dim") {
    config.gen_dim = to_int(key, value);
  } else if (key == "gen-bias") {
    config.gen_bias = to_double(key, value);
  } else if (key == "gamma-grid") {
    config.gamma_grid = parse_double_list(value);
  } else if (key == "eps-grid") {
    config.eps_grid = parse_double_list(value);
  } else if (key == "repeats") {
    config.repeats = static_cast<std::size_t>(to_u64(key, value));
  } else if (key == "replicate") {
    config.replicate = static_cast<std::size_t>(to_u64(key, value));
  } else if (key == "workers") {
    config.workers = static_cast<std::size_t>(to_u64(key, value));
  } else if (key == "sep-gammas") {
    config.sep_gammas = parse_double_list(value);
  } else if (key == "sep-ms") {
    config.sep_ms = parse_size_list(value);
  } else {
    throw std::invalid_argument("unknown config key: " + key);
  }
}

void load_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config file " + path + ": missing '=' at line " +
                                  std::to_string(line_no));
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("config file " + path + ": empty key at line " +
                                  std::to_string(line_no));
    }
    try {
      apply_config_kv(config, key, value);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config file " + path + " line " + std::to_string(line_no) +
                                  ": " + e.what());
    }
  }
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  for (const std::string& part : split_commas(text)) {
    if (part.empty()) throw std::invalid_argument("empty entry in list: " + text);
    values.push_back(to_double("list entry", part));
  }
  return values;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> values;
  for (const std::string& part : split_commas(text)) {
    if (part.empty()) throw std::invalid_argument("empty entry in list: " + text);
    values.push_back(static_cast<std::size_t>(to_u64("list entry", part)));
  }
  return values;
}

Dataset resolve_dataset(const RunConfig& config) {
  Dataset data;
  if (config.data.empty()) {
    SynthParams params;
    params.seed = config.gen_seed;
    params.m = config.gen_m;
    params.num_groups = config.gen_groups;
    params.dim = config.gen_dim;
    params.bias = config.gen_bias;
    data = synth_generate(params);
  } else {
    data = load_csv(config.data);
  }
  if (config.replicate > 1) {
    const std::vector<Record> original = data.records;
    data.records.reserve(original.size() * config.replicate);
    for (std::size_t copy = 1; copy < config.replicate; ++copy) {
      data.records.insert(data.records.end(), original.begin(), original.end());
    }
    validate(data);
  }
  return data;
}

SweepResult run_sweep(const RunConfig& config, const Dataset& data) {
  config.validate();
  validate(data);
  HypothesisClass klass;
  if (config.algorithm == "inprocess") klass = build_class(config, data);

  struct Point {
    double gamma;
    double eps;
    std::uint64_t point_seed;
  };
  std::vector<Point> points;
  points.reserve(config.gamma_grid.size() * config.eps_grid.size() * config.repeats);
  std::uint64_t flat = 0;
  for (double gamma : config.gamma_grid) {
    for (double eps : config.eps_grid) {
      for (std::size_t r = 0; r < config.repeats; ++r) {
        points.push_back({gamma, eps, derive_seed(config.seed, flat)});
        ++flat;
      }
    }
  }

  SweepResult result;
  result.rows.resize(points.size());
  std::size_t workers = config.workers != 0
                            ? config.workers
                            : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, points.size());
  auto compute = [&](std::size_t idx) {
    const Point& p = points[idx];
    result.rows[idx] = sweep_point(config, data, &klass, p.gamma, p.eps, p.point_seed);
  };
  if (workers <= 1) {
    for (std::size_t i = 0; i < points.size(); ++i) compute(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        while (true) {
          const std::size_t idx = next.fetch_add(1);
          if (idx >= points.size()) return;
          compute(idx);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }

  // One summary per (gamma, eps) cell over its ok repeats, in grid order.
  std::size_t row_idx = 0;
  for (double gamma : config.gamma_grid) {
    for (double eps : config.eps_grid) {
      SweepSummary summary;
      summary.algorithm = config.algorithm;
      summary.gamma = gamma;
      summary.eps = eps;
      double err_sum = 0.0, err_sq = 0.0, vio_sum = 0.0, vio_sq = 0.0;
      for (std::size_t r = 0; r < config.repeats; ++r, ++row_idx) {
        const SweepRow& row = result.rows[row_idx];
        if (row.status != "ok") continue;
        ++summary.n;
        err_sum += row.err_hat;
        err_sq += row.err_hat * row.err_hat;
        vio_sum += row.max_violation;
        vio_sq += row.max_violation * row.max_violation;
      }
      if (summary.n == 0) {
        summary.err_mean = summary.err_std = std::nan("");
        summary.violation_mean = summary.violation_std = std::nan("");
      } else {
        const double n = static_cast<double>(summary.n);
        summary.err_mean = err_sum / n;
        summary.violation_mean = vio_sum / n;
        if (summary.n >= 2) {
          summary.err_std =
              std::sqrt(std::max(0.0, (err_sq - err_sum * err_sum / n) / (n - 1.0)));
          summary.violation_std =
              std::sqrt(std::max(0.0, (vio_sq - vio_sum * vio_sum / n) / (n - 1.0)));
        }
      }
      result.summaries.push_back(summary);
    }
  }
  return result;
}

void write_sweep_csv(const SweepResult& result, std::ostream& rows_out,
                     std::ostream& summary_out) {
  rows_out << "algorithm,gamma,eps,seed,errHat,maxViolation,status\n";
  for (const SweepRow& row : result.rows) {
    rows_out << row.algorithm << ',' << fmt(row.gamma) << ',' << fmt(row.eps) << ',' << row.seed
             << ',' << fmt(row.err_hat) << ',' << fmt(row.max_violation) << ',' << row.status
             << '\n';
  }
  summary_out << "algorithm,gamma,eps,n,errHatMean,errHatStd,maxViolationMean,maxViolationStd\n";
  for (const SweepSummary& s : result.summaries) {
    summary_out << s.algorithm << ',' << fmt(s.gamma) << ',' << fmt(s.eps) << ',' << s.n << ','
                << fmt(s.err_mean) << ',' << fmt(s.err_std) << ',' << fmt(s.violation_mean) << ','
                << fmt(s.violation_std) << '\n';
  }
}

void write_separation_csv(const std::vector<SensitivityRow>& rows, std::ostream& out) {
  out << "gamma,m,variant,fD,fDprime,gap\n";
  for (const SensitivityRow& row : rows) {
    out << fmt(row.gamma) << ',' << row.m << ','
        << (row.variant == SeparationVariant::kAware ? "aware" : "blind") << ',' << fmt(row.f_d)
        << ',' << fmt(row.f_d_prime) << ',' << fmt(row.gap) << '\n';
  }
}

void write_postprocess_csv(const PostprocessReport& report, std::ostream& out) {
  out << "gamma,eps,beta,errTilde,errHat,maxDeltaFP,maxDeltaTP,status\n";
  const bool ok = report.status == RunStatus::kOk;
  out << fmt(report.gamma) << ',' << fmt(report.epsilon) << ',' << fmt(report.beta) << ','
      << fmt(ok ? report.err_tilde : std::nan("")) << ','
      << fmt(ok ? report.err_hat : std::nan("")) << ','
      << fmt(ok ? report.max_delta_fp : std::nan("")) << ','
      << fmt(ok ? report.max_delta_tp : std::nan("")) << ',' << status_name(report.status)
      << '\n';
}

void write_inprocess_csv(const InprocessReport& report, std::ostream& out) {
  out << "gamma,eps,delta,B,T,eta,errHat,maxDeltaFP,maxDeltaTP,nuTheoretical,pass,status\n";
  out << fmt(report.gamma) << ',' << fmt(report.epsilon) << ',' << fmt(report.delta) << ','
      << fmt(report.bound_b) << ',' << report.t << ',' << fmt(report.eta) << ','
      << fmt(report.err_hat) << ',' << fmt(report.max_delta_fp) << ','
      << fmt(report.max_delta_tp) << ',' << fmt(report.nu) << ',' << (report.pass ? 1 : 0) << ','
      << status_name(report.status) << '\n';
}

int cmd_gen(const RunConfig& config) {
  config.validate();
  SynthParams params;
  params.seed = config.gen_seed;
  params.m = config.gen_m;
  params.num_groups = config.gen_groups;
  params.dim = config.gen_dim;
  params.bias = config.gen_bias;
  const Dataset data = synth_generate(params);
  write_csv(data, config.out);
  std::cout << "gen: wrote " << data.records.size() << " records (" << data.num_groups
            << " groups, dim " << data.dim << ") to " << config.out << "\n";
  return 0;
}

int cmd_single(const RunConfig& config) {
  config.validate();
  const Dataset data = resolve_dataset(config);
  Rng rng(derive_seed(config.seed, 0));
  std::ofstream out = open_output(config.out);
  if (config.algorithm == "postprocess") {
    PrivacyParams privacy;
    privacy.epsilon = config.epsilon;
    privacy.delta = config.delta;
    privacy.beta = config.beta;
    const PostprocessReport report = dp_postprocess(data, config.gamma, privacy, rng);
    write_postprocess_csv(report, out);
    write_postprocess_csv(report, std::cout);
    if (!report.message.empty()) std::cout << "note: " << report.message << "\n";
  } else {
    const HypothesisClass klass = build_class(config, data);
    InprocessReport report;
    try {
      const GameTranscript transcript =
          run_game(data, klass, game_config(config, config.gamma, config.epsilon), rng);
      report = certify_outputs(transcript, data, klass);
    } catch (const std::invalid_argument& e) {
      report = failed_inprocess_report(config, config.gamma, config.epsilon, e.what());
    }
    write_inprocess_csv(report, out);
    write_inprocess_csv(report, std::cout);
    if (!report.message.empty()) std::cout << "note: " << report.message << "\n";
  }
  return 0;
}

int cmd_sweep(const RunConfig& config) {
  config.validate();
  const Dataset data = resolve_dataset(config);
  const SweepResult result = run_sweep(config, data);
  std::ofstream rows_out = open_output(config.out);
  std::ofstream summary_out = open_output(config.summary_path());
  write_sweep_csv(result, rows_out, summary_out);
  std::size_t ok = 0;
  for (const SweepRow& row : result.rows) {
    if (row.status == "ok") ++ok;
  }
  std::cout << "sweep: " << result.rows.size() << " points (" << ok << " ok) to " << config.out
            << "; summary to " << config.summary_path() << "\n";
  return 0;
}

int cmd_separation(const RunConfig& config) {
  config.validate();
  const std::vector<SensitivityRow> rows = sensitivity_scan(config.sep_gammas, config.sep_ms);
  std::ofstream out = open_output(config.out);
  write_separation_csv(rows, out);
  write_separation_csv(rows, std::cout);
  return 0;
}

}  // namespace dpfair
