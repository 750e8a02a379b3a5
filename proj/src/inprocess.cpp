// Copyright (c) 2026 the dpfair authors. MIT license; see LICENSE.
#include "dpfair/inprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dpfair {

namespace {

constexpr int kDefaultNoiselessT = 200;

double ln_dual_slots(FairnessMode mode, int num_groups) {
  return std::log(static_cast<double>(violation_dim(mode, num_groups)) + 1.0);
}

struct Derived {
  int k_dim = 0;
  double denom = 0.0;  // min_q * m - 1
  double eta = 0.0;
  double eps_prime = 0.0;
  double noise_scale = 0.0;
  double sensitivity = 0.0;
};

Derived derive_quantities(const GameConfig& cfg, int num_groups, std::size_t m, int t,
                          double min_q_used) {
  Derived d;
  d.k_dim = violation_dim(cfg.mode, num_groups);
  d.denom = min_q_used * static_cast<double>(m) - 1.0;
  d.eta = cfg.eta_override > 0.0
              ? cfg.eta_override
              : 0.5 * std::sqrt(ln_dual_slots(cfg.mode, num_groups) / static_cast<double>(t));
  const double eps = cfg.privacy.epsilon;
  if (std::isinf(eps)) {
    d.eps_prime = kEpsInf;
    d.noise_scale = 0.0;
  } else {
    const double root = std::sqrt(static_cast<double>(t) * std::log(1.0 / cfg.privacy.delta));
    d.eps_prime = eps / (4.0 * root);
    d.noise_scale = 8.0 * num_groups * root / (d.denom * eps);
  }
  d.sensitivity = (2.0 * num_groups * cfg.bound_b + 1.0) / d.denom;
  return d;
}

void validate_config(const GameConfig& cfg, const HypothesisClass& klass) {
  validate(cfg.privacy);
  if (!(cfg.gamma >= 0.0)) throw std::invalid_argument("gamma must be nonnegative");
  if (!(cfg.bound_b > 0.0)) throw std::invalid_argument("dual bound B must be positive");
  if (cfg.t_override < 0) throw std::invalid_argument("t_override must be nonnegative");
  if (cfg.eta_override < 0.0) throw std::invalid_argument("eta_override must be nonnegative");
  if (cfg.public_min_q < 0.0) throw std::invalid_argument("public_min_q must be nonnegative");
  if (cfg.selection == HypothesisSelection::kBlindLabellings &&
      klass.mode != ClassMode::kABlind) {
    throw std::invalid_argument("labelling selection requires an A-blind class");
  }
  if (cfg.mode == FairnessMode::kFprOnly && klass.has_discriminators &&
      !(cfg.bound_b > klass.num_groups - 1)) {
    throw std::invalid_argument("FPR-only extension requires B > |A| - 1");
  }
}

}  // namespace

TFormula compute_t(double bound_b, int num_groups, std::size_t m, double epsilon, double delta,
                   double beta, double log_h, FairnessMode mode) {
  if (!(bound_b > 0.0)) throw std::invalid_argument("dual bound B must be positive");
  if (std::isinf(epsilon)) throw std::invalid_argument("closed-form T needs finite epsilon");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must be in (0,1)");
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must be in (0,1)");
  if (!(log_h > 0.0)) throw std::invalid_argument("log_h must be positive");
  TFormula out;
  out.real = bound_b * std::sqrt(ln_dual_slots(mode, num_groups)) * static_cast<double>(m) *
             epsilon /
             (2.0 * (2.0 * num_groups * bound_b + 1.0) * std::sqrt(std::log(1.0 / delta)) *
              (log_h + std::log(2.0 / beta)));
  out.t = static_cast<int>(std::floor(out.real));
  out.clamped = out.t < 1;
  if (out.clamped) out.t = 1;
  return out;
}

std::vector<CostPair> cost_vectors(const DualVector& dual, const Dataset& data,
                                   const GroupMarginals& marginals, FairnessMode mode) {
  const int g = marginals.num_groups;
  if (g != data.num_groups) throw std::invalid_argument("marginals do not match the dataset");
  if (static_cast<int>(dual.lambda.size()) != violation_dim(mode, g)) {
    throw std::invalid_argument("dual dimension does not match the mode");
  }
  // Non-anchor dual gaps per (a, y); anchor records carry the negated sum.
  std::vector<double> diff(static_cast<std::size_t>(g) * 2, 0.0);
  std::vector<double> anchor_sum(2, 0.0);
  for (int a = 1; a < g; ++a) {
    for (int y = 0; y < 2; ++y) {
      if (mode == FairnessMode::kFprOnly && y == 1) continue;
      const double d = dual.lambda[violation_index(a, y, 0, mode, g)] -
                       dual.lambda[violation_index(a, y, 1, mode, g)];
      diff[static_cast<std::size_t>(a) * 2 + y] = d;
      anchor_sum[y] += d;
    }
  }
  std::vector<CostPair> costs(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Record& r = data.records[i];
    const double q = marginals.at(r.group, r.label);
    if (!(q > 0.0)) throw std::invalid_argument("marginal cell of a record is zero");
    CostPair c;
    c.c0 = r.label == 0 ? 0.0 : 1.0;
    c.c1 = r.label == 1 ? 0.0 : 1.0;
    const double numer = r.group == 0 ? -anchor_sum[r.label]
                                      : diff[static_cast<std::size_t>(r.group) * 2 + r.label];
    c.c1 += numer / q;
    costs[i] = c;
  }
  return costs;
}

namespace {

std::vector<double> candidate_totals(const std::vector<CostPair>& costs,
                                     const std::vector<std::vector<int>>& candidate_predictions) {
  if (candidate_predictions.empty()) throw std::invalid_argument("no candidates");
  std::vector<double> totals(candidate_predictions.size(), 0.0);
  for (std::size_t h = 0; h < candidate_predictions.size(); ++h) {
    const std::vector<int>& preds = candidate_predictions[h];
    if (preds.size() != costs.size()) throw std::invalid_argument("candidate width mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < costs.size(); ++i) {
      total += preds[i] ? costs[i].c1 : costs[i].c0;
    }
    totals[h] = total;
  }
  return totals;
}

}  // namespace

int csc_exact(const std::vector<CostPair>& costs,
              const std::vector<std::vector<int>>& candidate_predictions) {
  const std::vector<double> totals = candidate_totals(costs, candidate_predictions);
  return static_cast<int>(std::min_element(totals.begin(), totals.end()) - totals.begin());
}

int csc_exact(const std::vector<CostPair>& costs, const HypothesisClass& klass,
              const Dataset& data) {
  std::vector<std::vector<int>> preds;
  preds.reserve(klass.size());
  for (int id = 0; id < static_cast<int>(klass.size()); ++id) {
    preds.push_back(predict_all(klass, data, id));
  }
  return csc_exact(costs, preds);
}

int csc_private(const std::vector<CostPair>& costs,
                const std::vector<std::vector<int>>& candidate_predictions, double eps_prime,
                double sensitivity, std::size_t m, Rng& rng) {
  const std::vector<double> totals = candidate_totals(costs, candidate_predictions);
  // Totals are m times the Lagrangian scale the sensitivity argument lives on.
  return static_cast<int>(exponential_mechanism(
      rng, totals, sensitivity * static_cast<double>(m), eps_prime));
}

AuditorState auditor_step(const std::vector<double>& theta, double eta,
                          const std::vector<double>& r_tilde, double bound_b) {
  if (theta.size() != r_tilde.size()) throw std::invalid_argument("theta/r dimension mismatch");
  AuditorState next;
  next.theta = theta;
  for (std::size_t k = 0; k < theta.size(); ++k) next.theta[k] += eta * r_tilde[k];
  next.dual = dual_from_theta(next.theta, bound_b);
  return next;
}

std::vector<double> noise_violations(const std::vector<double>& r_hat, double scale, Rng& rng) {
  std::vector<double> out = r_hat;
  for (double& v : out) v += laplace_sample(rng, scale);
  return out;
}

GameTranscript run_game(const Dataset& data, const HypothesisClass& klass,
                        const GameConfig& config, Rng& rng) {
  validate(data);
  if (klass.num_groups != data.num_groups) {
    throw std::invalid_argument("class and dataset group counts differ");
  }
  validate_config(config, klass);
  {
    const std::vector<std::string> degenerate = degenerate_cells(data);
    if (!degenerate.empty()) throw std::invalid_argument(degenerate.front());
  }

  GameTranscript ts;
  ts.config = config;
  ts.num_groups = data.num_groups;
  ts.m = data.size();

  // Candidate pool and its log-size for the closed forms.
  std::vector<int> cand_ids;
  std::vector<std::vector<int>> cand_preds;
  if (config.selection == HypothesisSelection::kBlindLabellings) {
    LabellingCache cache = induce_labellings(klass, data);
    cand_ids = std::move(cache.rep_ids);
    cand_preds = std::move(cache.labellings);
  } else {
    for (int id = 0; id < static_cast<int>(klass.size()); ++id) {
      cand_ids.push_back(id);
      cand_preds.push_back(predict_all(klass, data, id));
    }
  }
  ts.log_h = std::log(static_cast<double>(cand_ids.size()));

  const GroupMarginals marg = group_marginals(data);
  ts.min_q_used = config.public_min_q > 0.0 ? config.public_min_q : marg.min_q;
  ts.used_data_min_q = !(config.public_min_q > 0.0);
  if (!(ts.min_q_used * static_cast<double>(ts.m) > 1.0)) {
    throw std::invalid_argument("min q * m must exceed 1");
  }

  ts.t_real = std::numeric_limits<double>::quiet_NaN();
  if (config.t_override > 0) {
    ts.t = config.t_override;
  } else if (std::isinf(config.privacy.epsilon)) {
    ts.t = kDefaultNoiselessT;
  } else {
    const TFormula f = compute_t(config.bound_b, ts.num_groups, ts.m, config.privacy.epsilon,
                                 config.privacy.delta, config.privacy.beta, ts.log_h, config.mode);
    ts.t = f.t;
    ts.t_real = f.real;
    ts.t_clamped = f.clamped;
  }

  const Derived d = derive_quantities(config, ts.num_groups, ts.m, ts.t, ts.min_q_used);
  ts.k_dim = d.k_dim;
  ts.eta = d.eta;
  ts.eps_prime = d.eps_prime;
  ts.noise_scale = d.noise_scale;
  ts.sensitivity = d.sensitivity;
  ts.ledger.mode = CompositionMode::kAdvanced;

  // Exact violations of each candidate are data-independent across rounds.
  std::vector<std::vector<double>> cand_violations;
  cand_violations.reserve(cand_preds.size());
  for (const std::vector<int>& preds : cand_preds) {
    cand_violations.push_back(
        violation_vector(group_rates(preds, data), config.gamma, config.mode));
  }

  std::vector<double> theta(ts.k_dim, 0.0);
  std::vector<double> lambda_sum(ts.k_dim, 0.0);
  ts.iterations.reserve(ts.t);
  ts.q_bar.support.reserve(ts.t);
  const double uniform = 1.0 / static_cast<double>(ts.t);
  for (int round = 0; round < ts.t; ++round) {
    const DualVector dual = dual_from_theta(theta, config.bound_b);
    // Noise first, then the oracle's selection draw (documented order).
    std::vector<double> noise(ts.k_dim, 0.0);
    noise = noise_violations(noise, ts.noise_scale, rng);
    const std::vector<CostPair> costs = cost_vectors(dual, data, marg, config.mode);
    const int cand = csc_private(costs, cand_preds, ts.eps_prime, ts.sensitivity, ts.m, rng);

    IterationRow row;
    row.lambda = dual.lambda;
    row.hyp_id = cand_ids[cand];
    row.r_hat = cand_violations[cand];
    row.r_tilde = row.r_hat;
    for (int k = 0; k < ts.k_dim; ++k) row.r_tilde[k] += noise[k];

    for (int k = 0; k < ts.k_dim; ++k) {
      theta[k] += ts.eta * row.r_tilde[k];
      lambda_sum[k] += dual.lambda[k];
    }
    ts.q_bar.support.push_back({row.hyp_id, uniform});
    if (!std::isinf(config.privacy.epsilon)) {
      ts.ledger.record(ts.eps_prime, 0.0);  // violation release
      ts.ledger.record(ts.eps_prime, 0.0);  // selection release
    }
    ts.iterations.push_back(std::move(row));
  }
  ts.lambda_bar.assign(ts.k_dim, 0.0);
  for (int k = 0; k < ts.k_dim; ++k) ts.lambda_bar[k] = lambda_sum[k] * uniform;
  return ts;
}

GameTranscript run_nonprivate_game(const Dataset& data, const HypothesisClass& klass,
                                   GameConfig config, Rng& rng) {
  config.privacy.epsilon = kEpsInf;
  return run_game(data, klass, config, rng);
}

InprocessReport certify_outputs(const GameTranscript& ts, const Dataset& data,
                                const HypothesisClass& klass) {
  if (ts.num_groups != data.num_groups || ts.m != data.size() ||
      ts.num_groups != klass.num_groups) {
    throw std::runtime_error("transcript does not match the supplied data/class");
  }
  if (ts.t <= 0 || static_cast<int>(ts.iterations.size()) != ts.t) {
    throw std::runtime_error("transcript iteration count inconsistent");
  }
  const Derived d = derive_quantities(ts.config, ts.num_groups, ts.m, ts.t, ts.min_q_used);
  const auto close = [](double a, double b) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
  };
  if (ts.k_dim != d.k_dim || !close(ts.eta, d.eta) || !close(ts.eps_prime, d.eps_prime) ||
      !close(ts.noise_scale, d.noise_scale) || !close(ts.sensitivity, d.sensitivity)) {
    throw std::runtime_error("transcript inconsistent with its config");
  }

  InprocessReport report;
  report.gamma = ts.config.gamma;
  report.epsilon = ts.config.privacy.epsilon;
  report.delta = ts.config.privacy.delta;
  report.bound_b = ts.config.bound_b;
  report.t = ts.t;
  report.eta = ts.eta;

  report.err_hat = empirical_error(ts.q_bar, klass, data);
  const GroupRates rates = group_rates(ts.q_bar, klass, data);
  for (int a = 1; a < ts.num_groups; ++a) {
    report.max_delta_fp = std::max(report.max_delta_fp, std::abs(rates.fp[a] - rates.fp[0]));
    report.max_delta_tp = std::max(report.max_delta_tp, std::abs(rates.tp[a] - rates.tp[0]));
  }

  // nu = R_Q + R_lambda with the run's realized T and eta.
  const double g = ts.num_groups;
  const double b = ts.config.bound_b;
  const double t = ts.t;
  const double beta = ts.config.privacy.beta;
  double r_q = 0.0, noise_reach = 0.0;
  if (!std::isinf(report.epsilon)) {
    const double root = std::sqrt(t * std::log(1.0 / report.delta));
    r_q = 8.0 * (2.0 * g * b + 1.0) * root * (ts.log_h + std::log(2.0 * t / beta)) /
          (d.denom * report.epsilon);
    noise_reach = 4.0 * g * root * std::log(8.0 * t * g / beta) / (d.denom * report.epsilon);
  }
  const double r_lambda = b * ln_dual_slots(ts.config.mode, ts.num_groups) / (ts.eta * t) +
                          4.0 * ts.eta * b * (1.0 + noise_reach) * (1.0 + noise_reach);
  report.nu = r_q + r_lambda;

  const bool extension = ts.config.mode == FairnessMode::kFprOnly && klass.has_discriminators &&
                         b > g - 1.0;
  report.fair_bound_fp = extension ? ts.config.gamma + 2.0 * report.nu / (b - (g - 1.0))
                                   : ts.config.gamma + (1.0 + 2.0 * report.nu) / b;
  report.pass = report.max_delta_fp <= report.fair_bound_fp;
  if (ts.config.mode == FairnessMode::kOdds) {
    report.fair_bound_tp = ts.config.gamma + (1.0 + 2.0 * report.nu) / b;
    report.pass = report.pass && report.max_delta_tp <= report.fair_bound_tp;
  } else {
    report.fair_bound_tp = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

}  // namespace dpfair
