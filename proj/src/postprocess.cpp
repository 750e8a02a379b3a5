// Copyright (c) 2026 the dpfair authors. MIT license; see LICENSE.
#include "dpfair/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dpfair {

namespace {

constexpr int kDefaultThresholdsPerFeature = 7;

std::size_t var_index(int yhat, int a) { return static_cast<std::size_t>(a) * 2 + yhat; }

// Realized rate gaps of the derived classifier against the anchor group.
void fill_realized(PostprocessReport& report, const MixingParams& p, const JointStats& stats) {
  report.err_hat = mixed_error(p, stats);
  const GroupRates rates = mixed_rates(p, stats);
  report.delta_fp.clear();
  report.delta_tp.clear();
  for (int a = 1; a < stats.num_groups; ++a) {
    report.delta_fp.push_back(std::abs(rates.fp[a] - rates.fp[0]));
    report.delta_tp.push_back(std::abs(rates.tp[a] - rates.tp[0]));
  }
  report.max_delta_fp = *std::max_element(report.delta_fp.begin(), report.delta_fp.end());
  report.max_delta_tp = *std::max_element(report.delta_tp.begin(), report.delta_tp.end());
}

}  // namespace

BaseModel train_base(const Dataset& data) {
  return train_base(data, build_stump_class(data, kDefaultThresholdsPerFeature, ClassMode::kABlind));
}

BaseModel train_base(const Dataset& data, const HypothesisClass& klass) {
  if (klass.mode != ClassMode::kABlind) {
    throw std::invalid_argument("base classifier must be A-blind");
  }
  BaseModel best;
  for (int id = 0; id < static_cast<int>(klass.size()); ++id) {
    std::vector<int> preds = predict_all(klass, data, id);
    const double err = empirical_error(preds, data);
    if (best.hyp_id < 0 || err < best.error) {
      best = {id, std::move(preds), err};
    }
  }
  return best;
}

PerturbedStats perturb_stats(const JointStats& stats, double epsilon, std::size_t m, Rng& rng) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (m == 0) throw std::invalid_argument("m must be positive");
  const double scale = std::isinf(epsilon) ? 0.0 : 2.0 / (static_cast<double>(m) * epsilon);
  PerturbedStats out;
  out.num_groups = stats.num_groups;
  out.q3 = stats.q3;
  for (double& cell : out.q3) cell += laplace_sample(rng, scale);
  out.q2.assign(static_cast<std::size_t>(stats.num_groups) * 2, 0.0);
  for (int yhat = 0; yhat < 2; ++yhat) {
    for (int a = 0; a < stats.num_groups; ++a) {
      for (int y = 0; y < 2; ++y) {
        out.q2[static_cast<std::size_t>(a) * 2 + y] += out.at(yhat, a, y);
      }
    }
  }
  return out;
}

PrivateLp build_private_lp(const PerturbedStats& stats, double gamma, double beta, double epsilon,
                           std::size_t m) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be nonnegative");
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must be in (0,1)");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const int g = stats.num_groups;
  for (int a = 0; a < g; ++a) {
    for (int y = 0; y < 2; ++y) {
      if (!(stats.marginal(a, y) > 0.0)) {
        throw std::runtime_error("perturbed marginal nonpositive at cell (" + std::to_string(a) +
                                 "," + std::to_string(y) + ")");
      }
    }
  }

  PrivateLp out;
  const std::size_t n = static_cast<std::size_t>(2) * g;
  out.lp.objective.assign(n, 0.0);
  out.lp.lower.assign(n, 0.0);
  out.lp.upper.assign(n, 1.0);
  for (int yhat = 0; yhat < 2; ++yhat) {
    for (int a = 0; a < g; ++a) {
      out.lp.objective[var_index(yhat, a)] = stats.at(yhat, a, 0) - stats.at(yhat, a, 1);
      out.lp.constant += stats.at(yhat, a, 1);
    }
  }

  const double log_term = 4.0 * std::log(4.0 * g / beta);
  const double m_eps = static_cast<double>(m) * epsilon;  // +inf at the sentinel
  out.slack_fp.assign(g, 0.0);
  out.slack_tp.assign(g, 0.0);
  for (int y = 0; y < 2; ++y) {
    for (int a = 1; a < g; ++a) {
      const double denom = std::min(stats.marginal(a, y), stats.marginal(0, y)) * m_eps;
      const double slack = std::isinf(denom) ? 0.0 : log_term / denom;
      (y == 0 ? out.slack_fp : out.slack_tp)[a] = slack;
      // rate_a(p) - rate_0(p), rates conditioned on Y=y.
      const double rate_a = stats.at(1, a, y) / stats.marginal(a, y);
      const double rate_0 = stats.at(1, 0, y) / stats.marginal(0, y);
      std::vector<double> expr(n, 0.0);
      expr[var_index(1, a)] += rate_a;
      expr[var_index(0, a)] += 1.0 - rate_a;
      expr[var_index(1, 0)] -= rate_0;
      expr[var_index(0, 0)] -= 1.0 - rate_0;
      out.lp.add_abs_constraint(expr, gamma + slack);
    }
  }
  return out;
}

double mixed_error(const MixingParams& p, const JointStats& stats) {
  if (p.num_groups != stats.num_groups) throw std::invalid_argument("group count mismatch");
  double err = 0.0;
  for (int yhat = 0; yhat < 2; ++yhat) {
    for (int a = 0; a < stats.num_groups; ++a) {
      const double prob1 = p.at(yhat, a);
      err += prob1 * stats.at(yhat, a, 0) + (1.0 - prob1) * stats.at(yhat, a, 1);
    }
  }
  return err;
}

GroupRates mixed_rates(const MixingParams& p, const JointStats& stats) {
  if (p.num_groups != stats.num_groups) throw std::invalid_argument("group count mismatch");
  const int g = stats.num_groups;
  GroupRates rates;
  rates.fp.assign(g, 0.0);
  rates.tp.assign(g, 0.0);
  rates.fp_defined.assign(g, 1);
  rates.tp_defined.assign(g, 1);
  for (int a = 0; a < g; ++a) {
    for (int y = 0; y < 2; ++y) {
      const double denom = stats.marginals.at(a, y);
      double& rate = y == 0 ? rates.fp[a] : rates.tp[a];
      char& defined = y == 0 ? rates.fp_defined[a] : rates.tp_defined[a];
      if (denom == 0.0) {
        defined = 0;
        continue;
      }
      rate = (p.at(1, a) * stats.at(1, a, y) + p.at(0, a) * stats.at(0, a, y)) / denom;
    }
  }
  return rates;
}

PostprocessReport dp_postprocess(const Dataset& data, double gamma, const PrivacyParams& privacy,
                                 Rng& rng) {
  validate(privacy);
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be nonnegative");
  PostprocessReport report;
  report.gamma = gamma;
  report.epsilon = privacy.epsilon;
  report.beta = privacy.beta;

  const std::vector<std::string> degenerate = degenerate_cells(data);
  if (!degenerate.empty()) {
    report.status = RunStatus::kPreconditionViolation;
    report.message = degenerate.front();
    return report;
  }

  report.base = train_base(data);
  const JointStats stats = joint_stats(data, report.base.predictions);
  const PerturbedStats perturbed = perturb_stats(stats, privacy.epsilon, data.size(), rng);
  if (!std::isinf(privacy.epsilon)) report.ledger.record(privacy.epsilon, 0.0);

  for (int a = 0; a < perturbed.num_groups && report.status == RunStatus::kOk; ++a) {
    for (int y = 0; y < 2; ++y) {
      if (!(perturbed.marginal(a, y) > 0.0)) {
        report.status = RunStatus::kPreconditionViolation;
        report.message = "perturbed marginal nonpositive at cell (" + std::to_string(a) + "," +
                         std::to_string(y) + "); a larger epsilon or m keeps it positive";
        break;
      }
    }
  }
  if (report.status != RunStatus::kOk) return report;

  const PrivateLp priv = build_private_lp(perturbed, gamma, privacy.beta, privacy.epsilon,
                                          data.size());
  const LpSolution sol = solve_lp(priv.lp);
  if (sol.status != LpStatus::kOptimal) {
    report.status = RunStatus::kInfeasible;
    report.message = "fairness LP infeasible under the drawn noise; retry with larger epsilon or gamma";
    return report;
  }
  report.err_tilde = sol.value;
  report.mixing.num_groups = data.num_groups;
  report.mixing.p = sol.x;
  fill_realized(report, report.mixing, stats);
  return report;
}

PostprocessReport postprocess_exact(const Dataset& data, double gamma) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be nonnegative");
  PostprocessReport report;
  report.gamma = gamma;
  report.epsilon = kEpsInf;
  report.beta = 0.0;

  report.base = train_base(data);
  const JointStats stats = joint_stats(data, report.base.predictions);
  const int g = stats.num_groups;
  const std::size_t n = static_cast<std::size_t>(2) * g;

  LinearProgram lp;
  lp.objective.assign(n, 0.0);
  lp.lower.assign(n, 0.0);
  lp.upper.assign(n, 1.0);
  for (int yhat = 0; yhat < 2; ++yhat) {
    for (int a = 0; a < g; ++a) {
      lp.objective[var_index(yhat, a)] = stats.at(yhat, a, 0) - stats.at(yhat, a, 1);
      lp.constant += stats.at(yhat, a, 1);
    }
  }
  for (int y = 0; y < 2; ++y) {
    for (int a = 1; a < g; ++a) {
      const double qa = stats.marginals.at(a, y);
      const double q0 = stats.marginals.at(0, y);
      if (!(qa > 0.0 && q0 > 0.0)) {
        report.status = RunStatus::kPreconditionViolation;
        report.message = "degenerate cell prevents rate constraints";
        return report;
      }
      const double rate_a = stats.at(1, a, y) / qa;
      const double rate_0 = stats.at(1, 0, y) / q0;
      std::vector<double> expr(n, 0.0);
      expr[var_index(1, a)] += rate_a;
      expr[var_index(0, a)] += 1.0 - rate_a;
      expr[var_index(1, 0)] -= rate_0;
      expr[var_index(0, 0)] -= 1.0 - rate_0;
      lp.add_abs_constraint(expr, gamma);
    }
  }
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::kOptimal) {
    report.status = RunStatus::kInfeasible;
    report.message = "exact fairness LP infeasible";
    return report;
  }
  report.err_tilde = sol.value;
  report.mixing.num_groups = g;
  report.mixing.p = sol.x;
  fill_realized(report, report.mixing, stats);
  return report;
}

int derived_predict(const MixingParams& p, int base_bit, int group, Rng& rng) {
  if (base_bit != 0 && base_bit != 1) throw std::invalid_argument("base prediction must be binary");
  if (group < 0 || group >= p.num_groups) throw std::invalid_argument("group id out of range");
  return rng.uniform01() < p.at(base_bit, group) ? 1 : 0;
}

}  // namespace dpfair
