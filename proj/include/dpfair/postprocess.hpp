// Copyright (c) 2026 the dpfair authors. MIT license; see LICENSE.
//
// Private post-processing of a fixed base classifier: perturb the empirical
// joint table of (prediction, group, label) with Laplace noise calibrated to
// its L1 sensitivity 2/m, then pick group-conditional flip probabilities by
// solving a small LP whose fairness constraints are widened by a slack that
// accounts for the noise in the constraint coefficients. The protected
// attribute is touched only through the perturbed table, so the released
// mixing parameters are epsilon-private in it.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dpfair/dataset.hpp"
#include "dpfair/hypothesis.hpp"
#include "dpfair/lp_solver.hpp"
#include "dpfair/mechanisms.hpp"
#include "dpfair/metrics.hpp"
#include "dpfair/random.hpp"

namespace dpfair {

// p[(a, yhat)] = P[final prediction = 1 | base prediction = yhat, group = a].
struct MixingParams {
  int num_groups = 0;
  std::vector<double> p;  // index a*2 + yhat, length 2|A|

  double at(int yhat, int a) const { return p[static_cast<std::size_t>(a) * 2 + yhat]; }
};

// Noisy copy of a JointStats table. Cells may be negative; marginals are
// recomputed from the perturbed table, never re-perturbed.
struct PerturbedStats {
  int num_groups = 0;
  std::vector<double> q3;  // same layout as JointStats::q3
  std::vector<double> q2;  // index a*2 + y

  double at(int yhat, int a, int y) const {
    return q3[(static_cast<std::size_t>(yhat) * num_groups + a) * 2 + y];
  }
  double marginal(int a, int y) const { return q2[static_cast<std::size_t>(a) * 2 + y]; }
};

struct BaseModel {
  int hyp_id = -1;
  std::vector<int> predictions;
  double error = 0.0;
};

// Exact ERM over an A-blind stump class (lowest id wins ties). The default
// class uses 7 thresholds per feature; pass a class to plug in another base.
BaseModel train_base(const Dataset& data);
BaseModel train_base(const Dataset& data, const HypothesisClass& klass);

// Adds Laplace(2/(m*epsilon)) to every q_{yhat,a,y} cell, in cell-index order
// (the draw order). epsilon = kEpsInf copies the table exactly, drawing nothing.
PerturbedStats perturb_stats(const JointStats& stats, double epsilon, std::size_t m, Rng& rng);

struct PrivateLp {
  LinearProgram lp;             // variables ordered like MixingParams::p
  std::vector<double> slack_fp;  // per group a (anchor slot 0 unused)
  std::vector<double> slack_tp;
};

// LP over the mixing parameters: minimize the perturbed error estimate
// subject to per-group rate-gap constraints widened by
// 4 ln(4|A|/beta) / (min(q~_{a y}, q~_{0 y}) * m * epsilon), y = 0 for the
// false-positive rows and y = 1 for the true-positive rows (slack 0 at the
// epsilon = kEpsInf sentinel). Throws std::runtime_error naming the cell if
// any perturbed marginal is nonpositive; cells are never clamped.
PrivateLp build_private_lp(const PerturbedStats& stats, double gamma, double beta, double epsilon,
                           std::size_t m);

// Expected error / rates of the derived classifier under mixing p, evaluated
// against a (true or perturbed) joint table: linear forms in p.
double mixed_error(const MixingParams& p, const JointStats& stats);
GroupRates mixed_rates(const MixingParams& p, const JointStats& stats);

enum class RunStatus { kOk, kInfeasible, kPreconditionViolation };

struct PostprocessReport {
  RunStatus status = RunStatus::kOk;
  std::string message;
  double gamma = 0.0, epsilon = 0.0, beta = 0.0;
  double err_tilde = 0.0;  // LP objective at the solution (perturbed estimate)
  double err_hat = 0.0;    // realized empirical error of the derived classifier
  std::vector<double> delta_fp, delta_tp;  // realized |rate_a - rate_0|, index a-1
  double max_delta_fp = 0.0, max_delta_tp = 0.0;
  MixingParams mixing;
  BaseModel base;
  BudgetLedger ledger;  // one basic entry (epsilon, 0); empty at the sentinel
};

// Full pipeline. Expected failure modes come back as statuses, not throws:
// kPreconditionViolation when a perturbed marginal is nonpositive or the data
// has a degenerate (group, label) cell, kInfeasible when the widened LP still
// has no solution (the message advises a larger epsilon or gamma).
PostprocessReport dp_postprocess(const Dataset& data, double gamma, const PrivacyParams& privacy,
                                 Rng& rng);

// Noiseless benchmark: the same LP shape built from the exact table with zero
// slack. Deliberately constructed by independent code, so sentinel runs of
// dp_postprocess can be checked against it.
PostprocessReport postprocess_exact(const Dataset& data, double gamma);

// Deployment sampling: Bernoulli(p[base_bit, group]); one uniform draw.
int derived_predict(const MixingParams& p, int base_bit, int group, Rng& rng);

}  // namespace dpfair
