// Copyright (c) 2026 the dpfair authors. MIT license; see LICENSE.
//
// Private in-processing: a Learner/Auditor zero-sum game over the Lagrangian
// L(Q, lambda) = err(Q) + lambda . r(Q). Each round the Auditor plays an
// exponentiated-gradient dual update on Laplace-noised violation vectors and
// the Learner best-responds through a cost-sensitive reduction selected by the
// exponential mechanism. Averaged play is an approximate equilibrium whose
// quality nu certifies both error and fairness of the returned mixture.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dpfair/dataset.hpp"
#include "dpfair/hypothesis.hpp"
#include "dpfair/mechanisms.hpp"
#include "dpfair/metrics.hpp"
#include "dpfair/postprocess.hpp"  // RunStatus
#include "dpfair/random.hpp"

namespace dpfair {

// Candidate pool of the Learner's oracle: distinct labellings of an A-blind
// class (their count replaces |H| in the closed forms), or every member of an
// A-aware class.
enum class HypothesisSelection { kBlindLabellings, kAwareMembers };

struct GameConfig {
  double gamma = 0.1;
  double bound_b = 1.0;  // L1 cap B of the dual player
  PrivacyParams privacy;
  FairnessMode mode = FairnessMode::kOdds;
  HypothesisSelection selection = HypothesisSelection::kBlindLabellings;
  int t_override = 0;         // > 0 replaces the closed-form iteration count
  double eta_override = 0.0;  // > 0 replaces the closed-form learning rate
  // Public lower bound on min_{a,y} q_{ay} used for noise calibration. 0 falls
  // back to the data-derived value (flagged in the transcript); supplying a
  // genuine public bound is the caller's responsibility.
  double public_min_q = 0.0;
};

// Cost-sensitive classification costs of one record: c0 for predicting 0,
// c1 for predicting 1.
struct CostPair {
  double c0 = 0.0;
  double c1 = 0.0;
};

struct TFormula {
  double real = 0.0;  // pre-floor value; linear in m and epsilon
  int t = 1;
  bool clamped = false;  // closed form fell below 1
};

// Closed-form iteration count
//   T = B sqrt(ln(K+1)) m eps / (2 (2|A|B + 1) sqrt(ln(1/delta)) (log_h + ln(2/beta)))
// with K the dual dimension of the mode and log_h = ln(candidate count).
// Requires finite epsilon; the sentinel has no closed form.
TFormula compute_t(double bound_b, int num_groups, std::size_t m, double epsilon, double delta,
                   double beta, double log_h, FairnessMode mode);

// Per-record reduction costs for the Learner's best response to the dual:
//   c0 = 1{Y != 0},
//   c1 = 1{Y != 1} + (lambda_{(A,Y,+)} - lambda_{(A,Y,-)}) / q_{A,Y}   (A != 0)
//   c1 = 1{Y != 1} - sum_{a != 0} (lambda_{(a,Y,+)} - lambda_{(a,Y,-)}) / q_{0,Y}   (A = 0),
// so that total cost = m * (L(h, lambda) + gamma ||lambda||_1). FPR-only mode
// zeroes the (a,1,+/-) terms.
std::vector<CostPair> cost_vectors(const DualVector& dual, const Dataset& data,
                                   const GroupMarginals& marginals, FairnessMode mode);

// Exact oracle: candidate minimizing sum_i [h(X_i) c1_i + (1-h(X_i)) c0_i],
// lowest index on ties. Returns an index into the candidate list.
int csc_exact(const std::vector<CostPair>& costs,
              const std::vector<std::vector<int>>& candidate_predictions);
// Convenience overload over a whole class; returns a member id.
int csc_exact(const std::vector<CostPair>& costs, const HypothesisClass& klass,
              const Dataset& data);

// Private oracle: exponential mechanism at eps_prime over the same totals.
// sensitivity is the Lagrangian-scale bound (2|A|B+1)/(min q * m - 1); the
// totals are m times that scale, so it is multiplied by m internally to keep
// the selection distribution calibrated. eps_prime = kEpsInf is csc_exact.
int csc_private(const std::vector<CostPair>& costs,
                const std::vector<std::vector<int>>& candidate_predictions, double eps_prime,
                double sensitivity, std::size_t m, Rng& rng);

// theta' = theta + eta * r_tilde, lambda' = softmax projection of theta'.
struct AuditorState {
  std::vector<double> theta;
  DualVector dual;
};
AuditorState auditor_step(const std::vector<double>& theta, double eta,
                          const std::vector<double>& r_tilde, double bound_b);

// r + Laplace(scale) per coordinate, drawn in coordinate order.
std::vector<double> noise_violations(const std::vector<double>& r_hat, double scale, Rng& rng);

struct IterationRow {
  std::vector<double> lambda;  // dual played this round (before the update)
  int hyp_id = -1;             // selected member id (labelling representative)
  std::vector<double> r_hat;   // exact violations of the selection
  std::vector<double> r_tilde;  // noised violations fed to the Auditor
};

struct GameTranscript {
  GameConfig config;
  int num_groups = 0;
  std::size_t m = 0;
  int k_dim = 0;
  int t = 0;
  double t_real = 0.0;  // pre-floor closed form; NaN when overridden or sentinel
  bool t_clamped = false;
  double eta = 0.0;
  double eps_prime = 0.0;    // per-release budget eps / (4 sqrt(T ln(1/delta)))
  double noise_scale = 0.0;  // 8|A| sqrt(T ln(1/delta)) / ((min q * m - 1) eps)
  double sensitivity = 0.0;  // (2|A|B+1) / (min q * m - 1)
  double log_h = 0.0;
  double min_q_used = 0.0;
  bool used_data_min_q = false;
  std::vector<IterationRow> iterations;
  RandomizedClassifier q_bar;      // uniform over the T selections
  std::vector<double> lambda_bar;  // average dual
  BudgetLedger ledger;             // advanced mode; 2T entries at eps_prime
};

// Runs the game. Draw order per iteration: the K Laplace coordinates, then the
// oracle's selection draw; at the epsilon = kEpsInf sentinel no randomness is
// consumed at all, every mechanism is exact, and the loop is the standard
// non-private reduction. T falls back to 200 at the sentinel when t_override
// is 0 (the closed form scales with epsilon). Throws std::invalid_argument on
// contract violations: fewer than 2 groups, degenerate (group,label) cells,
// min_q * m <= 1, selection mode incompatible with the class, or B <= |A|-1
// in the FPR-only extension (discriminators present).
GameTranscript run_game(const Dataset& data, const HypothesisClass& klass,
                        const GameConfig& config, Rng& rng);

// The non-private reduction: identical code path with the sentinel forced.
GameTranscript run_nonprivate_game(const Dataset& data, const HypothesisClass& klass,
                                   GameConfig config, Rng& rng);

struct InprocessReport {
  RunStatus status = RunStatus::kOk;
  std::string message;
  double gamma = 0.0, epsilon = 0.0, delta = 0.0, bound_b = 0.0;
  int t = 0;
  double eta = 0.0;
  double err_hat = 0.0;
  double max_delta_fp = 0.0, max_delta_tp = 0.0;
  double nu = 0.0;            // equilibrium-quality bound R_Q + R_lambda
  double fair_bound_fp = 0.0; // applicable realized-fairness bound
  double fair_bound_tp = 0.0; // NaN in FPR-only mode (unconstrained)
  bool pass = false;
};

// Realized error and rate gaps of the averaged mixture, the theoretical nu
// recomputed from the transcript parameters (noise terms zero at the
// sentinel), and a pass flag against the applicable fairness bound:
// gamma + (1+2nu)/B in standard mode, gamma + 2nu/(B-(|A|-1)) in the FPR-only
// extension (B = |A| gives gamma + 2nu). Throws std::runtime_error if the
// transcript is inconsistent with its config or with the supplied data/class.
InprocessReport certify_outputs(const GameTranscript& transcript, const Dataset& data,
                                const HypothesisClass& klass);

}  // namespace dpfair
