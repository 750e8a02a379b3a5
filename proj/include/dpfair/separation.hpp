// Copyright (c) 2026 the dpfair authors. MIT license; see LICENSE.
//
// Worst-case sensitivity gap between group-blind and group-aware fair
// learning. A four-cohort construction makes the optimal gamma-fair
// (FPR-constrained) error jump by 1/(4 + gamma m) when one record changes
// group-conditioned behavior, while the aware class mixes the jump away to
// O(1/m). The "fair value" f(D) is computed by an LP over mixtures of the
// instance's hypothesis class.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dpfair/dataset.hpp"
#include "dpfair/hypothesis.hpp"
#include "dpfair/lp_solver.hpp"
#include "dpfair/metrics.hpp"

namespace dpfair {

enum class SeparationVariant { kBlind, kAware };

struct SeparationInstance {
  double gamma = 0.1;
  std::size_t m = 40;
  SeparationVariant variant = SeparationVariant::kBlind;
};

// Requires m divisible by 4, gamma > 1/m, gamma * m / 4 integral, and
// (1 - gamma) * m / 4 >= 1 (throws std::invalid_argument otherwise).
bool instance_valid(double gamma, std::size_t m, std::string* why = nullptr);

struct SeparationPair {
  Dataset d;        // cohorts m/2, m/4, (1-gamma)m/4, gamma m/4
  Dataset d_prime;  // one record moved from the third cohort to the fourth
  HypothesisClass klass;  // blind: {constant 0, indicator feature}; aware adds both group indicators
};
SeparationPair build_instance(const SeparationInstance& inst);

struct FairLpResult {
  LpStatus status = LpStatus::kInfeasible;
  double value = 0.0;
  RandomizedClassifier q;
};

// min_{Q in Delta(H)} err(Q) subject to per-group rate gaps <= gamma.
// Cannot be infeasible when the class contains a constant classifier.
FairLpResult solve_fair_lp(const Dataset& data, const HypothesisClass& klass, double gamma,
                           FairnessMode mode);

struct SensitivityRow {
  double gamma = 0.0;
  std::size_t m = 0;
  SeparationVariant variant = SeparationVariant::kBlind;
  double f_d = 0.0;
  double f_d_prime = 0.0;
  double gap = 0.0;  // |f(D') - f(D)|; blind variant equals 1/(4 + gamma m)
};

// Both variants for every valid (gamma, m) pair of the grids, in grid order;
// invalid pairs are skipped.
std::vector<SensitivityRow> sensitivity_scan(const std::vector<double>& gammas,
                                             const std::vector<std::size_t>& ms);

}  // namespace dpfair
