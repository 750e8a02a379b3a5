// Copyright (c) 2026 the dpfair authors. MIT license; see LICENSE.
//
// Primitive differential-privacy mechanisms and composition accounting.
// epsilon = infinity is the non-private sentinel throughout the library:
// sentinel paths are exact (no noise, argmin selection) and consume no
// randomness, so noiseless runs are reproducible without a parallel code path.
#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "dpfair/random.hpp"

namespace dpfair {

inline constexpr double kEpsInf = std::numeric_limits<double>::infinity();

struct PrivacyParams {
  double epsilon = 1.0;  // privacy budget; kEpsInf disables noise
  double delta = 1e-7;   // composition failure probability
  double beta = 0.05;    // confidence parameter of accuracy statements
};

// Throws std::invalid_argument unless epsilon > 0, delta in (0,1), beta in (0,1).
void validate(const PrivacyParams& p);

// Laplace noise specification: scale = sensitivity / epsilon (0 at the sentinel).
struct NoiseSpec {
  double sensitivity = 0.0;
  double scale = 0.0;
};
NoiseSpec laplace_spec(double sensitivity, double epsilon);

// One Laplace(scale) variate via inverse CDF; one uniform draw.
// scale == 0 returns exactly 0 and consumes no draws.
double laplace_sample(Rng& rng, double scale);

// Simultaneous tail bound for k independent Laplace(scale) coordinates: with
// probability >= 1 - beta every coordinate has |W_i| <= ln(k/beta) * scale.
double laplace_tail_bound(std::size_t k, double scale, double beta);

// Selects an index with probability proportional to
// exp(-epsilon * losses[i] / (2 * sensitivity)); one uniform draw.
// epsilon == kEpsInf returns the exact argmin (lowest index on ties) and
// consumes no draws. Requires non-empty losses and sensitivity > 0.
std::size_t exponential_mechanism(Rng& rng, const std::vector<double>& losses,
                                  double sensitivity, double epsilon);

enum class CompositionMode { kBasic, kAdvanced };

struct BudgetEntry {
  double epsilon = 0.0;
  double delta = 0.0;
};

// Append-only record of the (epsilon, delta) cost of each mechanism release.
struct BudgetLedger {
  CompositionMode mode = CompositionMode::kBasic;
  std::vector<BudgetEntry> entries;

  void record(double epsilon, double delta) { entries.push_back({epsilon, delta}); }
};

struct BudgetTotal {
  double epsilon = 0.0;
  double delta = 0.0;
};

// Basic mode sums epsilons and deltas (target_delta is unused there).
// Advanced mode requires homogeneous entries (eps', delta') within 1e-12 and
// returns epsilon = 2 eps' sqrt(2 T ln(1/target_delta)), delta = T delta' +
// target_delta, where T is the number of entries. Adding an entry never
// decreases the composed epsilon. Throws std::invalid_argument on
// heterogeneous entries in advanced mode or target_delta outside (0,1).
BudgetTotal compose(const BudgetLedger& ledger, double target_delta);

}  // namespace dpfair
