// Copyright (c) 2026 the dpfair authors. MIT license; see LICENSE.
//
// Finite hypothesis classes: decision stumps over empirical quantile
// thresholds, the two constant classifiers, and (in group-aware mode) the
// per-group indicator classifiers. Member ids are dense indexes into the
// class, stable for a given build.
#pragma once

#include <cstddef>
#include <vector>

#include "dpfair/dataset.hpp"
#include "dpfair/random.hpp"

namespace dpfair {

enum class HypKind { kStump, kConstant, kGroupIndicator, kGroupComplement };

struct Hypothesis {
  HypKind kind = HypKind::kConstant;
  int feature = -1;        // stump
  double threshold = 0.0;  // stump
  int polarity = +1;       // stump: +1 predicts 1{x[f] > t}, -1 predicts 1{x[f] <= t}
  int bit = 0;             // constant
  int group = -1;          // indicator / complement
};

enum class ClassMode { kABlind, kAAware };

struct HypothesisClass {
  ClassMode mode = ClassMode::kABlind;
  bool has_discriminators = false;  // group indicators/complements appended
  int num_groups = 0;
  std::vector<Hypothesis> members;  // id = index

  std::size_t size() const { return members.size(); }
};

// Evaluates one hypothesis. Group-dependent kinds are rejected in A-blind
// mode (std::invalid_argument): blind classes must never read the group.
int predict(const Hypothesis& h, const std::vector<double>& x, int group, ClassMode mode);

// Member predictions over a whole dataset.
std::vector<int> predict_all(const HypothesisClass& klass, const Dataset& data, int member);

// Stumps at empirical quantiles j/(k+1), j = 1..k, per feature (both
// polarities), then the constants 0 and 1; with discriminators (A-aware only)
// the per-group indicator and complement for every group, interleaved
// (indicator a, complement a). |H| = dim * k * 2 + 2 (+ 2|A|).
HypothesisClass build_stump_class(const Dataset& data, int thresholds_per_feature, ClassMode mode,
                                  bool discriminators = false);

// Distinct prediction vectors of an A-blind class on a dataset; the
// representative of each labelling is the lowest member id that induces it.
// A-aware classes are rejected: their predictions are not a function of x.
struct LabellingCache {
  std::vector<int> rep_ids;
  std::vector<std::vector<int>> labellings;  // aligned with rep_ids

  std::size_t size() const { return rep_ids.size(); }
};
LabellingCache induce_labellings(const HypothesisClass& klass, const Dataset& data);

struct WeightedMember {
  int id = 0;
  double weight = 0.0;
};

// Finite mixture over class members. All in-sample metrics use expectation
// semantics (they are linear in the weights); sampling is only for deployment.
struct RandomizedClassifier {
  std::vector<WeightedMember> support;
};

// Throws std::invalid_argument unless weights are nonnegative, ids valid for
// the class, and the weights sum to 1 within 1e-12.
void validate(const RandomizedClassifier& q, const HypothesisClass& klass);

// Samples a member by weight (one uniform draw), then predicts.
int mix_predict(const RandomizedClassifier& q, const HypothesisClass& klass,
                const std::vector<double>& x, int group, Rng& rng);

// Serialization used by the CLI: one line per support entry,
// "id,weight,description" with duplicate ids merged (weights summed).
std::vector<std::string> serialize_support(const RandomizedClassifier& q,
                                           const HypothesisClass& klass);

}  // namespace dpfair
