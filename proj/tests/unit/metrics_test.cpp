// Copyright (c) 2026 the dpfair authors. MIT license; see LICENSE.
#include <doctest.h>

#include <stdexcept>
#include <cmath>
#include <vector>

#include "dpfair/metrics.hpp"

using namespace dpfair;

namespace {

// Three groups, every (a, y) cell populated, fixed layout for hand checks.
Dataset cells_data() {
  Dataset data;
  data.num_groups = 3;
  data.dim = 1;
  int i = 0;
  for (int a = 0; a < 3; ++a) {
    for (int y = 0; y < 2; ++y) {
      for (int c = 0; c < 2; ++c) {  // two records per cell
        Record r;
        r.x = {static_cast<double>(i++)};
        r.group = a;
        r.label = y;
        data.records.push_back(r);
      }
    }
  }
  return data;
}

HypothesisClass constants_class(int num_groups) {
  HypothesisClass klass;
  klass.mode = ClassMode::kABlind;
  klass.num_groups = num_groups;
  for (int bit : {0, 1}) {
    Hypothesis h;
    h.kind = HypKind::kConstant;
    h.bit = bit;
    klass.members.push_back(h);
  }
  return klass;
}

}  // namespace

TEST_CASE("empirical error counts disagreements") {
  const Dataset data = cells_data();  // 12 records, labels alternate per pair
  std::vector<int> preds(12, 1);
  // All-ones errs on every y=0 record: 6 of 12.
  CHECK(empirical_error(preds, data) == doctest::Approx(0.5).epsilon(1e-15));
  for (std::size_t i = 0; i < preds.size(); ++i) preds[i] = data.records[i].label;
  CHECK(empirical_error(preds, data) == 0.0);
  CHECK_THROWS_AS(empirical_error(std::vector<int>{1}, data), std::invalid_argument);
}

TEST_CASE("group rates on hand-checkable predictions") {
  const Dataset data = cells_data();
  // Predict 1 exactly on group 0's first y=0 record and both y=1 records of
  // group 2.
  std::vector<int> preds(12, 0);
  preds[0] = 1;             // (a=0, y=0)
  preds[10] = preds[11] = 1;  // (a=2, y=1)
  const GroupRates rates = group_rates(preds, data);
  CHECK(rates.fp[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rates.fp[1] == 0.0);
  CHECK(rates.fp[2] == 0.0);
  CHECK(rates.tp[0] == 0.0);
  CHECK(rates.tp[2] == doctest::Approx(1.0).epsilon(1e-15));
  for (int a = 0; a < 3; ++a) {
    CHECK(rates.fp_defined[a] == 1);
    CHECK(rates.tp_defined[a] == 1);
  }
}

TEST_CASE("degenerate cells: strict throws, permissive flags") {
  Dataset data = cells_data();
  // Drop both (a=1, y=1) records.
  std::vector<Record> kept;
  for (const Record& r : data.records) {
    if (!(r.group == 1 && r.label == 1)) kept.push_back(r);
  }
  data.records = kept;
  const std::vector<int> preds(kept.size(), 0);
  CHECK_THROWS_WITH_AS(group_rates(preds, data), doctest::Contains("degenerate cell (1,1)"),
                       std::invalid_argument);
  const GroupRates rates = group_rates(preds, data, /*strict=*/false);
  CHECK(rates.tp_defined[1] == 0);
  CHECK(rates.tp[1] == 0.0);
  CHECK(rates.fp_defined[1] == 1);
  // Violations only require the cells the mode reads: FPR-only never touches
  // (a,1), so it works on this dataset while equalized odds still rejects it.
  CHECK_THROWS_WITH_AS(violation_vector(preds, data, 0.1, FairnessMode::kOdds),
                       doctest::Contains("degenerate cell (1,1)"), std::invalid_argument);
  const std::vector<double> v = violation_vector(preds, data, 0.1, FairnessMode::kFprOnly);
  CHECK(v.size() == 4);
  for (double coord : v) CHECK(coord == doctest::Approx(-0.1).epsilon(1e-12));
  // An empty (a,0) cell is rejected in every mode.
  Dataset no_neg = cells_data();
  std::vector<Record> pos_kept;
  for (const Record& r : no_neg.records) {
    if (!(r.group == 2 && r.label == 0)) pos_kept.push_back(r);
  }
  no_neg.records = pos_kept;
  const std::vector<int> zero_preds(pos_kept.size(), 0);
  CHECK_THROWS_WITH_AS(violation_vector(zero_preds, no_neg, 0.1, FairnessMode::kFprOnly),
                       doctest::Contains("degenerate cell (2,0)"), std::invalid_argument);
}

TEST_CASE("violation dimension and frozen coordinate order") {
  CHECK(violation_dim(FairnessMode::kOdds, 2) == 4);
  CHECK(violation_dim(FairnessMode::kOdds, 3) == 8);
  CHECK(violation_dim(FairnessMode::kFprOnly, 2) == 2);
  CHECK(violation_dim(FairnessMode::kFprOnly, 4) == 6);
  // Odds order per group a: (a,0,+), (a,0,-), (a,1,+), (a,1,-).
  CHECK(violation_index(1, 0, 0, FairnessMode::kOdds, 3) == 0);
  CHECK(violation_index(1, 0, 1, FairnessMode::kOdds, 3) == 1);
  CHECK(violation_index(1, 1, 0, FairnessMode::kOdds, 3) == 2);
  CHECK(violation_index(1, 1, 1, FairnessMode::kOdds, 3) == 3);
  CHECK(violation_index(2, 0, 0, FairnessMode::kOdds, 3) == 4);
  CHECK(violation_index(2, 1, 1, FairnessMode::kOdds, 3) == 7);
  // FPR-only keeps just the y=0 pairs.
  CHECK(violation_index(1, 0, 0, FairnessMode::kFprOnly, 3) == 0);
  CHECK(violation_index(2, 0, 1, FairnessMode::kFprOnly, 3) == 3);
}

TEST_CASE("violation vector signs and fairness certificate") {
  const Dataset data = cells_data();
  std::vector<int> preds(12, 0);
  preds[0] = 1;  // fp_0 = 0.5, all other rates 0
  const double gamma = 0.1;
  const std::vector<double> v = violation_vector(preds, data, gamma, FairnessMode::kOdds);
  REQUIRE(v.size() == 8);
  // Group 1: fp_1 - fp_0 - gamma = -0.6; fp_0 - fp_1 - gamma = 0.4 (violated).
  CHECK(v[violation_index(1, 0, 0, FairnessMode::kOdds, 3)] ==
        doctest::Approx(-0.6).epsilon(1e-12));
  CHECK(v[violation_index(1, 0, 1, FairnessMode::kOdds, 3)] ==
        doctest::Approx(0.4).epsilon(1e-12));
  // TP rates all zero -> both tp coordinates at -gamma.
  CHECK(v[violation_index(1, 1, 0, FairnessMode::kOdds, 3)] ==
        doctest::Approx(-gamma).epsilon(1e-12));
  // A fair classifier has every coordinate <= 0.
  const std::vector<int> zeros(12, 0);
  for (double coord : violation_vector(zeros, data, 0.0, FairnessMode::kOdds)) {
    CHECK(coord <= 1e-15);
  }
}

TEST_CASE("metrics are linear in mixture weights") {
  const Dataset data = cells_data();
  HypothesisClass klass = constants_class(3);
  // Mix of constant-0 and constant-1 at weight w: every rate equals w.
  for (double w : {0.0, 0.25, 0.6, 1.0}) {
    RandomizedClassifier q;
    q.support = {{0, 1.0 - w}, {1, w}};
    const double err = empirical_error(q, klass, data);
    CHECK(err == doctest::Approx(0.5).epsilon(1e-12));  // half the labels are 1
    const GroupRates rates = group_rates(q, klass, data);
    for (int a = 0; a < 3; ++a) {
      CHECK(rates.fp[a] == doctest::Approx(w).epsilon(1e-12));
      CHECK(rates.tp[a] == doctest::Approx(w).epsilon(1e-12));
    }
    const std::vector<double> v = violation_vector(q, klass, data, 0.05, FairnessMode::kOdds);
    for (double coord : v) CHECK(coord == doctest::Approx(-0.05).epsilon(1e-12));
  }
}

TEST_CASE("expectation semantics equal the weighted sum of member metrics") {
  const Dataset data = cells_data();
  HypothesisClass klass = constants_class(3);
  Hypothesis stump;
  stump.kind = HypKind::kStump;
  stump.feature = 0;
  stump.threshold = 5.5;
  stump.polarity = +1;
  klass.members.push_back(stump);
  RandomizedClassifier q;
  q.support = {{0, 0.2}, {1, 0.3}, {2, 0.5}};
  double expected = 0.0;
  for (const auto& entry : q.support) {
    const std::vector<int> preds = predict_all(klass, data, entry.id);
    expected += entry.weight * empirical_error(preds, data);
  }
  CHECK(empirical_error(q, klass, data) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("dual softmax keeps the L1 ball strict") {
  const int k = 4;
  const double bound = 2.0;
  // theta = 0: every slot gets B / (k + 1).
  const DualVector dual = dual_from_theta(std::vector<double>(k, 0.0), bound);
  REQUIRE(dual.lambda.size() == static_cast<std::size_t>(k));
  for (double l : dual.lambda) CHECK(l == doctest::Approx(bound / (k + 1)).epsilon(1e-12));
  // Large theta saturates toward B but never reaches it while the slack
  // weight exp(-top) stays representable next to the total.
  DualVector extreme = dual_from_theta({30.0, -30.0, 0.0, 1.0}, bound);
  double l1 = 0.0;
  for (double l : extreme.lambda) {
    CHECK(l >= 0.0);
    l1 += l;
  }
  CHECK(l1 < bound);
  CHECK(extreme.lambda[0] == doctest::Approx(bound).epsilon(1e-9));
  // Past that point the slack weight rounds away and the sum lands on B
  // exactly, but it never exceeds the ball.
  DualVector saturated = dual_from_theta({500.0, -500.0, 0.0, 1.0}, bound);
  double sat = 0.0;
  for (double l : saturated.lambda) sat += l;
  CHECK(sat <= bound);
  CHECK(sat == doctest::Approx(bound).epsilon(1e-12));
  // Overflow-prone magnitudes stay finite.
  const DualVector huge = dual_from_theta({1e4, 1e4, 1e4, 1e4}, bound);
  for (double l : huge.lambda) CHECK(std::isfinite(l));
}

TEST_CASE("lagrangian is error plus the dual-weighted violations") {
  const std::vector<double> violation = {0.2, -0.1, 0.05};
  const std::vector<double> lambda = {1.0, 2.0, 0.5};
  CHECK(lagrangian(0.3, violation, lambda) ==
        doctest::Approx(0.3 + 0.2 - 0.2 + 0.025).epsilon(1e-15));
  CHECK_THROWS_AS(lagrangian(0.3, violation, std::vector<double>{1.0}), std::invalid_argument);
  // Full overload agrees with the manual composition.
  const Dataset data = cells_data();
  const HypothesisClass klass = constants_class(3);
  RandomizedClassifier q;
  q.support = {{1, 1.0}};
  const DualVector dual = dual_from_theta(std::vector<double>(8, 0.3), 1.5);
  const double direct = lagrangian(q, klass, data, dual, 0.1, FairnessMode::kOdds);
  const double manual =
      lagrangian(empirical_error(q, klass, data),
                 violation_vector(q, klass, data, 0.1, FairnessMode::kOdds), dual.lambda);
  CHECK(direct == doctest::Approx(manual).epsilon(1e-15));
}
