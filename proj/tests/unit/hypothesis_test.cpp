// Copyright (c) 2026 the dpfair authors. MIT license; see LICENSE.
#include <doctest.h>

#include <stdexcept>
#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "dpfair/hypothesis.hpp"

using namespace dpfair;

namespace {

Dataset line_data() {
  // One feature, values 1..8; groups alternate; labels split after 5.
  Dataset data;
  data.num_groups = 2;
  data.dim = 1;
  for (int i = 1; i <= 8; ++i) {
    Record r;
    r.x = {static_cast<double>(i)};
    r.group = i % 2;
    r.label = i > 5 ? 1 : 0;
    data.records.push_back(r);
  }
  return data;
}

}  // namespace

TEST_CASE("stump predictions honor polarity") {
  Hypothesis h;
  h.kind = HypKind::kStump;
  h.feature = 0;
  h.threshold = 2.5;
  h.polarity = +1;
  CHECK(predict(h, {3.0}, 0, ClassMode::kABlind) == 1);
  CHECK(predict(h, {2.5}, 0, ClassMode::kABlind) == 0);  // strict inequality
  h.polarity = -1;
  CHECK(predict(h, {3.0}, 0, ClassMode::kABlind) == 0);
  CHECK(predict(h, {2.0}, 0, ClassMode::kABlind) == 1);
}

TEST_CASE("constants ignore everything") {
  Hypothesis h;
  h.kind = HypKind::kConstant;
  h.bit = 1;
  CHECK(predict(h, {123.0}, 1, ClassMode::kABlind) == 1);
  h.bit = 0;
  CHECK(predict(h, {123.0}, 0, ClassMode::kAAware) == 0);
}

TEST_CASE("group classifiers work aware and are rejected blind") {
  Hypothesis ind;
  ind.kind = HypKind::kGroupIndicator;
  ind.group = 1;
  CHECK(predict(ind, {0.0}, 1, ClassMode::kAAware) == 1);
  CHECK(predict(ind, {0.0}, 0, ClassMode::kAAware) == 0);
  CHECK_THROWS_AS(predict(ind, {0.0}, 1, ClassMode::kABlind), std::invalid_argument);
  Hypothesis comp;
  comp.kind = HypKind::kGroupComplement;
  comp.group = 1;
  CHECK(predict(comp, {0.0}, 1, ClassMode::kAAware) == 0);
  CHECK(predict(comp, {0.0}, 0, ClassMode::kAAware) == 1);
}

TEST_CASE("build_stump_class has the documented size and structure") {
  const Dataset data = line_data();
  const HypothesisClass blind = build_stump_class(data, 3, ClassMode::kABlind);
  CHECK(blind.mode == ClassMode::kABlind);
  CHECK(!blind.has_discriminators);
  // dim * k * 2 stumps + 2 constants.
  CHECK(blind.size() == 1 * 3 * 2 + 2);
  const HypothesisClass aware =
      build_stump_class(data, 3, ClassMode::kAAware, /*discriminators=*/true);
  CHECK(aware.size() == blind.size() + 2 * 2);
  CHECK(aware.has_discriminators);
  // Discriminators interleave indicator/complement per group at the tail.
  const std::size_t tail = aware.size() - 4;
  CHECK(aware.members[tail].kind == HypKind::kGroupIndicator);
  CHECK(aware.members[tail].group == 0);
  CHECK(aware.members[tail + 1].kind == HypKind::kGroupComplement);
  CHECK(aware.members[tail + 1].group == 0);
  CHECK(aware.members[tail + 2].kind == HypKind::kGroupIndicator);
  CHECK(aware.members[tail + 2].group == 1);
}

TEST_CASE("discriminators require the aware mode") {
  const Dataset data = line_data();
  CHECK_THROWS_AS(build_stump_class(data, 3, ClassMode::kABlind, /*discriminators=*/true),
                  std::invalid_argument);
}

TEST_CASE("stump thresholds sit at empirical quantiles") {
  const Dataset data = line_data();  // sorted column 1..8
  const HypothesisClass klass = build_stump_class(data, 3, ClassMode::kABlind);
  std::set<double> thresholds;
  for (const Hypothesis& h : klass.members) {
    if (h.kind == HypKind::kStump) thresholds.insert(h.threshold);
  }
  // Quantile indexes floor(j * 8 / 4) = 2, 4, 6 into the sorted column
  // 1..8 -> values 3, 5, 7.
  CHECK(thresholds == std::set<double>{3.0, 5.0, 7.0});
}

TEST_CASE("quantile stump separates linearly separable data") {
  const Dataset data = line_data();
  const HypothesisClass klass = build_stump_class(data, 3, ClassMode::kABlind);
  bool perfect = false;
  for (std::size_t id = 0; id < klass.size(); ++id) {
    const std::vector<int> preds = predict_all(klass, data, static_cast<int>(id));
    bool all = true;
    for (std::size_t i = 0; i < data.records.size(); ++i) {
      if (preds[i] != data.records[i].label) all = false;
    }
    if (all) perfect = true;
  }
  CHECK(perfect);  // threshold 5 with polarity +1 fits exactly
}

TEST_CASE("labelling induction dedups with lowest-id representatives") {
  const Dataset data = line_data();
  const HypothesisClass klass = build_stump_class(data, 3, ClassMode::kABlind);
  const LabellingCache cache = induce_labellings(klass, data);
  CHECK(cache.size() >= 2);
  CHECK(cache.size() <= klass.size());
  std::set<std::vector<int>> distinct(cache.labellings.begin(), cache.labellings.end());
  CHECK(distinct.size() == cache.size());  // no duplicates
  // Representatives are sorted, unique, and each reproduces its labelling.
  for (std::size_t i = 0; i < cache.size(); ++i) {
    if (i > 0) CHECK(cache.rep_ids[i - 1] < cache.rep_ids[i]);
    CHECK(predict_all(klass, data, cache.rep_ids[i]) == cache.labellings[i]);
    // No member with a smaller id induces the same labelling.
    for (int id = 0; id < cache.rep_ids[i]; ++id) {
      if (std::find(cache.rep_ids.begin(), cache.rep_ids.end(), id) != cache.rep_ids.end()) {
        continue;
      }
      CHECK(predict_all(klass, data, id) != cache.labellings[i]);
    }
  }
  HypothesisClass aware = build_stump_class(data, 3, ClassMode::kAAware, true);
  CHECK_THROWS_AS(induce_labellings(aware, data), std::invalid_argument);
}

TEST_CASE("randomized classifier validation") {
  const Dataset data = line_data();
  const HypothesisClass klass = build_stump_class(data, 3, ClassMode::kABlind);
  RandomizedClassifier q;
  q.support = {{0, 0.5}, {1, 0.5}};
  CHECK_NOTHROW(validate(q, klass));
  q.support = {{0, 0.5}, {1, 0.4999}};
  CHECK_THROWS_AS(validate(q, klass), std::invalid_argument);
  q.support = {{0, 1.5}, {1, -0.5}};
  CHECK_THROWS_AS(validate(q, klass), std::invalid_argument);
  q.support = {{999, 1.0}};
  CHECK_THROWS_AS(validate(q, klass), std::invalid_argument);
  q.support.clear();
  CHECK_THROWS_AS(validate(q, klass), std::invalid_argument);
}

TEST_CASE("mix_predict samples the support") {
  const Dataset data = line_data();
  const HypothesisClass klass = build_stump_class(data, 3, ClassMode::kABlind);
  // Find the ids of the two constants.
  int zero_id = -1, one_id = -1;
  for (std::size_t i = 0; i < klass.size(); ++i) {
    if (klass.members[i].kind == HypKind::kConstant) {
      (klass.members[i].bit == 0 ? zero_id : one_id) = static_cast<int>(i);
    }
  }
  REQUIRE(zero_id >= 0);
  REQUIRE(one_id >= 0);
  RandomizedClassifier q;
  q.support = {{zero_id, 0.25}, {one_id, 0.75}};
  Rng rng(404);
  int ones = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) ones += mix_predict(q, klass, {0.0}, 0, rng);
  CHECK(std::abs(ones / static_cast<double>(n) - 0.75) < 0.01);
  // Degenerate mixture is deterministic.
  RandomizedClassifier point;
  point.support = {{one_id, 1.0}};
  CHECK(mix_predict(point, klass, {0.0}, 0, rng) == 1);
}

TEST_CASE("serialize_support merges duplicate ids") {
  const Dataset data = line_data();
  const HypothesisClass klass = build_stump_class(data, 3, ClassMode::kABlind);
  RandomizedClassifier q;
  q.support = {{1, 0.25}, {0, 0.5}, {1, 0.25}};
  const std::vector<std::string> lines = serialize_support(q, klass);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0].rfind("0,", 0) == 0);
  CHECK(lines[1].rfind("1,", 0) == 0);
  CHECK(lines[1].find("0.5") != std::string::npos);
}
