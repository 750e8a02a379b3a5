// Copyright (c) 2026 the dpfair authors. MIT license; see LICENSE.
#include "dpfair/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace dpfair {

int predict(const Hypothesis& h, const std::vector<double>& x, int group, ClassMode mode) {
  switch (h.kind) {
    case HypKind::kStump: {
      if (h.feature < 0 || h.feature >= static_cast<int>(x.size())) {
        throw std::invalid_argument("stump feature index out of range");
      }
      const bool above = x[h.feature] > h.threshold;
      return h.polarity > 0 ? (above ? 1 : 0) : (above ? 0 : 1);
    }
    case HypKind::kConstant:
      return h.bit;
    case HypKind::kGroupIndicator:
    case HypKind::kGroupComplement: {
      if (mode == ClassMode::kABlind) {
        throw std::invalid_argument("group-dependent hypothesis in A-blind mode");
      }
      const bool match = group == h.group;
      return h.kind == HypKind::kGroupIndicator ? (match ? 1 : 0) : (match ? 0 : 1);
    }
  }
  throw std::invalid_argument("unknown hypothesis kind");
}

std::vector<int> predict_all(const HypothesisClass& klass, const Dataset& data, int member) {
  if (member < 0 || member >= static_cast<int>(klass.size())) {
    throw std::invalid_argument("member id out of range");
  }
  const Hypothesis& h = klass.members[member];
  std::vector<int> preds(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    preds[i] = predict(h, data.records[i].x, data.records[i].group, klass.mode);
  }
  return preds;
}

HypothesisClass build_stump_class(const Dataset& data, int thresholds_per_feature, ClassMode mode,
                                  bool discriminators) {
  validate(data);
  if (thresholds_per_feature < 1) throw std::invalid_argument("need >= 1 threshold per feature");
  if (discriminators && mode != ClassMode::kAAware) {
    throw std::invalid_argument("discriminators require A-aware mode");
  }

  HypothesisClass klass;
  klass.mode = mode;
  klass.num_groups = data.num_groups;
  klass.has_discriminators = discriminators;

  std::vector<double> column(data.size());
  for (int f = 0; f < data.dim; ++f) {
    for (std::size_t i = 0; i < data.size(); ++i) column[i] = data.records[i].x[f];
    std::sort(column.begin(), column.end());
    for (int j = 1; j <= thresholds_per_feature; ++j) {
      const std::size_t idx = static_cast<std::size_t>(
          static_cast<double>(j) / (thresholds_per_feature + 1) * static_cast<double>(data.size()));
      const double t = column[std::min(idx, data.size() - 1)];
      for (int polarity : {+1, -1}) {
        Hypothesis h;
        h.kind = HypKind::kStump;
        h.feature = f;
        h.threshold = t;
        h.polarity = polarity;
        klass.members.push_back(h);
      }
    }
  }
  for (int bit : {0, 1}) {
    Hypothesis h;
    h.kind = HypKind::kConstant;
    h.bit = bit;
    klass.members.push_back(h);
  }
  if (discriminators) {
    for (int a = 0; a < data.num_groups; ++a) {
      for (HypKind kind : {HypKind::kGroupIndicator, HypKind::kGroupComplement}) {
        Hypothesis h;
        h.kind = kind;
        h.group = a;
        klass.members.push_back(h);
      }
    }
  }
  return klass;
}

LabellingCache induce_labellings(const HypothesisClass& klass, const Dataset& data) {
  if (klass.mode != ClassMode::kABlind) {
    throw std::invalid_argument("labellings are only defined for A-blind classes");
  }
  LabellingCache cache;
  std::map<std::vector<int>, int> seen;
  for (int id = 0; id < static_cast<int>(klass.size()); ++id) {
    std::vector<int> preds = predict_all(klass, data, id);
    if (seen.emplace(preds, id).second) {
      cache.rep_ids.push_back(id);
      cache.labellings.push_back(std::move(preds));
    }
  }
  return cache;
}

void validate(const RandomizedClassifier& q, const HypothesisClass& klass) {
  if (q.support.empty()) throw std::invalid_argument("randomized classifier has empty support");
  double total = 0.0;
  for (const WeightedMember& w : q.support) {
    if (w.id < 0 || w.id >= static_cast<int>(klass.size())) {
      throw std::invalid_argument("support member id out of range");
    }
    if (!(w.weight >= 0.0)) throw std::invalid_argument("support weights must be nonnegative");
    total += w.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("support weights must sum to 1 within 1e-12");
  }
}

int mix_predict(const RandomizedClassifier& q, const HypothesisClass& klass,
                const std::vector<double>& x, int group, Rng& rng) {
  validate(q, klass);
  const double cut = rng.uniform01();
  double acc = 0.0;
  std::size_t pick = q.support.size() - 1;
  for (std::size_t i = 0; i < q.support.size(); ++i) {
    acc += q.support[i].weight;
    if (cut <= acc) {
      pick = i;
      break;
    }
  }
  return predict(klass.members[q.support[pick].id], x, group, klass.mode);
}

std::vector<std::string> serialize_support(const RandomizedClassifier& q,
                                           const HypothesisClass& klass) {
  validate(q, klass);
  std::map<int, double> merged;
  for (const WeightedMember& w : q.support) merged[w.id] += w.weight;
  std::vector<std::string> lines;
  char buf[160];
  for (const auto& [id, weight] : merged) {
    const Hypothesis& h = klass.members[id];
    std::string desc;
    switch (h.kind) {
      case HypKind::kStump:
        std::snprintf(buf, sizeof buf, "stump(f%d%s%.17g)", h.feature,
                      h.polarity > 0 ? ">" : "<=", h.threshold);
        desc = buf;
        break;
      case HypKind::kConstant:
        desc = "constant(" + std::to_string(h.bit) + ")";
        break;
      case HypKind::kGroupIndicator:
        desc = "group==" + std::to_string(h.group);
        break;
      case HypKind::kGroupComplement:
        desc = "group!=" + std::to_string(h.group);
        break;
    }
    std::snprintf(buf, sizeof buf, "%d,%.17g,%s", id, weight, desc.c_str());
    lines.push_back(buf);
  }
  return lines;
}

}  // namespace dpfair
