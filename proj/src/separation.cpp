// Copyright (c) 2026 the dpfair authors. MIT license; see LICENSE.
#include "dpfair/separation.hpp"

#include <cmath>
#include <stdexcept>

namespace dpfair {
namespace {

constexpr double kRedFeature = 0.0;   // "V" column value
constexpr double kBlueFeature = 1.0;  // "U" column value

void append_cohort(std::vector<Record>& out, std::size_t count, double feature, int group,
                   int label) {
  for (std::size_t i = 0; i < count; ++i) {
    Record r;
    r.x = {feature};
    r.group = group;
    r.label = label;
    out.push_back(std::move(r));
  }
}

Dataset make_dataset(std::size_t half, std::size_t quarter, std::size_t blue_v0,
                     std::size_t blue_u0) {
  Dataset data;
  data.num_groups = 2;
  data.dim = 1;
  data.records.reserve(half + quarter + blue_v0 + blue_u0);
  append_cohort(data.records, half, kRedFeature, /*group=*/0, /*label=*/0);
  append_cohort(data.records, quarter, kBlueFeature, /*group=*/1, /*label=*/1);
  append_cohort(data.records, blue_v0, kRedFeature, /*group=*/1, /*label=*/0);
  append_cohort(data.records, blue_u0, kBlueFeature, /*group=*/1, /*label=*/0);
  validate(data);
  return data;
}

}  // namespace

bool instance_valid(double gamma, std::size_t m, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why != nullptr) *why = msg;
    return false;
  };
  if (m == 0 || m % 4 != 0) return fail("m must be a positive multiple of 4");
  const double md = static_cast<double>(m);
  if (!(gamma > 1.0 / md)) return fail("gamma must exceed 1/m");
  const double quarter_gamma = gamma * md / 4.0;
  const double rounded = std::round(quarter_gamma);
  if (std::abs(quarter_gamma - rounded) > 1e-9 * std::max(1.0, quarter_gamma)) {
    return fail("gamma * m / 4 must be an integer");
  }
  if (rounded < 1.0) return fail("gamma * m / 4 must be at least 1");
  if (rounded + 1.0 > md / 4.0) return fail("(1 - gamma) * m / 4 must be at least 1");
  return true;
}

SeparationPair build_instance(const SeparationInstance& inst) {
  std::string why;
  if (!instance_valid(inst.gamma, inst.m, &why)) {
    throw std::invalid_argument("invalid separation instance: " + why);
  }
  const std::size_t m = inst.m;
  const std::size_t k =
      static_cast<std::size_t>(std::llround(inst.gamma * static_cast<double>(m) / 4.0));

  SeparationPair pair;
  pair.d = make_dataset(m / 2, m / 4, m / 4 - k, k);
  pair.d_prime = make_dataset(m / 2, m / 4, m / 4 - k - 1, k + 1);

  HypothesisClass& klass = pair.klass;
  klass.num_groups = 2;
  klass.has_discriminators = false;
  Hypothesis all_zero;
  all_zero.kind = HypKind::kConstant;
  all_zero.bit = 0;
  klass.members.push_back(all_zero);
  Hypothesis on_blue_feature;
  on_blue_feature.kind = HypKind::kStump;
  on_blue_feature.feature = 0;
  on_blue_feature.threshold = 0.5;
  on_blue_feature.polarity = +1;
  klass.members.push_back(on_blue_feature);
  if (inst.variant == SeparationVariant::kAware) {
    klass.mode = ClassMode::kAAware;
    for (int g = 0; g < 2; ++g) {
      Hypothesis ind;
      ind.kind = HypKind::kGroupIndicator;
      ind.group = g;
      klass.members.push_back(ind);
    }
  } else {
    klass.mode = ClassMode::kABlind;
  }
  return pair;
}

FairLpResult solve_fair_lp(const Dataset& data, const HypothesisClass& klass, double gamma,
                           FairnessMode mode) {
  validate(data);
  if (klass.members.empty()) throw std::invalid_argument("hypothesis class is empty");
  if (klass.num_groups != data.num_groups) {
    throw std::invalid_argument("hypothesis class group count does not match dataset");
  }
  const std::size_t n = klass.members.size();
  const std::size_t g = data.num_groups;

  std::vector<double> errors(n);
  std::vector<GroupRates> rates(n);
  for (std::size_t h = 0; h < n; ++h) {
    const std::vector<int> preds = predict_all(klass, data, static_cast<int>(h));
    errors[h] = empirical_error(preds, data);
    rates[h] = group_rates(preds, data, /*strict=*/false);
  }
  // Only the cells the constraints read must be populated: (a,0) always,
  // (a,1) only under the two-sided rate condition.
  for (std::size_t a = 0; a < g; ++a) {
    if (!rates[0].fp_defined[a]) {
      throw std::invalid_argument("group " + std::to_string(a) +
                                  " has no negative-label records; FP rate undefined");
    }
    if (mode == FairnessMode::kOdds && !rates[0].tp_defined[a]) {
      throw std::invalid_argument("group " + std::to_string(a) +
                                  " has no positive-label records; TP rate undefined");
    }
  }

  LinearProgram lp;
  lp.objective = errors;
  lp.lower.assign(n, 0.0);
  lp.upper.assign(n, 1.0);
  // Sum-to-one as a pair of inequalities.
  std::vector<double> ones(n, 1.0);
  lp.add_constraint(ones, 1.0);
  std::vector<double> neg_ones(n, -1.0);
  lp.add_constraint(neg_ones, -1.0);
  for (std::size_t a = 1; a < g; ++a) {
    std::vector<double> fp_gap(n);
    for (std::size_t h = 0; h < n; ++h) fp_gap[h] = rates[h].fp[a] - rates[h].fp[0];
    lp.add_abs_constraint(fp_gap, gamma);
    if (mode == FairnessMode::kOdds) {
      std::vector<double> tp_gap(n);
      for (std::size_t h = 0; h < n; ++h) tp_gap[h] = rates[h].tp[a] - rates[h].tp[0];
      lp.add_abs_constraint(tp_gap, gamma);
    }
  }

  const LpSolution sol = solve_lp(lp);
  FairLpResult result;
  result.status = sol.status;
  if (sol.status != LpStatus::kOptimal) return result;
  result.value = sol.value;
  result.q.support.reserve(n);
  double total = 0.0;
  for (std::size_t h = 0; h < n; ++h) {
    result.q.support.push_back({static_cast<int>(h), sol.x[h]});
    total += sol.x[h];
  }
  // The solver meets the sum-to-one rows only up to its feasibility
  // tolerance; rescale so downstream mixture validation holds exactly.
  if (total > 0.0) {
    for (auto& entry : result.q.support) entry.weight /= total;
  }
  validate(result.q, klass);
  return result;
}

std::vector<SensitivityRow> sensitivity_scan(const std::vector<double>& gammas,
                                             const std::vector<std::size_t>& ms) {
  std::vector<SensitivityRow> rows;
  for (double gamma : gammas) {
    for (std::size_t m : ms) {
      if (!instance_valid(gamma, m)) continue;
      SensitivityRow per_variant[2];
      for (SeparationVariant variant : {SeparationVariant::kBlind, SeparationVariant::kAware}) {
        SeparationInstance inst;
        inst.gamma = gamma;
        inst.m = m;
        inst.variant = variant;
        const SeparationPair pair = build_instance(inst);
        const FairLpResult on_d =
            solve_fair_lp(pair.d, pair.klass, gamma, FairnessMode::kFprOnly);
        const FairLpResult on_d_prime =
            solve_fair_lp(pair.d_prime, pair.klass, gamma, FairnessMode::kFprOnly);
        if (on_d.status != LpStatus::kOptimal || on_d_prime.status != LpStatus::kOptimal) {
          throw std::runtime_error("separation fair LP unexpectedly failed to solve");
        }
        SensitivityRow row;
        row.gamma = gamma;
        row.m = m;
        row.variant = variant;
        row.f_d = on_d.value;
        row.f_d_prime = on_d_prime.value;
        row.gap = std::abs(on_d_prime.value - on_d.value);
        per_variant[variant == SeparationVariant::kAware ? 1 : 0] = row;
      }
      // Cross-checks of the closed forms: the blind gap is exactly
      // 1/(4 + gamma m), and mixing group indicators shrinks the gap.
      const double closed_form = 1.0 / (4.0 + gamma * static_cast<double>(m));
      if (std::abs(per_variant[0].gap - closed_form) > 1e-9) {
        throw std::runtime_error("group-blind sensitivity gap deviates from 1/(4 + gamma m)");
      }
      if (per_variant[1].gap > per_variant[0].gap + 1e-12) {
        throw std::runtime_error("group-aware gap exceeds the group-blind gap");
      }
      rows.push_back(per_variant[0]);
      rows.push_back(per_variant[1]);
    }
  }
  return rows;
}

}  // namespace dpfair
