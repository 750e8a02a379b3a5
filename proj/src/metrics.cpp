// Copyright (c) 2026 the dpfair authors. MIT license; see LICENSE.
#include "dpfair/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dpfair {

namespace {

void check_predictions(const std::vector<int>& predictions, const Dataset& data) {
  if (predictions.size() != data.size()) {
    throw std::invalid_argument("prediction vector must match the dataset size");
  }
}

// Violations read FP rates in every mode but TP rates only under kOdds, so
// only the cells the mode actually reads must be populated.
void check_mode_cells(const GroupRates& rates, FairnessMode mode) {
  for (std::size_t a = 0; a < rates.fp.size(); ++a) {
    if (!rates.fp_defined[a]) {
      throw std::invalid_argument("degenerate cell (" + std::to_string(a) +
                                  ",0) has no records");
    }
    if (mode == FairnessMode::kOdds && !rates.tp_defined[a]) {
      throw std::invalid_argument("degenerate cell (" + std::to_string(a) +
                                  ",1) has no records");
    }
  }
}

}  // namespace

double empirical_error(const std::vector<int>& predictions, const Dataset& data) {
  check_predictions(predictions, data);
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    wrong += predictions[i] != data.records[i].label;
  }
  return static_cast<double>(wrong) / static_cast<double>(data.size());
}

double empirical_error(const RandomizedClassifier& q, const HypothesisClass& klass,
                       const Dataset& data) {
  validate(q, klass);
  double err = 0.0;
  for (const WeightedMember& w : q.support) {
    err += w.weight * empirical_error(predict_all(klass, data, w.id), data);
  }
  return err;
}

GroupRates group_rates(const std::vector<int>& predictions, const Dataset& data, bool strict) {
  check_predictions(predictions, data);
  validate(data);
  const std::size_t g = static_cast<std::size_t>(data.num_groups);
  std::vector<double> pos(g * 2, 0.0);
  std::vector<double> count(g * 2, 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Record& r = data.records[i];
    const std::size_t cell = static_cast<std::size_t>(r.group) * 2 + r.label;
    count[cell] += 1.0;
    pos[cell] += predictions[i];
  }
  GroupRates rates;
  rates.fp.assign(g, 0.0);
  rates.tp.assign(g, 0.0);
  rates.fp_defined.assign(g, 1);
  rates.tp_defined.assign(g, 1);
  for (std::size_t a = 0; a < g; ++a) {
    for (int y = 0; y < 2; ++y) {
      double& rate = y == 0 ? rates.fp[a] : rates.tp[a];
      char& defined = y == 0 ? rates.fp_defined[a] : rates.tp_defined[a];
      if (count[a * 2 + y] == 0.0) {
        if (strict) {
          throw std::invalid_argument("degenerate cell (" + std::to_string(a) + "," +
                                      std::to_string(y) + ") has no records");
        }
        rate = 0.0;
        defined = 0;
      } else {
        rate = pos[a * 2 + y] / count[a * 2 + y];
      }
    }
  }
  return rates;
}

GroupRates group_rates(const RandomizedClassifier& q, const HypothesisClass& klass,
                       const Dataset& data, bool strict) {
  validate(q, klass);
  GroupRates total;
  bool first = true;
  for (const WeightedMember& w : q.support) {
    const GroupRates r = group_rates(predict_all(klass, data, w.id), data, strict);
    if (first) {
      total = r;
      for (std::size_t a = 0; a < r.fp.size(); ++a) {
        total.fp[a] *= w.weight;
        total.tp[a] *= w.weight;
      }
      first = false;
    } else {
      for (std::size_t a = 0; a < r.fp.size(); ++a) {
        total.fp[a] += w.weight * r.fp[a];
        total.tp[a] += w.weight * r.tp[a];
      }
    }
  }
  return total;
}

int violation_dim(FairnessMode mode, int num_groups) {
  if (num_groups < 2) throw std::invalid_argument("violations need at least 2 groups");
  return (mode == FairnessMode::kOdds ? 4 : 2) * (num_groups - 1);
}

int violation_index(int a, int y, int sign, FairnessMode mode, int num_groups) {
  if (a < 1 || a >= num_groups) throw std::invalid_argument("a must be a non-anchor group");
  if (sign != 0 && sign != 1) throw std::invalid_argument("sign must be 0 (+) or 1 (-)");
  if (mode == FairnessMode::kOdds) {
    if (y != 0 && y != 1) throw std::invalid_argument("y must be 0 or 1");
    return 4 * (a - 1) + 2 * y + sign;
  }
  if (y != 0) throw std::invalid_argument("FPR-only mode has no y=1 coordinates");
  return 2 * (a - 1) + sign;
}

std::vector<double> violation_vector(const GroupRates& rates, double gamma, FairnessMode mode) {
  const int g = static_cast<int>(rates.fp.size());
  std::vector<double> r(violation_dim(mode, g));
  for (int a = 1; a < g; ++a) {
    r[violation_index(a, 0, 0, mode, g)] = rates.fp[a] - rates.fp[0] - gamma;
    r[violation_index(a, 0, 1, mode, g)] = rates.fp[0] - rates.fp[a] - gamma;
    if (mode == FairnessMode::kOdds) {
      r[violation_index(a, 1, 0, mode, g)] = rates.tp[a] - rates.tp[0] - gamma;
      r[violation_index(a, 1, 1, mode, g)] = rates.tp[0] - rates.tp[a] - gamma;
    }
  }
  return r;
}

std::vector<double> violation_vector(const std::vector<int>& predictions, const Dataset& data,
                                     double gamma, FairnessMode mode) {
  const GroupRates rates = group_rates(predictions, data, /*strict=*/false);
  check_mode_cells(rates, mode);
  return violation_vector(rates, gamma, mode);
}

std::vector<double> violation_vector(const RandomizedClassifier& q, const HypothesisClass& klass,
                                     const Dataset& data, double gamma, FairnessMode mode) {
  const GroupRates rates = group_rates(q, klass, data, /*strict=*/false);
  check_mode_cells(rates, mode);
  return violation_vector(rates, gamma, mode);
}

DualVector dual_from_theta(const std::vector<double>& theta, double bound) {
  if (theta.empty()) throw std::invalid_argument("theta must be non-empty");
  if (!(bound > 0.0)) throw std::invalid_argument("dual bound must be positive");
  DualVector dual;
  dual.theta = theta;
  dual.bound = bound;
  // Slack slot contributes exp(0); shift by the max exponent for stability.
  double top = 0.0;
  for (double t : theta) top = std::max(top, t);
  double denom = std::exp(-top);
  dual.lambda.resize(theta.size());
  for (std::size_t k = 0; k < theta.size(); ++k) {
    dual.lambda[k] = std::exp(theta[k] - top);
    denom += dual.lambda[k];
  }
  for (double& l : dual.lambda) l = bound * l / denom;
  return dual;
}

double lagrangian(double error, const std::vector<double>& violation,
                  const std::vector<double>& lambda) {
  if (violation.size() != lambda.size()) {
    throw std::invalid_argument("violation and lambda dimensions differ");
  }
  double value = error;
  for (std::size_t k = 0; k < lambda.size(); ++k) value += lambda[k] * violation[k];
  return value;
}

double lagrangian(const RandomizedClassifier& q, const HypothesisClass& klass, const Dataset& data,
                  const DualVector& dual, double gamma, FairnessMode mode) {
  return lagrangian(empirical_error(q, klass, data),
                    violation_vector(q, klass, data, gamma, mode), dual.lambda);
}

}  // namespace dpfair
