// Copyright (c) 2026 the dpfair authors. MIT license; see LICENSE.
#include "dpfair/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dpfair {

void validate(const PrivacyParams& p) {
  if (!(p.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(p.delta > 0.0 && p.delta < 1.0)) throw std::invalid_argument("delta must be in (0,1)");
  if (!(p.beta > 0.0 && p.beta < 1.0)) throw std::invalid_argument("beta must be in (0,1)");
}

NoiseSpec laplace_spec(double sensitivity, double epsilon) {
  if (!(sensitivity >= 0.0)) throw std::invalid_argument("sensitivity must be nonnegative");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  NoiseSpec spec;
  spec.sensitivity = sensitivity;
  spec.scale = std::isinf(epsilon) ? 0.0 : sensitivity / epsilon;
  return spec;
}

double laplace_sample(Rng& rng, double scale) {
  if (!(scale >= 0.0)) throw std::invalid_argument("scale must be nonnegative");
  if (scale == 0.0) return 0.0;
  const double u = rng.uniform01();
  return u < 0.5 ? scale * std::log(2.0 * u) : -scale * std::log(2.0 * (1.0 - u));
}

double laplace_tail_bound(std::size_t k, double scale, double beta) {
  if (k == 0) throw std::invalid_argument("tail bound needs k >= 1");
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must be in (0,1)");
  return std::log(static_cast<double>(k) / beta) * scale;
}

std::size_t exponential_mechanism(Rng& rng, const std::vector<double>& losses,
                                  double sensitivity, double epsilon) {
  if (losses.empty()) throw std::invalid_argument("exponential mechanism needs candidates");
  if (!(sensitivity > 0.0)) throw std::invalid_argument("sensitivity must be positive");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (std::isinf(epsilon)) {
    return static_cast<std::size_t>(
        std::min_element(losses.begin(), losses.end()) - losses.begin());
  }
  // Stabilized softmax over -eps * loss / (2 * sensitivity).
  const double coef = epsilon / (2.0 * sensitivity);
  double best = -losses[0];
  for (double l : losses) best = std::max(best, -l);
  std::vector<double> w(losses.size());
  double total = 0.0;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    w[i] = std::exp(coef * (-losses[i] - best));
    total += w[i];
  }
  const double cut = rng.uniform01() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i];
    if (cut <= acc) return i;
  }
  return w.size() - 1;  // cut landed past acc due to rounding
}

BudgetTotal compose(const BudgetLedger& ledger, double target_delta) {
  BudgetTotal total;
  if (ledger.mode == CompositionMode::kBasic) {
    for (const auto& e : ledger.entries) {
      total.epsilon += e.epsilon;
      total.delta += e.delta;
    }
    return total;
  }
  if (!(target_delta > 0.0 && target_delta < 1.0)) {
    throw std::invalid_argument("advanced composition needs target_delta in (0,1)");
  }
  if (ledger.entries.empty()) {
    total.delta = target_delta;
    return total;
  }
  const BudgetEntry head = ledger.entries.front();
  for (const auto& e : ledger.entries) {
    if (std::abs(e.epsilon - head.epsilon) > 1e-12 || std::abs(e.delta - head.delta) > 1e-12) {
      throw std::invalid_argument("advanced composition requires homogeneous entries");
    }
  }
  const double t = static_cast<double>(ledger.entries.size());
  total.epsilon = 2.0 * head.epsilon * std::sqrt(2.0 * t * std::log(1.0 / target_delta));
  total.delta = t * head.delta + target_delta;
  return total;
}

}  // namespace dpfair
