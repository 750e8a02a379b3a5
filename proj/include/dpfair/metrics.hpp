// Copyright (c) 2026 the dpfair authors. MIT license; see LICENSE.
//
// Empirical error, per-group false/true positive rates, the fairness
// violation vector, and the Lagrangian of the constrained game. Everything is
// linear in mixture weights, so randomized classifiers are evaluated in
// expectation, never by sampling.
#pragma once

#include <cstddef>
#include <vector>

#include "dpfair/dataset.hpp"
#include "dpfair/hypothesis.hpp"

namespace dpfair {

// kOdds constrains false- and true-positive rate gaps; kFprOnly only the former.
enum class FairnessMode { kOdds, kFprOnly };

// fp[a] = P_hat[Yhat=1 | A=a, Y=0], tp[a] = P_hat[Yhat=1 | A=a, Y=1].
// A rate whose conditioning cell is empty is reported as 0 with its defined
// flag cleared (permissive mode) or rejected (strict mode).
struct GroupRates {
  std::vector<double> fp, tp;
  std::vector<char> fp_defined, tp_defined;
};

double empirical_error(const std::vector<int>& predictions, const Dataset& data);
double empirical_error(const RandomizedClassifier& q, const HypothesisClass& klass,
                       const Dataset& data);

GroupRates group_rates(const std::vector<int>& predictions, const Dataset& data,
                       bool strict = true);
GroupRates group_rates(const RandomizedClassifier& q, const HypothesisClass& klass,
                       const Dataset& data, bool strict = true);

// Number of dual/violation coordinates: 4(|A|-1) for kOdds, 2(|A|-1) for kFprOnly.
int violation_dim(FairnessMode mode, int num_groups);

// Coordinate index of (a, y, sign) in the frozen order (a,0,+),(a,0,-),
// (a,1,+),(a,1,-) per non-anchor group a = 1..|A|-1 (the y=1 pair exists only
// in kOdds mode). sign 0 is the +(rate_a - rate_0 - gamma) side.
int violation_index(int a, int y, int sign, FairnessMode mode, int num_groups);

// r(a,y,+) = rate_a - rate_0 - gamma and r(a,y,-) = rate_0 - rate_a - gamma,
// with rate = fp when y = 0 and tp when y = 1. The classifier is gamma-fair
// exactly when every coordinate is <= 0. The dataset-facing overloads require
// only the cells the mode reads: kFprOnly tolerates empty (a,1) cells.
std::vector<double> violation_vector(const GroupRates& rates, double gamma, FairnessMode mode);
std::vector<double> violation_vector(const std::vector<int>& predictions, const Dataset& data,
                                     double gamma, FairnessMode mode);
std::vector<double> violation_vector(const RandomizedClassifier& q, const HypothesisClass& klass,
                                     const Dataset& data, double gamma, FairnessMode mode);

// Dual variable of the fairness game, parameterized through a softmax with a
// permanent zero-weight slack slot: lambda_k = B exp(theta_k) / (1 + sum_k'
// exp(theta_k')), so lambda >= 0 and ||lambda||_1 < B always hold strictly.
struct DualVector {
  std::vector<double> theta;
  std::vector<double> lambda;
  double bound = 0.0;  // B
};
DualVector dual_from_theta(const std::vector<double>& theta, double bound);

double lagrangian(double error, const std::vector<double>& violation,
                  const std::vector<double>& lambda);
double lagrangian(const RandomizedClassifier& q, const HypothesisClass& klass, const Dataset& data,
                  const DualVector& dual, double gamma, FairnessMode mode);

}  // namespace dpfair
