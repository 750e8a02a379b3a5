// Copyright (c) 2026 the dpfair authors. MIT license; see LICENSE.
//
// Small dense linear-program solver. Problems in this library have at most a
// few dozen variables, so a two-phase tableau simplex with Bland's rule
// (deterministic, cycle-free) is the whole story. Outcomes are statuses, not
// exceptions: infeasible and unbounded are ordinary results for callers.
#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace dpfair {

struct LinearConstraint {
  std::vector<double> coeffs;  // coeffs . x <= rhs
  double rhs = 0.0;
};

// minimize objective . x + constant  subject to  constraints, lower <= x <= upper.
// Lower bounds must be finite; an upper bound may be +infinity.
struct LinearProgram {
  std::vector<double> objective;
  double constant = 0.0;
  std::vector<LinearConstraint> constraints;
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t num_vars() const { return objective.size(); }
  void add_constraint(std::vector<double> coeffs, double rhs) {
    constraints.push_back({std::move(coeffs), rhs});
  }
  // |coeffs . x| <= rhs as two rows.
  void add_abs_constraint(const std::vector<double>& coeffs, double rhs);
};

// The two rows encoding |coeffs . x| <= rhs.
std::pair<LinearConstraint, LinearConstraint> abs_constraint(const std::vector<double>& coeffs,
                                                             double rhs);

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;     // populated when optimal
  double value = 0.0;        // objective . x + constant when optimal
};

// Feasibility tolerance 1e-9, pivot tolerance 1e-10. A returned optimal
// solution satisfies every constraint and bound within the feasibility
// tolerance. Throws std::invalid_argument on malformed input (size mismatch,
// non-finite coefficient, infinite lower bound, lower > upper).
LpSolution solve_lp(const LinearProgram& prog);

}  // namespace dpfair
