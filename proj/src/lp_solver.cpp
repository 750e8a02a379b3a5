// Copyright (c) 2026 the dpfair authors. MIT license; see LICENSE.
#include "dpfair/lp_solver.hpp"

#include <cmath>
#include <stdexcept>

namespace dpfair {

namespace {

constexpr double kFeasTol = 1e-9;
constexpr double kPivotTol = 1e-10;

// Dense tableau kept in canonical form: basis columns are unit vectors.
struct Tableau {
  std::size_t rows = 0, cols = 0;   // cols excludes the rhs column
  std::vector<double> a;            // rows x cols
  std::vector<double> b;            // rhs, kept >= 0 up to roundoff
  std::vector<std::size_t> basis;   // basic column per row

  double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    for (std::size_t j = 0; j < cols; ++j) at(pr, j) *= inv;
    at(pr, pc) = 1.0;
    b[pr] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == pr) continue;
      const double f = at(i, pc);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols; ++j) at(i, j) -= f * at(pr, j);
      at(i, pc) = 0.0;
      b[i] -= f * b[pr];
    }
    basis[pr] = pc;
  }
};

enum class CoreStatus { kOptimal, kUnbounded };

// Minimizes cost over the tableau with Bland's rule. allowed[j] marks columns
// eligible to enter (artificials are locked out in phase 2).
CoreStatus simplex_core(Tableau& t, const std::vector<double>& cost,
                        const std::vector<char>& allowed) {
  for (;;) {
    // Reduced costs r_j = c_j - c_B . B^{-1} A_j; pick the lowest eligible index.
    std::size_t enter = t.cols;
    for (std::size_t j = 0; j < t.cols && enter == t.cols; ++j) {
      if (!allowed[j]) continue;
      double r = cost[j];
      for (std::size_t i = 0; i < t.rows; ++i) {
        const double cb = cost[t.basis[i]];
        if (cb != 0.0) r -= cb * t.at(i, j);
      }
      if (r < -kFeasTol) enter = j;
    }
    if (enter == t.cols) return CoreStatus::kOptimal;

    // Ratio test; ties go to the smallest basis index (Bland).
    std::size_t leave = t.rows;
    double best = 0.0;
    for (std::size_t i = 0; i < t.rows; ++i) {
      const double aij = t.at(i, enter);
      if (aij <= kPivotTol) continue;
      const double ratio = t.b[i] / aij;
      if (leave == t.rows || ratio < best - kPivotTol ||
          (std::abs(ratio - best) <= kPivotTol && t.basis[i] < t.basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == t.rows) return CoreStatus::kUnbounded;
    t.pivot(leave, enter);
  }
}

}  // namespace

void LinearProgram::add_abs_constraint(const std::vector<double>& coeffs, double rhs) {
  auto [pos, neg] = abs_constraint(coeffs, rhs);
  constraints.push_back(std::move(pos));
  constraints.push_back(std::move(neg));
}

std::pair<LinearConstraint, LinearConstraint> abs_constraint(const std::vector<double>& coeffs,
                                                             double rhs) {
  LinearConstraint pos{coeffs, rhs};
  LinearConstraint neg{coeffs, rhs};
  for (double& c : neg.coeffs) c = -c;
  return {std::move(pos), std::move(neg)};
}

LpSolution solve_lp(const LinearProgram& prog) {
  const std::size_t n = prog.num_vars();
  if (n == 0) throw std::invalid_argument("linear program has no variables");
  if (prog.lower.size() != n || prog.upper.size() != n) {
    throw std::invalid_argument("bound vectors must match the variable count");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(prog.lower[j])) throw std::invalid_argument("lower bounds must be finite");
    if (std::isnan(prog.upper[j]) || prog.upper[j] < prog.lower[j]) {
      throw std::invalid_argument("bounds must satisfy lower <= upper");
    }
    if (!std::isfinite(prog.objective[j])) {
      throw std::invalid_argument("objective coefficients must be finite");
    }
  }

  // Shift x = lower + x', x' >= 0; finite upper bounds become rows.
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  for (const auto& c : prog.constraints) {
    if (c.coeffs.size() != n) throw std::invalid_argument("constraint width mismatch");
    double r = c.rhs;
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(c.coeffs[j]) || !std::isfinite(c.rhs)) {
        throw std::invalid_argument("constraint coefficients must be finite");
      }
      r -= c.coeffs[j] * prog.lower[j];
    }
    rows.push_back(c.coeffs);
    rhs.push_back(r);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isinf(prog.upper[j])) continue;
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    rows.push_back(std::move(e));
    rhs.push_back(prog.upper[j] - prog.lower[j]);
  }

  const std::size_t m = rows.size();
  Tableau t;
  t.rows = m;
  // Columns: n structural, m slacks, then one artificial per negative-rhs row.
  std::size_t n_art = 0;
  for (double r : rhs) {
    if (r < 0.0) ++n_art;
  }
  t.cols = n + m + n_art;
  t.a.assign(t.rows * t.cols, 0.0);
  t.b.assign(m, 0.0);
  t.basis.assign(m, 0);

  std::size_t art = n + m;
  for (std::size_t i = 0; i < m; ++i) {
    const double sign = rhs[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = sign * rows[i][j];
    t.at(i, n + i) = sign;  // slack
    t.b[i] = sign * rhs[i];
    if (sign < 0.0) {
      t.at(i, art) = 1.0;
      t.basis[i] = art++;
    } else {
      t.basis[i] = n + i;
    }
  }

  std::vector<char> allowed(t.cols, 1);
  if (n_art > 0) {
    // Phase 1: minimize the artificial sum.
    std::vector<double> cost(t.cols, 0.0);
    for (std::size_t j = n + m; j < t.cols; ++j) cost[j] = 1.0;
    simplex_core(t, cost, allowed);  // bounded below by 0, never unbounded
    double infeas = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis[i] >= n + m) infeas += t.b[i];
    }
    if (infeas > kFeasTol) return {LpStatus::kInfeasible, {}, 0.0};
    // Drive remaining (degenerate) artificials out of the basis when possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis[i] < n + m) continue;
      for (std::size_t j = 0; j < n + m; ++j) {
        if (std::abs(t.at(i, j)) > kPivotTol) {
          t.pivot(i, j);
          break;
        }
      }
    }
    for (std::size_t j = n + m; j < t.cols; ++j) allowed[j] = 0;
  }

  // Phase 2: original objective over shifted variables.
  std::vector<double> cost(t.cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) cost[j] = prog.objective[j];
  if (simplex_core(t, cost, allowed) == CoreStatus::kUnbounded) {
    return {LpStatus::kUnbounded, {}, 0.0};
  }

  LpSolution sol;
  sol.status = LpStatus::kOptimal;
  sol.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (t.basis[i] < n) sol.x[t.basis[i]] = t.b[i];
  }
  for (std::size_t j = 0; j < n; ++j) sol.x[j] += prog.lower[j];
  sol.value = prog.constant;
  for (std::size_t j = 0; j < n; ++j) sol.value += prog.objective[j] * sol.x[j];
  return sol;
}

}  // namespace dpfair
