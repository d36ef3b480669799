// SPDX-License-Identifier: Apache-2.0
#include "cbal/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cbal/error.hpp"

namespace cbal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarStatus : unsigned char { Basic, AtLower, AtUpper };

struct Tableau {
  int m = 0;          // rows
  int n = 0;          // total columns (structural + artificial)
  Matrix t;           // m x n working tableau, starts as the constraint matrix
  std::vector<double> x;        // current value of every variable
  std::vector<double> lower, upper;
  std::vector<double> cost;     // phase-specific cost vector
  std::vector<double> reduced;  // reduced costs, maintained across pivots
  std::vector<int> basis;       // basis variable per row
  std::vector<VarStatus> status;
};

// Rebuilds reduced costs from scratch for the current basis: the tableau
// already holds B^-1 A, so d_j = c_j - c_B^T column_j.
void recompute_reduced(Tableau& tb) {
  tb.reduced = tb.cost;
  for (int i = 0; i < tb.m; ++i) {
    const double cb = tb.cost[tb.basis[i]];
    if (cb == 0.0) continue;
    const double* row = tb.t.row_ptr(i);
    for (int j = 0; j < tb.n; ++j) tb.reduced[j] -= cb * row[j];
  }
}

double objective_of(const Tableau& tb) {
  double obj = 0.0;
  for (int j = 0; j < tb.n; ++j) obj += tb.cost[j] * tb.x[j];
  return obj;
}

// One simplex phase; returns Optimal when no violating reduced cost remains.
LpStatus run_phase(Tableau& tb, double pivot_tol, int max_iterations, int& iterations) {
  bool bland = false;
  double best_obj = objective_of(tb);
  int stall = 0;
  const int stall_limit = 3 * (tb.m + tb.n);

  while (true) {
    if (iterations++ > max_iterations) return LpStatus::IterationLimit;

    // Entering variable: nonbasic with a reduced cost pointing inward.
    int enter = -1;
    double best_violation = pivot_tol;
    for (int j = 0; j < tb.n; ++j) {
      if (tb.status[j] == VarStatus::Basic) continue;
      if (tb.lower[j] == tb.upper[j]) continue;  // fixed variable
      double violation = 0.0;
      if (tb.status[j] == VarStatus::AtLower && tb.reduced[j] < -pivot_tol)
        violation = -tb.reduced[j];
      else if (tb.status[j] == VarStatus::AtUpper && tb.reduced[j] > pivot_tol)
        violation = tb.reduced[j];
      else
        continue;
      if (bland) {
        enter = j;
        break;
      }
      if (violation > best_violation) {
        best_violation = violation;
        enter = j;
      }
    }
    if (enter < 0) return LpStatus::Optimal;

    const double dir = tb.status[enter] == VarStatus::AtLower ? 1.0 : -1.0;

    // Ratio test: how far the entering variable can move before a basic
    // variable or its own opposite bound blocks.
    double t_max = kInf;
    int leave_row = -1;      // -1 with finite t_max means a bound flip
    bool leave_at_upper = false;
    if (std::isfinite(tb.upper[enter]) && std::isfinite(tb.lower[enter]))
      t_max = tb.upper[enter] - tb.lower[enter];

    for (int i = 0; i < tb.m; ++i) {
      const double g = dir * tb.t(i, enter);
      const int bi = tb.basis[i];
      double limit = kInf;
      bool hits_upper = false;
      if (g > pivot_tol) {
        limit = (tb.x[bi] - tb.lower[bi]) / g;
      } else if (g < -pivot_tol && std::isfinite(tb.upper[bi])) {
        limit = (tb.upper[bi] - tb.x[bi]) / (-g);
        hits_upper = true;
      } else {
        continue;
      }
      if (limit < 0.0) limit = 0.0;
      // Tie-break on the smaller variable index for determinism.
      if (limit < t_max - pivot_tol ||
          (limit < t_max + pivot_tol && leave_row >= 0 && bi < tb.basis[leave_row])) {
        t_max = limit;
        leave_row = i;
        leave_at_upper = hits_upper;
      }
    }

    if (!std::isfinite(t_max)) return LpStatus::Unbounded;

    // Apply the move.
    const double delta = dir * t_max;
    for (int i = 0; i < tb.m; ++i) tb.x[tb.basis[i]] -= tb.t(i, enter) * delta;
    tb.x[enter] += delta;

    if (leave_row < 0) {
      // Bound flip: entering variable travels to its opposite bound.
      tb.status[enter] =
          tb.status[enter] == VarStatus::AtLower ? VarStatus::AtUpper : VarStatus::AtLower;
      tb.x[enter] = tb.status[enter] == VarStatus::AtLower ? tb.lower[enter] : tb.upper[enter];
    } else {
      const int leave = tb.basis[leave_row];
      tb.status[leave] = leave_at_upper ? VarStatus::AtUpper : VarStatus::AtLower;
      tb.x[leave] = leave_at_upper ? tb.upper[leave] : tb.lower[leave];
      tb.status[enter] = VarStatus::Basic;
      tb.basis[leave_row] = enter;

      // Pivot the tableau and the reduced-cost row.
      const double pivot = tb.t(leave_row, enter);
      if (std::abs(pivot) < pivot_tol) return LpStatus::IterationLimit;
      double* prow = tb.t.row_ptr(leave_row);
      const double inv = 1.0 / pivot;
      for (int j = 0; j < tb.n; ++j) prow[j] *= inv;
      for (int i = 0; i < tb.m; ++i) {
        if (i == leave_row) continue;
        const double f = tb.t(i, enter);
        if (f == 0.0) continue;
        double* row = tb.t.row_ptr(i);
        for (int j = 0; j < tb.n; ++j) row[j] -= f * prow[j];
      }
      const double fd = tb.reduced[enter];
      if (fd != 0.0)
        for (int j = 0; j < tb.n; ++j) tb.reduced[j] -= fd * prow[j];
    }

    const double obj = objective_of(tb);
    if (obj < best_obj - 1e-12) {
      best_obj = obj;
      stall = 0;
    } else if (++stall > stall_limit) {
      bland = true;  // degenerate cycling suspected; Bland guarantees exit
    }
  }
}

}  // namespace

LpResult solve_bounded_lp(const LpProblem& lp, double pivot_tol, int max_iterations) {
  const int m = lp.rows();
  const int ns = lp.cols();
  if (m < 1 || ns < 1) fail(ErrorCode::DimensionMismatch, "empty LP");
  if (static_cast<int>(lp.rhs.size()) != m || static_cast<int>(lp.cost.size()) != ns ||
      static_cast<int>(lp.lower.size()) != ns || static_cast<int>(lp.upper.size()) != ns)
    fail(ErrorCode::DimensionMismatch, "LP vector sizes disagree with matrix shape");
  if (max_iterations <= 0) max_iterations = 200 * (m + ns) + 5000;

  Tableau tb;
  tb.m = m;
  tb.n = ns + m;  // one artificial per row
  tb.t = Matrix(m, tb.n);
  tb.x.assign(tb.n, 0.0);
  tb.lower.assign(tb.n, 0.0);
  tb.upper.assign(tb.n, kInf);
  tb.status.assign(tb.n, VarStatus::AtLower);
  tb.basis.resize(m);

  for (int j = 0; j < ns; ++j) {
    tb.lower[j] = lp.lower[j];
    tb.upper[j] = lp.upper[j];
    tb.x[j] = lp.lower[j];  // all structural bounds are finite below in this problem family
    for (int i = 0; i < m; ++i) tb.t(i, j) = lp.a(i, j);
  }

  // Artificial variables absorb the residual of the starting point. Rows with
  // a negative residual are negated first, so the initial basis of artificial
  // +e_i columns is exactly the identity and the tableau starts as B^-1 A.
  for (int i = 0; i < m; ++i) {
    double residual = lp.rhs[i];
    for (int j = 0; j < ns; ++j) residual -= lp.a(i, j) * tb.x[j];
    if (residual < 0.0) {
      for (int j = 0; j < ns; ++j) tb.t(i, j) = -tb.t(i, j);
      residual = -residual;
    }
    const int aj = ns + i;
    tb.t(i, aj) = 1.0;
    tb.x[aj] = residual;
    tb.basis[i] = aj;
    tb.status[aj] = VarStatus::Basic;
  }

  LpResult result;

  // Phase 1: drive the artificials to zero.
  tb.cost.assign(tb.n, 0.0);
  for (int i = 0; i < m; ++i) tb.cost[ns + i] = 1.0;
  recompute_reduced(tb);
  LpStatus st = run_phase(tb, pivot_tol, max_iterations, result.iterations);
  if (st == LpStatus::IterationLimit) {
    result.status = st;
    return result;
  }
  double infeas = 0.0;
  for (int i = 0; i < m; ++i) infeas += tb.x[ns + i];
  if (infeas > 1e-7) {
    result.status = LpStatus::Infeasible;
    return result;
  }

  // Phase 2: original objective; artificials are pinned at zero.
  for (int i = 0; i < m; ++i) {
    tb.lower[ns + i] = 0.0;
    tb.upper[ns + i] = 0.0;
    tb.x[ns + i] = 0.0;
  }
  tb.cost.assign(tb.n, 0.0);
  for (int j = 0; j < ns; ++j) tb.cost[j] = lp.cost[j];
  recompute_reduced(tb);
  st = run_phase(tb, pivot_tol, max_iterations, result.iterations);

  result.status = st;
  result.x.assign(tb.x.begin(), tb.x.begin() + ns);
  result.objective = 0.0;
  for (int j = 0; j < ns; ++j) result.objective += lp.cost[j] * result.x[j];
  result.reduced.assign(tb.reduced.begin(), tb.reduced.begin() + ns);
  result.at_upper.assign(ns, 0);
  for (int j = 0; j < ns; ++j)
    if (tb.status[j] == VarStatus::AtUpper) result.at_upper[j] = 1;
  return result;
}

}  // namespace cbal
