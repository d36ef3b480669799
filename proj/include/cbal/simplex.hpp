// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "cbal/matrix.hpp"

namespace cbal {

// Linear program in equality form with bounded variables:
//   min cost^T x   s.t.  a x = rhs,  lower <= x <= upper
// upper entries may be +infinity.
struct LpProblem {
  Matrix a;
  std::vector<double> rhs;
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;

  int rows() const { return a.rows(); }
  int cols() const { return a.cols(); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
  LpStatus status = LpStatus::IterationLimit;
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;
  // Phase-2 reduced costs of the structural variables and whether each ended
  // at its upper bound; enables reduced-cost fixing in branch and bound.
  std::vector<double> reduced;
  std::vector<char> at_upper;
};

// Two-phase primal simplex for bounded variables, dense tableau. Dantzig
// pricing with a permanent switch to Bland's rule when the objective stalls,
// which guarantees termination. pivot_tol is the zero threshold for ratio
// tests and pivot elements.
LpResult solve_bounded_lp(const LpProblem& lp, double pivot_tol = 1e-9, int max_iterations = 0);

}  // namespace cbal
