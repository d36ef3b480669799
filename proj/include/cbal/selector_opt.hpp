// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "cbal/types.hpp"

namespace cbal {

enum class SolverKind { Enumeration, BranchAndBound, LocalSearch };

const char* to_string(SolverKind kind);
SolverKind solver_from_string(const std::string& name);

struct SelectorConfig {
  double lambda = 0.0;
  int budget = 1;
  SolverKind solver = SolverKind::BranchAndBound;
  double time_limit = 0.0;       // seconds; 0 disables the limit
  double gap_tolerance = 0.0;    // relative; 0 means prove optimality
  double enumeration_cap = 2e6;  // max subsets the exhaustive oracle will visit

  void validate() const;
};

enum class SolveProof { Optimal, GapBounded, Heuristic };

const char* to_string(SolveProof proof);

struct SolveResult {
  SelectionVector selection;
  double objective = 0.0;
  double linear_term = 0.0;   // sum of selected scores
  double balance_term = 0.0;  // || omega - P^T z ||_1
  SolveProof proof = SolveProof::Heuristic;
  double wall_time = 0.0;
  long long nodes_explored = 0;  // branch-and-bound diagnostics
};

// Minimizes  z^T scores + lambda * || omega - P^T z ||_1  over binary z with
// exactly cfg.budget ones. Lower scores are preferred; pass negative
// entropies (or negated uncertainty values) to maximize informativeness.
// Dispatches on cfg.solver. lambda = 0 reduces to the budget smallest scores
// with lowest-index tie-breaking in every solver.
SolveResult solve_cbal(const std::vector<double>& scores, const ProbabilityMatrix& p,
                       const BalanceTarget& target, const SelectorConfig& cfg);

// Exhaustive oracle: visits every feasible subset in lexicographic order and
// keeps the first strictly best one, so ties resolve to the lexicographically
// smallest index set. Refuses instances with more than `cap` subsets.
SolveResult solve_enumeration(const std::vector<double>& scores, const ProbabilityMatrix& p,
                              const BalanceTarget& target, int budget, double lambda,
                              double cap = 2e6);

// Exact solver: linearizes the L1 term with auxiliary variables t >= |omega -
// P^T z| per class, solves LP relaxations with the bounded simplex, branches
// on the most fractional variable, explores best-first, and seeds the
// incumbent with the local-search heuristic plus LP roundings.
SolveResult solve_branch_and_bound(const std::vector<double>& scores, const ProbabilityMatrix& p,
                                   const BalanceTarget& target, const SelectorConfig& cfg);

// Scalable heuristic: greedy construction by best marginal objective
// decrease, then first-improvement 1-swap sweeps until a clean sweep (a
// local optimum) or the time limit.
SolveResult solve_local_search(const std::vector<double>& scores, const ProbabilityMatrix& p,
                               const BalanceTarget& target, const SelectorConfig& cfg);

// Canonical objective evaluation used by every solver, so objectives of
// identical selections agree bitwise. Indices must be valid and distinct.
struct ObjectiveParts {
  double linear = 0.0;
  double balance = 0.0;
  double objective = 0.0;
};
ObjectiveParts evaluate_selection(const std::vector<double>& scores, const ProbabilityMatrix& p,
                                  const BalanceTarget& target, double lambda,
                                  const std::vector<int>& indices);

}  // namespace cbal
