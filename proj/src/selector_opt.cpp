// SPDX-License-Identifier: Apache-2.0
#include "cbal/selector_opt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "cbal/simplex.hpp"

namespace cbal {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Deadline {
  bool active = false;
  Clock::time_point end;

  static Deadline after(double seconds) {
    Deadline d;
    if (seconds > 0.0) {
      d.active = true;
      d.end = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                 std::chrono::duration<double>(seconds));
    }
    return d;
  }
  bool exceeded() const { return active && Clock::now() > end; }
};

void check_instance(const std::vector<double>& scores, const ProbabilityMatrix& p,
                    const BalanceTarget& target, int budget) {
  if (static_cast<int>(scores.size()) != p.samples())
    fail(ErrorCode::DimensionMismatch, "scores length does not match probability rows");
  if (target.classes() != p.classes())
    fail(ErrorCode::DimensionMismatch, "target classes do not match probability columns");
  if (budget < 1) fail(ErrorCode::InfeasibleBudget, "budget must be >= 1");
  if (budget > p.samples())
    fail(ErrorCode::InfeasibleBudget, "budget " + std::to_string(budget) +
                                          " exceeds pool size " + std::to_string(p.samples()));
  for (double s : scores)
    if (!std::isfinite(s)) fail(ErrorCode::NonFinite, "non-finite score");
}

double l1_to_target(const std::vector<double>& deviation) {
  double s = 0.0;
  for (double v : deviation) s += std::abs(v);
  return s;
}

// L1 norm of (deviation - p_row).
double l1_after_adding(const std::vector<double>& deviation, const double* p_row, int c) {
  double s = 0.0;
  for (int j = 0; j < c; ++j) s += std::abs(deviation[j] - p_row[j]);
  return s;
}

// The budget smallest scores, ties to the lowest index: the lambda = 0
// optimum shared by all solvers.
std::vector<int> bottom_b_indices(const std::vector<double>& scores, int budget) {
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores[a] < scores[b]; });
  order.resize(budget);
  std::sort(order.begin(), order.end());
  return order;
}

SolveResult finish(const std::vector<double>& scores, const ProbabilityMatrix& p,
                   const BalanceTarget& target, double lambda, std::vector<int> indices,
                   SolveProof proof, Clock::time_point start) {
  std::sort(indices.begin(), indices.end());
  const ObjectiveParts parts = evaluate_selection(scores, p, target, lambda, indices);
  SolveResult r;
  r.selection = SelectionVector::from_indices(std::move(indices), p.samples());
  r.linear_term = parts.linear;
  r.balance_term = parts.balance;
  r.objective = parts.objective;
  r.proof = proof;
  r.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

// ---------------------------------------------------------------------------
// Local search core (also used to seed branch-and-bound incumbents).

struct LocalSearchOutcome {
  std::vector<int> indices;
  bool truncated_by_time = false;
};

LocalSearchOutcome local_search_core(const std::vector<double>& scores,
                                     const ProbabilityMatrix& p, const BalanceTarget& target,
                                     int budget, double lambda, const Deadline& deadline) {
  const int n = p.samples();
  const int c = p.classes();
  const Matrix& pm = p.values();

  std::vector<char> selected(n, 0);
  std::vector<int> sel;
  sel.reserve(budget);
  std::vector<double> deviation = target.counts;  // omega - P^T z
  std::vector<double> delta(n);

  // Greedy construction: each step adds the candidate with the best marginal
  // objective decrease. Marginals are independent per candidate, so the scan
  // parallelizes without affecting the argmin.
  for (int step = 0; step < budget; ++step) {
    if (deadline.exceeded())
      fail(ErrorCode::Timeout, "time limit hit before a feasible selection was built");
    const double base_l1 = l1_to_target(deviation);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int j = 0; j < n; ++j) {
      if (selected[j]) {
        delta[j] = kInf;
        continue;
      }
      delta[j] = scores[j] + lambda * (l1_after_adding(deviation, pm.row_ptr(j), c) - base_l1);
    }
    int best = -1;
    for (int j = 0; j < n; ++j) {
      if (selected[j]) continue;
      if (best < 0 || delta[j] < delta[best]) best = j;
    }
    selected[best] = 1;
    sel.push_back(best);
    const double* row = pm.row_ptr(best);
    for (int j = 0; j < c; ++j) deviation[j] -= row[j];
  }
  std::sort(sel.begin(), sel.end());

  // 1-swap sweeps, first improvement per selected slot, best replacement per
  // scan. A sweep that applies nothing certifies a local optimum.
  LocalSearchOutcome out;
  if (budget < n) {
    std::vector<double> dev_without(c);
    bool improved = true;
    while (improved) {
      improved = false;
      for (int k = 0; k < budget; ++k) {
        if (deadline.exceeded()) {
          out.truncated_by_time = true;
          break;
        }
        const int i = sel[k];
        const double* row_i = pm.row_ptr(i);
        for (int j = 0; j < c; ++j) dev_without[j] = deviation[j] + row_i[j];
        const double base_l1 = l1_to_target(deviation);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int j = 0; j < n; ++j) {
          if (selected[j]) {
            delta[j] = kInf;
            continue;
          }
          delta[j] = scores[j] - scores[i] +
                     lambda * (l1_after_adding(dev_without, pm.row_ptr(j), c) - base_l1);
        }
        int best = -1;
        for (int j = 0; j < n; ++j) {
          if (selected[j]) continue;
          if (best < 0 || delta[j] < delta[best]) best = j;
        }
        if (best >= 0 && delta[best] < -1e-12) {
          selected[i] = 0;
          selected[best] = 1;
          sel[k] = best;
          const double* row_j = pm.row_ptr(best);
          for (int j = 0; j < c; ++j) deviation[j] = dev_without[j] - row_j[j];
          improved = true;
        }
      }
      if (out.truncated_by_time) break;
      std::sort(sel.begin(), sel.end());
    }
  }
  out.indices = std::move(sel);
  return out;
}

// ---------------------------------------------------------------------------
// Branch and bound.

struct BnbNode {
  double bound;
  long long id;
  std::vector<signed char> fix;  // -1 free, 0 or 1 fixed
};

struct BnbNodeOrder {
  bool operator()(const BnbNode& a, const BnbNode& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.id > b.id;
  }
};

// LP relaxation over the free variables of a node. Fixed-to-one samples are
// folded into the target offset and a constant score term.
struct NodeLp {
  LpResult lp;
  std::vector<int> free_ids;
  double fixed_score = 0.0;
  int residual_budget = 0;
};

NodeLp solve_node_lp(const std::vector<double>& scores, const ProbabilityMatrix& p,
                     const BalanceTarget& target, double lambda, int budget,
                     const std::vector<signed char>& fix) {
  const int n = p.samples();
  const int c = p.classes();

  NodeLp out;
  std::vector<double> omega = target.counts;
  for (int j = 0; j < n; ++j) {
    if (fix[j] == 1) {
      out.fixed_score += scores[j];
      const double* row = p.values().row_ptr(j);
      for (int k = 0; k < c; ++k) omega[k] -= row[k];
      ++out.residual_budget;
    } else if (fix[j] == -1) {
      out.free_ids.push_back(j);
    }
  }
  out.residual_budget = budget - out.residual_budget;

  const int nf = static_cast<int>(out.free_ids.size());
  const int m = 1 + 2 * c;
  // columns: nf z vars, c auxiliary t vars, 2c surpluses
  const int ncols = nf + 3 * c;

  LpProblem lp;
  lp.a = Matrix(m, ncols);
  lp.rhs.assign(m, 0.0);
  lp.cost.assign(ncols, 0.0);
  lp.lower.assign(ncols, 0.0);
  lp.upper.assign(ncols, kInf);

  for (int f = 0; f < nf; ++f) {
    const int j = out.free_ids[f];
    lp.cost[f] = scores[j];
    lp.upper[f] = 1.0;
    lp.a(0, f) = 1.0;
    const double* row = p.values().row_ptr(j);
    for (int k = 0; k < c; ++k) {
      lp.a(1 + k, f) = row[k];
      lp.a(1 + c + k, f) = -row[k];
    }
  }
  lp.rhs[0] = out.residual_budget;
  for (int k = 0; k < c; ++k) {
    const int tcol = nf + k;
    lp.cost[tcol] = lambda;
    lp.a(1 + k, tcol) = 1.0;      // P^T z + t - s1 = omega'
    lp.a(1 + c + k, tcol) = 1.0;  // -P^T z + t - s2 = -omega'
    lp.a(1 + k, nf + c + k) = -1.0;
    lp.a(1 + c + k, nf + 2 * c + k) = -1.0;
    lp.rhs[1 + k] = omega[k];
    lp.rhs[1 + c + k] = -omega[k];
  }

  out.lp = solve_bounded_lp(lp);
  return out;
}

}  // namespace

const char* to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::Enumeration: return "enumeration";
    case SolverKind::BranchAndBound: return "branch_and_bound";
    case SolverKind::LocalSearch: return "local_search";
  }
  return "?";
}

SolverKind solver_from_string(const std::string& name) {
  if (name == "enumeration") return SolverKind::Enumeration;
  if (name == "branch_and_bound") return SolverKind::BranchAndBound;
  if (name == "local_search") return SolverKind::LocalSearch;
  fail(ErrorCode::ConfigParse, "unknown solver '" + name + "'");
}

const char* to_string(SolveProof proof) {
  switch (proof) {
    case SolveProof::Optimal: return "optimal";
    case SolveProof::GapBounded: return "gap-bounded";
    case SolveProof::Heuristic: return "heuristic";
  }
  return "?";
}

void SelectorConfig::validate() const {
  if (lambda < 0.0 || !std::isfinite(lambda))
    fail(ErrorCode::ConfigInvalid, "lambda must be finite and >= 0");
  if (budget < 1) fail(ErrorCode::ConfigInvalid, "budget must be >= 1");
  if (time_limit < 0.0 || gap_tolerance < 0.0)
    fail(ErrorCode::ConfigInvalid, "time limit and gap tolerance must be >= 0");
}

ObjectiveParts evaluate_selection(const std::vector<double>& scores, const ProbabilityMatrix& p,
                                  const BalanceTarget& target, double lambda,
                                  const std::vector<int>& indices) {
  ObjectiveParts parts;
  std::vector<double> soft(p.classes(), 0.0);
  for (int idx : indices) {
    parts.linear += scores[idx];
    const double* row = p.values().row_ptr(idx);
    for (int j = 0; j < p.classes(); ++j) soft[j] += row[j];
  }
  for (int j = 0; j < p.classes(); ++j) parts.balance += std::abs(target.counts[j] - soft[j]);
  parts.objective = parts.linear + lambda * parts.balance;
  return parts;
}

SolveResult solve_cbal(const std::vector<double>& scores, const ProbabilityMatrix& p,
                       const BalanceTarget& target, const SelectorConfig& cfg) {
  cfg.validate();
  switch (cfg.solver) {
    case SolverKind::Enumeration:
      return solve_enumeration(scores, p, target, cfg.budget, cfg.lambda, cfg.enumeration_cap);
    case SolverKind::BranchAndBound:
      return solve_branch_and_bound(scores, p, target, cfg);
    case SolverKind::LocalSearch:
      return solve_local_search(scores, p, target, cfg);
  }
  fail(ErrorCode::ConfigInvalid, "unknown solver");
}

SolveResult solve_enumeration(const std::vector<double>& scores, const ProbabilityMatrix& p,
                              const BalanceTarget& target, int budget, double lambda,
                              double cap) {
  const auto start = Clock::now();
  check_instance(scores, p, target, budget);
  if (lambda < 0.0) fail(ErrorCode::ConfigInvalid, "lambda must be >= 0");
  const int n = p.samples();

  if (lambda == 0.0)
    return finish(scores, p, target, lambda, bottom_b_indices(scores, budget),
                  SolveProof::Optimal, start);

  double subsets = 1.0;
  for (int k = 1; k <= budget; ++k) {
    subsets *= static_cast<double>(n - k + 1) / k;
    if (subsets > cap)
      fail(ErrorCode::InstanceTooLarge,
           "C(" + std::to_string(n) + ", " + std::to_string(budget) + ") exceeds cap");
  }

  // Lexicographic sweep over all index sets; strict improvement keeps the
  // lexicographically smallest optimum.
  std::vector<int> comb(budget);
  std::iota(comb.begin(), comb.end(), 0);
  std::vector<int> best_comb;
  double best_obj = kInf;
  while (true) {
    const ObjectiveParts parts = evaluate_selection(scores, p, target, lambda, comb);
    if (parts.objective < best_obj) {
      best_obj = parts.objective;
      best_comb = comb;
    }
    int i = budget - 1;
    while (i >= 0 && comb[i] == n - budget + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int k = i + 1; k < budget; ++k) comb[k] = comb[k - 1] + 1;
  }
  return finish(scores, p, target, lambda, std::move(best_comb), SolveProof::Optimal, start);
}

SolveResult solve_local_search(const std::vector<double>& scores, const ProbabilityMatrix& p,
                               const BalanceTarget& target, const SelectorConfig& cfg) {
  const auto start = Clock::now();
  cfg.validate();
  check_instance(scores, p, target, cfg.budget);
  if (cfg.lambda == 0.0)
    return finish(scores, p, target, 0.0, bottom_b_indices(scores, cfg.budget),
                  SolveProof::Optimal, start);

  const Deadline deadline = Deadline::after(cfg.time_limit);
  LocalSearchOutcome out =
      local_search_core(scores, p, target, cfg.budget, cfg.lambda, deadline);
  return finish(scores, p, target, cfg.lambda, std::move(out.indices), SolveProof::Heuristic,
                start);
}

SolveResult solve_branch_and_bound(const std::vector<double>& scores, const ProbabilityMatrix& p,
                                   const BalanceTarget& target, const SelectorConfig& cfg) {
  const auto start = Clock::now();
  cfg.validate();
  check_instance(scores, p, target, cfg.budget);
  const int n = p.samples();
  const int budget = cfg.budget;
  const double lambda = cfg.lambda;

  if (lambda == 0.0)
    return finish(scores, p, target, 0.0, bottom_b_indices(scores, budget), SolveProof::Optimal,
                  start);

  const Deadline deadline = Deadline::after(cfg.time_limit);
  constexpr double kPruneTol = 1e-9;
  constexpr double kIntTol = 1e-7;

  // Seed the incumbent with the heuristic; it is cheap and prunes hard.
  std::vector<int> incumbent =
      local_search_core(scores, p, target, budget, lambda, Deadline{}).indices;
  double incumbent_obj = evaluate_selection(scores, p, target, lambda, incumbent).objective;

  const auto consider = [&](std::vector<int> candidate) {
    std::sort(candidate.begin(), candidate.end());
    const double obj = evaluate_selection(scores, p, target, lambda, candidate).objective;
    if (obj < incumbent_obj) {
      incumbent_obj = obj;
      incumbent = std::move(candidate);
    }
  };

  std::priority_queue<BnbNode, std::vector<BnbNode>, BnbNodeOrder> open;
  long long next_id = 0;
  long long explored = 0;
  open.push(BnbNode{-kInf, next_id++, std::vector<signed char>(n, -1)});

  SolveProof proof = SolveProof::Optimal;
  while (!open.empty()) {
    BnbNode node = std::move(const_cast<BnbNode&>(open.top()));
    open.pop();

    // Best-first: once the best open bound cannot beat the incumbent, the
    // whole frontier is pruned.
    if (node.bound >= incumbent_obj - kPruneTol) break;
    if (cfg.gap_tolerance > 0.0 && node.bound > -kInf &&
        incumbent_obj - node.bound <= cfg.gap_tolerance * std::max(1.0, std::abs(incumbent_obj))) {
      proof = SolveProof::GapBounded;
      break;
    }
    if (deadline.exceeded()) {
      proof = SolveProof::Heuristic;
      break;
    }
    ++explored;

    NodeLp nl = solve_node_lp(scores, p, target, lambda, budget, node.fix);
    const int nf = static_cast<int>(nl.free_ids.size());
    if (nl.residual_budget < 0 || nl.residual_budget > nf) continue;  // infeasible
    if (nl.residual_budget == 0 || nl.residual_budget == nf) {
      // The budget determines every remaining variable.
      std::vector<int> leaf;
      for (int j = 0; j < n; ++j)
        if (node.fix[j] == 1) leaf.push_back(j);
      if (nl.residual_budget == nf)
        for (int j : nl.free_ids) leaf.push_back(j);
      consider(std::move(leaf));
      continue;
    }

    if (nl.lp.status == LpStatus::Infeasible) continue;
    if (nl.lp.status != LpStatus::Optimal)
      fail(ErrorCode::NumericalFailure, "node LP did not converge");

    const double bound = nl.lp.objective + nl.fixed_score;
    if (bound >= incumbent_obj - kPruneTol) continue;

    // Reduced-cost fixing: a nonbasic variable whose reduced cost exceeds
    // the gap to the incumbent cannot flip in any improving solution of this
    // subtree. This is what keeps the tree small.
    const double slack = incumbent_obj - kPruneTol - bound;
    int fixed_now = 0;
    for (int f = 0; f < nf; ++f) {
      const int j = nl.free_ids[f];
      if (nl.lp.at_upper[f]) {
        if (-nl.lp.reduced[f] > slack) {
          node.fix[j] = 1;
          ++fixed_now;
        }
      } else if (nl.lp.x[f] <= kIntTol && nl.lp.reduced[f] > slack) {
        node.fix[j] = 0;
        ++fixed_now;
      }
    }
    if (fixed_now > 0) {
      // Re-solve with the tightened variable set before branching.
      node.bound = bound;
      open.push(std::move(node));
      continue;
    }

    // Fractional pattern of the relaxation.
    int branch_var = -1;
    double branch_frac = kInf;
    std::vector<std::pair<double, int>> by_value;  // (-x_j, j) for rounding
    by_value.reserve(nf);
    bool integral = true;
    for (int f = 0; f < nf; ++f) {
      const double x = nl.lp.x[f];
      by_value.emplace_back(-x, nl.free_ids[f]);
      const double frac = std::abs(x - std::round(x));
      if (frac > kIntTol) {
        integral = false;
        const double dist = std::abs(x - 0.5);
        if (dist < branch_frac - 1e-15 ||
            (dist < branch_frac + 1e-15 && branch_var >= 0 && nl.free_ids[f] < branch_var)) {
          branch_frac = dist;
          branch_var = nl.free_ids[f];
        }
      }
    }

    // Rounding incumbent: top residual-budget free variables by LP value.
    std::stable_sort(by_value.begin(), by_value.end());
    {
      std::vector<int> rounded;
      for (int j = 0; j < n; ++j)
        if (node.fix[j] == 1) rounded.push_back(j);
      for (int f = 0; f < nl.residual_budget; ++f) rounded.push_back(by_value[f].second);
      consider(std::move(rounded));
    }

    if (integral) continue;  // the rounding above is exactly the LP solution

    BnbNode child1{bound, next_id++, node.fix};
    child1.fix[branch_var] = 1;
    open.push(std::move(child1));
    BnbNode child0{bound, next_id++, std::move(node.fix)};
    child0.fix[branch_var] = 0;
    open.push(std::move(child0));
  }

  SolveResult result =
      finish(scores, p, target, lambda, std::move(incumbent), proof, start);
  result.nodes_explored = explored;
  return result;
}

}  // namespace cbal
