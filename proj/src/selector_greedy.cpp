// SPDX-License-Identifier: Apache-2.0
#include "cbal/selector_greedy.hpp"

#include <cmath>
#include <limits>

#include "cbal/kernels.hpp"

namespace cbal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_pool_distances(const DistanceMatrix& to_labeled, const DistanceMatrix& among_pool,
                          int budget) {
  const int n = to_labeled.rows();
  if (budget < 1 || budget > n)
    fail(ErrorCode::InfeasibleBudget,
         "budget " + std::to_string(budget) + " infeasible for pool of " + std::to_string(n));
  if (among_pool.rows() != n || among_pool.cols() != n)
    fail(ErrorCode::DimensionMismatch, "pool-internal distance matrix must be N x N");
  if (to_labeled.cols() < 1)
    fail(ErrorCode::DimensionMismatch, "need at least one labeled sample");
}

// Shared greedy loop. With balancing disabled the candidate cost is just
// -nearest_distance, which is exactly farthest-point selection.
SelectionVector greedy_core(const ProbabilityMatrix* p, const DistanceMatrix& to_labeled,
                            const DistanceMatrix& among_pool, const BalanceTarget* target,
                            double lambda, int budget, GreedyTrace* trace) {
  check_pool_distances(to_labeled, among_pool, budget);
  const int n = to_labeled.rows();
  const int l = to_labeled.cols();
  const bool balancing = p != nullptr && lambda != 0.0;
  const int c = balancing ? p->classes() : 0;
  if (balancing) {
    if (p->samples() != n)
      fail(ErrorCode::DimensionMismatch, "probability rows do not match distance rows");
    if (target->classes() != c)
      fail(ErrorCode::DimensionMismatch, "target classes do not match probability columns");
    if (lambda < 0.0) fail(ErrorCode::ConfigInvalid, "lambda must be >= 0");
  }

  // nearest[i] = min distance from candidate i to any labeled-or-selected
  // sample; appending a selected column only ever lowers it.
  std::vector<double> nearest = kernels::row_min(to_labeled.values());
  std::vector<char> alive(n, 1);
  std::vector<double> deviation;  // omega - P^T z
  if (balancing) deviation = target->counts;

  std::vector<double> cost(n);
  std::vector<int> sel;
  sel.reserve(budget);
  if (trace) trace->shapes.clear();

  for (int step = 0; step < budget; ++step) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int j = 0; j < n; ++j) {
      if (!alive[j]) {
        cost[j] = kInf;
        continue;
      }
      double v = -nearest[j];
      if (balancing) {
        const double* row = p->values().row_ptr(j);
        double dist = 0.0;
        for (int k = 0; k < c; ++k) dist += std::abs(deviation[k] - row[k]);
        v += lambda * dist;
      }
      cost[j] = v;
    }
    int pick = -1;
    for (int j = 0; j < n; ++j) {
      if (!alive[j]) continue;
      if (pick < 0 || cost[j] < cost[pick]) pick = j;
    }
    alive[pick] = 0;
    sel.push_back(pick);
    if (balancing) {
      const double* row = p->values().row_ptr(pick);
      for (int k = 0; k < c; ++k) deviation[k] -= row[k];
    }
    // The picked sample now acts as labeled: its distance column replaces a
    // whole row removal plus column append on the working matrix.
    for (int j = 0; j < n; ++j) {
      if (!alive[j]) continue;
      const double d = among_pool(j, pick);
      if (d < nearest[j]) nearest[j] = d;
    }
    if (trace) trace->shapes.emplace_back(n - step - 1, l + step + 1);
  }
  return SelectionVector::from_indices(std::move(sel), n);
}

}  // namespace

DistanceMatrix pairwise_distances(const Matrix& unlabeled_feats, const Matrix& labeled_feats) {
  if (labeled_feats.rows() < 1)
    fail(ErrorCode::DimensionMismatch, "labeled feature matrix is empty");
  if (unlabeled_feats.cols() != labeled_feats.cols())
    fail(ErrorCode::DimensionMismatch, "feature dimensions differ");
  return DistanceMatrix::validated(kernels::pairwise_distances(unlabeled_feats, labeled_feats));
}

SelectionVector kcenter_greedy(const DistanceMatrix& to_labeled, const DistanceMatrix& among_pool,
                               int budget, GreedyTrace* trace) {
  return greedy_core(nullptr, to_labeled, among_pool, nullptr, 0.0, budget, trace);
}

SelectionVector greedy_class_balanced(const ProbabilityMatrix& p, const DistanceMatrix& to_labeled,
                                      const DistanceMatrix& among_pool,
                                      const BalanceTarget& target, double lambda, int budget,
                                      GreedyTrace* trace) {
  return greedy_core(&p, to_labeled, among_pool, &target, lambda, budget, trace);
}

}  // namespace cbal
