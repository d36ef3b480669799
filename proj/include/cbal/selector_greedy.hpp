// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "cbal/types.hpp"

namespace cbal {

// Euclidean distances between each unlabeled sample (rows) and each labeled
// sample (columns). Feature dimensions must agree; the labeled side must be
// non-empty.
DistanceMatrix pairwise_distances(const Matrix& unlabeled_feats, const Matrix& labeled_feats);

// Records the conceptual shape of the working distance matrix after each
// greedy step: one row removed, one column appended per selection.
struct GreedyTrace {
  std::vector<std::pair<int, int>> shapes;
};

// Farthest-point selection: repeatedly picks the sample maximizing the
// distance to its nearest labeled (or already selected) sample, ties to the
// lowest index. among_pool holds the pool-internal distances needed when a
// selected sample starts acting as labeled.
SelectionVector kcenter_greedy(const DistanceMatrix& to_labeled, const DistanceMatrix& among_pool,
                               int budget, GreedyTrace* trace = nullptr);

// Greedy selection combining farthest-point coverage with the class-balance
// term: each step picks argmin_j (-d_j + lambda * || omega - P^T z - p_j ||_1)
// over the remaining candidates, where d_j is the distance to the nearest
// labeled-or-selected sample. lambda = 0 is bit-identical to kcenter_greedy.
SelectionVector greedy_class_balanced(const ProbabilityMatrix& p, const DistanceMatrix& to_labeled,
                                      const DistanceMatrix& among_pool,
                                      const BalanceTarget& target, double lambda, int budget,
                                      GreedyTrace* trace = nullptr);

}  // namespace cbal
