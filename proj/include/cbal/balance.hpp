// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "cbal/types.hpp"

namespace cbal {

// Per-class counts still needed at the current cycle to reach a uniform
// labeled distribution: omega_i = max((c*b + b0)/C - n_i, 0). Requires
// cycle >= 1.
BalanceTarget compute_omega(const CycleState& state);

// Soft class counts of a selection: column sums of P restricted to the
// selected rows (P^T z).
std::vector<double> soft_class_counts(const ProbabilityMatrix& p, const SelectionVector& z);

// L1 distance between the balance target and the selection's soft class
// counts: || omega - P^T z ||_1.
double l1_balance_distance(const BalanceTarget& target, const ProbabilityMatrix& p,
                           const SelectionVector& z);

// Normalized balance metric in [0, 1]: || counts - (b/C) 1 ||_1 divided by
// 2b(C-1)/C, the distance of a single-class selection from uniform.
// 0 = perfectly uniform, 1 = entire budget on one class.
double l1_score(const std::vector<int>& class_counts_of_selection, int budget);

}  // namespace cbal
