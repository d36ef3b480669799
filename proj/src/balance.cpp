// SPDX-License-Identifier: Apache-2.0
#include "cbal/balance.hpp"

#include <cmath>

namespace cbal {

BalanceTarget compute_omega(const CycleState& state) {
  if (state.cycle < 1)
    fail(ErrorCode::InvalidCycle, "omega is defined for cycle >= 1, got " +
                                      std::to_string(state.cycle));
  const int c = state.n_classes();
  if (c < 1) fail(ErrorCode::ConfigInvalid, "state has no classes");
  if (state.budget_per_cycle < 1)
    fail(ErrorCode::ConfigInvalid, "state has no per-cycle budget set");

  const double per_class =
      (static_cast<double>(state.cycle) * state.budget_per_cycle + state.initial_size) / c;
  std::vector<double> counts(c);
  for (int i = 0; i < c; ++i) counts[i] = std::max(per_class - state.class_counts[i], 0.0);
  return BalanceTarget::validated(std::move(counts));
}

std::vector<double> soft_class_counts(const ProbabilityMatrix& p, const SelectionVector& z) {
  if (z.pool_size() != p.samples())
    fail(ErrorCode::DimensionMismatch, "selection pool size does not match probability rows");
  std::vector<double> soft(p.classes(), 0.0);
  for (int idx : z.indices()) {
    const double* row = p.values().row_ptr(idx);
    for (int j = 0; j < p.classes(); ++j) soft[j] += row[j];
  }
  return soft;
}

double l1_balance_distance(const BalanceTarget& target, const ProbabilityMatrix& p,
                           const SelectionVector& z) {
  if (target.classes() != p.classes())
    fail(ErrorCode::DimensionMismatch, "balance target classes do not match probability columns");
  const std::vector<double> soft = soft_class_counts(p, z);
  double dist = 0.0;
  for (int j = 0; j < p.classes(); ++j) dist += std::abs(target.counts[j] - soft[j]);
  return dist;
}

double l1_score(const std::vector<int>& class_counts_of_selection, int budget) {
  const int c = static_cast<int>(class_counts_of_selection.size());
  if (c < 2) fail(ErrorCode::DimensionMismatch, "l1_score needs C >= 2");
  if (budget < 1) fail(ErrorCode::BudgetMismatch, "budget must be >= 1");
  long long total = 0;
  for (int v : class_counts_of_selection) {
    if (v < 0) fail(ErrorCode::NegativeEntry, "negative class count");
    total += v;
  }
  if (total != budget)
    fail(ErrorCode::BudgetMismatch, "class counts sum to " + std::to_string(total) +
                                        ", expected budget " + std::to_string(budget));

  const double uniform = static_cast<double>(budget) / c;
  double l1 = 0.0;
  for (int v : class_counts_of_selection) l1 += std::abs(v - uniform);
  const double normalizer = 2.0 * budget * (c - 1) / c;
  return l1 / normalizer;
}

}  // namespace cbal
