// SPDX-License-Identifier: Apache-2.0
#include "cbal/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cbal {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::RowNotStochastic: return "RowNotStochastic";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BudgetMismatch: return "BudgetMismatch";
    case ErrorCode::InvalidCycle: return "InvalidCycle";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::InfeasibleBudget: return "InfeasibleBudget";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::DegenerateSpec: return "DegenerateSpec";
    case ErrorCode::IndivisibleInit: return "IndivisibleInit";
    case ErrorCode::EmptyLabeledSet: return "EmptyLabeledSet";
    case ErrorCode::BudgetExceedsPool: return "BudgetExceedsPool";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::NoPlateau: return "NoPlateau";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::OutputUnwritable: return "OutputUnwritable";
  }
  return "UnknownError";
}

ProbabilityMatrix ProbabilityMatrix::validated(Matrix values) {
  const int n = values.rows();
  const int c = values.cols();
  if (n < 1 || c < 2)
    fail(ErrorCode::DimensionMismatch, "probability matrix needs N >= 1 and C >= 2");

  // Rows within skip_tol of 1 are left untouched so validation is a fixed
  // point after one renormalization pass.
  const double skip_tol = 4.0 * std::numeric_limits<double>::epsilon() * c;

  for (int i = 0; i < n; ++i) {
    double* row = values.row_ptr(i);
    double sum = 0.0;
    for (int j = 0; j < c; ++j) {
      const double v = row[j];
      if (!std::isfinite(v)) fail(ErrorCode::NonFinite, "non-finite probability at row " + std::to_string(i));
      if (v < 0.0) fail(ErrorCode::NegativeEntry, "negative probability at row " + std::to_string(i));
      sum += v;
    }
    const double dev = std::abs(sum - 1.0);
    if (dev > kRowSumTolerance)
      fail(ErrorCode::RowNotStochastic,
           "row " + std::to_string(i) + " sums to " + std::to_string(sum));
    if (dev > skip_tol) {
      for (int j = 0; j < c; ++j) row[j] /= sum;
    }
  }
  return ProbabilityMatrix(std::move(values));
}

ProbabilityMatrix validate_probability_matrix(Matrix values) {
  return ProbabilityMatrix::validated(std::move(values));
}

SelectionVector SelectionVector::from_indices(std::vector<int> indices, int pool_size) {
  std::sort(indices.begin(), indices.end());
  for (size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] < 0 || indices[k] >= pool_size)
      fail(ErrorCode::DimensionMismatch, "selection index out of pool range");
    if (k > 0 && indices[k] == indices[k - 1])
      fail(ErrorCode::DimensionMismatch, "duplicate selection index");
  }
  return SelectionVector(std::move(indices), pool_size);
}

bool SelectionVector::contains(int i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

BalanceTarget BalanceTarget::validated(std::vector<double> counts) {
  for (double w : counts) {
    if (!std::isfinite(w)) fail(ErrorCode::NonFinite, "non-finite balance target");
    if (w < 0.0) fail(ErrorCode::NegativeEntry, "negative balance target");
  }
  return BalanceTarget{std::move(counts)};
}

void CycleState::check_invariants() const {
  if (!std::is_sorted(labeled.begin(), labeled.end()) ||
      !std::is_sorted(unlabeled.begin(), unlabeled.end()))
    fail(ErrorCode::ConfigInvalid, "cycle state index sets must be sorted");

  std::vector<int> inter;
  std::set_intersection(labeled.begin(), labeled.end(), unlabeled.begin(), unlabeled.end(),
                        std::back_inserter(inter));
  if (!inter.empty()) fail(ErrorCode::ConfigInvalid, "labeled and unlabeled sets overlap");

  long long total = 0;
  for (int c : class_counts) {
    if (c < 0) fail(ErrorCode::ConfigInvalid, "negative class count");
    total += c;
  }
  if (total != static_cast<long long>(labeled.size()))
    fail(ErrorCode::ConfigInvalid, "class counts do not sum to labeled size");
}

UncertaintyVector UncertaintyVector::validated(std::vector<double> scores) {
  for (double s : scores)
    if (!std::isfinite(s)) fail(ErrorCode::NonFinite, "non-finite uncertainty score");
  return UncertaintyVector(std::move(scores));
}

DistanceMatrix DistanceMatrix::validated(Matrix values) {
  for (double v : values.data()) {
    if (!std::isfinite(v)) fail(ErrorCode::NonFinite, "non-finite distance");
    if (v < 0.0) fail(ErrorCode::NegativeEntry, "negative distance");
  }
  return DistanceMatrix(std::move(values));
}

}  // namespace cbal
