// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "cbal/error.hpp"
#include "cbal/matrix.hpp"

namespace cbal {

// Tolerance used when deciding whether a probability row is close enough to
// stochastic to renormalize instead of reject.
inline constexpr double kRowSumTolerance = 1e-6;

// N x C row-stochastic matrix of per-sample class probabilities. Immutable
// after validation; safe to share across threads.
class ProbabilityMatrix {
 public:
  // Validates entries (finite, non-negative) and row sums. Rows whose sum
  // deviates from 1 by more than kRowSumTolerance are rejected; smaller
  // deviations are renormalized. Validation is idempotent: rows already
  // stochastic to machine precision are left untouched.
  static ProbabilityMatrix validated(Matrix values);

  int samples() const { return values_.rows(); }
  int classes() const { return values_.cols(); }
  const Matrix& values() const { return values_; }
  std::span<const double> row(int i) const { return values_.row(i); }

 private:
  explicit ProbabilityMatrix(Matrix m) : values_(std::move(m)) {}
  Matrix values_;
};

ProbabilityMatrix validate_probability_matrix(Matrix values);

// Binary selection over a pool of n candidates, stored as sorted indices.
class SelectionVector {
 public:
  SelectionVector() = default;  // empty selection over an empty pool

  static SelectionVector from_indices(std::vector<int> indices, int pool_size);

  const std::vector<int>& indices() const { return indices_; }
  int pool_size() const { return pool_size_; }
  int count() const { return static_cast<int>(indices_.size()); }
  bool contains(int i) const;

 private:
  SelectionVector(std::vector<int> idx, int n) : indices_(std::move(idx)), pool_size_(n) {}
  std::vector<int> indices_;
  int pool_size_ = 0;
};

// Per-class counts still required to reach a uniform labeled distribution.
// Values are reals: the uniform share of the budget is generally fractional.
struct BalanceTarget {
  std::vector<double> counts;

  int classes() const { return static_cast<int>(counts.size()); }
  static BalanceTarget validated(std::vector<double> counts);
};

// Labeled/unlabeled bookkeeping for one active-learning run. Index vectors
// are kept sorted; class_counts tracks oracle-revealed labels only.
struct CycleState {
  std::vector<int> labeled;
  std::vector<int> unlabeled;
  std::vector<int> class_counts;
  int cycle = 0;
  int budget_per_cycle = 0;
  int initial_size = 0;
  int total_budget = 0;

  int n_classes() const { return static_cast<int>(class_counts.size()); }

  // Throws on any violated invariant (disjointness, count consistency,
  // sortedness). Called at every cycle boundary by the simulator.
  void check_invariants() const;
};

// Per-sample acquisition values; higher means more valuable to query.
class UncertaintyVector {
 public:
  static UncertaintyVector validated(std::vector<double> scores);

  const std::vector<double>& scores() const { return scores_; }
  int size() const { return static_cast<int>(scores_.size()); }

 private:
  explicit UncertaintyVector(std::vector<double> s) : scores_(std::move(s)) {}
  std::vector<double> scores_;
};

// N x L matrix of non-negative distances (unlabeled rows, labeled columns).
class DistanceMatrix {
 public:
  static DistanceMatrix validated(Matrix values);

  int rows() const { return values_.rows(); }
  int cols() const { return values_.cols(); }
  const Matrix& values() const { return values_; }
  double operator()(int i, int j) const { return values_(i, j); }

 private:
  explicit DistanceMatrix(Matrix m) : values_(std::move(m)) {}
  Matrix values_;
};

}  // namespace cbal
