// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "cbal/matrix.hpp"

namespace cbal {

// Synthetic long-tailed dataset description. Features are a Gaussian mixture
// with unit covariance; class means sit on orthogonal axes scaled by
// class_separation whenever C <= d, otherwise on random unit directions.
struct DatasetSpec {
  int n_classes = 10;
  int samples_per_class = 500;  // training samples per class before removal
  int feature_dim = 16;
  double class_separation = 3.0;
  double imbalance_factor = 1.0;    // IF in (0, 1]; 1 keeps the dataset balanced
  double imbalanced_fraction = 0.5; // fraction of classes the removal applies to
  std::uint64_t seed = 1;
  int test_per_class = 0;          // 0 derives max(1, round(0.2 * samples_per_class))
  int init_reserve_per_class = 0;  // 0 derives max(1, round(0.1 * samples_per_class))

  void validate() const;
  int resolved_test_per_class() const;
  int resolved_reserve_per_class() const;
  int affected_classes() const;
};

struct Dataset {
  Matrix features;          // (train + test) x d
  std::vector<int> labels;  // class id per row
  int n_classes = 0;

  std::vector<int> train_pool;             // retained training indices, sorted
  std::vector<int> test_indices;           // balanced test split, sorted
  std::vector<std::vector<int>> reserve;   // per class, pre-removal reserve (sorted)

  int dim() const { return features.cols(); }
  void check_invariants() const;
};

// Builds the long-tailed synthetic dataset: per class, the initial-pool
// reserve is drawn first; removal then keeps round(n_y * IF) of the remaining
// training samples for each affected class. The test split is balanced and
// disjoint. Identical specs produce identical datasets.
Dataset make_longtail_dataset(const DatasetSpec& spec);

// Wraps externally supplied features/labels: draws a balanced test split of
// test_per_class per class under the seed, leaves the rest as the training
// pool, and reserves every training sample for the initial split.
Dataset dataset_from_arrays(Matrix features, std::vector<int> labels, int test_per_class,
                            std::uint64_t seed);

// Column-standardized copy of all features (mean/stddev estimated on the
// training pool). Used both as learner input and as the embedding space for
// distance-based selection.
Matrix standardized_features(const Dataset& ds);

}  // namespace cbal
