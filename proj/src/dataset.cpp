// SPDX-License-Identifier: Apache-2.0
#include "cbal/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cbal/error.hpp"
#include "cbal/rng.hpp"

namespace cbal {

void DatasetSpec::validate() const {
  if (n_classes < 2) fail(ErrorCode::ConfigInvalid, "need at least two classes");
  if (samples_per_class < 1) fail(ErrorCode::ConfigInvalid, "samples_per_class must be >= 1");
  if (feature_dim < 1) fail(ErrorCode::ConfigInvalid, "feature_dim must be >= 1");
  if (!(imbalance_factor > 0.0) || imbalance_factor > 1.0)
    fail(ErrorCode::ConfigInvalid, "imbalance factor must be in (0, 1]");
  if (imbalanced_fraction < 0.0 || imbalanced_fraction > 1.0)
    fail(ErrorCode::ConfigInvalid, "imbalanced_fraction must be in [0, 1]");
  if (test_per_class < 0 || init_reserve_per_class < 0)
    fail(ErrorCode::ConfigInvalid, "per-class sizes must be >= 0");
  if (resolved_reserve_per_class() > samples_per_class)
    fail(ErrorCode::ConfigInvalid, "initial reserve exceeds samples per class");
}

int DatasetSpec::resolved_test_per_class() const {
  if (test_per_class > 0) return test_per_class;
  return std::max(1, static_cast<int>(std::lround(0.2 * samples_per_class)));
}

int DatasetSpec::resolved_reserve_per_class() const {
  if (init_reserve_per_class > 0) return init_reserve_per_class;
  return std::max(1, static_cast<int>(std::lround(0.1 * samples_per_class)));
}

int DatasetSpec::affected_classes() const {
  return static_cast<int>(std::lround(imbalanced_fraction * n_classes));
}

void Dataset::check_invariants() const {
  std::vector<int> test_counts(n_classes, 0);
  for (int idx : test_indices) test_counts[labels[idx]]++;
  for (int c = 1; c < n_classes; ++c)
    if (test_counts[c] != test_counts[0])
      fail(ErrorCode::ConfigInvalid, "test split is not class-balanced");

  std::vector<int> inter;
  std::set_intersection(train_pool.begin(), train_pool.end(), test_indices.begin(),
                        test_indices.end(), std::back_inserter(inter));
  if (!inter.empty()) fail(ErrorCode::ConfigInvalid, "train/test overlap");
}

Dataset make_longtail_dataset(const DatasetSpec& spec) {
  spec.validate();
  const int c = spec.n_classes;
  const int ny = spec.samples_per_class;
  const int d = spec.feature_dim;
  const int test_n = spec.resolved_test_per_class();
  const int reserve_n = spec.resolved_reserve_per_class();

  Rng rng(derive_seed(spec.seed, "dataset"));

  // Class means: orthogonal axes when they fit, random directions otherwise.
  Matrix means(c, d, 0.0);
  if (c <= d) {
    for (int k = 0; k < c; ++k) means(k, k) = spec.class_separation;
  } else {
    for (int k = 0; k < c; ++k) {
      double norm = 0.0;
      for (int j = 0; j < d; ++j) {
        means(k, j) = rng.normal();
        norm += means(k, j) * means(k, j);
      }
      norm = std::sqrt(std::max(norm, 1e-12));
      for (int j = 0; j < d; ++j) means(k, j) *= spec.class_separation / norm;
    }
  }

  Dataset ds;
  ds.n_classes = c;
  const int total = c * (ny + test_n);
  ds.features = Matrix(total, d);
  ds.labels.resize(total);

  // Layout: all training candidates first (class-major), then the test rows.
  for (int k = 0; k < c; ++k) {
    for (int s = 0; s < ny; ++s) {
      const int row = k * ny + s;
      ds.labels[row] = k;
      for (int j = 0; j < d; ++j) ds.features(row, j) = means(k, j) + rng.normal();
    }
  }
  const int test_base = c * ny;
  for (int k = 0; k < c; ++k) {
    for (int s = 0; s < test_n; ++s) {
      const int row = test_base + k * test_n + s;
      ds.labels[row] = k;
      ds.test_indices.push_back(row);
      for (int j = 0; j < d; ++j) ds.features(row, j) = means(k, j) + rng.normal();
    }
  }

  // Reserve the initial pool per class first, then thin the remainder of the
  // affected classes down to round(n_y * IF) samples.
  const int affected = spec.affected_classes();
  ds.reserve.resize(c);
  for (int k = 0; k < c; ++k) {
    std::vector<int> ids(ny);
    std::iota(ids.begin(), ids.end(), k * ny);
    Rng class_rng(derive_seed(spec.seed, "class-split", k));
    class_rng.shuffle(ids);

    ds.reserve[k].assign(ids.begin(), ids.begin() + reserve_n);
    std::sort(ds.reserve[k].begin(), ds.reserve[k].end());

    int keep = ny - reserve_n;
    if (spec.imbalance_factor < 1.0 && k < affected) {
      const int retained = static_cast<int>(std::lround(ny * spec.imbalance_factor));
      if (retained == 0)
        fail(ErrorCode::DegenerateSpec, "imbalance factor would empty class " + std::to_string(k));
      keep = std::min(keep, retained);
    }
    for (int s = 0; s < reserve_n + keep; ++s) ds.train_pool.push_back(ids[s]);
  }
  std::sort(ds.train_pool.begin(), ds.train_pool.end());
  std::sort(ds.test_indices.begin(), ds.test_indices.end());
  ds.check_invariants();
  return ds;
}

Dataset dataset_from_arrays(Matrix features, std::vector<int> labels, int test_per_class,
                            std::uint64_t seed) {
  if (features.rows() != static_cast<int>(labels.size()))
    fail(ErrorCode::DimensionMismatch, "feature rows and labels disagree");
  if (features.rows() < 1) fail(ErrorCode::ConfigInvalid, "empty dataset");

  int c = 0;
  for (int y : labels) {
    if (y < 0) fail(ErrorCode::ConfigInvalid, "negative class id");
    c = std::max(c, y + 1);
  }
  if (c < 2) fail(ErrorCode::ConfigInvalid, "need at least two classes");

  std::vector<std::vector<int>> by_class(c);
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) by_class[labels[i]].push_back(i);

  int min_count = features.rows();
  for (const auto& ids : by_class) min_count = std::min(min_count, static_cast<int>(ids.size()));
  if (test_per_class <= 0) test_per_class = std::max(1, min_count / 5);
  if (test_per_class >= min_count)
    fail(ErrorCode::ConfigInvalid, "test split would consume an entire class");

  Dataset ds;
  ds.features = std::move(features);
  ds.labels = std::move(labels);
  ds.n_classes = c;
  ds.reserve.resize(c);
  for (int k = 0; k < c; ++k) {
    Rng rng(derive_seed(seed, "ingest-split", k));
    rng.shuffle(by_class[k]);
    for (int s = 0; s < test_per_class; ++s) ds.test_indices.push_back(by_class[k][s]);
    for (size_t s = test_per_class; s < by_class[k].size(); ++s) {
      ds.train_pool.push_back(by_class[k][s]);
      ds.reserve[k].push_back(by_class[k][s]);
    }
    std::sort(ds.reserve[k].begin(), ds.reserve[k].end());
  }
  std::sort(ds.train_pool.begin(), ds.train_pool.end());
  std::sort(ds.test_indices.begin(), ds.test_indices.end());
  ds.check_invariants();
  return ds;
}

Matrix standardized_features(const Dataset& ds) {
  const int d = ds.features.cols();
  std::vector<double> mean(d, 0.0), sd(d, 0.0);
  for (int idx : ds.train_pool)
    for (int j = 0; j < d; ++j) mean[j] += ds.features(idx, j);
  const double n = static_cast<double>(ds.train_pool.size());
  for (int j = 0; j < d; ++j) mean[j] /= n;
  for (int idx : ds.train_pool)
    for (int j = 0; j < d; ++j) {
      const double diff = ds.features(idx, j) - mean[j];
      sd[j] += diff * diff;
    }
  for (int j = 0; j < d; ++j) sd[j] = std::max(std::sqrt(sd[j] / n), 1e-12);

  Matrix out(ds.features.rows(), d);
  for (int i = 0; i < ds.features.rows(); ++i)
    for (int j = 0; j < d; ++j) out(i, j) = (ds.features(i, j) - mean[j]) / sd[j];
  return out;
}

}  // namespace cbal
