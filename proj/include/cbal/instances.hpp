// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "cbal/kernels.hpp"
#include "cbal/rng.hpp"
#include "cbal/types.hpp"

namespace cbal {

// Random selection-problem instances shared by the self-check command, the
// unit tests, and the acceptance suite.
struct RandomInstance {
  Matrix probs;  // row-stochastic
  std::vector<double> scores;
  std::vector<double> target;
  int budget = 1;
};

// Draws N in [budget_max, max_n], C in [2, max_c], b in [1, min(N, max_b)].
// Probability rows are Dirichlet(1) draws; scores alternate between the
// rows' negative entropies and uniform noise; the target is a random
// non-negative vector scaled to roughly the budget.
inline RandomInstance make_random_instance(std::uint64_t seed, int max_n, int max_c, int max_b) {
  Rng rng(derive_seed(seed, "instance"));
  const int c = 2 + rng.index(max_c - 1);
  const int b = 1 + rng.index(max_b);
  const int n = b + rng.index(max_n - b + 1);

  RandomInstance inst;
  inst.budget = b;
  inst.probs = Matrix(n, c);
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < c; ++j) {
      inst.probs(i, j) = rng.exponential();
      sum += inst.probs(i, j);
    }
    for (int j = 0; j < c; ++j) inst.probs(i, j) /= sum;
  }

  if (rng.index(2) == 0) {
    inst.scores = kernels::serial::negative_entropy_rows(inst.probs);
  } else {
    inst.scores.resize(n);
    for (int i = 0; i < n; ++i) inst.scores[i] = 2.0 * rng.uniform01() - 1.0;
  }

  inst.target.resize(c);
  double tsum = 0.0;
  for (int j = 0; j < c; ++j) {
    inst.target[j] = rng.uniform01();
    tsum += inst.target[j];
  }
  for (int j = 0; j < c; ++j) inst.target[j] *= b / std::max(tsum, 1e-9);
  return inst;
}

// Variant with duplicated scores, to exercise the lowest-index tie rule.
inline RandomInstance make_tied_instance(std::uint64_t seed, int max_n, int max_c, int max_b) {
  RandomInstance inst = make_random_instance(seed, max_n, max_c, max_b);
  for (double& s : inst.scores) s = std::round(s * 4.0) / 4.0;
  return inst;
}

}  // namespace cbal
