// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "cbal/matrix.hpp"
#include "cbal/types.hpp"

namespace cbal {

struct LearnerHyper {
  int epochs = 300;
  double learning_rate = 0.1;
  double l2 = 1e-3;

  void validate() const;
};

// Multinomial logistic regression trained by full-batch gradient descent from
// zero-initialized weights. Deterministic: identical data and hyperparameters
// give identical weights.
struct Learner {
  Matrix weights;  // C x d
  std::vector<double> bias;

  int n_classes() const { return weights.rows(); }
  int dim() const { return weights.cols(); }
};

// Trains with a monotonicity guard: if the regularized cross-entropy ever
// increases between epochs, the learning rate is halved and training restarts
// from scratch, up to five times.
Learner train_learner(const Matrix& x, const std::vector<int>& labels, int n_classes,
                      const LearnerHyper& hyper);

// Row-stochastic softmax over the learner's logits.
ProbabilityMatrix predict_proba(const Learner& learner, const Matrix& x);

// Mean cross-entropy plus (l2/2) ||W||^2; exposed for the finite-difference
// gradient checks.
double regularized_crossentropy(const Matrix& x, const std::vector<int>& labels,
                                const Learner& learner, double l2);

// Fraction of rows whose argmax prediction matches the label.
double accuracy(const Learner& learner, const Matrix& x, const std::vector<int>& labels);

}  // namespace cbal
