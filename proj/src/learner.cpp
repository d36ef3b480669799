// SPDX-License-Identifier: Apache-2.0
#include "cbal/learner.hpp"

#include <cmath>

#include "cbal/kernels.hpp"
#include "cbal/scoring.hpp"

namespace cbal {

namespace {

double loss_of_probs(const Matrix& probs, const std::vector<int>& labels, const Matrix& weights,
                     double l2) {
  double loss = 0.0;
  for (int i = 0; i < probs.rows(); ++i)
    loss -= std::log(std::max(probs(i, labels[i]), 1e-300));
  loss /= probs.rows();
  double reg = 0.0;
  for (double w : weights.data()) reg += w * w;
  return loss + 0.5 * l2 * reg;
}

}  // namespace

void LearnerHyper::validate() const {
  if (epochs < 1) fail(ErrorCode::ConfigInvalid, "epochs must be >= 1");
  if (!(learning_rate > 0.0)) fail(ErrorCode::ConfigInvalid, "learning rate must be > 0");
  if (l2 < 0.0) fail(ErrorCode::ConfigInvalid, "l2 must be >= 0");
}

Learner train_learner(const Matrix& x, const std::vector<int>& labels, int n_classes,
                      const LearnerHyper& hyper) {
  hyper.validate();
  const int n = x.rows();
  if (n < 1) fail(ErrorCode::EmptyLabeledSet, "no labeled samples to train on");
  if (static_cast<int>(labels.size()) != n)
    fail(ErrorCode::DimensionMismatch, "labels do not match feature rows");
  for (int y : labels)
    if (y < 0 || y >= n_classes) fail(ErrorCode::ConfigInvalid, "label out of class range");

  const int d = x.cols();
  Matrix grad_w;
  std::vector<double> grad_b;

  for (int attempt = 0; attempt <= 5; ++attempt) {
    const double lr = hyper.learning_rate / static_cast<double>(1 << attempt);
    Learner learner{Matrix(n_classes, d, 0.0), std::vector<double>(n_classes, 0.0)};
    double prev_loss = std::numeric_limits<double>::infinity();
    bool monotone = true;

    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
      Matrix probs = kernels::linear_logits(x, learner.weights, learner.bias);
      kernels::softmax_rows_inplace(probs);
      const double loss = loss_of_probs(probs, labels, learner.weights, hyper.l2);
      if (loss > prev_loss + 1e-12) {
        monotone = false;
        break;
      }
      prev_loss = loss;
      kernels::crossentropy_gradient(x, labels, probs, hyper.l2, learner.weights, grad_w, grad_b);
      for (int k = 0; k < n_classes; ++k) {
        double* wrow = learner.weights.row_ptr(k);
        const double* grow = grad_w.row_ptr(k);
        for (int j = 0; j < d; ++j) wrow[j] -= lr * grow[j];
        learner.bias[k] -= lr * grad_b[k];
      }
    }
    if (monotone) return learner;
  }
  fail(ErrorCode::NumericalFailure,
       "training loss not monotone even after halving the learning rate five times");
}

ProbabilityMatrix predict_proba(const Learner& learner, const Matrix& x) {
  Matrix probs = kernels::linear_logits(x, learner.weights, learner.bias);
  kernels::softmax_rows_inplace(probs);
  return ProbabilityMatrix::validated(std::move(probs));
}

double regularized_crossentropy(const Matrix& x, const std::vector<int>& labels,
                                const Learner& learner, double l2) {
  Matrix probs = kernels::linear_logits(x, learner.weights, learner.bias);
  kernels::softmax_rows_inplace(probs);
  return loss_of_probs(probs, labels, learner.weights, l2);
}

double accuracy(const Learner& learner, const Matrix& x, const std::vector<int>& labels) {
  if (x.rows() < 1) fail(ErrorCode::ConfigInvalid, "empty evaluation set");
  const ProbabilityMatrix probs = predict_proba(learner, x);
  int hits = 0;
  for (int i = 0; i < x.rows(); ++i)
    if (argmax_row(probs.row(i)) == labels[i]) ++hits;
  return static_cast<double>(hits) / x.rows();
}

}  // namespace cbal
