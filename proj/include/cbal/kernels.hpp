// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "cbal/matrix.hpp"

namespace cbal::kernels {

// Serial reference implementations of the data-parallel kernels. These are
// the ground truth the OpenMP versions are tested against; keep them as
// plain loops.
namespace serial {

// s_j = sum_i p_ji * ln(p_ji), with 0*ln(0) = 0. This is the negative
// entropy of row j, i.e. the per-sample coefficient of the linear term.
std::vector<double> negative_entropy_rows(const Matrix& probs);

// d_ij = Euclidean distance between a.row(i) and b.row(j).
Matrix pairwise_distances(const Matrix& a, const Matrix& b);

// logits(i, k) = x.row(i) . weights.row(k) + bias[k]. weights is C x d.
Matrix linear_logits(const Matrix& x, const Matrix& weights, const std::vector<double>& bias);

// Row-wise softmax with max-shift for stability.
void softmax_rows_inplace(Matrix& logits);

// Mean cross-entropy gradient for multinomial logistic regression:
//   grad_w(k, d) = (1/n) sum_i (probs(i,k) - [labels[i]==k]) x(i,d) + l2 * w(k,d)
//   grad_b(k)    = (1/n) sum_i (probs(i,k) - [labels[i]==k])
// Each output element owns its own accumulation loop (fixed order over i),
// so the parallel version is bit-identical for any thread count.
void crossentropy_gradient(const Matrix& x, const std::vector<int>& labels, const Matrix& probs,
                           double l2, const Matrix& weights, Matrix& grad_w,
                           std::vector<double>& grad_b);

// Per-row minimum of a matrix with at least one column.
std::vector<double> row_min(const Matrix& values);

}  // namespace serial

// OpenMP-parallel kernels. Signatures and results match the serial reference
// exactly (one writer per output element, fixed inner summation order).
std::vector<double> negative_entropy_rows(const Matrix& probs);
Matrix pairwise_distances(const Matrix& a, const Matrix& b);
Matrix linear_logits(const Matrix& x, const Matrix& weights, const std::vector<double>& bias);
void softmax_rows_inplace(Matrix& logits);
void crossentropy_gradient(const Matrix& x, const std::vector<int>& labels, const Matrix& probs,
                           double l2, const Matrix& weights, Matrix& grad_w,
                           std::vector<double>& grad_b);
std::vector<double> row_min(const Matrix& values);

}  // namespace cbal::kernels
