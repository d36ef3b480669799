// SPDX-License-Identifier: Apache-2.0
#include "cbal/kernels.hpp"

#include <cmath>

#include "cbal/error.hpp"

namespace cbal::kernels {

namespace {

inline double neg_entropy_row(const double* row, int c) {
  double s = 0.0;
  for (int j = 0; j < c; ++j) {
    const double p = row[j];
    if (p > 0.0) s += p * std::log(p);
  }
  return s;
}

inline double euclidean(const double* a, const double* b, int d) {
  double s = 0.0;
  for (int k = 0; k < d; ++k) {
    const double diff = a[k] - b[k];
    s += diff * diff;
  }
  return std::sqrt(s);
}

inline void softmax_row(double* row, int c) {
  double mx = row[0];
  for (int j = 1; j < c; ++j) mx = std::max(mx, row[j]);
  double sum = 0.0;
  for (int j = 0; j < c; ++j) {
    row[j] = std::exp(row[j] - mx);
    sum += row[j];
  }
  for (int j = 0; j < c; ++j) row[j] /= sum;
}

inline double logit_at(const Matrix& x, const Matrix& w, const std::vector<double>& bias, int i,
                       int k) {
  const double* xr = x.row_ptr(i);
  const double* wr = w.row_ptr(k);
  double s = bias[k];
  for (int d = 0; d < x.cols(); ++d) s += xr[d] * wr[d];
  return s;
}

inline double grad_w_at(const Matrix& x, const std::vector<int>& labels, const Matrix& probs,
                        double l2, const Matrix& w, int k, int d) {
  const int n = x.rows();
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = probs(i, k) - (labels[i] == k ? 1.0 : 0.0);
    s += r * x(i, d);
  }
  return s / n + l2 * w(k, d);
}

inline double grad_b_at(const std::vector<int>& labels, const Matrix& probs, int k) {
  const int n = probs.rows();
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += probs(i, k) - (labels[i] == k ? 1.0 : 0.0);
  return s / n;
}

}  // namespace

namespace serial {

std::vector<double> negative_entropy_rows(const Matrix& probs) {
  std::vector<double> out(probs.rows());
  for (int i = 0; i < probs.rows(); ++i) out[i] = neg_entropy_row(probs.row_ptr(i), probs.cols());
  return out;
}

Matrix pairwise_distances(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) fail(ErrorCode::DimensionMismatch, "feature dims differ");
  Matrix d(a.rows(), b.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.rows(); ++j) d(i, j) = euclidean(a.row_ptr(i), b.row_ptr(j), a.cols());
  return d;
}

Matrix linear_logits(const Matrix& x, const Matrix& weights, const std::vector<double>& bias) {
  if (x.cols() != weights.cols()) fail(ErrorCode::DimensionMismatch, "weight dims differ");
  Matrix out(x.rows(), weights.rows());
  for (int i = 0; i < x.rows(); ++i)
    for (int k = 0; k < weights.rows(); ++k) out(i, k) = logit_at(x, weights, bias, i, k);
  return out;
}

void softmax_rows_inplace(Matrix& logits) {
  for (int i = 0; i < logits.rows(); ++i) softmax_row(logits.row_ptr(i), logits.cols());
}

void crossentropy_gradient(const Matrix& x, const std::vector<int>& labels, const Matrix& probs,
                           double l2, const Matrix& weights, Matrix& grad_w,
                           std::vector<double>& grad_b) {
  const int c = weights.rows();
  const int dim = weights.cols();
  grad_w = Matrix(c, dim);
  grad_b.assign(c, 0.0);
  for (int k = 0; k < c; ++k) {
    for (int d = 0; d < dim; ++d) grad_w(k, d) = grad_w_at(x, labels, probs, l2, weights, k, d);
    grad_b[k] = grad_b_at(labels, probs, k);
  }
}

std::vector<double> row_min(const Matrix& values) {
  if (values.cols() < 1) fail(ErrorCode::DimensionMismatch, "row_min needs at least one column");
  std::vector<double> out(values.rows());
  for (int i = 0; i < values.rows(); ++i) {
    const double* row = values.row_ptr(i);
    double m = row[0];
    for (int j = 1; j < values.cols(); ++j) m = std::min(m, row[j]);
    out[i] = m;
  }
  return out;
}

}  // namespace serial

std::vector<double> negative_entropy_rows(const Matrix& probs) {
  const int n = probs.rows();
  std::vector<double> out(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < n; ++i) out[i] = neg_entropy_row(probs.row_ptr(i), probs.cols());
  return out;
}

Matrix pairwise_distances(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) fail(ErrorCode::DimensionMismatch, "feature dims differ");
  const int n = a.rows();
  const int l = b.rows();
  Matrix d(n, l);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < n; ++i) {
    double* out = d.row_ptr(i);
    for (int j = 0; j < l; ++j) out[j] = euclidean(a.row_ptr(i), b.row_ptr(j), a.cols());
  }
  return d;
}

Matrix linear_logits(const Matrix& x, const Matrix& weights, const std::vector<double>& bias) {
  if (x.cols() != weights.cols()) fail(ErrorCode::DimensionMismatch, "weight dims differ");
  const int n = x.rows();
  Matrix out(n, weights.rows());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < weights.rows(); ++k) out(i, k) = logit_at(x, weights, bias, i, k);
  return out;
}

void softmax_rows_inplace(Matrix& logits) {
  const int n = logits.rows();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < n; ++i) softmax_row(logits.row_ptr(i), logits.cols());
}

void crossentropy_gradient(const Matrix& x, const std::vector<int>& labels, const Matrix& probs,
                           double l2, const Matrix& weights, Matrix& grad_w,
                           std::vector<double>& grad_b) {
  const int c = weights.rows();
  const int dim = weights.cols();
  grad_w = Matrix(c, dim);
  grad_b.assign(c, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) collapse(2)
#endif
  for (int k = 0; k < c; ++k)
    for (int d = 0; d < dim; ++d) grad_w(k, d) = grad_w_at(x, labels, probs, l2, weights, k, d);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int k = 0; k < c; ++k) grad_b[k] = grad_b_at(labels, probs, k);
}

std::vector<double> row_min(const Matrix& values) {
  if (values.cols() < 1) fail(ErrorCode::DimensionMismatch, "row_min needs at least one column");
  const int n = values.rows();
  std::vector<double> out(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < n; ++i) {
    const double* row = values.row_ptr(i);
    double m = row[0];
    for (int j = 1; j < values.cols(); ++j) m = std::min(m, row[j]);
    out[i] = m;
  }
  return out;
}

}  // namespace cbal::kernels
