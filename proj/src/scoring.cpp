// SPDX-License-Identifier: Apache-2.0
#include "cbal/scoring.hpp"

#include <cmath>

#include "cbal/kernels.hpp"

namespace cbal {

double entropy(std::span<const double> p_row) {
  if (p_row.size() < 2) fail(ErrorCode::InvalidDistribution, "distribution needs C >= 2");
  double sum = 0.0;
  for (double v : p_row) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0 + kRowSumTolerance)
      fail(ErrorCode::InvalidDistribution, "entry outside [0, 1]");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kRowSumTolerance)
    fail(ErrorCode::InvalidDistribution, "probabilities sum to " + std::to_string(sum));

  double h = 0.0;
  for (double v : p_row)
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

std::vector<double> batch_negative_entropy(const ProbabilityMatrix& p) {
  return kernels::negative_entropy_rows(p.values());
}

UncertaintyVector bald_scores(const std::vector<ProbabilityMatrix>& stochastic_p) {
  const int t = static_cast<int>(stochastic_p.size());
  if (t < 2) fail(ErrorCode::TooFewSamples, "BALD needs at least two stochastic passes");
  const int n = stochastic_p[0].samples();
  const int c = stochastic_p[0].classes();
  for (const auto& m : stochastic_p)
    if (m.samples() != n || m.classes() != c)
      fail(ErrorCode::ShapeMismatch, "stochastic prediction matrices differ in shape");

  std::vector<double> scores(n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> mean(c, 0.0);
    double mean_entropy = 0.0;
    for (const auto& m : stochastic_p) {
      const double* row = m.values().row_ptr(i);
      double h = 0.0;
      for (int j = 0; j < c; ++j) {
        mean[j] += row[j];
        if (row[j] > 0.0) h -= row[j] * std::log(row[j]);
      }
      mean_entropy += h;
    }
    mean_entropy /= t;
    double h_mean = 0.0;
    for (int j = 0; j < c; ++j) {
      mean[j] /= t;
      if (mean[j] > 0.0) h_mean -= mean[j] * std::log(mean[j]);
    }
    const double mi = h_mean - mean_entropy;
    scores[i] = mi < 0.0 ? 0.0 : mi;
  }
  return UncertaintyVector::validated(std::move(scores));
}

int argmax_row(std::span<const double> row) {
  int best = 0;
  for (int j = 1; j < static_cast<int>(row.size()); ++j)
    if (row[j] > row[best]) best = j;
  return best;
}

ProbabilityMatrix pseudo_label_matrix(const ProbabilityMatrix& p) {
  Matrix hard(p.samples(), p.classes(), 0.0);
  for (int i = 0; i < p.samples(); ++i) hard(i, argmax_row(p.row(i))) = 1.0;
  return ProbabilityMatrix::validated(std::move(hard));
}

}  // namespace cbal
