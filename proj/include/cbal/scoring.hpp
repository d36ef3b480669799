// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "cbal/types.hpp"

namespace cbal {

// Shannon entropy -sum p_i ln(p_i) of a single distribution, with the
// 0*ln(0) = 0 convention. Validates that the input is a distribution.
double entropy(std::span<const double> p_row);

// Per-sample negative entropies s_j = sum_i p_ji ln(p_ji), so that the
// selection objective's linear term is z^T s. s_j = -entropy(row j).
std::vector<double> batch_negative_entropy(const ProbabilityMatrix& p);

// Mutual-information disagreement score over T stochastic prediction
// matrices: score_j = H(mean_t p_tj) - mean_t H(p_tj). Nonnegative by
// Jensen; tiny negative rounding residues are clamped to zero.
UncertaintyVector bald_scores(const std::vector<ProbabilityMatrix>& stochastic_p);

// Replaces every row by a one-hot vector at its argmax; ties go to the
// lowest class index.
ProbabilityMatrix pseudo_label_matrix(const ProbabilityMatrix& p);

// Row argmax with lowest-index tie-breaking (the pseudo-label rule).
int argmax_row(std::span<const double> row);

}  // namespace cbal
