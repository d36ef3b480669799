// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "cbal/matrix.hpp"
#include "cbal/simulator.hpp"
#include "cbal/types.hpp"

namespace cbal {

// Deterministic float formatting shared by every CSV writer ("%.10g").
std::string format_double(double v);

// Headerless CSV of N x C probabilities, validated on load.
ProbabilityMatrix load_probability_csv(const std::string& path);

// Feature/label CSV with header f0..f{d-1},label; label is an integer class
// id. Returns the features and labels.
struct FeatureTable {
  Matrix features;
  std::vector<int> labels;
};
FeatureTable load_feature_csv(const std::string& path);

// Metrics CSV: cycle,labeled_size,test_accuracy,l1_score,solver_time_s,
// h0..h{C-1}. One row per completed cycle, LF line endings.
void write_metrics_csv(const std::string& path, const ExperimentRecord& record, int n_classes);

// Sweep CSV: lambda,entropy_loss,l1_loss,l1_score.
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace cbal
