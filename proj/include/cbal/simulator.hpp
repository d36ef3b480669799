// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cbal/dataset.hpp"
#include "cbal/learner.hpp"
#include "cbal/selector_opt.hpp"
#include "cbal/types.hpp"

namespace cbal {

enum class Method {
  Random,
  Entropy,
  EntropyCb,
  EntropyL1Pseudo,
  KCenter,
  KCenterCb,
  UncertaintyVec,
  UncertaintyVecCb,
  Bald,
  BaldCb,
};

const char* to_string(Method m);
Method method_from_string(const std::string& name);
const std::vector<Method>& all_methods();

struct SimConfig {
  int initial_size = 0;     // b0, must divide evenly across classes
  int budget_per_cycle = 0; // b
  int total_budget = 0;     // B; (B - b0) must be a multiple of b
  double lambda = 1.0;      // balance weight for the *_cb methods
  SolverKind solver = SolverKind::LocalSearch;
  double solver_time_limit = 0.0;
  double solver_gap_tolerance = 0.0;
  LearnerHyper learner;
  int bald_passes = 10;         // bootstrap committee size for the bald methods
  bool record_timings = false;  // wall clock is not reproducible; off by default

  int cycles() const { return (total_budget - initial_size) / budget_per_cycle; }
  void validate(int pool_size) const;
};

struct CycleMetrics {
  int cycle = 0;
  int labeled_size = 0;
  double test_accuracy = 0.0;
  double l1 = 0.0;                 // l1_score of this cycle's selection (true labels)
  std::vector<int> histogram;      // true-class counts of the selected batch
  double solver_seconds = 0.0;     // 0 unless record_timings is set
};

struct ExperimentRecord {
  Method method = Method::Random;
  std::uint64_t seed = 0;
  std::vector<CycleMetrics> cycles;
};

// Uniform per-class initial labeled split drawn from the pre-imbalance
// reserve. b0 must be divisible by the class count.
CycleState init_labeled_split(const Dataset& ds, int b0, std::uint64_t seed);

// Full batch active-learning loop: per cycle, score the unlabeled pool with
// the current model, compute the balance target, select a batch with the
// chosen method, reveal true labels, retrain, and record metrics. Runs are
// reproducible from (dataset, config, seed).
ExperimentRecord run_al_loop(const Dataset& ds, Method method, const SimConfig& cfg,
                             std::uint64_t seed);

struct SweepRow {
  double lambda = 0.0;
  double entropy_loss = 0.0;  // linear (negative-entropy) term of the solution
  double l1_loss = 0.0;       // balance term of the solution
  double l1_score = 0.0;      // normalized balance of the selection's true labels
};

// One exact solve per lambda with the model trained on the initial labeled
// split only; reports both cost components and the realized balance.
std::vector<SweepRow> lambda_sweep(const Dataset& ds, const std::vector<double>& lambdas,
                                   const SimConfig& cfg, std::uint64_t seed);

// Smallest lambda from which every later l1_loss stays within plateau_tol
// (relative) of the final value. A plateau needs at least two grid points;
// a strictly improving tail raises NoPlateau.
double select_lambda(const std::vector<SweepRow>& table, double plateau_tol = 0.02);

}  // namespace cbal
