// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "cbal/balance.hpp"
#include "cbal/rng.hpp"
#include "cbal/scoring.hpp"
#include "cbal/simulator.hpp"

using namespace cbal;

namespace {

DatasetSpec sim_spec(double imbalance, std::uint64_t seed) {
  DatasetSpec spec;
  spec.n_classes = 5;
  spec.samples_per_class = 100;
  spec.feature_dim = 6;
  spec.class_separation = 2.5;
  spec.imbalance_factor = imbalance;
  spec.seed = seed;
  spec.init_reserve_per_class = 20;
  return spec;
}

SimConfig sim_config(int b0, int b, int total) {
  SimConfig cfg;
  cfg.initial_size = b0;
  cfg.budget_per_cycle = b;
  cfg.total_budget = total;
  cfg.lambda = 1.0;
  cfg.solver = SolverKind::LocalSearch;
  cfg.learner.epochs = 80;
  return cfg;
}

bool records_equal(const ExperimentRecord& a, const ExperimentRecord& b) {
  if (a.cycles.size() != b.cycles.size()) return false;
  for (size_t i = 0; i < a.cycles.size(); ++i) {
    const CycleMetrics& x = a.cycles[i];
    const CycleMetrics& y = b.cycles[i];
    if (x.cycle != y.cycle || x.labeled_size != y.labeled_size ||
        x.test_accuracy != y.test_accuracy || x.l1 != y.l1 || x.histogram != y.histogram)
      return false;
  }
  return true;
}

}  // namespace

TEST_SUITE_BEGIN("simulator");

TEST_CASE("loop arithmetic: four cycles to the total budget") {
  const Dataset ds = make_longtail_dataset(sim_spec(1.0, 3));
  const ExperimentRecord rec = run_al_loop(ds, Method::Entropy, sim_config(100, 50, 300), 3);
  REQUIRE(rec.cycles.size() == 4);
  for (int c = 0; c < 4; ++c) {
    CHECK(rec.cycles[c].cycle == c + 1);
    CHECK(rec.cycles[c].labeled_size == 100 + (c + 1) * 50);
    int batch = std::accumulate(rec.cycles[c].histogram.begin(), rec.cycles[c].histogram.end(), 0);
    CHECK(batch == 50);
  }
  CHECK(rec.cycles.back().labeled_size == 300);
}

TEST_CASE("budget validation") {
  const Dataset ds = make_longtail_dataset(sim_spec(1.0, 3));
  SUBCASE("budget beyond the pool") {
    try {
      run_al_loop(ds, Method::Random, sim_config(100, 100, 10000), 1);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::BudgetExceedsPool);
    }
  }
  SUBCASE("non-divisible cycle budget") {
    try {
      run_al_loop(ds, Method::Random, sim_config(100, 30, 170), 1);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ConfigInvalid);
    }
  }
}

TEST_CASE("random selection on a balanced pool is approximately uniform") {
  const Dataset ds = make_longtail_dataset(sim_spec(1.0, 11));
  std::vector<long long> aggregate(5, 0);
  SimConfig cfg = sim_config(25, 25, 50);
  cfg.learner.epochs = 30;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const ExperimentRecord rec = run_al_loop(ds, Method::Random, cfg, seed);
    for (int k = 0; k < 5; ++k) aggregate[k] += rec.cycles[0].histogram[k];
  }
  // 750 draws, expected 150 per class; allow a generous 5-sigma band.
  for (long long count : aggregate) {
    CHECK(count > 95);
    CHECK(count < 205);
  }
}

TEST_CASE("runs are reproducible from config and seed") {
  const Dataset ds = make_longtail_dataset(sim_spec(0.3, 7));
  SimConfig cfg = sim_config(25, 25, 75);
  cfg.learner.epochs = 40;
  for (Method m : {Method::EntropyCb, Method::KCenterCb, Method::EntropyL1Pseudo,
                   Method::UncertaintyVecCb}) {
    const ExperimentRecord a = run_al_loop(ds, m, cfg, 5);
    const ExperimentRecord b = run_al_loop(ds, m, cfg, 5);
    CHECK(records_equal(a, b));
  }
}

TEST_CASE("bald committee run completes deterministically") {
  const Dataset ds = make_longtail_dataset(sim_spec(0.3, 9));
  SimConfig cfg = sim_config(25, 25, 50);
  cfg.learner.epochs = 30;
  cfg.bald_passes = 4;
  const ExperimentRecord a = run_al_loop(ds, Method::BaldCb, cfg, 2);
  const ExperimentRecord b = run_al_loop(ds, Method::BaldCb, cfg, 2);
  CHECK(records_equal(a, b));
  CHECK(a.cycles.size() == 1);
}

TEST_CASE("solver timings are zeroed unless requested") {
  const Dataset ds = make_longtail_dataset(sim_spec(1.0, 13));
  SimConfig cfg = sim_config(25, 25, 50);
  cfg.learner.epochs = 30;
  const ExperimentRecord silent = run_al_loop(ds, Method::EntropyCb, cfg, 4);
  CHECK(silent.cycles[0].solver_seconds == 0.0);
  cfg.record_timings = true;
  const ExperimentRecord timed = run_al_loop(ds, Method::EntropyCb, cfg, 4);
  CHECK(timed.cycles[0].solver_seconds > 0.0);
}

TEST_CASE("lambda sweep: reduction, monotone components") {
  DatasetSpec spec = sim_spec(0.3, 21);
  spec.n_classes = 4;
  spec.samples_per_class = 40;
  spec.init_reserve_per_class = 4;
  const Dataset ds = make_longtail_dataset(spec);
  SimConfig cfg = sim_config(8, 10, 18);
  cfg.learner.epochs = 60;

  const std::vector<double> lambdas = {0.0, 0.5, 1.0, 2.0, 3.0};
  const std::vector<SweepRow> rows = lambda_sweep(ds, lambdas, cfg, 21);
  REQUIRE(rows.size() == 5);

  // Lambda zero must reproduce the plain max-entropy selection's components.
  {
    const Matrix std_feats = standardized_features(ds);
    CycleState state = init_labeled_split(ds, 8, derive_seed(21, "init"));
    state.budget_per_cycle = 10;
    state.total_budget = 18;
    state.cycle = 1;
    Matrix labeled_feats(static_cast<int>(state.labeled.size()), std_feats.cols());
    std::vector<int> labeled_labels(state.labeled.size());
    for (size_t i = 0; i < state.labeled.size(); ++i) {
      for (int j = 0; j < std_feats.cols(); ++j)
        labeled_feats(static_cast<int>(i), j) = std_feats(state.labeled[i], j);
      labeled_labels[i] = ds.labels[state.labeled[i]];
    }
    const Learner model = train_learner(labeled_feats, labeled_labels, ds.n_classes, cfg.learner);
    Matrix unlabeled_feats(static_cast<int>(state.unlabeled.size()), std_feats.cols());
    for (size_t i = 0; i < state.unlabeled.size(); ++i)
      for (int j = 0; j < std_feats.cols(); ++j)
        unlabeled_feats(static_cast<int>(i), j) = std_feats(state.unlabeled[i], j);
    const ProbabilityMatrix probs = predict_proba(model, unlabeled_feats);
    const std::vector<double> scores = batch_negative_entropy(probs);
    SelectorConfig scfg;
    scfg.lambda = 0.0;
    scfg.budget = 10;
    const SolveResult plain = solve_cbal(scores, probs, compute_omega(state), scfg);
    CHECK(rows[0].entropy_loss == doctest::Approx(plain.linear_term).epsilon(1e-12));
    CHECK(rows[0].l1_loss == doctest::Approx(plain.balance_term).epsilon(1e-12));
  }

  for (size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].l1_loss <= rows[i - 1].l1_loss + 1e-9);
    CHECK(rows[i].entropy_loss >= rows[i - 1].entropy_loss - 1e-9);
  }
  // The balance weight must actually bite: the strongest lambda improves the
  // balance term on this imbalanced instance.
  CHECK(rows.back().l1_loss < rows.front().l1_loss - 0.1);
}

TEST_CASE("select_lambda picks the first plateau entry") {
  const auto mk = [](std::initializer_list<double> lambdas, std::initializer_list<double> losses) {
    std::vector<SweepRow> rows;
    auto li = lambdas.begin();
    auto vi = losses.begin();
    for (; li != lambdas.end(); ++li, ++vi) rows.push_back({*li, 0.0, *vi, 0.0});
    return rows;
  };
  CHECK(select_lambda(mk({0, 0.5, 1, 2, 3}, {10, 4, 1.0, 0.98, 0.97}), 0.05) == 1.0);
  CHECK(select_lambda(mk({0, 0.5, 1, 2, 3}, {2, 2, 2, 2, 2}), 0.02) == 0.0);
  try {
    select_lambda(mk({0, 0.5, 1, 2, 3}, {10, 8, 6, 4, 2}), 0.02);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoPlateau);
  }
}

TEST_CASE("method names round trip") {
  for (Method m : all_methods()) CHECK(method_from_string(to_string(m)) == m);
  try {
    method_from_string("gradient_surfing");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigParse);
  }
}

TEST_SUITE_END();
