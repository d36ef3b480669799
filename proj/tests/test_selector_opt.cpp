// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "cbal/instances.hpp"
#include "cbal/scoring.hpp"
#include "cbal/selector_opt.hpp"

using namespace cbal;

namespace {

const ProbabilityMatrix& three_row_p() {
  static const ProbabilityMatrix p =
      validate_probability_matrix(Matrix::from_rows({{0.9, 0.1}, {0.5, 0.5}, {0.1, 0.9}}));
  return p;
}

SelectorConfig cfg_of(double lambda, int budget, SolverKind solver) {
  SelectorConfig cfg;
  cfg.lambda = lambda;
  cfg.budget = budget;
  cfg.solver = solver;
  return cfg;
}

}  // namespace

TEST_SUITE_BEGIN("selector_opt");

TEST_CASE("lambda zero selects the max-entropy row") {
  const auto scores = batch_negative_entropy(three_row_p());
  const BalanceTarget target = BalanceTarget::validated({0.0, 1.0});
  for (SolverKind kind :
       {SolverKind::Enumeration, SolverKind::BranchAndBound, SolverKind::LocalSearch}) {
    const SolveResult r = solve_cbal(scores, three_row_p(), target, cfg_of(0.0, 1, kind));
    CHECK(r.selection.indices() == std::vector<int>{1});
    CHECK(r.proof == SolveProof::Optimal);
  }
}

TEST_CASE("strong balance weight flips the choice to the target class") {
  // Frozen via per-candidate evaluation: costs are -0.325 + 10*1.8,
  // -0.693 + 10*1.0, -0.325 + 10*0.2.
  const auto scores = batch_negative_entropy(three_row_p());
  const BalanceTarget target = BalanceTarget::validated({0.0, 1.0});
  const SolveResult r = solve_enumeration(scores, three_row_p(), target, 1, 10.0);
  CHECK(r.selection.indices() == std::vector<int>{2});
  CHECK(r.objective == doctest::Approx(1.6749170266085516).epsilon(1e-12));
  CHECK(r.linear_term == doctest::Approx(-0.3250829733914482).epsilon(1e-12));
  CHECK(r.balance_term == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("enumeration with budget equal to pool returns the full selection") {
  const auto scores = batch_negative_entropy(three_row_p());
  const BalanceTarget target = BalanceTarget::validated({1.0, 2.0});
  const SolveResult r = solve_enumeration(scores, three_row_p(), target, 3, 1.0);
  CHECK(r.selection.indices() == std::vector<int>{0, 1, 2});
}

TEST_CASE("enumeration objective beats random feasible selections") {
  const RandomInstance inst = make_random_instance(17, 10, 3, 3);
  const ProbabilityMatrix p = validate_probability_matrix(inst.probs);
  const BalanceTarget target = BalanceTarget::validated(inst.target);
  const int n = p.samples();
  const int b = inst.budget;
  const SolveResult best = solve_enumeration(inst.scores, p, target, b, 1.0);

  Rng rng(91);
  for (int it = 0; it < 1000; ++it) {
    std::vector<int> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    rng.shuffle(ids);
    ids.resize(b);
    std::sort(ids.begin(), ids.end());
    const ObjectiveParts parts = evaluate_selection(inst.scores, p, target, 1.0, ids);
    CHECK(best.objective <= parts.objective + 1e-12);
  }
}

TEST_CASE("enumeration refuses oversized instances") {
  Matrix m(12, 2);
  for (int i = 0; i < 12; ++i) {
    m(i, 0) = 0.4;
    m(i, 1) = 0.6;
  }
  const ProbabilityMatrix p = validate_probability_matrix(m);
  const BalanceTarget target = BalanceTarget::validated({1.0, 2.0});
  const std::vector<double> scores(12, 0.0);
  try {
    solve_enumeration(scores, p, target, 3, 1.0, /*cap=*/100.0);  // C(12,3)=220
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InstanceTooLarge);
  }
}

TEST_CASE("branch and bound equals enumeration on a 12 choose 4 instance") {
  Matrix m(12, 3);
  Rng rng(24);
  for (int i = 0; i < 12; ++i) {
    double sum = 0.0;
    for (int j = 0; j < 3; ++j) {
      m(i, j) = rng.exponential();
      sum += m(i, j);
    }
    for (int j = 0; j < 3; ++j) m(i, j) /= sum;
  }
  const ProbabilityMatrix p = validate_probability_matrix(m);
  const std::vector<double> scores = kernels::serial::negative_entropy_rows(p.values());
  const BalanceTarget target = BalanceTarget::validated({1.5, 1.5, 1.0});

  const SolveResult oracle = solve_enumeration(scores, p, target, 4, 1.0);
  const SolveResult bnb =
      solve_branch_and_bound(scores, p, target, cfg_of(1.0, 4, SolverKind::BranchAndBound));
  CHECK(bnb.objective == doctest::Approx(oracle.objective).epsilon(1e-9));
  CHECK(bnb.proof == SolveProof::Optimal);
}

TEST_CASE("all three solvers agree bit for bit at lambda zero") {
  for (std::uint64_t s = 100; s < 130; ++s) {
    const RandomInstance inst = make_tied_instance(s, 14, 4, 4);
    const ProbabilityMatrix p = validate_probability_matrix(inst.probs);
    const BalanceTarget target = BalanceTarget::validated(inst.target);
    const auto e = solve_enumeration(inst.scores, p, target, inst.budget, 0.0);
    const auto bb = solve_branch_and_bound(inst.scores, p, target,
                                           cfg_of(0.0, inst.budget, SolverKind::BranchAndBound));
    const auto ls = solve_local_search(inst.scores, p, target,
                                       cfg_of(0.0, inst.budget, SolverKind::LocalSearch));
    CHECK(e.selection.indices() == bb.selection.indices());
    CHECK(e.selection.indices() == ls.selection.indices());
    CHECK(e.proof == SolveProof::Optimal);
    CHECK(ls.proof == SolveProof::Optimal);  // the reduction is exact
  }
}

TEST_CASE("solve result terms are internally consistent") {
  for (std::uint64_t s = 300; s < 320; ++s) {
    const RandomInstance inst = make_random_instance(s, 12, 4, 3);
    const ProbabilityMatrix p = validate_probability_matrix(inst.probs);
    const BalanceTarget target = BalanceTarget::validated(inst.target);
    for (SolverKind kind :
         {SolverKind::Enumeration, SolverKind::BranchAndBound, SolverKind::LocalSearch}) {
      const SolveResult r = solve_cbal(inst.scores, p, target, cfg_of(0.7, inst.budget, kind));
      CHECK(r.selection.count() == inst.budget);
      CHECK(std::abs(r.objective - (r.linear_term + 0.7 * r.balance_term)) < 1e-9);
    }
  }
}

TEST_CASE("scalarization trade-off is monotone for exact solvers") {
  const RandomInstance inst = make_random_instance(41, 14, 3, 4);
  const ProbabilityMatrix p = validate_probability_matrix(inst.probs);
  const BalanceTarget target = BalanceTarget::validated(inst.target);
  for (bool use_bnb : {false, true}) {
    double prev_balance = std::numeric_limits<double>::infinity();
    double prev_linear = -std::numeric_limits<double>::infinity();
    for (double lambda : {0.0, 0.1, 0.5, 1.0, 2.0, 5.0}) {
      const SolveResult r =
          use_bnb ? solve_branch_and_bound(
                        inst.scores, p, target,
                        cfg_of(lambda, inst.budget, SolverKind::BranchAndBound))
                  : solve_enumeration(inst.scores, p, target, inst.budget, lambda);
      CHECK(r.balance_term <= prev_balance + 1e-9);
      CHECK(r.linear_term >= prev_linear - 1e-9);
      prev_balance = r.balance_term;
      prev_linear = r.linear_term;
    }
  }
}

TEST_CASE("local search dominates the exact optimum and stays close") {
  int within_gap = 0;
  const int total = 200;
  for (int s = 0; s < total; ++s) {
    const RandomInstance inst = make_random_instance(1000 + s, 16, 4, 4);
    const ProbabilityMatrix p = validate_probability_matrix(inst.probs);
    const BalanceTarget target = BalanceTarget::validated(inst.target);
    const double lambda = 1.0;
    const SolveResult opt = solve_enumeration(inst.scores, p, target, inst.budget, lambda);
    const SolveResult ls = solve_local_search(
        inst.scores, p, target, cfg_of(lambda, inst.budget, SolverKind::LocalSearch));
    CHECK(ls.objective >= opt.objective - 1e-9);
    const double gap = (ls.objective - opt.objective) / std::max(std::abs(opt.objective), 1e-9);
    if (gap <= 0.05) ++within_gap;
  }
  // Heuristic fidelity threshold: within 5% on at least 95% of instances.
  CHECK(within_gap >= 190);
}

TEST_CASE("infeasible budget is rejected") {
  const auto scores = batch_negative_entropy(three_row_p());
  const BalanceTarget target = BalanceTarget::validated({0.0, 1.0});
  for (SolverKind kind :
       {SolverKind::Enumeration, SolverKind::BranchAndBound, SolverKind::LocalSearch}) {
    try {
      solve_cbal(scores, three_row_p(), target, cfg_of(1.0, 4, kind));
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InfeasibleBudget);
    }
  }
}

TEST_CASE("gap tolerance returns a bounded proof") {
  const RandomInstance inst = make_random_instance(55, 14, 4, 4);
  const ProbabilityMatrix p = validate_probability_matrix(inst.probs);
  const BalanceTarget target = BalanceTarget::validated(inst.target);
  SelectorConfig cfg = cfg_of(1.0, inst.budget, SolverKind::BranchAndBound);
  cfg.gap_tolerance = 0.5;
  const SolveResult relaxed = solve_branch_and_bound(inst.scores, p, target, cfg);
  CHECK((relaxed.proof == SolveProof::GapBounded || relaxed.proof == SolveProof::Optimal));
  const SolveResult exact = solve_enumeration(inst.scores, p, target, inst.budget, 1.0);
  CHECK(relaxed.objective >= exact.objective - 1e-9);
  CHECK(relaxed.objective <= exact.objective + 0.5 * std::max(1.0, std::abs(exact.objective)));
}

TEST_SUITE_END();
