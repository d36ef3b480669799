// SPDX-License-Identifier: Apache-2.0
#include "cbal/verify.hpp"

#include <cmath>
#include <iomanip>
#include <vector>

#include "cbal/balance.hpp"
#include "cbal/instances.hpp"
#include "cbal/learner.hpp"
#include "cbal/selector_greedy.hpp"
#include "cbal/selector_opt.hpp"

namespace cbal {

namespace {

struct CheckReport {
  bool ok = true;
  int failures = 0;
  std::string detail;
};

CheckReport check_solver_vs_enumeration(bool inject_fault) {
  CheckReport rep;
  const double lambdas[] = {0.0, 0.5, 1.0, 5.0};
  int count = 0;
  for (std::uint64_t s = 1; s <= 40; ++s) {
    const RandomInstance inst = make_random_instance(s, 12, 4, 3);
    const ProbabilityMatrix p = validate_probability_matrix(inst.probs);
    const BalanceTarget target = BalanceTarget::validated(inst.target);
    for (double lambda : lambdas) {
      const SolveResult oracle =
          solve_enumeration(inst.scores, p, target, inst.budget, lambda);
      SelectorConfig cfg;
      cfg.lambda = lambda;
      cfg.budget = inst.budget;
      SolveResult bnb = solve_branch_and_bound(inst.scores, p, target, cfg);
      if (inject_fault) bnb.objective += 1e-3;
      ++count;
      if (std::abs(bnb.objective - oracle.objective) > 1e-9) rep.failures++;
    }
  }
  rep.ok = rep.failures == 0;
  rep.detail = std::to_string(count) + " instances";
  return rep;
}

CheckReport check_lambda_zero_reductions() {
  CheckReport rep;
  int count = 0;
  for (std::uint64_t s = 1; s <= 25; ++s) {
    const RandomInstance inst = make_tied_instance(s, 14, 4, 4);
    const ProbabilityMatrix p = validate_probability_matrix(inst.probs);
    const BalanceTarget target = BalanceTarget::validated(inst.target);
    SelectorConfig cfg;
    cfg.lambda = 0.0;
    cfg.budget = inst.budget;
    const auto e = solve_enumeration(inst.scores, p, target, inst.budget, 0.0);
    cfg.solver = SolverKind::BranchAndBound;
    const auto bb = solve_cbal(inst.scores, p, target, cfg);
    cfg.solver = SolverKind::LocalSearch;
    const auto ls = solve_cbal(inst.scores, p, target, cfg);
    ++count;
    if (e.selection.indices() != bb.selection.indices() ||
        e.selection.indices() != ls.selection.indices())
      rep.failures++;

    // Greedy selection with lambda = 0 must reproduce plain farthest-point.
    Rng rng(derive_seed(s, "verify-geom"));
    const int n = p.samples();
    Matrix unlab(n, 3), lab(2, 3);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < 3; ++j) unlab(i, j) = rng.normal();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 3; ++j) lab(i, j) = rng.normal();
    const DistanceMatrix to_labeled = pairwise_distances(unlab, lab);
    const DistanceMatrix among = pairwise_distances(unlab, unlab);
    const auto kc = kcenter_greedy(to_labeled, among, inst.budget);
    const auto gz = greedy_class_balanced(p, to_labeled, among, target, 0.0, inst.budget);
    if (kc.indices() != gz.indices()) rep.failures++;
  }
  rep.ok = rep.failures == 0;
  rep.detail = std::to_string(count) + " instances";
  return rep;
}

CheckReport check_gradient() {
  CheckReport rep;
  int count = 0;
  for (std::uint64_t s = 1; s <= 5; ++s) {
    Rng rng(derive_seed(s, "verify-grad"));
    const int n = 8, d = 3, c = 3;
    Matrix x(n, d);
    std::vector<int> y(n);
    for (int i = 0; i < n; ++i) {
      y[i] = rng.index(c);
      for (int j = 0; j < d; ++j) x(i, j) = rng.normal();
    }
    Learner learner{Matrix(c, d), std::vector<double>(c, 0.0)};
    for (double& w : learner.weights.data()) w = rng.normal() * 0.5;
    const double l2 = 0.01;
    Matrix grad_w;
    std::vector<double> grad_b;
    {
      Matrix probs = kernels::linear_logits(x, learner.weights, learner.bias);
      kernels::softmax_rows_inplace(probs);
      kernels::crossentropy_gradient(x, y, probs, l2, learner.weights, grad_w, grad_b);
    }
    const double h = 1e-5;
    for (int k = 0; k < c; ++k)
      for (int j = 0; j < d; ++j) {
        Learner plus = learner, minus = learner;
        plus.weights(k, j) += h;
        minus.weights(k, j) -= h;
        const double fd = (regularized_crossentropy(x, y, plus, l2) -
                           regularized_crossentropy(x, y, minus, l2)) /
                          (2 * h);
        const double rel =
            std::abs(fd - grad_w(k, j)) / std::max(1e-8, std::abs(fd));
        ++count;
        if (rel > 1e-5) rep.failures++;
      }
  }
  rep.ok = rep.failures == 0;
  rep.detail = std::to_string(count) + " coordinates";
  return rep;
}

CheckReport check_balance_metric() {
  CheckReport rep;
  Rng rng(derive_seed(7, "verify-l1"));
  int count = 0;
  for (int it = 0; it < 200; ++it) {
    const int c = 2 + rng.index(9);
    const int b = 1 + rng.index(40);
    std::vector<int> counts(c, 0);
    for (int k = 0; k < b; ++k) counts[rng.index(c)]++;
    const double score = l1_score(counts, b);
    ++count;
    if (score < 0.0 || score > 1.0 + 1e-12) rep.failures++;
    std::vector<int> shuffled = counts;
    rng.shuffle(shuffled);
    if (std::abs(l1_score(shuffled, b) - score) > 1e-12) rep.failures++;
  }
  rep.ok = rep.failures == 0;
  rep.detail = std::to_string(count) + " count vectors";
  return rep;
}

CheckReport check_scalarization() {
  CheckReport rep;
  const RandomInstance inst = make_random_instance(11, 14, 3, 4);
  const ProbabilityMatrix p = validate_probability_matrix(inst.probs);
  const BalanceTarget target = BalanceTarget::validated(inst.target);
  double prev_balance = std::numeric_limits<double>::infinity();
  double prev_linear = -std::numeric_limits<double>::infinity();
  for (double lambda : {0.0, 0.25, 0.5, 1.0, 2.0, 3.0}) {
    const SolveResult res = solve_enumeration(inst.scores, p, target, inst.budget, lambda);
    if (res.balance_term > prev_balance + 1e-9) rep.failures++;
    if (res.linear_term < prev_linear - 1e-9) rep.failures++;
    prev_balance = res.balance_term;
    prev_linear = res.linear_term;
  }
  rep.ok = rep.failures == 0;
  rep.detail = "6 lambda values";
  return rep;
}

CheckReport check_kernels() {
  CheckReport rep;
  Rng rng(derive_seed(3, "verify-kernels"));
  Matrix p(64, 7);
  for (int i = 0; i < p.rows(); ++i) {
    double sum = 0.0;
    for (int j = 0; j < p.cols(); ++j) {
      p(i, j) = rng.exponential();
      sum += p(i, j);
    }
    for (int j = 0; j < p.cols(); ++j) p(i, j) /= sum;
  }
  Matrix a(40, 5), b(17, 5);
  for (double& v : a.data()) v = rng.normal();
  for (double& v : b.data()) v = rng.normal();

  if (kernels::negative_entropy_rows(p) != kernels::serial::negative_entropy_rows(p))
    rep.failures++;
  if (!(kernels::pairwise_distances(a, b) == kernels::serial::pairwise_distances(a, b)))
    rep.failures++;
  rep.ok = rep.failures == 0;
  rep.detail = "entropy + distance kernels";
  return rep;
}

void print_row(std::ostream& out, const char* name, const CheckReport& rep) {
  out << (rep.ok ? "[PASS] " : "[FAIL] ") << std::left << std::setw(28) << name << " ("
      << rep.detail;
  if (!rep.ok) out << ", " << rep.failures << " failures";
  out << ")\n";
}

}  // namespace

bool run_verification(std::ostream& out, bool inject_fault) {
  bool ok = true;
  const auto run = [&](const char* name, CheckReport rep) {
    print_row(out, name, rep);
    ok = ok && rep.ok;
  };
  run("solver_vs_enumeration", check_solver_vs_enumeration(inject_fault));
  run("lambda_zero_reductions", check_lambda_zero_reductions());
  run("gradient_finite_diff", check_gradient());
  run("l1_score_properties", check_balance_metric());
  run("scalarization_monotone", check_scalarization());
  run("kernel_serial_parallel", check_kernels());
  out << (ok ? "verification passed\n" : "verification FAILED\n");
  return ok;
}

}  // namespace cbal
