// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cmath>

#include "cbal/balance.hpp"
#include "cbal/rng.hpp"
#include "cbal/selector_greedy.hpp"

using namespace cbal;

namespace {

Matrix random_dense(Rng& rng, int n, int d) {
  Matrix m(n, d);
  for (double& v : m.data()) v = rng.normal();
  return m;
}

Matrix noisy_onehot_probs(Rng& rng, const std::vector<int>& labels, int c, double confidence) {
  Matrix p(static_cast<int>(labels.size()), c);
  for (int i = 0; i < p.rows(); ++i) {
    double sum = 0.0;
    for (int j = 0; j < c; ++j) {
      p(i, j) = (1.0 - confidence) * (0.2 + rng.uniform01());
      sum += p(i, j);
    }
    for (int j = 0; j < c; ++j) p(i, j) *= (1.0 - confidence) / sum;
    p(i, labels[i]) += confidence;
    sum = 0.0;
    for (int j = 0; j < c; ++j) sum += p(i, j);
    for (int j = 0; j < c; ++j) p(i, j) /= sum;
  }
  return p;
}

}  // namespace

TEST_SUITE_BEGIN("selector_greedy");

TEST_CASE("pairwise distance basics") {
  SUBCASE("identical single points") {
    const Matrix a = Matrix::from_rows({{1.0, 2.0}});
    const DistanceMatrix d = pairwise_distances(a, a);
    CHECK(d(0, 0) == doctest::Approx(0.0).epsilon(1e-15));
  }
  SUBCASE("3-4-5 triangle") {
    const Matrix u = Matrix::from_rows({{0.0, 0.0}});
    const Matrix l = Matrix::from_rows({{3.0, 4.0}});
    CHECK(pairwise_distances(u, l)(0, 0) == doctest::Approx(5.0).epsilon(1e-12));
  }
  SUBCASE("symmetry through the transposed call") {
    Rng rng(12);
    const Matrix a = random_dense(rng, 4, 2);
    const Matrix b = random_dense(rng, 3, 2);
    const DistanceMatrix ab = pairwise_distances(a, b);
    const DistanceMatrix ba = pairwise_distances(b, a);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 3; ++j) CHECK(ab(i, j) == doctest::Approx(ba(j, i)).epsilon(1e-12));
  }
  SUBCASE("dimension mismatch and empty labeled side") {
    Rng rng(13);
    CHECK_THROWS_AS(pairwise_distances(random_dense(rng, 3, 2), random_dense(rng, 2, 3)), Error);
    CHECK_THROWS_AS(pairwise_distances(random_dense(rng, 3, 2), Matrix(0, 2)), Error);
  }
}

TEST_CASE("kcenter takes the max-min-distance sample first") {
  // Labeled point at 0; unlabeled at 1, 2, 4 on a line.
  const Matrix labeled = Matrix::from_rows({{0.0}});
  const Matrix unlabeled = Matrix::from_rows({{1.0}, {2.0}, {4.0}});
  const DistanceMatrix to_labeled = pairwise_distances(unlabeled, labeled);
  const DistanceMatrix among = pairwise_distances(unlabeled, unlabeled);

  SUBCASE("single step") {
    const SelectionVector z = kcenter_greedy(to_labeled, among, 1);
    CHECK(z.indices() == std::vector<int>{2});  // the point at coordinate 4
  }
  SUBCASE("hand-traced two steps: picks 4 then 2") {
    GreedyTrace trace;
    const SelectionVector z = kcenter_greedy(to_labeled, among, 2, &trace);
    CHECK(z.indices() == std::vector<int>{1, 2});  // coordinates 2 and 4
    REQUIRE(trace.shapes.size() == 2);
    CHECK(trace.shapes[0] == std::pair<int, int>{2, 2});
    CHECK(trace.shapes[1] == std::pair<int, int>{1, 3});
  }
  SUBCASE("budget larger than the pool") {
    CHECK_THROWS_AS(kcenter_greedy(to_labeled, among, 4), Error);
  }
}

TEST_CASE("ties resolve to the lowest index") {
  const Matrix labeled = Matrix::from_rows({{0.0, 0.0}});
  // Two candidates exactly equidistant from the labeled point.
  const Matrix unlabeled = Matrix::from_rows({{1.0, 0.0}, {0.0, 1.0}, {0.25, 0.0}});
  const DistanceMatrix to_labeled = pairwise_distances(unlabeled, labeled);
  const DistanceMatrix among = pairwise_distances(unlabeled, unlabeled);
  const SelectionVector z = kcenter_greedy(to_labeled, among, 1);
  CHECK(z.indices() == std::vector<int>{0});
}

TEST_CASE("lambda zero greedy is bit-identical to kcenter") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    Rng rng(derive_seed(s, "greedy-eq"));
    const int n = 5 + rng.index(20);
    const int l = 1 + rng.index(5);
    const int c = 2 + rng.index(4);
    const int b = 1 + rng.index(n);
    const Matrix unlabeled = random_dense(rng, n, 3);
    const Matrix labeled = random_dense(rng, l, 3);
    std::vector<int> labels(n);
    for (int& y : labels) y = rng.index(c);
    const ProbabilityMatrix p = validate_probability_matrix(noisy_onehot_probs(rng, labels, c, 0.7));
    const BalanceTarget target =
        BalanceTarget::validated(std::vector<double>(c, static_cast<double>(b) / c));

    const DistanceMatrix to_labeled = pairwise_distances(unlabeled, labeled);
    const DistanceMatrix among = pairwise_distances(unlabeled, unlabeled);
    const SelectionVector kc = kcenter_greedy(to_labeled, among, b);
    const SelectionVector gz = greedy_class_balanced(p, to_labeled, among, target, 0.0, b);
    CHECK(kc.indices() == gz.indices());
  }
}

TEST_CASE("dominant balance weight selects the target class regardless of distances") {
  // Frozen by evaluating both steps' costs by hand: step 1 picks row 1
  // (l1 1.1 vs 2.8 and 1.2), step 2 picks row 2 (l1 0.3 vs 1.9).
  const ProbabilityMatrix p =
      validate_probability_matrix(Matrix::from_rows({{0.9, 0.1}, {0.05, 0.95}, {0.1, 0.9}}));
  const BalanceTarget target = BalanceTarget::validated({0.0, 2.0});
  Rng rng(3);
  const Matrix unlabeled = random_dense(rng, 3, 2);
  const Matrix labeled = random_dense(rng, 2, 2);
  const DistanceMatrix to_labeled = pairwise_distances(unlabeled, labeled);
  const DistanceMatrix among = pairwise_distances(unlabeled, unlabeled);
  const SelectionVector z = greedy_class_balanced(p, to_labeled, among, target, 1e6, 2);
  CHECK(z.indices() == std::vector<int>{1, 2});
}

TEST_CASE("selections are feasible and deterministic") {
  Rng rng(9);
  const int n = 30, c = 3, b = 7;
  const Matrix unlabeled = random_dense(rng, n, 4);
  const Matrix labeled = random_dense(rng, 5, 4);
  std::vector<int> labels(n);
  for (int& y : labels) y = rng.index(c);
  const ProbabilityMatrix p = validate_probability_matrix(noisy_onehot_probs(rng, labels, c, 0.8));
  const BalanceTarget target = BalanceTarget::validated({3.0, 2.0, 2.0});
  const DistanceMatrix to_labeled = pairwise_distances(unlabeled, labeled);
  const DistanceMatrix among = pairwise_distances(unlabeled, unlabeled);

  const SelectionVector first = greedy_class_balanced(p, to_labeled, among, target, 0.8, b);
  CHECK(first.count() == b);
  for (int idx : first.indices()) {
    CHECK(idx >= 0);
    CHECK(idx < n);
  }
#ifdef _OPENMP
  omp_set_num_threads(1);
#endif
  const SelectionVector second = greedy_class_balanced(p, to_labeled, among, target, 0.8, b);
#ifdef _OPENMP
  omp_set_num_threads(omp_get_max_threads());
#endif
  CHECK(first.indices() == second.indices());
}

TEST_CASE("working distance matrix shrinks rows and grows columns") {
  Rng rng(17);
  const int n = 12, l = 3, b = 5;
  const Matrix unlabeled = random_dense(rng, n, 3);
  const Matrix labeled = random_dense(rng, l, 3);
  const DistanceMatrix to_labeled = pairwise_distances(unlabeled, labeled);
  const DistanceMatrix among = pairwise_distances(unlabeled, unlabeled);
  GreedyTrace trace;
  kcenter_greedy(to_labeled, among, b, &trace);
  REQUIRE(trace.shapes.size() == static_cast<size_t>(b));
  for (int step = 0; step < b; ++step) {
    CHECK(trace.shapes[step].first == n - step - 1);
    CHECK(trace.shapes[step].second == l + step + 1);
  }
  CHECK(trace.shapes.back() == std::pair<int, int>{n - b, l + b});
}

TEST_CASE("mean selection balance improves as lambda grows") {
  const std::vector<double> lambdas = {0.0, 0.1, 1.0, 10.0};
  std::vector<double> mean_scores(lambdas.size(), 0.0);
  const int instances = 100;
  for (int s = 0; s < instances; ++s) {
    Rng rng(derive_seed(s, "greedy-mono"));
    const int c = 4;
    const int n = 40;
    const int b = 8;
    // Imbalanced ground truth so the unbalanced selection has room to be bad.
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = rng.uniform01() < 0.7 ? 0 : 1 + rng.index(c - 1);
    const Matrix unlabeled = random_dense(rng, n, 3);
    const Matrix labeled = random_dense(rng, 4, 3);
    const ProbabilityMatrix p =
        validate_probability_matrix(noisy_onehot_probs(rng, labels, c, 0.8));
    const BalanceTarget target =
        BalanceTarget::validated(std::vector<double>(c, static_cast<double>(b) / c));
    const DistanceMatrix to_labeled = pairwise_distances(unlabeled, labeled);
    const DistanceMatrix among = pairwise_distances(unlabeled, unlabeled);
    for (size_t li = 0; li < lambdas.size(); ++li) {
      const SelectionVector z =
          greedy_class_balanced(p, to_labeled, among, target, lambdas[li], b);
      std::vector<int> hist(c, 0);
      for (int idx : z.indices()) hist[labels[idx]]++;
      mean_scores[li] += l1_score(hist, b) / instances;
    }
  }
  // Statistical claim on the means, small slack for sampling noise.
  for (size_t li = 1; li < lambdas.size(); ++li)
    CHECK(mean_scores[li] <= mean_scores[li - 1] + 1e-3);
}

TEST_SUITE_END();
