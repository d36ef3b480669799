// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cbal/kernels.hpp"
#include "cbal/rng.hpp"

using namespace cbal;

namespace {

Matrix random_stochastic(Rng& rng, int n, int c) {
  Matrix p(n, c);
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < c; ++j) {
      p(i, j) = rng.exponential();
      sum += p(i, j);
    }
    for (int j = 0; j < c; ++j) p(i, j) /= sum;
  }
  return p;
}

Matrix random_dense(Rng& rng, int n, int d) {
  Matrix m(n, d);
  for (double& v : m.data()) v = rng.normal();
  return m;
}

}  // namespace

TEST_SUITE_BEGIN("kernels");

// The OpenMP kernels assign each output element to exactly one writer with a
// fixed inner order, so their results must be bit-identical to the serial
// reference regardless of thread count.
TEST_CASE("parallel kernels match serial bit for bit") {
  Rng rng(404);
  const Matrix p = random_stochastic(rng, 157, 9);
  const Matrix a = random_dense(rng, 61, 8);
  const Matrix b = random_dense(rng, 23, 8);
  const Matrix w = random_dense(rng, 9, 8);
  std::vector<double> bias(9);
  for (double& v : bias) v = rng.normal();
  std::vector<int> labels(61);
  for (int& y : labels) y = rng.index(9);

#ifdef _OPENMP
  const int max_threads = omp_get_max_threads();
  for (int threads : {1, max_threads}) {
    omp_set_num_threads(threads);
#else
  {
#endif
    CHECK(kernels::negative_entropy_rows(p) == kernels::serial::negative_entropy_rows(p));
    CHECK(kernels::pairwise_distances(a, b) == kernels::serial::pairwise_distances(a, b));
    CHECK(kernels::linear_logits(a, w, bias) == kernels::serial::linear_logits(a, w, bias));

    Matrix sm_par = kernels::linear_logits(a, w, bias);
    Matrix sm_ser = sm_par;
    kernels::softmax_rows_inplace(sm_par);
    kernels::serial::softmax_rows_inplace(sm_ser);
    CHECK(sm_par == sm_ser);

    Matrix gw_par, gw_ser;
    std::vector<double> gb_par, gb_ser;
    kernels::crossentropy_gradient(a, labels, sm_par, 1e-3, w, gw_par, gb_par);
    kernels::serial::crossentropy_gradient(a, labels, sm_ser, 1e-3, w, gw_ser, gb_ser);
    CHECK(gw_par == gw_ser);
    CHECK(gb_par == gb_ser);

    CHECK(kernels::row_min(p) == kernels::serial::row_min(p));
  }
}

TEST_CASE("dimension mismatches are rejected") {
  Rng rng(5);
  const Matrix a = random_dense(rng, 4, 3);
  const Matrix b = random_dense(rng, 2, 5);
  CHECK_THROWS_AS(kernels::pairwise_distances(a, b), Error);
  CHECK_THROWS_AS(kernels::linear_logits(a, b, std::vector<double>(2, 0.0)), Error);
}

TEST_SUITE_END();
