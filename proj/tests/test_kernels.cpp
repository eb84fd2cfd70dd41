#include <doctest.h>

#include "core/kernels.hpp"
#include "test_support.hpp"

using namespace tgp;

TEST_SUITE("kernels") {

TEST_CASE("single point gives the 1x1 unit matrix") {
  SqeInputKernel k{{2.5}, 1.0};
  Matrix pts(1, 1);
  pts(0, 0) = 3.7;
  auto m = input_kernel_matrix(k, pts);
  REQUIRE(m.rows() == 1);
  CHECK(m(0, 0) == 1.0);
}

TEST_CASE("unit smoothness at squared distance ln 2 gives correlation one half") {
  SqeInputKernel k{{1.0}, 1.0};
  Matrix pts(2, 1);
  pts(0, 0) = 0.0;
  pts(1, 0) = std::sqrt(std::log(2.0));
  auto m = input_kernel_matrix(k, pts);
  CHECK(m(0, 1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(m(1, 0) == m(0, 1));
  CHECK(m(0, 0) == 1.0);
}

TEST_CASE("entries match the per-entry formula") {
  CounterRng rng(31);
  SqeInputKernel k{{0.7, 2.3}, 1.0};
  Matrix pts = oracle::random_matrix(rng, 5, 2);
  auto m = input_kernel_matrix(k, pts);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      double e = 0.0;
      for (int c = 0; c < 2; ++c) {
        const double diff = pts(i, c) - pts(j, c);
        e += k.inv_length_scales[c] * diff * diff;
      }
      CHECK(m(i, j) == doctest::Approx(std::exp(-e)).epsilon(1e-14));
    }
}

TEST_CASE("translation of all points leaves the matrix unchanged") {
  SqeInputKernel k{{1.5, 0.25}, 1.0};
  Matrix pts(4, 2);
  // dyadic coordinates so the shifted differences are exact in floating point
  const double vals[4][2] = {{0.25, -0.5}, {1.5, 0.75}, {-2.25, 0.125}, {3.0, -1.875}};
  Matrix shifted(4, 2);
  for (int i = 0; i < 4; ++i)
    for (int c = 0; c < 2; ++c) {
      pts(i, c) = vals[i][c];
      shifted(i, c) = vals[i][c] + 4.0;
    }
  auto a = input_kernel_matrix(k, pts);
  auto b = input_kernel_matrix(k, shifted);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(a(i, j) == b(i, j));
}

TEST_CASE("point permutation conjugates the matrix") {
  CounterRng rng(32);
  SqeInputKernel k{{1.0, 2.0}, 1.0};
  Matrix pts = oracle::random_matrix(rng, 4, 2);
  const int perm[4] = {2, 0, 3, 1};
  Matrix ppts(4, 2);
  for (int i = 0; i < 4; ++i)
    for (int c = 0; c < 2; ++c) ppts(i, c) = pts(perm[i], c);
  auto a = input_kernel_matrix(k, pts);
  auto b = input_kernel_matrix(k, ppts);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(b(i, j) == a(perm[i], perm[j]));
}

TEST_CASE("increasing smoothness weakly decreases off-diagonal entries") {
  CounterRng rng(33);
  Matrix pts = oracle::random_matrix(rng, 4, 2);
  SqeInputKernel lo{{0.5, 1.0}, 1.0};
  SqeInputKernel hi{{2.0, 1.0}, 1.0};
  auto a = input_kernel_matrix(lo, pts);
  auto b = input_kernel_matrix(hi, pts);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) CHECK(b(i, j) <= a(i, j));
}

TEST_CASE("entries stay within (0, diagonal]") {
  CounterRng rng(34);
  SqeInputKernel k{{3.0}, 1.0};
  Matrix pts = oracle::random_matrix(rng, 6, 1);
  auto m = input_kernel_matrix(k, pts);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      CHECK(m(i, j) > 0.0);
      CHECK(m(i, j) <= m(i, i));
    }
}

TEST_CASE("invalid inputs are rejected") {
  Matrix pts(2, 1);
  pts(1, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(input_kernel_matrix({{1.0}, 1.0}, pts), validation_error);
  Matrix ok(2, 1);
  ok(1, 0) = 1.0;
  CHECK_THROWS_AS(input_kernel_matrix({{-1.0}, 1.0}, ok), validation_error);
  CHECK_THROWS_AS(input_kernel_matrix({{1.0, 2.0}, 1.0}, ok), validation_error);
}

TEST_CASE("iteration kernel basics") {
  auto one = iter_kernel_matrix({4.0, 2.0}, 1);
  REQUIRE(one.rows() == 1);
  CHECK(one(0, 0) == 4.0);

  auto flat = iter_kernel_matrix({1.0, 1e12}, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(flat(i, j) == doctest::Approx(1.0).epsilon(1e-9));

  auto m = iter_kernel_matrix({2.0, 1.0}, 3);
  CHECK(m(0, 2) == doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-14));
  CHECK(m(0, 0) == 2.0);
  CHECK(m(1, 1) == 2.0);
  CHECK(m(2, 2) == 2.0);

  CHECK_THROWS_AS(iter_kernel_matrix({1.0, 1.0}, 0), validation_error);
  CHECK_THROWS_AS(iter_kernel_matrix({-1.0, 1.0}, 2), validation_error);
}

}  // TEST_SUITE
