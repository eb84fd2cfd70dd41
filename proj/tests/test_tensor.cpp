#include <doctest.h>

#include "core/tensor.hpp"
#include "test_support.hpp"

using namespace tgp;

namespace {

TensorK random_tensor(CounterRng& rng, std::vector<int> dims) {
  TensorK t(dims);
  for (size_t i = 0; i < t.size(); ++i) t[i] = rng.next_normal();
  return t;
}

// Brute-force mode product by explicit index loops, for the contraction oracle.
TensorK mode_product_loops(const TensorK& t, const Matrix& m, int mode) {
  std::vector<int> od = t.dims();
  od[mode] = m.rows();
  TensorK out(od, 0.0);
  std::vector<int> idx(t.order(), 0);
  for (size_t flat = 0; flat < t.size(); ++flat) {
    size_t rem = flat;
    for (int j = 0; j < t.order(); ++j) {
      idx[j] = static_cast<int>(rem % t.dim(j));
      rem /= t.dim(j);
    }
    for (int a = 0; a < m.rows(); ++a) {
      std::vector<int> oidx = idx;
      oidx[mode] = a;
      size_t oflat = 0;
      for (int j = t.order() - 1; j >= 0; --j) oflat = oflat * od[j] + oidx[j];
      out[oflat] += m(a, idx[mode]) * t[flat];
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("tensor") {

TEST_CASE("mode product with identity is the identity map") {
  CounterRng rng(11);
  TensorK t = random_tensor(rng, {2, 3, 4});
  TensorK r = mode_product(t, Matrix::identity(3), 1);
  REQUIRE(r.dims() == t.dims());
  for (size_t i = 0; i < t.size(); ++i) CHECK(r[i] == t[i]);
}

TEST_CASE("mode-0 product on a matrix is the ordinary matrix product") {
  TensorK t({2, 2}, {1.0, 3.0, 2.0, 4.0});  // column-major [[1,2],[3,4]]
  Matrix m(2, 2);
  m(0, 0) = 5;
  m(0, 1) = 6;
  m(1, 0) = 7;
  m(1, 1) = 8;
  TensorK r = mode_product(t, m, 0);
  // m * t with t(i,j) at flat i + 2j
  CHECK(r[0] == doctest::Approx(5 * 1 + 6 * 3));
  CHECK(r[1] == doctest::Approx(7 * 1 + 8 * 3));
  CHECK(r[2] == doctest::Approx(5 * 2 + 6 * 4));
  CHECK(r[3] == doctest::Approx(7 * 2 + 8 * 4));
}

TEST_CASE("mode product equals the triple-loop contraction") {
  CounterRng rng(12);
  TensorK t = random_tensor(rng, {2, 3, 2});
  Matrix m = oracle::random_matrix(rng, 4, 3);
  TensorK fast = mode_product(t, m, 1);
  TensorK slow = mode_product_loops(t, m, 1);
  REQUIRE(fast.dims() == slow.dims());
  for (size_t i = 0; i < fast.size(); ++i) CHECK(fast[i] == doctest::Approx(slow[i]).epsilon(1e-12));
}

TEST_CASE("mode product reports both shapes on mismatch") {
  TensorK t({2, 3});
  Matrix m(4, 4);
  CHECK_THROWS_WITH_AS(mode_product(t, m, 1), doctest::Contains("4x4"), validation_error);
  CHECK_THROWS_WITH_AS(mode_product(t, m, 1), doctest::Contains("2x3"), validation_error);
}

TEST_CASE("vectorize layout") {
  CHECK(vectorize(TensorK({1, 1, 1}, {7.5})) == std::vector<double>{7.5});
  // 2x2 identity matrix in mode-1-fastest order
  TensorK eye({2, 2}, {1.0, 0.0, 0.0, 1.0});
  CHECK(vectorize(eye) == std::vector<double>({1, 0, 0, 1}));
}

TEST_CASE("vectorize round-trips through unvectorize") {
  CounterRng rng(13);
  TensorK t = random_tensor(rng, {2, 3});
  TensorK back = unvectorize(t.dims(), vectorize(t));
  for (size_t i = 0; i < t.size(); ++i) CHECK(back[i] == t[i]);
}

TEST_CASE("frobenius_sq") {
  CHECK(frobenius_sq(TensorK({2, 2}, 0.0)) == 0.0);
  CHECK(frobenius_sq(TensorK({2, 2}, {1, 0, 0, 1})) == 2.0);
  CounterRng rng(14);
  TensorK t = random_tensor(rng, {3, 4});
  const auto v = vectorize(t);
  double dot = 0.0;
  for (double x : v) dot += x * x;
  CHECK(frobenius_sq(t) == doctest::Approx(dot).epsilon(1e-14));
}

TEST_CASE("distinct-mode products commute") {
  CounterRng rng(15);
  for (int rep = 0; rep < 5; ++rep) {
    TensorK t = random_tensor(rng, {3, 2, 4});
    Matrix a = oracle::random_matrix(rng, 3, 3);
    Matrix b = oracle::random_matrix(rng, 2, 4);
    TensorK ab = mode_product(mode_product(t, a, 0), b, 2);
    TensorK ba = mode_product(mode_product(t, b, 2), a, 0);
    for (size_t i = 0; i < ab.size(); ++i)
      CHECK(ab[i] == doctest::Approx(ba[i]).epsilon(1e-12));
  }
}

TEST_CASE("orthogonal mode products preserve the frobenius norm") {
  CounterRng rng(16);
  // Gram-Schmidt an orthogonal 4x4
  Matrix q = oracle::random_matrix(rng, 4, 4);
  for (int c = 0; c < 4; ++c) {
    for (int p = 0; p < c; ++p) {
      double dot = 0.0;
      for (int r = 0; r < 4; ++r) dot += q(r, c) * q(r, p);
      for (int r = 0; r < 4; ++r) q(r, c) -= dot * q(r, p);
    }
    double norm = 0.0;
    for (int r = 0; r < 4; ++r) norm += q(r, c) * q(r, c);
    norm = std::sqrt(norm);
    for (int r = 0; r < 4; ++r) q(r, c) /= norm;
  }
  TensorK t = random_tensor(rng, {3, 4, 2});
  TensorK rotated = mode_product(t, q, 1);
  CHECK(frobenius_sq(rotated) == doctest::Approx(frobenius_sq(t)).epsilon(1e-10));
}

TEST_CASE("slices extract and re-insert") {
  CounterRng rng(17);
  TensorK t = random_tensor(rng, {2, 3, 4});
  TensorK s = get_slice(t, {2, 1});
  REQUIRE(s.dims() == std::vector<int>({2, 3}));
  TensorK t2 = t;
  set_slice(t2, {2, 1}, s);
  for (size_t i = 0; i < t.size(); ++i) CHECK(t2[i] == t[i]);

  CHECK_THROWS_AS(get_slice(t, {3, 0}), validation_error);
  CHECK_THROWS_AS(get_slice(t, {1, 3}), validation_error);
}

TEST_CASE("constructor validates shape") {
  CHECK_THROWS_AS(TensorK({2, 0}), validation_error);
  CHECK_THROWS_AS(TensorK({2, 2}, {1.0, 2.0}), validation_error);
  CHECK_THROWS_AS(TensorK(std::vector<int>{}), validation_error);
}

}  // TEST_SUITE
