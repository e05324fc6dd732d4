#include <doctest.h>

#include <cmath>

#include "bilin/signals.hpp"
#include "oracles.hpp"

using namespace bilin;
using namespace bilin::signals;

TEST_CASE("SparseVector enforces its invariants") {
  CHECK_THROWS_AS(SparseVector(4, {1, 1}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(SparseVector(4, {2, 1}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(SparseVector(4, {4}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(SparseVector(4, {0}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(SparseVector(4, {0, 1}, {1.0}), std::invalid_argument);

  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    const CVector d = oracle::random_sparse(rng, 12, 1 + t % 6);
    const auto sv = SparseVector::from_dense(d);
    CHECK(sv.sparsity() == static_cast<std::size_t>(1 + t % 6));
    CHECK(sv.dense() == d);  // exact round trip at tolerance 0
  }
}

TEST_CASE("linear_convolve examples") {
  SUBCASE("unit impulse is the identity") {
    Rng rng(1);
    const auto y = SparseVector::from_dense(rng.complex_normal_vector(4));
    const auto z = linear_convolve(SparseVector::basis(4, 0), y);
    CHECK(z.dim() == 7);
    CVector expected = CVector::Zero(7);
    expected.head(4) = y.dense();
    CHECK((z.dense() - expected).norm() == doctest::Approx(0.0));
  }
  SUBCASE("(1,1) * (1,-1) cancels the middle tap") {
    const SparseVector x(2, {0, 1}, {1.0, 1.0});
    const SparseVector y(2, {0, 1}, {1.0, -1.0});
    const auto z = linear_convolve(x, y);
    CHECK(z.dim() == 3);
    CHECK(z.support() == std::vector<std::size_t>{0, 2});
    CHECK(z.at(0) == cplx(1.0));
    CHECK(z.at(2) == cplx(-1.0));
  }
  SUBCASE("norm is bounded by sqrt(min(s,f)) |x| |y|") {
    Rng rng(2);
    for (int t = 0; t < 100; ++t) {
      const auto x = SparseVector::from_dense(oracle::random_sparse(rng, 16, 3)).normalized();
      const auto y = SparseVector::from_dense(oracle::random_sparse(rng, 16, 3)).normalized();
      CHECK(linear_convolve(x, y).norm() <= std::sqrt(3.0) + 1e-12);
    }
  }
}

TEST_CASE("circular_convolve examples") {
  const SparseVector x(4, {0, 1}, {1.0, 1.0});
  const SparseVector y(4, {0, 2}, {1.0, 1.0});
  const auto z = circular_convolve(x, y, 4);
  CHECK(z.support() == std::vector<std::size_t>{0, 1, 2, 3});
  for (std::size_t k = 0; k < 4; ++k) CHECK(z.at(k) == cplx(1.0));

  CHECK_THROWS_AS(circular_convolve(x, SparseVector::basis(5, 0), 4), std::invalid_argument);

  Rng rng(3);
  const CVector yd = rng.complex_normal_vector(6);
  const auto ys = SparseVector::from_dense(yd);
  for (std::size_t j = 0; j < 6; ++j) {
    const auto shifted = circular_convolve(SparseVector::basis(6, j), ys, 6);
    CHECK((shifted.dense() - ys.cyclic_shift(j).dense()).norm() < 1e-14);
  }

  // zero-padded operands: circular equals linear on [2n'-1]
  const std::size_t np = 5, n = 2 * np - 1;
  for (int t = 0; t < 20; ++t) {
    CVector a = CVector::Zero(n), b = CVector::Zero(n);
    a.head(np) = oracle::random_sparse(rng, np, 2);
    b.head(np) = oracle::random_sparse(rng, np, 3);
    const auto circ = circular_convolve(SparseVector::from_dense(a), SparseVector::from_dense(b), n);
    const auto lin = linear_convolve(SparseVector::from_dense(CVector(a.head(np))),
                                     SparseVector::from_dense(CVector(b.head(np))));
    CHECK((circ.dense() - lin.dense()).norm() < 1e-13);
  }
}

TEST_CASE("circular_correlate examples") {
  SUBCASE("correlation with e_0 is the identity") {
    Rng rng(4);
    const auto x = SparseVector::from_dense(rng.complex_normal_vector(7));
    const auto z = circular_correlate(x, SparseVector::basis(7, 0), 7);
    CHECK((z.dense() - x.dense()).norm() < 1e-15);
  }
  SUBCASE("n = 3, x = (1, i, 0), y = e_0") {
    const SparseVector x(3, {0, 1}, {1.0, cplx(0, 1)});
    const auto z = circular_correlate(x, SparseVector::basis(3, 0), 3);
    CHECK(z.dense() == x.dense());
    CHECK(oracle::direct_circular_correlation(x.dense(), SparseVector::basis(3, 0).dense()) == x.dense());
  }
  SUBCASE("time-domain and Fourier routes agree") {
    Rng rng(5);
    for (std::size_t n : {3u, 8u, 13u, 32u}) {
      const CVector a = rng.complex_normal_vector(n), b = rng.complex_normal_vector(n);
      const CVector direct = oracle::direct_circular_correlation(a, b);
      const CVector time = circular_correlate(SparseVector::from_dense(a), SparseVector::from_dense(b), n).dense();
      const CVector fourier = circular_correlate_fourier(a, b);
      CHECK(oracle::rel_err(time, direct) < 1e-12);
      CHECK(oracle::rel_err(fourier, direct) < 1e-12);
    }
  }
  SUBCASE("F(x o x) = sqrt(n) |F x|^2") {
    Rng rng(6);
    const std::size_t n = 11;
    const CVector x = rng.complex_normal_vector(n);
    const CVector lhs = dft(circular_correlate_fourier(x, x));
    const CVector fx = dft(x);
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(std::abs(lhs[k] - std::sqrt(11.0) * std::norm(fx[k])) < 1e-11);
    }
  }
}

TEST_CASE("time_reverse") {
  CHECK(time_reverse(SparseVector::basis(5, 0)).dense() == SparseVector::basis(5, 0).dense());
  CVector v(4);
  v << 1.0, 2.0, 3.0, 4.0;
  CVector expected(4);
  expected << 1.0, 4.0, 3.0, 2.0;
  CHECK(time_reverse(v) == expected);
  CHECK(time_reverse(SparseVector::from_dense(v)).dense() == expected);

  Rng rng(8);
  for (std::size_t n : {1u, 2u, 5u, 16u}) {
    const CVector x = rng.complex_normal_vector(n);
    CHECK(time_reverse(time_reverse(x)) == x);
    CHECK(std::abs(time_reverse(x).norm() - x.norm()) < 1e-15);
    // Gamma = F^2
    CHECK(oracle::rel_err(dft(dft(x)), time_reverse(x)) < 1e-12);
  }
}

TEST_CASE("dft is unitary and matches the direct sum") {
  Rng rng(9);
  for (std::size_t n : {1u, 2u, 7u, 8u, 30u, 64u}) {
    const CVector x = rng.complex_normal_vector(n);
    const CVector fx = dft(x);
    CHECK(std::abs(fx.norm() - x.norm()) <= 1e-12 * x.norm());
    CHECK(oracle::rel_err(fx, oracle::dense_dft(x)) < 1e-12);
    CHECK(oracle::rel_err(idft(fx), x) < 1e-12);
  }
  const CVector delta = SparseVector::basis(6, 0).dense();
  const CVector fd = dft(delta);
  for (Eigen::Index k = 0; k < 6; ++k) CHECK(std::abs(fd[k] - 1.0 / std::sqrt(6.0)) < 1e-15);
}

TEST_CASE("convolution theorem F(x (*) y) = sqrt(n) F x .* F y, n = 8") {
  Rng rng(10);
  const CVector x = rng.complex_normal_vector(8), y = rng.complex_normal_vector(8);
  const CVector lhs = oracle::dense_dft(oracle::direct_circular_convolution(x, y));
  const CVector rhs = std::sqrt(8.0) * dft(x).cwiseProduct(dft(y));
  CHECK(oracle::rel_err(lhs, rhs) < 1e-12);
}

TEST_CASE("properties: commutativity, FFT/direct equivalence, translation invariance") {
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng.uniform_index(64);
    const std::size_t s = 1 + rng.uniform_index(n);
    const std::size_t f = 1 + rng.uniform_index(n);
    const auto x = SparseVector::from_dense(oracle::random_sparse(rng, n, s));
    const auto y = SparseVector::from_dense(oracle::random_sparse(rng, n, f));
    const CVector xy = linear_convolve(x, y).dense();
    const CVector yx = linear_convolve(y, x).dense();
    CHECK((xy - yx).norm() <= 1e-14 * std::max(1.0, xy.norm()) * 10);
    CHECK(oracle::rel_err(xy, oracle::direct_linear_convolution(x.dense(), y.dense())) < 1e-11);

    const CVector cxy = circular_convolve(x, y, n).dense();
    CHECK(oracle::rel_err(cxy, oracle::direct_circular_convolution(x.dense(), y.dense())) < 1e-11);
    CHECK(oracle::rel_err(cxy, circular_convolve(y, x, n).dense()) < 1e-13);

    // dense kernels share the same contract
    CHECK(oracle::rel_err(linear_convolve(x.dense(), y.dense()), xy) < 1e-11);

    // translating x's support inside a larger ambient space leaves |x * y| unchanged
    const std::size_t shift = rng.uniform_index(9);
    const auto moved = x.with_dim(n + 8).cyclic_shift(shift);
    CHECK(std::abs(linear_convolve(moved, y).norm() - linear_convolve(x, y).norm()) <
          1e-12 * std::max(1.0, xy.norm()));
  }
}
