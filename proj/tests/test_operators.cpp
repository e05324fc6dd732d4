#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "bilin/operators.hpp"
#include "bilin/random.hpp"
#include "oracles.hpp"

using namespace bilin;
using namespace bilin::operators;

namespace {

// |<Ax, w> - <x, A^* w>| relative to |x||w||A|
double adjoint_gap(const LinearOperator& a, Rng& rng) {
  const CVector x = rng.complex_normal_vector(a.cols());
  const CVector w = rng.complex_normal_vector(a.rows());
  const cplx lhs = w.dot(a.apply(x));
  const cplx rhs = a.adjoint(w).dot(x);
  return std::abs(lhs - rhs) / (x.norm() * w.norm());
}

double mean_sq_norm(const std::vector<double>& v, double& se) {
  double mean = 0.0;
  for (double d : v) mean += d;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double d : v) var += (d - mean) * (d - mean);
  var /= static_cast<double>(v.size() - 1);
  se = std::sqrt(var / static_cast<double>(v.size()));
  return mean;
}

}  // namespace

TEST_CASE("adjoint identity for every ensemble") {
  Rng rng(100);
  std::vector<LinearOperator> ops = {
      identity_operator(9),
      gaussian_operator(7, 12, 3),
      sign_diagonal(10, 4),
      sign_diagonal(10, 4, Distribution::gaussian),
      partial_circulant_demodulator(5, 16, 5, std::uint64_t{6}),
      partial_circulant_demodulator(4, 13, 5, std::vector<std::size_t>{0, 3, 7, 12}, Distribution::gaussian),
      universal_random_demodulator(8, 30, 7, 8, std::uint64_t{9}),
      weyl_heisenberg(2, 3, 7),
      weyl_heisenberg(-1, 9, 5),
      dft_operator(12),
      compose(gaussian_operator(4, 6, 1), dft_operator(6)),
      zero_padded_convolution_map(4).lifted_operator(),
      circular_convolution_map(5).lifted_operator(),
      spreading_map(3).lifted_operator(),
  };
  for (const auto& op : ops) {
    for (int t = 0; t < 5; ++t) CHECK(adjoint_gap(op, rng) < 1e-10);
    // materialized adjoint equals the conjugate transpose
    const CMatrix a = op.materialize();
    const CVector w = rng.complex_normal_vector(op.rows());
    CHECK((op.adjoint(w) - a.adjoint() * w).norm() < 1e-10 * std::max(1.0, w.norm()));
  }
}

TEST_CASE("length mismatches throw") {
  const auto g = gaussian_operator(3, 5, 1);
  CHECK_THROWS_AS(g.apply(CVector::Zero(4)), std::invalid_argument);
  CHECK_THROWS_AS(g.adjoint(CVector::Zero(5)), std::invalid_argument);
  CHECK_THROWS_AS(partial_circulant_demodulator(6, 5, 1, std::uint64_t{1}), std::invalid_argument);
  CHECK_THROWS_AS(partial_circulant_demodulator(2, 5, 1, std::vector<std::size_t>{1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(compose(g, g), std::invalid_argument);
  const auto b = zero_padded_convolution_map(3);
  CHECK_THROWS_AS(b.apply(CVector::Zero(3), CVector::Zero(2)), std::invalid_argument);
}

TEST_CASE("seeded construction is deterministic and descriptors rebuild the operator") {
  const auto a = universal_random_demodulator(6, 20, 11, 12, std::uint64_t{13});
  const auto b = universal_random_demodulator(6, 20, 11, 12, std::uint64_t{13});
  CHECK(a.materialize() == b.materialize());
  CHECK(make_operator(a.descriptor()).materialize() == a.materialize());
  CHECK(a.descriptor().omega.size() == 6);
  CHECK(std::is_sorted(a.descriptor().omega.begin(), a.descriptor().omega.end()));

  const auto g = gaussian_operator(5, 8, 99);
  CHECK(make_operator(g.descriptor()).materialize() == g.materialize());
  CHECK(gaussian_operator(5, 8, 98).materialize() != g.materialize());

  const auto w = weyl_heisenberg(3, 1, 4);
  CHECK(make_operator(w.descriptor()).materialize() == w.materialize());
  CHECK(distribution_from_string(to_string(Distribution::gaussian)) == Distribution::gaussian);
  CHECK_THROWS_AS(distribution_from_string("uniform"), std::invalid_argument);
}

TEST_CASE("Gaussian ensemble preserves norms in expectation and on a point cloud") {
  const std::size_t m = 32, n = 64;
  Rng rng(200);
  const CVector x = rng.complex_normal_vector(n).normalized();
  std::vector<double> sq;
  for (std::uint64_t s = 0; s < 2000; ++s) sq.push_back(gaussian_operator(m, n, 1000 + s).apply(x).squaredNorm());
  double se = 0.0;
  const double mean = mean_sq_norm(sq, se);
  CHECK(std::abs(mean - 1.0) < 3.0 * se);

  // m = 96, n = 256, 100 unit vectors: distortion well below 1/2
  const auto phi = gaussian_operator(96, 256, 7);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const CVector v = rng.complex_normal_vector(256).normalized();
    worst = std::max(worst, std::abs(phi.apply(v).squaredNorm() - 1.0));
  }
  CHECK(worst <= 0.5);
}

TEST_CASE("sign diagonal is a real involution") {
  const auto d = sign_diagonal(50, 3);
  const CMatrix a = d.materialize();
  CHECK((a * a - CMatrix::Identity(50, 50)).norm() < 1e-15);
  CHECK((a.adjoint() * a - CMatrix::Identity(50, 50)).norm() < 1e-15);
  int plus = 0;
  for (Eigen::Index i = 0; i < 50; ++i) {
    CHECK(a(i, i).imag() == 0.0);
    CHECK(std::abs(a(i, i).real()) == 1.0);
    plus += a(i, i).real() > 0 ? 1 : 0;
  }
  CHECK(plus > 10);
  CHECK(plus < 40);

  // Gaussian diagonal: Kolmogorov-Smirnov distance to N(0,1)
  const RVector g = sign_diagonal(4000, 5, Distribution::gaussian).materialize().diagonal().real();
  std::vector<double> v(g.data(), g.data() + g.size());
  std::sort(v.begin(), v.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double cdf = 0.5 * std::erfc(-v[i] / std::sqrt(2.0));
    ks = std::max({ks, std::abs(cdf - static_cast<double>(i) / v.size()),
                   std::abs(cdf - static_cast<double>(i + 1) / v.size())});
  }
  CHECK(ks < 1.63 / std::sqrt(4000.0));  // 1% level
}

TEST_CASE("partial circulant matches its dense definition") {
  for (std::size_t n : {1u, 5u, 8u, 17u, 32u}) {
    const std::size_t m = std::max<std::size_t>(1, n / 2);
    const auto op = partial_circulant_demodulator(m, n, 21 + n, std::uint64_t{n});
    const auto& omega = op.descriptor().omega;
    // recover eta from a materialized full circulant
    const CMatrix full = partial_circulant_demodulator(n, n, 21 + n, [n] {
      std::vector<std::size_t> r(n);
      for (std::size_t i = 0; i < n; ++i) r[i] = i;
      return r;
    }()).materialize() * std::sqrt(static_cast<double>(n));
    const CVector eta = full.col(0);  // C e_0 = eta
    for (Eigen::Index i = 0; i < eta.size(); ++i) CHECK(std::abs(std::abs(eta[i]) - 1.0) < 1e-12);
    CMatrix dense(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t l = 0; l < n; ++l)
        dense(r, l) = eta[static_cast<Eigen::Index>((omega[r] + n - l) % n)] / std::sqrt(static_cast<double>(m));
    CHECK((op.materialize() - dense).norm() < 1e-12);
    // rows of the full circulant are cyclic shifts of row 0
    for (Eigen::Index r = 1; r < full.rows(); ++r)
      for (Eigen::Index l = 0; l < full.cols(); ++l)
        CHECK(std::abs(full(r, l) - full(0, (l - r + full.cols()) % full.cols())) < 1e-12);
  }
}

TEST_CASE("random demodulator preserves norms in expectation") {
  const std::size_t m = 16, n = 64;
  Rng rng(300);
  const CVector x = rng.complex_normal_vector(n).normalized();
  std::vector<double> sq;
  for (std::uint64_t s = 0; s < 2000; ++s) {
    sq.push_back(universal_random_demodulator(m, n, 2 * s + 1, 2 * s + 2, std::uint64_t{s}).apply(x).squaredNorm());
  }
  double se = 0.0;
  const double mean = mean_sq_norm(sq, se);
  CHECK(std::abs(mean - 1.0) < 3.0 * se);
}

TEST_CASE("Weyl-Heisenberg operators") {
  const std::size_t n = 4;
  CHECK((weyl_heisenberg(0, 0, n).materialize() - CMatrix::Identity(4, 4)).norm() == 0.0);
  CHECK((weyl_heisenberg(4, -4, n).materialize() - CMatrix::Identity(4, 4)).norm() == 0.0);

  // j = (0, 1): (Psi y)_k = y_{k+1}
  CVector y(4);
  y << 1.0, 2.0, 3.0, 4.0;
  CVector shifted(4);
  shifted << 2.0, 3.0, 4.0, 1.0;
  CHECK((weyl_heisenberg(0, 1, n).apply(y) - shifted).norm() < 1e-15);

  // j = (1, 0): modulation e^{i 2 pi k / n}
  const CVector mod = weyl_heisenberg(1, 0, n).apply(CVector::Ones(4));
  for (Eigen::Index k = 0; k < 4; ++k) CHECK(std::abs(mod[k] - std::polar(1.0, 2.0 * kPi * k / 4.0)) < 1e-15);

  // Hilbert-Schmidt orthogonality <Psi_j, Psi_j'> = n delta, and unitarity
  std::vector<CMatrix> all;
  for (long long a = 0; a < 4; ++a)
    for (long long b = 0; b < 4; ++b) all.push_back(weyl_heisenberg(a, b, n).materialize());
  for (std::size_t p = 0; p < all.size(); ++p) {
    CHECK((all[p].adjoint() * all[p] - CMatrix::Identity(4, 4)).norm() < 1e-14);
    for (std::size_t q = 0; q < all.size(); ++q) {
      const cplx ip = (all[p].adjoint() * all[q]).trace();
      CHECK(std::abs(ip - (p == q ? cplx(4.0) : cplx(0.0))) < 1e-12);
    }
  }
}

TEST_CASE("spreading channel") {
  const std::size_t n = 4;
  Rng rng(400);
  const CVector y = rng.complex_normal_vector(n);

  // x on {0} x {0, 2}: sum of two cyclic shifts
  const signals::SparseVector x(n * n, {0, 2}, {1.0, 1.0});
  CVector expected(4);
  for (Eigen::Index k = 0; k < 4; ++k) expected[k] = y[k] + y[(k + 2) % 4];
  CHECK((spreading_channel(x, y) - expected).norm() < 1e-14);

  // restricted to j1 = 0 the channel is circular convolution with the time-reversed profile
  for (int t = 0; t < 10; ++t) {
    const CVector profile = rng.complex_normal_vector(n);
    CVector xd = CVector::Zero(n * n);
    xd.head(n) = profile;
    const CVector out = spreading_channel(signals::SparseVector::from_dense(xd), y);
    CHECK(oracle::rel_err(out, oracle::direct_circular_convolution(signals::time_reverse(profile), y)) < 1e-12);
  }

  // bilinearity and agreement with the map
  const auto map = spreading_map(n);
  for (int t = 0; t < 10; ++t) {
    const CVector x1 = rng.complex_normal_vector(n * n), x2 = rng.complex_normal_vector(n * n);
    const CVector y1 = rng.complex_normal_vector(n);
    const cplx a = rng.complex_normal();
    CHECK(oracle::rel_err(map.apply(x1 + a * x2, y1), map.apply(x1, y1) + a * map.apply(x2, y1)) < 1e-12);
    CHECK(oracle::rel_err(map.apply(x1, y1), spreading_channel(signals::SparseVector::from_dense(x1), y1)) < 1e-12);
  }
  CHECK_THROWS_AS(spreading_channel(signals::SparseVector::basis(5, 0), y), std::invalid_argument);
}

TEST_CASE("lifted maps agree with the bilinear maps") {
  Rng rng(500);
  std::vector<BilinearMap> maps = {zero_padded_convolution_map(5), circular_convolution_map(6), identity_lift(3, 4),
                                   spreading_map(3)};
  // a map without closed-form lift falls back to the column expansion
  maps.emplace_back("custom", BilinearMap::Kind::custom, 4, 4, 7,
                    [](const CVector& x, const CVector& y) { return oracle::direct_linear_convolution(x, y); });
  for (const auto& b : maps) {
    for (int t = 0; t < 10; ++t) {
      const CVector x = rng.complex_normal_vector(b.n1()), y = rng.complex_normal_vector(b.n2());
      const CVector x2 = rng.complex_normal_vector(b.n1()), y2 = rng.complex_normal_vector(b.n2());
      CHECK(oracle::rel_err(b.lifted_apply(x * y.transpose()), b.apply(x, y)) < 1e-12);
      CHECK(oracle::rel_err(b.lifted_apply(x * y.transpose() + x2 * y2.transpose()),
                            b.apply(x, y) + b.apply(x2, y2)) < 1e-12);
      const CVector z = rng.complex_normal_vector(b.n_out());
      const CMatrix m = x * y.transpose() + x2 * y2.transpose();
      const cplx lhs = z.dot(b.lifted_apply(m));
      const cplx rhs = vec(b.lifted_adjoint(z)).dot(vec(m));
      CHECK(std::abs(lhs - rhs) < 1e-10 * z.norm() * m.norm());
    }
  }
  // closed-form convolution lift against the oracle
  const auto zp = zero_padded_convolution_map(6);
  const CVector x = rng.complex_normal_vector(6), y = rng.complex_normal_vector(6);
  CHECK(oracle::rel_err(zp.apply(x, y), oracle::direct_linear_convolution(x, y)) < 1e-12);
  CHECK(oracle::rel_err(circular_convolution_map(6).apply(x, y), oracle::direct_circular_convolution(x, y)) < 1e-12);
  CHECK(rank_one_pack(x, y).size() == 36);
  CHECK(unvec(vec(x * y.transpose()), 6, 6) == x * y.transpose());
}
