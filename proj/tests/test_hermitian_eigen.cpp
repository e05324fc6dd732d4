#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "bilin/hermitian_eigen.hpp"
#include "bilin/random.hpp"

using namespace bilin;

namespace {

CMatrix random_hermitian(Rng& rng, Eigen::Index n) {
  CMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = rng.complex_normal();
  return 0.5 * (g + g.adjoint());
}

}  // namespace

TEST_CASE("closed-form instances") {
  CMatrix a(2, 2);
  a << 1.0, 0.5, 0.5, 1.0;
  CHECK(linalg::min_eigenvalue(a) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(linalg::hermitian_eigen(a).values[0] == doctest::Approx(0.5).epsilon(1e-14));

  // tridiagonal Toeplitz (1, .5, 0): eigenvalues 1 + cos(k pi / 4), k = 1..3
  CMatrix t(3, 3);
  t << 1.0, 0.5, 0.0, 0.5, 1.0, 0.5, 0.0, 0.5, 1.0;
  const auto eig = linalg::hermitian_eigen(t);
  CHECK(eig.values[0] == doctest::Approx(1.0 - std::sqrt(2.0) / 2.0).epsilon(1e-12));
  CHECK(eig.values[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eig.values[2] == doctest::Approx(1.0 + std::sqrt(2.0) / 2.0).epsilon(1e-12));

  CHECK(linalg::min_eigenvalue(CMatrix::Identity(5, 5)) == doctest::Approx(1.0));
}

TEST_CASE("2x2 and 3x3 match characteristic polynomial roots") {
  Rng rng(21);
  for (int t = 0; t < 50; ++t) {
    const CMatrix a = random_hermitian(rng, 2);
    const double p = a(0, 0).real(), r = a(1, 1).real(), q2 = std::norm(a(0, 1));
    const double root = 0.5 * (p + r) - std::sqrt(0.25 * (p - r) * (p - r) + q2);
    CHECK(std::abs(linalg::hermitian_eigen(a).values[0] - root) < 1e-10);
    CHECK(std::abs(linalg::hermitian_eigen_jacobi(a).values[0] - root) < 1e-10);
  }
  for (int t = 0; t < 50; ++t) {
    const CMatrix a = random_hermitian(rng, 3);
    // det(a - lambda I) must vanish at every computed eigenvalue
    for (double lam : linalg::hermitian_eigen(a).values) {
      const cplx det = (a - lam * CMatrix::Identity(3, 3)).determinant();
      CHECK(std::abs(det) < 1e-10 * std::max(1.0, a.norm() * a.norm() * a.norm()));
    }
  }
}

TEST_CASE("QL, Jacobi and Eigen's solver agree on random Hermitian matrices") {
  Rng rng(22);
  for (Eigen::Index n : {1, 2, 3, 5, 8, 16, 33, 64}) {
    const CMatrix a = random_hermitian(rng, n);
    const auto ql = linalg::hermitian_eigen(a);
    const auto jac = linalg::hermitian_eigen_jacobi(a);
    Eigen::SelfAdjointEigenSolver<CMatrix> ref(a);
    CHECK((ql.values - ref.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, a.norm()));
    CHECK((jac.values - ref.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, a.norm()));
    // eigenvector residuals and orthonormality
    CHECK((a * ql.vectors - ql.vectors * ql.values.asDiagonal()).norm() < 1e-10 * std::max(1.0, a.norm()));
    CHECK((ql.vectors.adjoint() * ql.vectors - CMatrix::Identity(n, n)).norm() < 1e-10);
    CHECK((a * jac.vectors - jac.vectors * jac.values.asDiagonal()).norm() < 1e-10 * std::max(1.0, a.norm()));
  }
}

TEST_CASE("degenerate spectra and already-diagonal input") {
  CMatrix d = CMatrix::Zero(4, 4);
  d.diagonal() << 3.0, -1.0, 2.0, -1.0;
  const auto eig = linalg::hermitian_eigen(d);
  CHECK(eig.values[0] == doctest::Approx(-1.0));
  CHECK(eig.values[1] == doctest::Approx(-1.0));
  CHECK(eig.values[3] == doctest::Approx(3.0));
  CHECK_THROWS_AS(linalg::hermitian_eigen(CMatrix::Zero(2, 3)), std::invalid_argument);
}
