#include "bilin/hermitian_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace bilin::linalg {

namespace {

CMatrix hermitian_part_from_lower(const CMatrix& a) {
  const Eigen::Index n = a.rows();
  CMatrix h(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    h(j, j) = a(j, j).real();
    for (Eigen::Index i = j + 1; i < n; ++i) {
      h(i, j) = a(i, j);
      h(j, i) = std::conj(a(i, j));
    }
  }
  return h;
}

HermitianEigen sorted(RVector values, CMatrix vectors) {
  const Eigen::Index n = values.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return values[a] < values[b]; });
  HermitianEigen out{RVector(n), CMatrix(vectors.rows(), n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    out.values[j] = values[order[static_cast<std::size_t>(j)]];
    out.vectors.col(j) = vectors.col(order[static_cast<std::size_t>(j)]);
  }
  return out;
}

}  // namespace

void tridiagonal_ql(RVector& d, RVector& e, Eigen::MatrixXd& z) {
  const Eigen::Index n = d.size();
  if (n == 0) return;
  e[n - 1] = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (Eigen::Index l = 0; l < n; ++l) {
    int iter = 0;
    Eigen::Index m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (++iter > 60) throw std::runtime_error("tridiagonal_ql: no convergence");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        Eigen::Index i;
        bool deflated = false;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            deflated = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (Eigen::Index k = 0; k < z.rows(); ++k) {
            f = z(k, i + 1);
            z(k, i + 1) = s * z(k, i) + c * f;
            z(k, i) = c * z(k, i) - s * f;
          }
        }
        if (deflated) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

HermitianEigen hermitian_eigen(const CMatrix& input) {
  if (input.rows() != input.cols()) throw std::invalid_argument("hermitian_eigen: matrix not square");
  const Eigen::Index n = input.rows();
  if (n == 0) return {RVector(0), CMatrix(0, 0)};
  CMatrix a = hermitian_part_from_lower(input);
  CMatrix q = CMatrix::Identity(n, n);

  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index len = n - k - 1;
    CVector x = a.col(k).tail(len);
    const double xnorm = x.norm();
    if (xnorm == 0.0 || x.tail(len - 1).norm() == 0.0) continue;
    const cplx phase = std::abs(x[0]) > 0.0 ? x[0] / std::abs(x[0]) : cplx(1.0);
    CVector v = x;
    v[0] += phase * xnorm;  // v = x - alpha e1, alpha = -phase * |x|
    const double vnorm = v.norm();
    if (vnorm == 0.0) continue;
    v /= vnorm;
    CVector w = CVector::Zero(n);
    w.tail(len) = v;
    // P = I - 2 w w^*;  P A P = A - 2 w p^* - 2 p w^* + 4 K w w^*
    const CVector p = a * w;
    const double kappa = w.dot(p).real();
    a.noalias() -= 2.0 * w * p.adjoint();
    a.noalias() -= 2.0 * p * w.adjoint();
    a.noalias() += 4.0 * kappa * w * w.adjoint();
    q.noalias() -= 2.0 * (q * w) * w.adjoint();
  }

  // A = Q T Q^*, T Hermitian tridiagonal. D^* T D is real with D a phase diagonal.
  RVector d(n), e = RVector::Zero(n);
  CVector phase(n);
  phase[0] = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) d[i] = a(i, i).real();
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const cplx sub = a(i + 1, i);
    const double mag = std::abs(sub);
    e[i] = mag;
    phase[i + 1] = mag > 0.0 ? phase[i] * (sub / mag) : phase[i];
  }
  Eigen::MatrixXd z = Eigen::MatrixXd::Identity(n, n);
  tridiagonal_ql(d, e, z);
  CMatrix vectors = q * phase.asDiagonal() * z.cast<cplx>();
  return sorted(std::move(d), std::move(vectors));
}

HermitianEigen hermitian_eigen_jacobi(const CMatrix& input) {
  if (input.rows() != input.cols()) throw std::invalid_argument("hermitian_eigen_jacobi: matrix not square");
  const Eigen::Index n = input.rows();
  CMatrix a = hermitian_part_from_lower(input);
  CMatrix v = CMatrix::Identity(n, n);
  const double scale = std::max(a.norm(), std::numeric_limits<double>::min());

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    }
    if (std::sqrt(off) <= 1e-16 * scale) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag <= 1e-300) continue;
        const cplx ph = a(p, q) / mag;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // V = diag(1, conj(ph)) * [[c, s], [-s, c]] on coordinates (p, q).
        const cplx vpp = c, vpq = s, vqp = -s * std::conj(ph), vqq = c * std::conj(ph);
        for (Eigen::Index k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * vpp + akq * vqp;
          a(k, q) = akp * vpq + akq * vqq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(vpp) * apk + std::conj(vqp) * aqk;
          a(q, k) = std::conj(vpq) * apk + std::conj(vqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (Eigen::Index k = 0; k < n; ++k) {
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * vpp + vkq * vqp;
          v(k, q) = vkp * vpq + vkq * vqq;
        }
      }
    }
  }
  RVector values(n);
  for (Eigen::Index i = 0; i < n; ++i) values[i] = a(i, i).real();
  return sorted(std::move(values), std::move(v));
}

double min_eigenvalue(const CMatrix& a) {
  if (a.rows() == 1) return a(0, 0).real();
  if (a.rows() == 2) {
    // closed form for the 2 x 2 Hermitian case, used heavily by the searches
    const double p = a(0, 0).real(), r = a(1, 1).real();
    const double mean = 0.5 * (p + r);
    const double rad = std::hypot(0.5 * (p - r), std::abs(a(1, 0)));
    return mean - rad;
  }
  return hermitian_eigen(a).values[0];
}

}  // namespace bilin::linalg
