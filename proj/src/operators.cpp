#include "bilin/operators.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>
#include <stdexcept>

#include "bilin/random.hpp"

namespace bilin::operators {

namespace {

cplx unit_phase(long long numerator, std::size_t n) {
  const long long nn = static_cast<long long>(n);
  const long long r = ((numerator % nn) + nn) % nn;
  const double ang = 2.0 * kPi * static_cast<double>(r) / static_cast<double>(n);
  return {std::cos(ang), std::sin(ang)};
}

std::size_t reduce(long long v, std::size_t n) {
  const long long nn = static_cast<long long>(n);
  return static_cast<std::size_t>(((v % nn) + nn) % nn);
}

RVector draw_signs(std::size_t n, std::uint64_t seed, Distribution dist) {
  Rng rng(seed);
  RVector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v[i] = dist == Distribution::rademacher ? rng.rademacher() : rng.normal();
  }
  return v;
}

std::vector<std::size_t> resolve_rows(std::size_t m, std::size_t n, const RowSelection& omega,
                                      std::optional<std::uint64_t>& seed_out) {
  if (m == 0 || m > n) throw std::invalid_argument("partial circulant: need 1 <= m <= n");
  if (const auto* seed = std::get_if<std::uint64_t>(&omega)) {
    seed_out = *seed;
    Rng rng(*seed);
    return rng.sample_without_replacement(n, m);
  }
  const auto& rows = std::get<std::vector<std::size_t>>(omega);
  if (rows.size() != m) throw std::invalid_argument("partial circulant: |Omega| != m");
  std::set<std::size_t> seen;
  for (auto r : rows) {
    if (r >= n) throw std::invalid_argument("partial circulant: Omega index out of range");
    if (!seen.insert(r).second) throw std::invalid_argument("partial circulant: duplicate Omega index");
  }
  return rows;
}

void check_length(const CVector& v, std::size_t expected, const char* what) {
  if (static_cast<std::size_t>(v.size()) != expected) {
    throw std::invalid_argument(std::string(what) + ": length " + std::to_string(v.size()) +
                                ", expected " + std::to_string(expected));
  }
}

}  // namespace

LinearOperator::LinearOperator(std::size_t rows, std::size_t cols, Action apply, Action adjoint,
                               OperatorDescriptor descriptor)
    : rows_(rows),
      cols_(cols),
      apply_(std::move(apply)),
      adjoint_(std::move(adjoint)),
      descriptor_(std::move(descriptor)) {
  descriptor_.rows = rows;
  descriptor_.cols = cols;
}

CVector LinearOperator::apply(const CVector& x) const {
  check_length(x, cols_, "LinearOperator::apply");
  return apply_(x);
}

CVector LinearOperator::adjoint(const CVector& w) const {
  check_length(w, rows_, "LinearOperator::adjoint");
  return adjoint_(w);
}

CMatrix LinearOperator::materialize() const {
  CMatrix out(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
  CVector e = CVector::Zero(static_cast<Eigen::Index>(cols_));
  for (std::size_t j = 0; j < cols_; ++j) {
    e[static_cast<Eigen::Index>(j)] = 1.0;
    out.col(static_cast<Eigen::Index>(j)) = apply_(e);
    e[static_cast<Eigen::Index>(j)] = 0.0;
  }
  return out;
}

LinearOperator identity_operator(std::size_t n) {
  OperatorDescriptor d;
  d.ensemble = "identity";
  auto id = [](const CVector& x) { return x; };
  return LinearOperator(n, n, id, id, d);
}

LinearOperator dense_operator(CMatrix matrix, std::string name) {
  auto mat = std::make_shared<const CMatrix>(std::move(matrix));
  OperatorDescriptor d;
  d.ensemble = std::move(name);
  const auto rows = static_cast<std::size_t>(mat->rows());
  const auto cols = static_cast<std::size_t>(mat->cols());
  return LinearOperator(
      rows, cols, [mat](const CVector& x) -> CVector { return (*mat) * x; },
      [mat](const CVector& w) -> CVector { return mat->adjoint() * w; }, d);
}

LinearOperator gaussian_operator(std::size_t m, std::size_t n, std::uint64_t seed) {
  if (m == 0 || n == 0) throw std::invalid_argument("gaussian_operator: empty shape");
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  CMatrix a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = rng.complex_normal() * scale;
  OperatorDescriptor d;
  d.ensemble = "gaussian";
  d.seed = seed;
  auto mat = std::make_shared<const CMatrix>(std::move(a));
  return LinearOperator(
      m, n, [mat](const CVector& x) -> CVector { return (*mat) * x; },
      [mat](const CVector& w) -> CVector { return mat->adjoint() * w; }, d);
}

LinearOperator sign_diagonal(std::size_t n, std::uint64_t seed, Distribution dist) {
  auto signs = std::make_shared<const RVector>(draw_signs(n, seed, dist));
  OperatorDescriptor d;
  d.ensemble = "sign_diagonal";
  d.seed_aux = seed;
  d.distribution = dist;
  auto act = [signs](const CVector& x) -> CVector { return x.cwiseProduct(signs->cast<cplx>()); };
  return LinearOperator(n, n, act, act, d);
}

LinearOperator partial_circulant_demodulator(std::size_t m, std::size_t n, std::uint64_t seed_eta,
                                             const RowSelection& omega, Distribution dist) {
  OperatorDescriptor d;
  d.ensemble = "partial_circulant";
  d.seed = seed_eta;
  d.distribution = dist;
  d.omega = resolve_rows(m, n, omega, d.omega_seed);

  // C x = eta (*) x = F^* diag(sqrt(n) F eta) F x
  const RVector eta = draw_signs(n, seed_eta, dist);
  auto symbol = std::make_shared<const CVector>(signals::dft(CVector(eta.cast<cplx>())) *
                                                std::sqrt(static_cast<double>(n)));
  auto rows = std::make_shared<const std::vector<std::size_t>>(d.omega);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));

  auto apply = [symbol, rows, scale](const CVector& x) -> CVector {
    const CVector full = signals::idft(symbol->cwiseProduct(signals::dft(x)));
    CVector out(static_cast<Eigen::Index>(rows->size()));
    for (std::size_t i = 0; i < rows->size(); ++i) {
      out[static_cast<Eigen::Index>(i)] = full[static_cast<Eigen::Index>((*rows)[i])] * scale;
    }
    return out;
  };
  auto adjoint = [symbol, rows, scale, n](const CVector& w) -> CVector {
    CVector z = CVector::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < rows->size(); ++i) {
      z[static_cast<Eigen::Index>((*rows)[i])] = w[static_cast<Eigen::Index>(i)] * scale;
    }
    return signals::idft(symbol->conjugate().cwiseProduct(signals::dft(z)));
  };
  return LinearOperator(m, n, apply, adjoint, d);
}

LinearOperator universal_random_demodulator(std::size_t m, std::size_t n, std::uint64_t seed_eta,
                                            std::uint64_t seed_xi, const RowSelection& omega,
                                            Distribution dist) {
  const auto pc = partial_circulant_demodulator(m, n, seed_eta, omega, dist);
  const auto flips = sign_diagonal(n, seed_xi, dist);
  auto op = compose(pc, flips);
  OperatorDescriptor d = pc.descriptor();
  d.ensemble = "universal_demodulator";
  d.seed_aux = seed_xi;
  return LinearOperator(
      m, n, [op](const CVector& x) { return op.apply(x); },
      [op](const CVector& w) { return op.adjoint(w); }, d);
}

LinearOperator weyl_heisenberg(long long j1, long long j2, std::size_t n) {
  if (n == 0) throw std::invalid_argument("weyl_heisenberg: n must be positive");
  OperatorDescriptor d;
  d.ensemble = "weyl_heisenberg";
  d.j1 = static_cast<long long>(reduce(j1, n));
  d.j2 = static_cast<long long>(reduce(j2, n));
  const long long a = d.j1, b = d.j2;
  auto apply = [a, b, n](const CVector& y) -> CVector {
    CVector out(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
      const long long l = static_cast<long long>(k) + b;  // delta_{k, l - j2}
      out[static_cast<Eigen::Index>(k)] = unit_phase(a * l, n) * y[static_cast<Eigen::Index>(reduce(l, n))];
    }
    return out;
  };
  auto adjoint = [a, b, n](const CVector& z) -> CVector {
    CVector out(static_cast<Eigen::Index>(n));
    for (std::size_t l = 0; l < n; ++l) {
      const std::size_t k = reduce(static_cast<long long>(l) - b, n);
      out[static_cast<Eigen::Index>(l)] = std::conj(unit_phase(a * static_cast<long long>(l), n)) *
                                          z[static_cast<Eigen::Index>(k)];
    }
    return out;
  };
  return LinearOperator(n, n, apply, adjoint, d);
}

LinearOperator dft_operator(std::size_t n) {
  OperatorDescriptor d;
  d.ensemble = "dft";
  return LinearOperator(
      n, n, [](const CVector& x) { return signals::dft(x); },
      [](const CVector& w) { return signals::idft(w); }, d);
}

LinearOperator compose(const LinearOperator& outer, const LinearOperator& inner) {
  if (outer.cols() != inner.rows()) throw std::invalid_argument("compose: inner dimension mismatch");
  OperatorDescriptor d;
  d.ensemble = "(" + outer.descriptor().ensemble + ")o(" + inner.descriptor().ensemble + ")";
  return LinearOperator(
      outer.rows(), inner.cols(),
      [outer, inner](const CVector& x) { return outer.apply(inner.apply(x)); },
      [outer, inner](const CVector& w) { return inner.adjoint(outer.adjoint(w)); }, d);
}

LinearOperator make_operator(const OperatorDescriptor& desc) {
  const auto& e = desc.ensemble;
  if (e == "identity") return identity_operator(desc.cols);
  if (e == "gaussian") return gaussian_operator(desc.rows, desc.cols, desc.seed);
  if (e == "sign_diagonal") return sign_diagonal(desc.cols, desc.seed_aux, desc.distribution);
  if (e == "dft") return dft_operator(desc.cols);
  if (e == "weyl_heisenberg") return weyl_heisenberg(desc.j1, desc.j2, desc.cols);
  if (e == "partial_circulant" || e == "universal_demodulator") {
    RowSelection rows = desc.omega_seed ? RowSelection(*desc.omega_seed) : RowSelection(desc.omega);
    if (e == "partial_circulant") {
      return partial_circulant_demodulator(desc.rows, desc.cols, desc.seed, rows, desc.distribution);
    }
    return universal_random_demodulator(desc.rows, desc.cols, desc.seed, desc.seed_aux, rows,
                                        desc.distribution);
  }
  throw std::invalid_argument("make_operator: cannot rebuild ensemble '" + e + "'");
}

std::string to_string(Distribution dist) {
  return dist == Distribution::rademacher ? "rademacher" : "gaussian";
}

Distribution distribution_from_string(const std::string& name) {
  if (name == "rademacher") return Distribution::rademacher;
  if (name == "gaussian") return Distribution::gaussian;
  throw std::invalid_argument("unknown distribution '" + name + "'");
}

// ---------------------------------------------------------------------------

struct BilinearMap::DenseCache {
  std::once_flag once;
  CMatrix matrix;
};

BilinearMap::BilinearMap(std::string name, Kind kind, std::size_t n1, std::size_t n2, std::size_t n_out,
                         PairAction pair, LiftAction lift, LiftAdjoint lift_adjoint)
    : name_(std::move(name)),
      kind_(kind),
      n1_(n1),
      n2_(n2),
      n_out_(n_out),
      pair_(std::move(pair)),
      lift_(std::move(lift)),
      lift_adjoint_(std::move(lift_adjoint)),
      cache_(std::make_shared<DenseCache>()) {}

CVector BilinearMap::apply(const CVector& x, const CVector& y) const {
  check_length(x, n1_, "BilinearMap::apply (x)");
  check_length(y, n2_, "BilinearMap::apply (y)");
  return pair_(x, y);
}

CVector BilinearMap::lifted_apply(const CMatrix& m) const {
  if (static_cast<std::size_t>(m.rows()) != n1_ || static_cast<std::size_t>(m.cols()) != n2_) {
    throw std::invalid_argument("BilinearMap::lifted_apply: shape mismatch");
  }
  if (lift_) return lift_(m);
  // B(M) = sum_j B(M e_j, e_j)
  CVector out = CVector::Zero(static_cast<Eigen::Index>(n_out_));
  CVector e = CVector::Zero(static_cast<Eigen::Index>(n2_));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (m.col(j).squaredNorm() == 0.0) continue;
    e[j] = 1.0;
    out += pair_(m.col(j), e);
    e[j] = 0.0;
  }
  return out;
}

const CMatrix& BilinearMap::dense_lift() const {
  std::call_once(cache_->once, [this] {
    CMatrix dense(static_cast<Eigen::Index>(n_out_), static_cast<Eigen::Index>(n1_ * n2_));
    CMatrix e = CMatrix::Zero(static_cast<Eigen::Index>(n1_), static_cast<Eigen::Index>(n2_));
    for (std::size_t j = 0; j < n2_; ++j) {
      for (std::size_t i = 0; i < n1_; ++i) {
        e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
        dense.col(static_cast<Eigen::Index>(i + j * n1_)) = lifted_apply(e);
        e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 0.0;
      }
    }
    cache_->matrix = std::move(dense);
  });
  return cache_->matrix;
}

CMatrix BilinearMap::lifted_adjoint(const CVector& z) const {
  check_length(z, n_out_, "BilinearMap::lifted_adjoint");
  if (lift_adjoint_) return lift_adjoint_(z);
  return unvec(dense_lift().adjoint() * z, n1_, n2_);
}

LinearOperator BilinearMap::lifted_operator() const {
  OperatorDescriptor d;
  d.ensemble = "lift:" + name_;
  const BilinearMap self = *this;
  return LinearOperator(
      n_out_, n1_ * n2_,
      [self](const CVector& v) { return self.lifted_apply(unvec(v, self.n1(), self.n2())); },
      [self](const CVector& z) { return vec(self.lifted_adjoint(z)); }, d);
}

BilinearMap zero_padded_convolution_map(std::size_t n) {
  const std::size_t out = 2 * n - 1;
  return BilinearMap(
      "zero_padded_convolution", BilinearMap::Kind::zero_padded_convolution, n, n, out,
      [](const CVector& x, const CVector& y) { return signals::linear_convolve(x, y); },
      [out](const CMatrix& m) {
        CVector z = CVector::Zero(static_cast<Eigen::Index>(out));
        for (Eigen::Index j = 0; j < m.cols(); ++j)
          for (Eigen::Index i = 0; i < m.rows(); ++i) z[i + j] += m(i, j);
        return z;
      },
      [n](const CVector& z) {
        const auto nn = static_cast<Eigen::Index>(n);
        CMatrix m(nn, nn);
        for (Eigen::Index j = 0; j < nn; ++j)
          for (Eigen::Index i = 0; i < nn; ++i) m(i, j) = z[i + j];
        return m;
      });
}

BilinearMap circular_convolution_map(std::size_t n) {
  const auto nn = static_cast<Eigen::Index>(n);
  return BilinearMap(
      "circular_convolution", BilinearMap::Kind::circular_convolution, n, n, n,
      [](const CVector& x, const CVector& y) { return signals::circular_convolve(x, y); },
      [nn](const CMatrix& m) {
        CVector z = CVector::Zero(nn);
        for (Eigen::Index j = 0; j < nn; ++j)
          for (Eigen::Index i = 0; i < nn; ++i) z[(i + j) % nn] += m(i, j);
        return z;
      },
      [nn](const CVector& z) {
        CMatrix m(nn, nn);
        for (Eigen::Index j = 0; j < nn; ++j)
          for (Eigen::Index i = 0; i < nn; ++i) m(i, j) = z[(i + j) % nn];
        return m;
      });
}

BilinearMap identity_lift(std::size_t n1, std::size_t n2) {
  return BilinearMap(
      "identity", BilinearMap::Kind::identity, n1, n2, n1 * n2,
      [](const CVector& x, const CVector& y) { return rank_one_pack(x, y); },
      [](const CMatrix& m) { return vec(m); },
      [n1, n2](const CVector& z) { return unvec(z, n1, n2); });
}

BilinearMap spreading_map(std::size_t n) {
  const auto nn = static_cast<long long>(n);
  auto lift = [n, nn](const CMatrix& m) {
    CVector z = CVector::Zero(static_cast<Eigen::Index>(n));
    for (long long j1 = 0; j1 < nn; ++j1) {
      for (long long j2 = 0; j2 < nn; ++j2) {
        const Eigen::Index row = j1 * nn + j2;
        for (long long l = 0; l < nn; ++l) {
          const cplx v = m(row, l);
          if (v == cplx(0.0)) continue;
          z[static_cast<Eigen::Index>(reduce(l - j2, n))] += v * unit_phase(j1 * l, n);
        }
      }
    }
    return z;
  };
  auto adjoint = [n, nn](const CVector& z) {
    CMatrix m(nn * nn, nn);
    for (long long j1 = 0; j1 < nn; ++j1)
      for (long long j2 = 0; j2 < nn; ++j2)
        for (long long l = 0; l < nn; ++l)
          m(j1 * nn + j2, l) = std::conj(unit_phase(j1 * l, n)) * z[static_cast<Eigen::Index>(reduce(l - j2, n))];
    return m;
  };
  auto pair = [lift](const CVector& x, const CVector& y) { return lift(x * y.transpose()); };
  return BilinearMap("spreading", BilinearMap::Kind::spreading, n * n, n, n, pair, lift, adjoint);
}

CVector spreading_channel(const signals::SparseVector& x, const CVector& y) {
  const std::size_t n = static_cast<std::size_t>(y.size());
  if (x.dim() != n * n) throw std::invalid_argument("spreading_channel: x must live on [n]^2");
  CVector out = CVector::Zero(y.size());
  for (std::size_t i = 0; i < x.sparsity(); ++i) {
    const std::size_t j = x.support()[i];
    out += x.values()[i] * weyl_heisenberg(static_cast<long long>(j / n), static_cast<long long>(j % n), n).apply(y);
  }
  return out;
}

CVector rank_one_pack(const CVector& x, const CVector& y) { return vec(x * y.transpose()); }

CVector vec(const CMatrix& m) { return Eigen::Map<const CVector>(m.data(), m.size()); }

CMatrix unvec(const CVector& v, std::size_t n1, std::size_t n2) {
  if (static_cast<std::size_t>(v.size()) != n1 * n2) throw std::invalid_argument("unvec: size mismatch");
  return Eigen::Map<const CMatrix>(v.data(), static_cast<Eigen::Index>(n1), static_cast<Eigen::Index>(n2));
}

}  // namespace bilin::operators
