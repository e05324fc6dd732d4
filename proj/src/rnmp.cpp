#include "bilin/rnmp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "bilin/hermitian_eigen.hpp"
#include "bilin/parallel.hpp"
#include "bilin/random.hpp"

namespace bilin::rnmp {

namespace {

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

// All k-subsets of [lo, n) in lexicographic order, each prefixed by `prefix`.
std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k, std::size_t lo = 0,
                                              std::vector<std::size_t> prefix = {}) {
  std::vector<std::vector<std::size_t>> out;
  if (k == 0) {
    out.push_back(prefix);
    return out;
  }
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = lo + i;
  if (k > n - std::min(n, lo)) return out;
  for (;;) {
    auto s = prefix;
    s.insert(s.end(), idx.begin(), idx.end());
    out.push_back(std::move(s));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

// Supports of size k inside [0, n) that contain 0.
std::vector<std::vector<std::size_t>> anchored_supports(std::size_t n, std::size_t k) {
  return subsets(n, k - 1, 1, {0});
}

std::vector<std::size_t> random_anchored_support(Rng& rng, std::size_t n, std::size_t k) {
  auto rest = rng.sample_without_replacement(n - 1, k - 1);
  std::vector<std::size_t> s{0};
  for (auto r : rest) s.push_back(r + 1);
  return s;
}

std::uint64_t support_key(const std::vector<std::size_t>& support) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (auto i : support) {
    std::uint64_t st = h ^ (static_cast<std::uint64_t>(i) + 1);
    h = splitmix64(st);
  }
  return h;
}

std::string join(const std::vector<std::size_t>& v) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << '}';
  return os.str();
}

// First row of B_t from a dense vector (not normalized).
CVector autocorrelation_row(const CVector& t, std::size_t n) {
  CVector b = CVector::Zero(static_cast<Eigen::Index>(n));
  std::vector<Eigen::Index> nz;
  for (Eigen::Index j = 0; j < t.size(); ++j)
    if (t[j] != cplx(0.0)) nz.push_back(j);
  for (auto i : nz)
    for (auto j : nz)
      if (j >= i && static_cast<std::size_t>(j - i) < n) b[j - i] += std::conj(t[i]) * t[j];
  return b;
}

double det_psd(const CMatrix& m) {
  Eigen::LLT<CMatrix> llt(m);
  if (llt.info() == Eigen::Success) {
    double d = 1.0;
    const CMatrix& l = llt.matrixLLT();
    for (Eigen::Index i = 0; i < l.rows(); ++i) d *= std::norm(l(i, i));
    return d;
  }
  return std::abs(m.partialPivLu().determinant());
}

// det B_{c/|c|} for coefficients c on `support` in dimension n.
double support_det(const std::vector<std::size_t>& support, const Eigen::VectorXd& params, std::size_t n) {
  const std::size_t k = support.size();
  CVector t = CVector::Zero(static_cast<Eigen::Index>(support.back() + 1));
  double nrm = params.norm();
  if (nrm == 0.0) return std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    t[static_cast<Eigen::Index>(support[i])] =
        cplx(params[static_cast<Eigen::Index>(2 * i)], params[static_cast<Eigen::Index>(2 * i + 1)]) / nrm;
  }
  return det_psd(HermitianToeplitz(autocorrelation_row(t, n)).matrix());
}

// Projected finite-difference descent on the unit sphere of R^{2k}.
double descend_det(const std::vector<std::size_t>& support, Eigen::VectorXd& v, std::size_t n) {
  constexpr std::size_t kIterations = 100;
  constexpr double kStep = 1e-6;
  v.normalize();
  double fv = support_det(support, v, n);
  double step = 0.5;
  for (std::size_t it = 0; it < kIterations; ++it) {
    Eigen::VectorXd g(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      Eigen::VectorXd p = v, m = v;
      p[i] += kStep;
      m[i] -= kStep;
      g[i] = (support_det(support, p, n) - support_det(support, m, n)) / (2 * kStep);
    }
    g -= g.dot(v) * v;
    const double gn = g.norm();
    if (gn < 1e-12) break;
    bool moved = false;
    for (int bt = 0; bt < 40; ++bt) {
      Eigen::VectorXd cand = (v - step * g).normalized();
      const double fc = support_det(support, cand, n);
      if (fc <= fv - 1e-4 * step * gn * gn) {
        const double rel = (fv - fc) / std::max(fv, 1e-300);
        v = cand;
        fv = fc;
        step *= 2.0;
        moved = rel > 1e-13;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return fv;
}

// Gram matrix of ||x * y||^2 in the coefficients of x on support `sx`, y fixed.
CMatrix convolution_gram(const std::vector<std::size_t>& sx, const CVector& y,
                         const std::vector<std::size_t>& sy) {
  const std::size_t s = sx.size();
  CMatrix g(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s));
  for (std::size_t a = 0; a < s; ++a) {
    for (std::size_t b = a; b < s; ++b) {
      // sum_m conj(y_m) y_{m + sx[a] - sx[b]}
      cplx acc = 0.0;
      const long long lag = static_cast<long long>(sx[a]) - static_cast<long long>(sx[b]);
      for (auto j : sy) {
        const long long jj = static_cast<long long>(j) + lag;
        if (jj < 0 || jj >= y.size()) continue;
        acc += std::conj(y[static_cast<Eigen::Index>(j)]) * y[static_cast<Eigen::Index>(jj)];
      }
      // entry (a, b) pairs conj(x_a) x_b
      g(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc;
      g(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = std::conj(acc);
    }
  }
  return g;
}

// Bottom eigenpair of the restricted Gram matrix; writes the unit minimizer into `x`.
double bottom_update(const std::vector<std::size_t>& sx, CVector& x, const CVector& y,
                     const std::vector<std::size_t>& sy) {
  const auto eig = linalg::hermitian_eigen(convolution_gram(sx, y, sy));
  x.setZero();
  for (std::size_t a = 0; a < sx.size(); ++a) {
    x[static_cast<Eigen::Index>(sx[a])] = eig.vectors(static_cast<Eigen::Index>(a), 0);
  }
  x.normalize();
  return std::max(0.0, eig.values[0]);
}

CVector random_on_support(Rng& rng, std::size_t n, const std::vector<std::size_t>& support) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(n));
  for (auto i : support) v[static_cast<Eigen::Index>(i)] = rng.complex_normal();
  return v.normalized();
}

struct PairResult {
  double value = std::numeric_limits<double>::infinity();
  CVector x, y;
};

PairResult search_pair(const std::vector<std::size_t>& sx, const std::vector<std::size_t>& sy, std::size_t n,
                       std::size_t starts, Rng rng, const SearchOptions& opt) {
  PairResult best;
  for (std::size_t r = 0; r < starts; ++r) {
    CVector x(static_cast<Eigen::Index>(n)), y;
    if (r == 0) {
      // flat start: equal weights, alternating signs on y
      x.setZero();
      y = CVector::Zero(static_cast<Eigen::Index>(n));
      for (auto i : sx) x[static_cast<Eigen::Index>(i)] = 1.0;
      double sign = 1.0;
      for (auto j : sy) {
        y[static_cast<Eigen::Index>(j)] = sign;
        sign = -sign;
      }
      x.normalize();
      y.normalize();
    } else {
      x = random_on_support(rng, n, sx);
      y = random_on_support(rng, n, sy);
    }
    const double v = alternating_minimize(sx, sy, n, x, y, opt.max_iterations, opt.stall_tolerance);
    if (v < best.value) {
      best.value = v;
      best.x = x;
      best.y = y;
    }
  }
  return best;
}

class AlphaSearch {
 public:
  AlphaSearch(std::size_t n, std::uint64_t seed, const SearchOptions& opt) : n_(n), seed_(seed), opt_(opt) {}

  EmpiricalAlpha solve(std::size_t s, std::size_t f) {
    s = std::min(s, n_);
    f = std::min(f, n_);
    if (s > f) {
      auto r = solve(f, s);
      std::swap(r.x, r.y);
      return r;
    }
    const auto key = std::make_pair(s, f);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    EmpiricalAlpha out;
    if (s == 1) {
      out.value = 1.0;
      out.x = CVector::Zero(static_cast<Eigen::Index>(n_));
      out.y = out.x;
      out.x[0] = 1.0;
      out.y[0] = 1.0;
      out.certificate = {"alpha_empirical", "exact (min(s,f) = 1)", 1.0, seed_, false, ""};
      memo_[key] = out;
      return out;
    }
    out = own_search(s, f);
    for (const auto& sub : {solve(s - 1, f), solve(s, f - 1)}) {
      if (sub.value < out.value) {
        out.value = sub.value;
        out.x = sub.x;
        out.y = sub.y;
        out.certificate.detail += "; inherited from a smaller sparsity level";
      }
      out.exhaustive_supports = out.exhaustive_supports && sub.exhaustive_supports;
    }
    out.certificate.value = out.value;
    out.certificate.heuristic = !out.exhaustive_supports;
    memo_[key] = out;
    return out;
  }

 private:
  EmpiricalAlpha own_search(std::size_t s, std::size_t f) {
    const Rng base = Rng(seed_).split(s * 1315423911ULL + f);
    const double count = binomial(n_ - 1, s - 1) * binomial(n_ - 1, f - 1);
    const bool exhaustive = count <= static_cast<double>(opt_.enumeration_limit);

    std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> pairs;
    std::size_t starts = 1;
    if (exhaustive) {
      const auto xs = anchored_supports(n_, s);
      const auto ys = anchored_supports(n_, f);
      for (const auto& a : xs)
        for (const auto& b : ys) pairs.emplace_back(a, b);
      const std::size_t budget = opt_.trials * 64;
      starts = std::clamp<std::size_t>((budget + pairs.size() - 1) / pairs.size(), 1, opt_.trials);
    } else {
      Rng pick = base.split(0xfeedULL);
      for (std::size_t i = 0; i < opt_.trials * 64; ++i) {
        auto a = random_anchored_support(pick, n_, s);
        auto b = random_anchored_support(pick, n_, f);
        pairs.emplace_back(std::move(a), std::move(b));
      }
    }

    std::vector<PairResult> results(pairs.size());
    parallel_for(pairs.size(), opt_.threads, [&](std::size_t i) {
      results[i] = search_pair(pairs[i].first, pairs[i].second, n_, starts, base.split(i + 1), opt_);
    });
    std::size_t arg = 0;
    for (std::size_t i = 1; i < results.size(); ++i)
      if (results[i].value < results[arg].value) arg = i;

    EmpiricalAlpha out;
    out.value = results[arg].value;
    out.x = results[arg].x;
    out.y = results[arg].y;
    out.support_pairs = pairs.size();
    out.exhaustive_supports = exhaustive;
    std::ostringstream detail;
    detail << "s=" << s << " f=" << f << " n=" << n_ << " pairs=" << pairs.size() << " starts=" << starts
           << " argmin supports " << join(pairs[arg].first) << " x " << join(pairs[arg].second);
    out.certificate = {"alpha_empirical",
                       exhaustive ? "anchored support enumeration + alternating minimization"
                                  : "random anchored supports + alternating minimization",
                       out.value, seed_, !exhaustive, detail.str()};
    return out;
  }

  std::size_t n_;
  std::uint64_t seed_;
  SearchOptions opt_;
  std::map<std::pair<std::size_t, std::size_t>, EmpiricalAlpha> memo_;
};

}  // namespace

HermitianToeplitz::HermitianToeplitz(CVector first_row) : first_row_(std::move(first_row)) {
  if (first_row_.size() == 0) throw std::invalid_argument("HermitianToeplitz: empty first row");
  const double scale = std::max(1.0, std::abs(first_row_[0]));
  if (std::abs(first_row_[0].imag()) > 1e-12 * scale) {
    throw std::invalid_argument("HermitianToeplitz: b_0 must be real");
  }
  first_row_[0] = first_row_[0].real();
}

cplx HermitianToeplitz::coefficient(long long k) const {
  const long long n = static_cast<long long>(size());
  if (k <= -n || k >= n) return 0.0;
  return k >= 0 ? first_row_[k] : std::conj(first_row_[-k]);
}

CMatrix HermitianToeplitz::matrix() const {
  const auto n = static_cast<Eigen::Index>(size());
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = coefficient(j - i);
  return m;
}

CMatrix HermitianToeplitz::principal_submatrix(const std::vector<std::size_t>& rows) const {
  const auto k = static_cast<Eigen::Index>(rows.size());
  CMatrix m(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      m(i, j) = coefficient(static_cast<long long>(rows[static_cast<std::size_t>(j)]) -
                            static_cast<long long>(rows[static_cast<std::size_t>(i)]));
  return m;
}

HermitianToeplitz autocorrelation_toeplitz(const signals::SparseVector& t, std::size_t n) {
  if (t.sparsity() == 0) throw std::invalid_argument("autocorrelation_toeplitz: t = 0");
  const auto u = t.normalized();
  CVector b = CVector::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < u.sparsity(); ++i) {
    for (std::size_t j = i; j < u.sparsity(); ++j) {
      const std::size_t k = u.support()[j] - u.support()[i];
      if (k < n) b[static_cast<Eigen::Index>(k)] += std::conj(u.values()[i]) * u.values()[j];
    }
  }
  return HermitianToeplitz(b);
}

double symbol_eval(const HermitianToeplitz& t, double omega) {
  double acc = t.first_row()[0].real();
  for (Eigen::Index k = 1; k < t.first_row().size(); ++k) {
    acc += 2.0 * (t.first_row()[k] * std::polar(1.0, static_cast<double>(k) * omega)).real();
  }
  return acc;
}

double symbol_grid_min(const HermitianToeplitz& t, std::size_t grid) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < grid; ++g) {
    best = std::min(best, symbol_eval(t, 2.0 * kPi * static_cast<double>(g) / static_cast<double>(grid)));
  }
  return best;
}

double min_eigenvalue(const HermitianToeplitz& t) { return linalg::min_eigenvalue(t.matrix()); }

RestrictedEigenvalue restricted_min_eigenvalue(const HermitianToeplitz& t, std::size_t s, std::uint64_t seed,
                                               std::size_t restarts) {
  const std::size_t n = t.size();
  if (s == 0 || s > n) throw std::invalid_argument("restricted_min_eigenvalue: need 1 <= s <= n");
  RestrictedEigenvalue out;
  out.value = std::numeric_limits<double>::infinity();
  auto eval = [&t](const std::vector<std::size_t>& rows) {
    return linalg::min_eigenvalue(t.principal_submatrix(rows));
  };
  if (binomial(n, s) <= kExhaustiveLimit) {
    for (const auto& rows : subsets(n, s)) {
      const double v = eval(rows);
      if (v < out.value) {
        out.value = v;
        out.support = rows;
      }
    }
    return out;
  }
  out.heuristic = true;
  Rng rng(seed);
  for (std::size_t r = 0; r < std::max<std::size_t>(1, restarts); ++r) {
    auto rows = rng.sample_without_replacement(n, s);
    double cur = eval(rows);
    for (bool improved = true; improved;) {
      improved = false;
      std::vector<char> in(n, 0);
      for (auto i : rows) in[i] = 1;
      for (std::size_t a = 0; a < s && !improved; ++a) {
        for (std::size_t c = 0; c < n && !improved; ++c) {
          if (in[c]) continue;
          auto cand = rows;
          cand[a] = c;
          std::sort(cand.begin(), cand.end());
          const double v = eval(cand);
          if (v < cur - 1e-15) {
            cur = v;
            rows = cand;
            improved = true;
          }
        }
      }
    }
    if (cur < out.value) {
      out.value = cur;
      out.support = rows;
    }
  }
  return out;
}

double toeplitz_determinant(const HermitianToeplitz& t) { return std::abs(t.matrix().partialPivLu().determinant()); }

double eigen_det_lower_bound(const HermitianToeplitz& t) {
  const double n = static_cast<double>(t.size());
  double energy = std::norm(t.first_row()[0]);
  for (Eigen::Index k = 1; k < t.first_row().size(); ++k) energy += 2.0 * std::norm(t.first_row()[k]);
  if (energy == 0.0) return 0.0;
  return toeplitz_determinant(t) / (std::sqrt(n) * std::pow(energy, (n - 1.0) / 2.0));
}

DeterminantEstimate restricted_determinant(std::size_t n, std::size_t k, std::size_t search_budget,
                                           std::uint64_t seed, unsigned threads) {
  if (search_budget == 0) throw std::invalid_argument("restricted_determinant: search budget must be positive");
  if (k == 0 || k > n) throw std::invalid_argument("restricted_determinant: need 1 <= k <= n");
  DeterminantEstimate out;
  if (k == 1) {
    out.value = 1.0;
    out.argmin = signals::SparseVector::basis(n, 0);
    out.supports_searched = 1;
    out.upper_estimate = false;
    return out;
  }
  std::vector<std::vector<std::size_t>> supports;
  if (binomial(n - 1, k - 1) <= static_cast<double>(search_budget)) {
    supports = anchored_supports(n, k);
  } else {
    out.exhaustive_supports = false;
    Rng pick = Rng(seed).split(0xd37ULL);
    for (std::size_t i = 0; i < search_budget; ++i) supports.push_back(random_anchored_support(pick, n, k));
  }
  const std::size_t starts = std::max<std::size_t>(1, search_budget / supports.size());

  std::vector<double> values(supports.size());
  std::vector<Eigen::VectorXd> params(supports.size());
  parallel_for(supports.size(), threads, [&](std::size_t i) {
    Rng rng = Rng(seed).split(support_key(supports[i]));
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < starts; ++r) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * k));
      if (r == 0) {
        for (std::size_t j = 0; j < k; ++j) v[static_cast<Eigen::Index>(2 * j)] = 1.0;
      } else {
        for (Eigen::Index j = 0; j < v.size(); ++j) v[j] = rng.normal();
      }
      const double d = descend_det(supports[i], v, n);
      if (d < best) {
        best = d;
        params[i] = v;
      }
    }
    values[i] = best;
  });
  std::size_t arg = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] < values[arg]) arg = i;

  out.value = values[arg];
  out.supports_searched = supports.size();
  std::vector<cplx> vals(k);
  const double nrm = params[arg].norm();
  for (std::size_t j = 0; j < k; ++j)
    vals[j] = cplx(params[arg][static_cast<Eigen::Index>(2 * j)], params[arg][static_cast<Eigen::Index>(2 * j + 1)]) / nrm;
  std::vector<std::size_t> supp;
  std::vector<cplx> kept;
  for (std::size_t j = 0; j < k; ++j) {
    if (vals[j] != cplx(0.0)) {
      supp.push_back(supports[arg][j]);
      kept.push_back(vals[j]);
    }
  }
  out.argmin = signals::SparseVector(n, supp, kept);
  return out;
}

std::size_t compressed_dimension(std::size_t s, std::size_t f, std::size_t n_ambient) {
  if (s == 0 || f == 0) throw std::invalid_argument("compressed_dimension: sparsities must be positive");
  const std::size_t e = s + f - 2;
  std::size_t value;
  if (e <= 1) {
    value = s + f - 1;
  } else {
    // 2^{2e log2 e} = e^{2e}, saturating
    value = 1;
    const std::size_t cap = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < 2 * e; ++i) {
      if (value > cap / e) {
        value = cap;
        break;
      }
      value *= e;
    }
  }
  return n_ambient ? std::min(value, n_ambient) : value;
}

LowerBound alpha_lower_bound(std::size_t s, std::size_t f, std::size_t n, std::size_t search_budget,
                             std::uint64_t seed, unsigned threads) {
  if (s == 0 || f == 0 || n == 0) throw std::invalid_argument("alpha_lower_bound: arguments must be positive");
  LowerBound out;
  const std::size_t k = std::min(s, f);
  out.n_effective = compressed_dimension(s, f, n);
  if (k == 1) {
    out.alpha = 1.0;
    out.certificate = {"alpha_lower", "exact (min(s,f) = 1)", 1.0, seed, false, ""};
    return out;
  }
  constexpr std::size_t kMaxDimension = 256;
  if (out.n_effective > kMaxDimension) {
    throw std::invalid_argument("alpha_lower_bound: compressed dimension " + std::to_string(out.n_effective) +
                                " too large for the determinant search; pass a smaller n");
  }
  const std::size_t nn = out.n_effective;
  const std::size_t kk = std::min(k, nn);
  const auto det = restricted_determinant(nn, kk, search_budget, seed, threads);
  out.determinant = det.value;
  const double log_alpha_sq =
      std::log(det.value) - 0.5 * (std::log(static_cast<double>(nn)) +
                                   static_cast<double>(nn - 1) * std::log(static_cast<double>(k)));
  out.alpha = std::exp(0.5 * log_alpha_sq);
  std::ostringstream detail;
  detail << "n_eff=" << nn << " D=" << det.value << " supports=" << det.supports_searched
         << " argmin_support=" << join(det.argmin.support());
  out.certificate = {"alpha_lower", "determinant bound with D estimated by sphere descent", out.alpha, seed,
                     !det.exhaustive_supports, detail.str()};
  return out;
}

double alternating_minimize(const std::vector<std::size_t>& support_x, const std::vector<std::size_t>& support_y,
                            std::size_t n, CVector& x, CVector& y, std::size_t max_iterations,
                            double stall_tolerance) {
  double prev = std::numeric_limits<double>::infinity();
  double cur = prev;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    bottom_update(support_x, x, y, support_y);
    cur = bottom_update(support_y, y, x, support_x);
    if (std::isfinite(prev) && prev - cur <= stall_tolerance * std::max(prev, 1e-300)) break;
    prev = cur;
  }
  (void)n;
  return std::sqrt(cur);
}

EmpiricalAlpha alpha_empirical(std::size_t s, std::size_t f, std::size_t n, std::uint64_t seed,
                               const SearchOptions& options) {
  if (options.trials == 0) throw std::invalid_argument("alpha_empirical: trials must be positive");
  if (s == 0 || f == 0 || n == 0) throw std::invalid_argument("alpha_empirical: arguments must be positive");
  AlphaSearch search(n, seed, options);
  return search.solve(s, f);
}

RnmpBounds compute_bounds(std::size_t s, std::size_t f, std::size_t n, std::uint64_t seed,
                          const SearchOptions& options, std::size_t determinant_budget) {
  RnmpBounds out;
  out.s = s;
  out.f = f;
  out.n = n;
  const auto lower = alpha_lower_bound(s, f, n, determinant_budget, seed, options.threads);
  const auto emp = alpha_empirical(s, f, n, seed, options);
  out.n_effective = lower.n_effective;
  out.alpha_lower = lower.alpha;
  out.alpha_empirical = emp.value;
  out.beta = std::sqrt(static_cast<double>(std::min({s, f, n})));
  out.certificates.push_back(lower.certificate);
  out.certificates.push_back(emp.certificate);
  out.certificates.push_back({"beta", "closed form sqrt(min(s,f))", out.beta, 0, false, ""});
  return out;
}

}  // namespace bilin::rnmp
