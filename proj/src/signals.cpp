#include "bilin/signals.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/FFT>

namespace bilin::signals {

namespace {

constexpr std::size_t kDirectPairLimit = 512;

Eigen::FFT<double>& fft_engine() {
  // kissfft plans are cached per engine; engines are not shareable across threads.
  thread_local Eigen::FFT<double> engine;
  return engine;
}

std::vector<cplx> fft_forward(const std::vector<cplx>& in) {
  if (in.size() <= 1) return in;  // kissfft does not handle length 1
  std::vector<cplx> out;
  fft_engine().fwd(out, in);
  return out;
}

std::vector<cplx> fft_inverse(const std::vector<cplx>& in) {
  if (in.size() <= 1) return in;
  std::vector<cplx> out;
  fft_engine().inv(out, in);  // includes the 1/N factor
  return out;
}

// Linear convolution through a power-of-two FFT.
std::vector<cplx> fft_linear(const std::vector<cplx>& x, const std::vector<cplx>& y) {
  const std::size_t len = x.size() + y.size() - 1;
  const std::size_t nfft = next_pow2(len);
  std::vector<cplx> xp(nfft, 0.0), yp(nfft, 0.0);
  std::copy(x.begin(), x.end(), xp.begin());
  std::copy(y.begin(), y.end(), yp.begin());
  auto fx = fft_forward(xp);
  const auto fy = fft_forward(yp);
  for (std::size_t k = 0; k < nfft; ++k) fx[k] *= fy[k];
  auto z = fft_inverse(fx);
  z.resize(len);
  return z;
}

std::vector<cplx> to_std(const CVector& v) { return {v.data(), v.data() + v.size()}; }

CVector to_eigen(const std::vector<cplx>& v) {
  CVector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

SparseVector prune(std::size_t n, const std::vector<cplx>& dense, double threshold) {
  std::vector<std::size_t> support;
  std::vector<cplx> values;
  for (std::size_t k = 0; k < dense.size(); ++k) {
    if (std::abs(dense[k]) > threshold) {
      support.push_back(k);
      values.push_back(dense[k]);
    }
  }
  return SparseVector(n, std::move(support), std::move(values));
}

SparseVector prune(std::size_t n, const std::map<std::size_t, cplx>& acc, double threshold) {
  std::vector<std::size_t> support;
  std::vector<cplx> values;
  for (const auto& [k, v] : acc) {
    if (std::abs(v) > threshold) {
      support.push_back(k);
      values.push_back(v);
    }
  }
  return SparseVector(n, std::move(support), std::move(values));
}

void require_dim(const SparseVector& v, std::size_t n, const char* what) {
  if (v.dim() != n) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(v.dim()) + " vs " + std::to_string(n) + ")");
  }
}

}  // namespace

SparseVector::SparseVector(std::size_t n, std::vector<std::size_t> support,
                           std::vector<cplx> values)
    : n_(n), support_(std::move(support)), values_(std::move(values)) {
  if (n_ == 0) throw std::invalid_argument("SparseVector: dimension must be positive");
  if (support_.size() != values_.size()) {
    throw std::invalid_argument("SparseVector: support and values differ in length");
  }
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (support_[i] >= n_) throw std::invalid_argument("SparseVector: index out of range");
    if (i > 0 && support_[i] <= support_[i - 1]) {
      throw std::invalid_argument("SparseVector: support not strictly increasing");
    }
    if (values_[i] == cplx(0.0)) throw std::invalid_argument("SparseVector: zero value on support");
  }
}

SparseVector SparseVector::zero(std::size_t n) { return SparseVector(n, {}, {}); }

SparseVector SparseVector::basis(std::size_t n, std::size_t j, cplx value) {
  return SparseVector(n, {j}, {value});
}

SparseVector SparseVector::from_dense(const CVector& dense, double tolerance) {
  std::vector<std::size_t> support;
  std::vector<cplx> values;
  for (Eigen::Index k = 0; k < dense.size(); ++k) {
    if (std::abs(dense[k]) > tolerance) {
      support.push_back(static_cast<std::size_t>(k));
      values.push_back(dense[k]);
    }
  }
  return SparseVector(static_cast<std::size_t>(dense.size()), std::move(support), std::move(values));
}

cplx SparseVector::at(std::size_t k) const {
  const auto it = std::lower_bound(support_.begin(), support_.end(), k);
  if (it == support_.end() || *it != k) return 0.0;
  return values_[static_cast<std::size_t>(it - support_.begin())];
}

CVector SparseVector::dense() const {
  CVector out = CVector::Zero(static_cast<Eigen::Index>(n_));
  for (std::size_t i = 0; i < support_.size(); ++i) {
    out[static_cast<Eigen::Index>(support_[i])] = values_[i];
  }
  return out;
}

double SparseVector::norm() const {
  double acc = 0.0;
  for (const auto& v : values_) acc += std::norm(v);
  return std::sqrt(acc);
}

SparseVector SparseVector::scaled(cplx factor) const {
  if (factor == cplx(0.0)) return zero(n_);
  std::vector<cplx> v(values_);
  for (auto& e : v) e *= factor;
  return SparseVector(n_, support_, std::move(v));
}

SparseVector SparseVector::normalized() const {
  const double nrm = norm();
  if (nrm == 0.0) throw std::domain_error("SparseVector::normalized: zero vector");
  return scaled(1.0 / nrm);
}

SparseVector SparseVector::cyclic_shift(std::size_t shift) const {
  std::vector<std::pair<std::size_t, cplx>> entries;
  entries.reserve(support_.size());
  for (std::size_t i = 0; i < support_.size(); ++i) {
    entries.emplace_back((support_[i] + shift) % n_, values_[i]);
  }
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::size_t> s;
  std::vector<cplx> v;
  for (const auto& [k, val] : entries) {
    s.push_back(k);
    v.push_back(val);
  }
  return SparseVector(n_, std::move(s), std::move(v));
}

SparseVector SparseVector::with_dim(std::size_t n) const { return SparseVector(n, support_, values_); }

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

SparseVector linear_convolve(const SparseVector& x, const SparseVector& y) {
  const std::size_t n_out = x.dim() + y.dim() - 1;
  const double threshold = kPruneRelative * x.norm() * y.norm();
  if (x.sparsity() == 0 || y.sparsity() == 0) return SparseVector::zero(n_out);
  if (x.sparsity() * y.sparsity() < kDirectPairLimit) {
    std::map<std::size_t, cplx> acc;
    for (std::size_t i = 0; i < x.sparsity(); ++i) {
      for (std::size_t j = 0; j < y.sparsity(); ++j) {
        acc[x.support()[i] + y.support()[j]] += x.values()[i] * y.values()[j];
      }
    }
    return prune(n_out, acc, threshold);
  }
  return prune(n_out, fft_linear(to_std(x.dense()), to_std(y.dense())), threshold);
}

SparseVector circular_convolve(const SparseVector& x, const SparseVector& y, std::size_t n) {
  require_dim(x, n, "circular_convolve");
  require_dim(y, n, "circular_convolve");
  const double threshold = kPruneRelative * x.norm() * y.norm();
  if (x.sparsity() * y.sparsity() < kDirectPairLimit) {
    std::map<std::size_t, cplx> acc;
    for (std::size_t i = 0; i < x.sparsity(); ++i) {
      for (std::size_t j = 0; j < y.sparsity(); ++j) {
        acc[(x.support()[i] + y.support()[j]) % n] += x.values()[i] * y.values()[j];
      }
    }
    return prune(n, acc, threshold);
  }
  return prune(n, to_std(circular_convolve(x.dense(), y.dense())), threshold);
}

SparseVector circular_correlate(const SparseVector& x, const SparseVector& y, std::size_t n) {
  require_dim(x, n, "circular_correlate");
  require_dim(y, n, "circular_correlate");
  std::vector<cplx> conj_vals;
  for (const auto& v : y.values()) conj_vals.push_back(std::conj(v));
  const SparseVector ybar(n, y.support(), std::move(conj_vals));
  return circular_convolve(x, time_reverse(ybar), n);
}

CVector circular_correlate_fourier(const CVector& x, const CVector& y) {
  if (x.size() != y.size()) throw std::invalid_argument("circular_correlate_fourier: dimension mismatch");
  const CVector fx = dft(x);
  const CVector fy = dft(y);
  const CVector prod = fx.cwiseProduct(fy.conjugate());
  return idft(prod) * std::sqrt(static_cast<double>(x.size()));
}

SparseVector time_reverse(const SparseVector& x) {
  const std::size_t n = x.dim();
  std::vector<std::pair<std::size_t, cplx>> entries;
  for (std::size_t i = 0; i < x.sparsity(); ++i) {
    entries.emplace_back((n - x.support()[i]) % n, x.values()[i]);
  }
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::size_t> s;
  std::vector<cplx> v;
  for (const auto& [k, val] : entries) {
    s.push_back(k);
    v.push_back(val);
  }
  return SparseVector(n, std::move(s), std::move(v));
}

CVector time_reverse(const CVector& x) {
  const Eigen::Index n = x.size();
  CVector out(n);
  for (Eigen::Index k = 0; k < n; ++k) out[k] = x[(n - k) % n];
  return out;
}

CVector dft(const CVector& x) {
  if (x.size() == 0) return x;
  const auto out = fft_forward(to_std(x));
  return to_eigen(out) / std::sqrt(static_cast<double>(x.size()));
}

CVector idft(const CVector& x) {
  if (x.size() == 0) return x;
  const auto out = fft_inverse(to_std(x));
  return to_eigen(out) * std::sqrt(static_cast<double>(x.size()));
}

CVector dft(const SparseVector& x) { return dft(x.dense()); }

CVector linear_convolve(const CVector& x, const CVector& y) {
  if (x.size() == 0 || y.size() == 0) return CVector();
  const Eigen::Index len = x.size() + y.size() - 1;
  if (x.size() * y.size() < static_cast<Eigen::Index>(kDirectPairLimit) * 4) {
    CVector out = CVector::Zero(len);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (x[i] == cplx(0.0)) continue;
      for (Eigen::Index j = 0; j < y.size(); ++j) out[i + j] += x[i] * y[j];
    }
    return out;
  }
  return to_eigen(fft_linear(to_std(x), to_std(y)));
}

CVector circular_convolve(const CVector& x, const CVector& y) {
  if (x.size() != y.size()) throw std::invalid_argument("circular_convolve: dimension mismatch");
  const Eigen::Index n = x.size();
  if (n == 0) return CVector();
  const CVector lin = linear_convolve(x, y);
  CVector out = CVector::Zero(n);
  for (Eigen::Index k = 0; k < lin.size(); ++k) out[k % n] += lin[k];
  return out;
}

}  // namespace bilin::signals
