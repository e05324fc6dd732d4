#pragma once

// Sparse complex vectors and the convolution algebra on Z and Z_n.
//
// DFT convention: unitary, forward kernel e^{-i 2 pi k l / n}. Every quantity
// used downstream (|F x|^2, Parseval, the convolution theorem up to the sqrt(n)
// factor) is independent of the kernel sign.

#include <cstddef>
#include <span>
#include <vector>

#include "bilin/types.hpp"

namespace bilin::signals {

// Relative magnitude below which arithmetic results are dropped from supports.
inline constexpr double kPruneRelative = 1e-14;

class SparseVector {
 public:
  // Throws std::invalid_argument unless `support` is strictly increasing,
  // inside [0, n), matches `values` in length and every value is nonzero.
  SparseVector(std::size_t n, std::vector<std::size_t> support, std::vector<cplx> values);

  static SparseVector zero(std::size_t n);
  static SparseVector basis(std::size_t n, std::size_t j, cplx value = 1.0);
  // Keeps entries with |v_k| > tolerance. tolerance = 0 keeps every exact nonzero.
  static SparseVector from_dense(const CVector& dense, double tolerance = 0.0);

  std::size_t dim() const { return n_; }
  std::size_t sparsity() const { return support_.size(); }
  const std::vector<std::size_t>& support() const { return support_; }
  const std::vector<cplx>& values() const { return values_; }

  cplx at(std::size_t k) const;
  CVector dense() const;
  double norm() const;
  SparseVector scaled(cplx factor) const;
  SparseVector normalized() const;
  // Same values, support translated cyclically by `shift` in Z_n.
  SparseVector cyclic_shift(std::size_t shift) const;
  // Same values on a new ambient dimension (support must fit).
  SparseVector with_dim(std::size_t n) const;

 private:
  std::size_t n_;
  std::vector<std::size_t> support_;
  std::vector<cplx> values_;
};

// (x * y)_k = sum_i x_i y_{k-i}, output dimension n_x + n_y - 1.
// Direct support-pair summation when s*f < 512, FFT otherwise.
SparseVector linear_convolve(const SparseVector& x, const SparseVector& y);

// (x (*) y)_k = sum_i x_i y_{(k-i) mod n}. Both operands must have dimension n.
SparseVector circular_convolve(const SparseVector& x, const SparseVector& y, std::size_t n);

// x (o) y = x (*) Gamma conj(y), i.e. (x (o) y)_k = sum_i x_i conj(y_{i-k}).
SparseVector circular_correlate(const SparseVector& x, const SparseVector& y, std::size_t n);
// Fourier route: sqrt(n) F^* (F x .* conj(F y)).
CVector circular_correlate_fourier(const CVector& x, const CVector& y);

// (Gamma x)_k = x_{-k mod n}.
SparseVector time_reverse(const SparseVector& x);
CVector time_reverse(const CVector& x);

CVector dft(const CVector& x);
CVector idft(const CVector& x);
CVector dft(const SparseVector& x);

// Dense kernels used by Monte Carlo loops.
CVector linear_convolve(const CVector& x, const CVector& y);
CVector circular_convolve(const CVector& x, const CVector& y);

// Smallest power of two >= n.
std::size_t next_pow2(std::size_t n);

}  // namespace bilin::signals
