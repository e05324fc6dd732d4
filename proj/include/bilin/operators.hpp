#pragma once

// Measurement ensembles Phi and lifted bilinear maps B as matrix-free
// operators with adjoints. Operators are immutable after construction and
// safe to share between threads.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bilin/signals.hpp"
#include "bilin/types.hpp"

namespace bilin::operators {

enum class Distribution { rademacher, gaussian };

// Everything needed to rebuild an operator bit-for-bit.
struct OperatorDescriptor {
  std::string ensemble;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::uint64_t seed = 0;      // Gaussian entries, or the circulant generator eta
  std::uint64_t seed_aux = 0;  // sign flips xi
  Distribution distribution = Distribution::rademacher;
  std::vector<std::size_t> omega;         // selected rows, resolved
  std::optional<std::uint64_t> omega_seed;  // set when omega was drawn at random
  long long j1 = 0;
  long long j2 = 0;
};

class LinearOperator {
 public:
  using Action = std::function<CVector(const CVector&)>;

  LinearOperator(std::size_t rows, std::size_t cols, Action apply, Action adjoint,
                 OperatorDescriptor descriptor);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const OperatorDescriptor& descriptor() const { return descriptor_; }

  // Throw std::invalid_argument on a length mismatch.
  CVector apply(const CVector& x) const;
  CVector adjoint(const CVector& w) const;

  // Dense rows x cols matrix, one apply per column.
  CMatrix materialize() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  Action apply_;
  Action adjoint_;
  OperatorDescriptor descriptor_;
};

// Rows to keep in a partial circulant: explicit list or a seed for a uniform
// draw without replacement.
using RowSelection = std::variant<std::vector<std::size_t>, std::uint64_t>;

LinearOperator identity_operator(std::size_t n);
LinearOperator dense_operator(CMatrix matrix, std::string name = "dense");

// i.i.d. complex Gaussian entries with E|a_ij|^2 = 1/m, so E|Phi x|^2 = |x|^2.
LinearOperator gaussian_operator(std::size_t m, std::size_t n, std::uint64_t seed);

// D_xi: point-wise multiplication with i.i.d. +-1 (or real Gaussian) entries.
LinearOperator sign_diagonal(std::size_t n, std::uint64_t seed,
                             Distribution dist = Distribution::rademacher);

// P_Omega D_hat_eta: rows Omega of the circulant whose rows are cyclic shifts
// of eta, scaled by 1/sqrt(m). Applied with FFTs.
LinearOperator partial_circulant_demodulator(std::size_t m, std::size_t n, std::uint64_t seed_eta,
                                             const RowSelection& omega,
                                             Distribution dist = Distribution::rademacher);

// P_Omega D_hat_eta D_xi.
LinearOperator universal_random_demodulator(std::size_t m, std::size_t n, std::uint64_t seed_eta,
                                            std::uint64_t seed_xi, const RowSelection& omega,
                                            Distribution dist = Distribution::rademacher);

// (Psi_j)_{kl} = e^{i 2 pi j1 l / n} delta_{k, l - j2 mod n}; indices reduced mod n.
LinearOperator weyl_heisenberg(long long j1, long long j2, std::size_t n);

LinearOperator dft_operator(std::size_t n);

// (outer o inner)(x) = outer(inner(x)).
LinearOperator compose(const LinearOperator& outer, const LinearOperator& inner);

// Rebuilds an operator from its descriptor (all ensembles except compositions
// of arbitrary operators and dense matrices).
LinearOperator make_operator(const OperatorDescriptor& descriptor);

std::string to_string(Distribution dist);
Distribution distribution_from_string(const std::string& name);

// Lifted bilinear map B: C^{n1} x C^{n2} -> C^n, equivalently a linear map on
// n1 x n2 matrices with B(x, y) = B(x y^T). vec() is column-major.
class BilinearMap {
 public:
  using PairAction = std::function<CVector(const CVector&, const CVector&)>;
  using LiftAction = std::function<CVector(const CMatrix&)>;
  using LiftAdjoint = std::function<CMatrix(const CVector&)>;

  enum class Kind { zero_padded_convolution, circular_convolution, identity, spreading, custom };

  BilinearMap(std::string name, Kind kind, std::size_t n1, std::size_t n2, std::size_t n_out,
              PairAction pair, LiftAction lift = {}, LiftAdjoint lift_adjoint = {});

  const std::string& name() const { return name_; }
  Kind kind() const { return kind_; }
  std::size_t n1() const { return n1_; }
  std::size_t n2() const { return n2_; }
  std::size_t n_out() const { return n_out_; }

  CVector apply(const CVector& x, const CVector& y) const;
  CVector lifted_apply(const CMatrix& m) const;
  CMatrix lifted_adjoint(const CVector& z) const;
  // The lift as an operator on vec(M) in C^{n1 n2}.
  LinearOperator lifted_operator() const;

 private:
  struct DenseCache;
  const CMatrix& dense_lift() const;

  std::string name_;
  Kind kind_;
  std::size_t n1_, n2_, n_out_;
  PairAction pair_;
  LiftAction lift_;
  LiftAdjoint lift_adjoint_;
  std::shared_ptr<DenseCache> cache_;
};

// x, y in C^n (supports anywhere in [n]), output the linear convolution in C^{2n-1}.
BilinearMap zero_padded_convolution_map(std::size_t n);
BilinearMap circular_convolution_map(std::size_t n);
// vec(x y^T) in C^{n1 n2}.
BilinearMap identity_lift(std::size_t n1, std::size_t n2);
// Spreading channel: x in C^{n^2} indexed j = j1 * n + j2, y in C^n, B(x, y) = sum_j x_j Psi_j y.
BilinearMap spreading_map(std::size_t n);

CVector spreading_channel(const signals::SparseVector& x, const CVector& y);

CVector rank_one_pack(const CVector& x, const CVector& y);
CVector vec(const CMatrix& m);
CMatrix unvec(const CVector& v, std::size_t n1, std::size_t n2);

}  // namespace bilin::operators
