#pragma once

// Restricted norm multiplicativity constants of sparse convolutions.
//
// For s-sparse x and f-sparse y in C^n,
//   alpha(s,f) ||x|| ||y|| <= ||x * y|| <= beta(s,f) ||x|| ||y||,
// with beta(s,f)^2 = min(s,f) and the zero-padded (linear) convolution.

#include <cstdint>
#include <string>
#include <vector>

#include "bilin/signals.hpp"
#include "bilin/types.hpp"

namespace bilin::rnmp {

class HermitianToeplitz {
 public:
  // first_row = (b_0, ..., b_{n-1}); b_{-k} = conj(b_k). Throws unless b_0 is real.
  explicit HermitianToeplitz(CVector first_row);

  std::size_t size() const { return static_cast<std::size_t>(first_row_.size()); }
  const CVector& first_row() const { return first_row_; }
  cplx coefficient(long long k) const;  // b_k for |k| < n
  CMatrix matrix() const;               // (i, j) -> b_{j-i}
  CMatrix principal_submatrix(const std::vector<std::size_t>& rows) const;

 private:
  CVector first_row_;
};

// b_k = sum_j conj(t_j) t_{j+k}, computed on the normalized t.
HermitianToeplitz autocorrelation_toeplitz(const signals::SparseVector& t, std::size_t n);

// b(omega) = sum_{|k| < n} b_k e^{i k omega}.
double symbol_eval(const HermitianToeplitz& t, double omega);
// Minimum of the symbol over `grid` equispaced frequencies in [0, 2 pi).
double symbol_grid_min(const HermitianToeplitz& t, std::size_t grid = 4096);

double min_eigenvalue(const HermitianToeplitz& t);

struct RestrictedEigenvalue {
  double value = 0.0;
  std::vector<std::size_t> support;  // minimizing principal index set
  bool heuristic = false;            // true when supports were not enumerated
};

inline constexpr double kExhaustiveLimit = 1e5;

// min over |T| = s of lambda_min(B_T). Exhaustive when C(n, s) <= 1e5, else
// greedy swap descent from `restarts` random supports (an upper bound).
RestrictedEigenvalue restricted_min_eigenvalue(const HermitianToeplitz& t, std::size_t s,
                                               std::uint64_t seed = 0, std::size_t restarts = 32);

// |det T| / (sqrt(n) (sum_{|k|<n} |b_k|^2)^{(n-1)/2}).
double eigen_det_lower_bound(const HermitianToeplitz& t);

double toeplitz_determinant(const HermitianToeplitz& t);

struct DeterminantEstimate {
  double value = 0.0;
  signals::SparseVector argmin = signals::SparseVector::zero(1);
  std::size_t supports_searched = 0;
  bool exhaustive_supports = true;
  // Always an upper estimate of the true minimum: local search cannot certify it.
  bool upper_estimate = true;
};

// Estimate of D_{n,k} = min over unit k-sparse t in C^n of |det B_t|.
// `search_budget` local minimizations are spread across the supports.
DeterminantEstimate restricted_determinant(std::size_t n, std::size_t k, std::size_t search_budget,
                                           std::uint64_t seed, unsigned threads = 1);

// floor(2^{2(s+f-2) log2(s+f-2)}) clipped to n_ambient (0 = no clip);
// s + f - 2 <= 1 gives min(n_ambient, s + f - 1).
std::size_t compressed_dimension(std::size_t s, std::size_t f, std::size_t n_ambient = 0);

struct Certificate {
  std::string quantity;
  std::string method;
  double value = 0.0;
  std::uint64_t seed = 0;
  bool heuristic = false;
  std::string detail;
};

struct LowerBound {
  double alpha = 0.0;
  std::size_t n_effective = 0;
  double determinant = 1.0;  // D_{n_eff, min(s,f)} estimate
  Certificate certificate;
};

// alpha^2 >= D_{n~, min(s,f)} / sqrt(n~ min(s,f)^{n~ - 1}), n~ = compressed_dimension(s, f, n).
// min(s, f) = 1 gives alpha = 1.
LowerBound alpha_lower_bound(std::size_t s, std::size_t f, std::size_t n, std::size_t search_budget = 64,
                             std::uint64_t seed = 0, unsigned threads = 1);

struct EmpiricalAlpha {
  double value = 1.0;
  CVector x;  // unit minimizers, zero-padded convolution ||x * y|| = value
  CVector y;
  std::size_t support_pairs = 0;
  bool exhaustive_supports = true;
  Certificate certificate;
};

struct SearchOptions {
  std::size_t trials = 32;           // restarts per support pair / random starts
  std::size_t max_iterations = 200;  // alternating minimization
  double stall_tolerance = 1e-10;
  std::size_t enumeration_limit = 4096;  // support pairs searched exhaustively
  unsigned threads = 1;
};

// min over unit x in Sigma_s^n, y in Sigma_f^n of ||x * y||.
EmpiricalAlpha alpha_empirical(std::size_t s, std::size_t f, std::size_t n, std::uint64_t seed,
                               const SearchOptions& options = {});

// Fixed supports: alternating bottom-eigenvector minimization from (x0, y0).
double alternating_minimize(const std::vector<std::size_t>& support_x, const std::vector<std::size_t>& support_y,
                            std::size_t n, CVector& x, CVector& y, std::size_t max_iterations = 200,
                            double stall_tolerance = 1e-10);

struct RnmpBounds {
  std::size_t s = 0;
  std::size_t f = 0;
  std::size_t n = 0;
  std::size_t n_effective = 0;
  double alpha_lower = 0.0;
  double alpha_empirical = 0.0;
  double beta = 0.0;
  std::vector<Certificate> certificates;
};

RnmpBounds compute_bounds(std::size_t s, std::size_t f, std::size_t n, std::uint64_t seed,
                          const SearchOptions& options = {}, std::size_t determinant_budget = 64);

}  // namespace bilin::rnmp
