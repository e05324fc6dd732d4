#pragma once

// Symmetrization maps, Fourier intensity measurements, the binomial identity
// and empirical stability of phase retrieval up to a global sign.

#include <cstdint>
#include <string>

#include <json.hpp>

#include "bilin/operators.hpp"
#include "bilin/types.hpp"

namespace bilin::phase {

enum class Variant {
  plain,   // S, length 2n - 1
  padded,  // zero pad to 2n - 1, then S: length 4n - 3
  prime,   // S', length 4n - 1
};

std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);

struct SymmetrizedVector {
  std::size_t original_n = 0;
  Variant variant = Variant::plain;
  CVector data;
};

// (x_0, ..., x_{n-1}, conj x_{n-1}, ..., conj x_1). Requires |Im x_0| <= 1e-12 |x|.
SymmetrizedVector symmetrize(const CVector& x);
SymmetrizedVector symmetrize_padded(const CVector& x);
// (0^n, x_0, ..., x_{n-1}, conj x_{n-1}, ..., conj x_0, 0^{n-1}).
SymmetrizedVector symmetrize_prime(const CVector& x);
SymmetrizedVector symmetrize(const CVector& x, Variant v);

// |F S(x)|^2 with the unitary DFT of the symmetrized dimension.
RVector intensity_measurements(const CVector& x, Variant v = Variant::padded);

// |(B(x1,x1) - B(x2,x2)) - B(x1 - x2, x1 + x2)| / (|x1| + |x2|)^2.
// With require_symmetric, B is probed for B(a,b) = B(b,a) first and rejected otherwise.
double binomial_difference_check(const CVector& x1, const CVector& x2, const operators::BilinearMap& b,
                                 bool require_symmetric = true);

// Sesquilinear circular correlation (x, y) -> x (o) y as a pair map.
operators::BilinearMap circular_correlation_map(std::size_t n);

struct StabilityEstimate {
  double c_hat = 0.0;
  CVector worst_x1;
  CVector worst_x2;
  std::size_t trials = 0;
  std::size_t excluded = 0;  // denominator below the threshold
  bool positive = false;     // c_hat > 1e-8
  Variant variant = Variant::padded;
  nlohmann::json worst_pair_json() const;
};

inline constexpr double kDenominatorThreshold = 1e-8;

// | |F S x1|^2 - |F S x2|^2 | / (|S(x1 - x2)| |S(x1 + x2)|), or with 2 |x1 - x2| |x1 + x2|
// in the denominator for S'. Returns NaN when the denominator is below the threshold.
double stability_ratio(const CVector& x1, const CVector& x2, Variant v);

// Minimum stability ratio over random pairs, refined by 200-step compass searches.
StabilityEstimate stability_constant_estimate(std::size_t n, std::size_t trials, std::uint64_t seed,
                                              Variant v = Variant::padded, unsigned threads = 1);

}  // namespace bilin::phase
