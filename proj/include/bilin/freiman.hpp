#pragma once

// Order-2 Freiman homomorphisms and isomorphisms of integer index sets,
// minimal-diameter isomorphic images, and norm checks for remapped supports.

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "bilin/types.hpp"

namespace bilin::freiman {

using Index = std::int64_t;

class IndexSet {
 public:
  IndexSet() = default;
  // Sorts; throws std::invalid_argument on duplicates.
  explicit IndexSet(std::vector<Index> elements);

  const std::vector<Index>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  Index operator[](std::size_t i) const { return elements_[i]; }
  bool contains(Index v) const;
  bool contains_zero() const { return contains(0); }
  Index diameter() const { return elements_.empty() ? 0 : elements_.back() - elements_.front(); }

  static IndexSet union_of(const IndexSet& a, const IndexSet& b);

 private:
  std::vector<Index> elements_;
};

// image[i] is the image of a[i].
bool is_freiman_homomorphism(const IndexSet& a, const std::vector<Index>& image);
bool is_freiman_isomorphism(const IndexSet& a, const std::vector<Index>& image);

struct RemapResult {
  std::vector<Index> source;
  std::vector<Index> image;  // image[i] = phi(source[i])
  Index diameter = 0;
  bool verified_isomorphism = false;
  bool search_exhaustive = false;
  std::size_t nodes = 0;  // backtracking nodes visited

  Index map(Index v) const;  // throws std::out_of_range
  nlohmann::json to_json() const;
};

inline constexpr std::size_t kExhaustiveSetSize = 8;
inline constexpr std::size_t kDefaultBudget = 50'000'000;

// Smallest-diameter isomorphic image in [0, D], scanning D upward from |A| - 1.
// budget limits the nodes per candidate diameter; a cut-off search clears
// search_exhaustive. Sets larger than kExhaustiveSetSize are searched but never
// reported as exhaustive.
RemapResult min_diameter_isomorphic_image(const IndexSet& a, std::size_t budget = kDefaultBudget,
                                          unsigned threads = 1);

// d!^2 (3/2)^(d-1) 2^(m-2) + (3^(d-1) - 1) / 2.
double grynkiewicz_bound(std::size_t m, std::size_t d);

// | |x * y| - |x~ * y~| | with linear convolutions, where x~ and y~ carry the
// values of x and y at the remapped positions. The map must cover supp x and supp y.
double remapped_convolution_norm_check(const CVector& x, const CVector& y, const RemapResult& remap);

IndexSet support_of(const CVector& v, double tol = 0.0);

}  // namespace bilin::freiman
