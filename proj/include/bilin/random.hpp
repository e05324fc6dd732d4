#pragma once

#include <cstdint>
#include <vector>

#include "bilin/types.hpp"

namespace bilin {

// Deterministic, splittable generator: xoshiro256** seeded through splitmix64.
// Uniform, Gaussian and Rademacher draws are implemented here, not taken from <random>.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  // Child generator for an independent stream. Depends only on the parent's
  // seed and `stream`, never on how many numbers the parent has produced.
  Rng split(std::uint64_t stream) const;

  std::uint64_t next_u64();
  double uniform();  // [0, 1), 53-bit resolution
  double normal();   // standard normal, Box-Muller
  cplx complex_normal();  // E|z|^2 = 1
  double rademacher();    // +1 / -1 with equal probability
  std::size_t uniform_index(std::size_t n);  // [0, n), unbiased

  // k distinct indices from [0, n), sorted ascending.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

  CVector complex_normal_vector(std::size_t n);

 private:
  std::uint64_t seed_;
  std::uint64_t state_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace bilin
