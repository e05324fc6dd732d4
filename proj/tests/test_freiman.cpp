#include <doctest.h>

#include <cmath>
#include <set>

#include "bilin/freiman.hpp"
#include "bilin/random.hpp"
#include "bilin/signals.hpp"
#include "oracles.hpp"

using namespace bilin;
using namespace bilin::freiman;

namespace {

// Direct quadruple enumeration over ordered 4-tuples.
bool oracle_isomorphic(const std::vector<Index>& a, const std::vector<Index>& b) {
  const std::size_t m = a.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l)
          if ((a[i] + a[j] == a[k] + a[l]) != (b[i] + b[j] == b[k] + b[l])) return false;
  return true;
}

// Smallest D such that some injective assignment into [0, D] is isomorphic.
Index oracle_min_diameter(const std::vector<Index>& a) {
  const std::size_t m = a.size();
  for (Index d = static_cast<Index>(m) - 1;; ++d) {
    std::vector<Index> img(m, 0);
    for (;;) {
      std::set<Index> distinct(img.begin(), img.end());
      if (distinct.size() == m && oracle_isomorphic(a, img)) return d;
      std::size_t pos = 0;
      while (pos < m && img[pos] == d) img[pos++] = 0;
      if (pos == m) break;
      ++img[pos];
    }
  }
}

IndexSet random_set(Rng& rng, std::size_t m, Index range) {
  std::set<Index> s;
  while (s.size() < m) s.insert(static_cast<Index>(rng.uniform_index(static_cast<std::size_t>(2 * range + 1))) - range);
  return IndexSet(std::vector<Index>(s.begin(), s.end()));
}

CVector values_on(Rng& rng, const IndexSet& support, Index len) {
  CVector v = CVector::Zero(len);
  for (Index i : support.elements()) v[i] = rng.complex_normal();
  return v;
}

}  // namespace

TEST_CASE("IndexSet") {
  const IndexSet a({10, -2, 0});
  CHECK(a.elements() == std::vector<Index>{-2, 0, 10});
  CHECK(a.contains_zero());
  CHECK(a.diameter() == 12);
  CHECK_FALSE(IndexSet({1, 2}).contains_zero());
  CHECK_THROWS_AS(IndexSet({1, 1}), std::invalid_argument);
  CHECK(IndexSet::union_of(IndexSet({0, 3}), IndexSet({3, 5})).elements() == std::vector<Index>{0, 3, 5});
}

TEST_CASE("homomorphism and isomorphism examples") {
  const IndexSet a({0, 1, 10});
  CHECK(is_freiman_homomorphism(a, {0, 1, 2}));
  CHECK_FALSE(is_freiman_isomorphism(a, {0, 1, 2}));
  CHECK(is_freiman_isomorphism(a, {0, 1, 3}));
  CHECK(is_freiman_isomorphism(a, a.elements()));
  CHECK_THROWS_AS(is_freiman_isomorphism(a, {0, 1}), std::invalid_argument);

  const IndexSet ap({0, 1, 2});
  CHECK_FALSE(is_freiman_homomorphism(ap, {0, 1, 3}));  // 0 + 2 = 1 + 1 is lost
  CHECK(is_freiman_homomorphism(ap, {5, 5, 5}));
  CHECK_FALSE(is_freiman_isomorphism(ap, {5, 5, 5}));

  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    const IndexSet s = random_set(rng, 2 + rng.uniform_index(5), 20);
    const Index p = static_cast<Index>(rng.uniform_index(7)) - 3, q = static_cast<Index>(rng.uniform_index(41)) - 20;
    if (p == 0) continue;
    std::vector<Index> img;
    for (Index v : s.elements()) img.push_back(p * v + q);
    CHECK(is_freiman_homomorphism(s, img));
    CHECK(is_freiman_isomorphism(s, img));
    // composing with an affine map preserves the verdict
    std::vector<Index> other(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) other[i] = static_cast<Index>(rng.uniform_index(9));
    std::vector<Index> composed;
    for (Index v : other) composed.push_back(p * v + q);
    CHECK(is_freiman_isomorphism(s, other) == is_freiman_isomorphism(s, composed));
    CHECK(is_freiman_isomorphism(s, other) == oracle_isomorphic(s.elements(), other));
  }
}

TEST_CASE("grynkiewicz bound") {
  CHECK(grynkiewicz_bound(3, 1) == doctest::Approx(2.0));
  CHECK(grynkiewicz_bound(4, 2) == doctest::Approx(25.0));
  for (std::size_t m = 2; m < 12; ++m) CHECK(grynkiewicz_bound(m + 1, 3) > grynkiewicz_bound(m, 3));
}

TEST_CASE("min diameter images") {
  const auto r = min_diameter_isomorphic_image(IndexSet({0, 1, 10}));
  CHECK(r.diameter == 3);
  CHECK(r.verified_isomorphism);
  CHECK(r.search_exhaustive);
  CHECK(oracle_isomorphic(r.source, r.image));
  const std::set<Index> img(r.image.begin(), r.image.end());
  CHECK((img == std::set<Index>{0, 1, 3} || img == std::set<Index>{0, 2, 3}));
  CHECK(2 * r.image[0] <= r.diameter);

  const auto same = min_diameter_isomorphic_image(IndexSet({0, 1, 2}));
  CHECK(same.diameter == 2);
  CHECK(same.image == std::vector<Index>{0, 1, 2});

  const auto j = r.to_json();
  CHECK(j["diameter"] == 3);
  CHECK(j["source"].size() == 3);
  CHECK(j["verified_isomorphism"] == true);

  Rng rng(2);
  for (int t = 0; t < 40; ++t) {
    const IndexSet s = random_set(rng, 2 + rng.uniform_index(3), 6);
    const auto res = min_diameter_isomorphic_image(s);
    CHECK(res.verified_isomorphism);
    CHECK(res.search_exhaustive);
    CHECK(res.diameter <= s.diameter());
    CHECK(res.diameter == oracle_min_diameter(s.elements()));
    CHECK(*std::min_element(res.image.begin(), res.image.end()) == 0);
  }

  const IndexSet big({0, 1, 5, 17, 40, 101});
  const auto t1 = min_diameter_isomorphic_image(big, kDefaultBudget, 1);
  const auto t3 = min_diameter_isomorphic_image(big, kDefaultBudget, 3);
  CHECK(t1.to_json() == t3.to_json());

  const auto cut = min_diameter_isomorphic_image(big, 10);
  CHECK_FALSE(cut.search_exhaustive);
  CHECK(cut.verified_isomorphism);
  CHECK_THROWS_AS(min_diameter_isomorphic_image(IndexSet()), std::invalid_argument);
}

TEST_CASE("remapped convolution norm") {
  Rng rng(3);
  const IndexSet a({0, 1, 10});
  const CVector x = values_on(rng, IndexSet({0, 10}), 11), y = values_on(rng, IndexSet({0, 1, 10}), 11);
  RemapResult identity;
  identity.source = identity.image = a.elements();
  CHECK(remapped_convolution_norm_check(x, y, identity) == 0.0);

  const auto r = min_diameter_isomorphic_image(a);
  CHECK(remapped_convolution_norm_check(x, y, r) <= 1e-10 * x.norm() * y.norm());

  // {0,1,10} -> {0,1,2} merges 0 + 2 with 1 + 1
  RemapResult bad;
  bad.source = a.elements();
  bad.image = {0, 1, 2};
  CVector xc = CVector::Zero(11), yc = CVector::Zero(11);
  xc[0] = 1.0;
  xc[1] = 1.0;
  yc[1] = 1.0;
  yc[10] = 1.0;
  CHECK(remapped_convolution_norm_check(xc, yc, bad) > 0.1);

  RemapResult partial;
  partial.source = {0, 1};
  partial.image = {0, 1};
  CHECK_THROWS_AS(remapped_convolution_norm_check(x, y, partial), std::out_of_range);

  int verified = 0;
  for (int t = 0; t < 1000; ++t) {
    const IndexSet sx = random_set(rng, 1 + rng.uniform_index(3), 15), sy = random_set(rng, 1 + rng.uniform_index(3), 15);
    const IndexSet sxp(std::vector<Index>([&] {
      std::vector<Index> v;
      for (Index e : sx.elements()) v.push_back(e + 15);
      return v;
    }()));
    const IndexSet syp(std::vector<Index>([&] {
      std::vector<Index> v;
      for (Index e : sy.elements()) v.push_back(e + 15);
      return v;
    }()));
    const IndexSet u = IndexSet::union_of(sxp, syp);
    if (u.size() > 6) continue;
    const auto res = min_diameter_isomorphic_image(u);
    if (!res.verified_isomorphism) continue;
    ++verified;
    const CVector xv = values_on(rng, sxp, 31), yv = values_on(rng, syp, 31);
    CHECK(remapped_convolution_norm_check(xv, yv, res) <= 1e-10 * xv.norm() * yv.norm());
    const CVector direct = oracle::direct_linear_convolution(xv, yv);
    CHECK(std::abs(direct.norm() - signals::linear_convolve(xv, yv).norm()) <= 1e-10 * direct.norm());
  }
  CHECK(verified == 1000);

  CHECK(support_of(x).elements() == std::vector<Index>{0, 10});
}
