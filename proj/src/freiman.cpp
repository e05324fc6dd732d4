#include "bilin/freiman.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bilin/parallel.hpp"
#include "bilin/signals.hpp"

namespace bilin::freiman {

namespace {

// a[i] + a[j] for i <= j, row-major.
std::vector<Index> pair_sums(const std::vector<Index>& v) {
  std::vector<Index> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i; j < v.size(); ++j) out.push_back(v[i] + v[j]);
  return out;
}

void require_aligned(const IndexSet& a, const std::vector<Index>& image) {
  if (image.size() != a.size()) throw std::invalid_argument("freiman: image size differs from |A|");
}

// Backtracking over images in [0, d] that contain 0 and d.
class DiameterSearch {
 public:
  DiameterSearch(const std::vector<Index>& a, Index d, std::size_t budget) : a_(a), d_(d), budget_(budget) {}

  bool run() {
    img_.assign(a_.size(), 0);
    used_.assign(static_cast<std::size_t>(d_) + 1, false);
    found_ = extend(0, false, false);
    return found_;
  }

  bool found() const { return found_; }
  bool cut_off() const { return cut_off_; }
  std::size_t nodes() const { return nodes_; }
  const std::vector<Index>& image() const { return img_; }

 private:
  bool consistent(std::size_t k) const {
    for (std::size_t i = 0; i <= k; ++i) {
      const Index s = a_[i] + a_[k], t = img_[i] + img_[k];
      for (std::size_t p = 0; p <= k; ++p)
        for (std::size_t q = p; q <= k; ++q) {
          if (p == i && q == k) continue;
          if ((a_[p] + a_[q] == s) != (img_[p] + img_[q] == t)) return false;
        }
    }
    return true;
  }

  bool extend(std::size_t k, bool has_zero, bool has_top) {
    if (k == a_.size()) return has_zero && has_top;
    const std::size_t left = a_.size() - k;
    if (static_cast<std::size_t>(!has_zero) + static_cast<std::size_t>(!has_top) > left) return false;
    for (Index v = 0; v <= d_; ++v) {
      if (used_[static_cast<std::size_t>(v)]) continue;
      if (k == 0 && 2 * v > d_) break;
      if (++nodes_ > budget_) {
        cut_off_ = true;
        return false;
      }
      img_[k] = v;
      if (!consistent(k)) continue;
      used_[static_cast<std::size_t>(v)] = true;
      const bool ok = extend(k + 1, has_zero || v == 0, has_top || v == d_);
      used_[static_cast<std::size_t>(v)] = false;
      if (ok) return true;
      if (cut_off_) return false;
    }
    return false;
  }

  const std::vector<Index>& a_;
  Index d_;
  std::size_t budget_;
  std::vector<Index> img_;
  std::vector<bool> used_;
  std::size_t nodes_ = 0;
  bool found_ = false;
  bool cut_off_ = false;
};

}  // namespace

IndexSet::IndexSet(std::vector<Index> elements) : elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end());
  if (std::adjacent_find(elements_.begin(), elements_.end()) != elements_.end()) {
    throw std::invalid_argument("IndexSet: duplicate elements");
  }
}

bool IndexSet::contains(Index v) const { return std::binary_search(elements_.begin(), elements_.end(), v); }

IndexSet IndexSet::union_of(const IndexSet& a, const IndexSet& b) {
  std::vector<Index> out;
  std::set_union(a.elements_.begin(), a.elements_.end(), b.elements_.begin(), b.elements_.end(),
                 std::back_inserter(out));
  return IndexSet(std::move(out));
}

bool is_freiman_homomorphism(const IndexSet& a, const std::vector<Index>& image) {
  require_aligned(a, image);
  const auto sa = pair_sums(a.elements()), sb = pair_sums(image);
  for (std::size_t p = 0; p < sa.size(); ++p)
    for (std::size_t q = p + 1; q < sa.size(); ++q)
      if (sa[p] == sa[q] && sb[p] != sb[q]) return false;
  return true;
}

bool is_freiman_isomorphism(const IndexSet& a, const std::vector<Index>& image) {
  require_aligned(a, image);
  const auto sa = pair_sums(a.elements()), sb = pair_sums(image);
  for (std::size_t p = 0; p < sa.size(); ++p)
    for (std::size_t q = p + 1; q < sa.size(); ++q)
      if ((sa[p] == sa[q]) != (sb[p] == sb[q])) return false;
  return true;
}

Index RemapResult::map(Index v) const {
  for (std::size_t i = 0; i < source.size(); ++i)
    if (source[i] == v) return image[i];
  throw std::out_of_range("RemapResult: index not in the source set");
}

nlohmann::json RemapResult::to_json() const {
  return {{"source", source},
          {"image", image},
          {"diameter", diameter},
          {"verified_isomorphism", verified_isomorphism},
          {"search_exhaustive", search_exhaustive},
          {"nodes", nodes}};
}

RemapResult min_diameter_isomorphic_image(const IndexSet& a, std::size_t budget, unsigned threads) {
  if (a.size() == 0) throw std::invalid_argument("min_diameter_isomorphic_image: empty set");
  const auto& el = a.elements();
  RemapResult res;
  res.source = el;
  for (Index v : el) res.image.push_back(v - el.front());
  res.diameter = a.diameter();
  bool all_complete = true;

  const Index lo = static_cast<Index>(a.size()) - 1;
  const unsigned batch = std::max(1u, threads);
  for (Index start = lo; start < a.diameter(); start += batch) {
    const std::size_t count = static_cast<std::size_t>(std::min<Index>(batch, a.diameter() - start));
    std::vector<DiameterSearch> searches;
    searches.reserve(count);
    for (std::size_t i = 0; i < count; ++i) searches.emplace_back(el, start + static_cast<Index>(i), budget);
    parallel_for(count, threads, [&](std::size_t i) { searches[i].run(); });
    bool done = false;
    for (std::size_t i = 0; i < count && !done; ++i) {
      res.nodes += searches[i].nodes();
      if (searches[i].found()) {
        res.image = searches[i].image();
        res.diameter = start + static_cast<Index>(i);
        done = true;
      } else if (searches[i].cut_off()) {
        all_complete = false;
      }
    }
    if (done) break;
  }
  res.verified_isomorphism = is_freiman_isomorphism(a, res.image);
  res.search_exhaustive = all_complete && a.size() <= kExhaustiveSetSize;
  return res;
}

double grynkiewicz_bound(std::size_t m, std::size_t d) {
  const double dd = static_cast<double>(d);
  const double fact = std::tgamma(dd + 1.0);
  return fact * fact * std::pow(1.5, dd - 1.0) * std::pow(2.0, static_cast<double>(m) - 2.0) +
         (std::pow(3.0, dd - 1.0) - 1.0) / 2.0;
}

IndexSet support_of(const CVector& v, double tol) {
  std::vector<Index> out;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > tol) out.push_back(i);
  return IndexSet(std::move(out));
}

double remapped_convolution_norm_check(const CVector& x, const CVector& y, const RemapResult& remap) {
  if (remap.image.size() != remap.source.size()) throw std::invalid_argument("remapped_convolution_norm_check: bad map");
  if (remap.image.empty()) throw std::invalid_argument("remapped_convolution_norm_check: empty map");
  const Index lo = *std::min_element(remap.image.begin(), remap.image.end());
  const Index hi = *std::max_element(remap.image.begin(), remap.image.end());
  const Eigen::Index len = static_cast<Eigen::Index>(hi - lo + 1);
  auto carry = [&](const CVector& v) {
    CVector out = CVector::Zero(len);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (v[i] == cplx(0.0)) continue;
      const Index target = remap.map(i) - lo;
      out[static_cast<Eigen::Index>(target)] = v[i];
    }
    return out;
  };
  const CVector xt = carry(x), yt = carry(y);
  return std::abs(signals::linear_convolve(x, y).norm() - signals::linear_convolve(xt, yt).norm());
}

}  // namespace bilin::freiman
