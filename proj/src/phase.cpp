#include "bilin/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "bilin/parallel.hpp"
#include "bilin/random.hpp"
#include "bilin/signals.hpp"

namespace bilin::phase {

namespace {

constexpr std::size_t kRefinedPairs = 16;
constexpr std::size_t kPatternSteps = 200;

void require_real_head(const CVector& x) {
  if (x.size() == 0) throw std::invalid_argument("symmetrize: empty vector");
  if (std::abs(x[0].imag()) > 1e-12 * std::max(x.norm(), 1e-300)) {
    throw std::invalid_argument("symmetrize: x_0 must be real");
  }
}

double ratio_or_inf(const CVector& x1, const CVector& x2, Variant v) {
  const double r = stability_ratio(x1, x2, v);
  return std::isnan(r) ? std::numeric_limits<double>::infinity() : r;
}

// Real coordinates of (x1, x2); the imaginary parts of the leading entries are
// frozen for the variants that need x_0 real.
struct PairCoordinates {
  std::size_t n;
  bool real_head;

  std::size_t count() const { return 4 * n - (real_head ? 2 : 0); }

  std::pair<Eigen::Index, bool> locate(std::size_t k) const {
    // returns (entry of the stacked 2n vector, is_imaginary)
    std::size_t idx = 0;
    for (std::size_t e = 0; e < 2 * n; ++e) {
      const bool head = real_head && (e == 0 || e == n);
      if (idx == k) return {static_cast<Eigen::Index>(e), false};
      ++idx;
      if (!head) {
        if (idx == k) return {static_cast<Eigen::Index>(e), true};
        ++idx;
      }
    }
    throw std::out_of_range("PairCoordinates");
  }
};

void normalize_pair(CVector& x1, CVector& x2) {
  const double s = std::sqrt(x1.squaredNorm() + x2.squaredNorm());
  if (s > 0.0) {
    x1 /= s;
    x2 /= s;
  }
}

double compass_search(CVector& x1, CVector& x2, Variant v) {
  const std::size_t n = static_cast<std::size_t>(x1.size());
  const PairCoordinates coords{n, v != Variant::prime};
  double best = ratio_or_inf(x1, x2, v);
  double step = 0.1;
  for (std::size_t it = 0; it < kPatternSteps && step > 1e-12; ++it) {
    bool improved = false;
    for (std::size_t k = 0; k < coords.count() && !improved; ++k) {
      const auto [entry, imag] = coords.locate(k);
      for (double sign : {1.0, -1.0}) {
        CVector a = x1, b = x2;
        CVector& target = entry < static_cast<Eigen::Index>(n) ? a : b;
        const Eigen::Index pos = entry % static_cast<Eigen::Index>(n);
        target[pos] += imag ? cplx(0.0, sign * step) : cplx(sign * step, 0.0);
        normalize_pair(a, b);
        const double r = ratio_or_inf(a, b, v);
        if (r < best) {
          best = r;
          x1 = a;
          x2 = b;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

CVector random_signal(Rng& rng, std::size_t n, bool real_head) {
  CVector x = rng.complex_normal_vector(n);
  if (real_head) x[0] = x[0].real();
  return x;
}

nlohmann::json complex_json(const CVector& v) {
  std::vector<double> re(static_cast<std::size_t>(v.size())), im(re.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re[static_cast<std::size_t>(i)] = v[i].real();
    im[static_cast<std::size_t>(i)] = v[i].imag();
  }
  return {{"re", re}, {"im", im}};
}

}  // namespace

std::string to_string(Variant v) {
  switch (v) {
    case Variant::plain: return "S";
    case Variant::padded: return "S_padded";
    case Variant::prime: return "S_prime";
  }
  return "unknown";
}

Variant variant_from_string(const std::string& name) {
  for (auto v : {Variant::plain, Variant::padded, Variant::prime})
    if (to_string(v) == name) return v;
  throw std::invalid_argument("unknown symmetrization variant '" + name + "'");
}

SymmetrizedVector symmetrize(const CVector& x) {
  require_real_head(x);
  const Eigen::Index n = x.size();
  SymmetrizedVector out{static_cast<std::size_t>(n), Variant::plain, CVector(2 * n - 1)};
  out.data[0] = x[0].real();
  for (Eigen::Index k = 1; k < n; ++k) {
    out.data[k] = x[k];
    out.data[2 * n - 1 - k] = std::conj(x[k]);
  }
  return out;
}

SymmetrizedVector symmetrize_padded(const CVector& x) {
  require_real_head(x);
  CVector zp = CVector::Zero(2 * x.size() - 1);
  zp.head(x.size()) = x;
  auto out = symmetrize(zp);
  out.original_n = static_cast<std::size_t>(x.size());
  out.variant = Variant::padded;
  return out;
}

SymmetrizedVector symmetrize_prime(const CVector& x) {
  if (x.size() == 0) throw std::invalid_argument("symmetrize_prime: empty vector");
  const Eigen::Index n = x.size();
  SymmetrizedVector out{static_cast<std::size_t>(n), Variant::prime, CVector::Zero(4 * n - 1)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.data[n + k] = x[k];
    out.data[3 * n - 1 - k] = std::conj(x[k]);
  }
  return out;
}

SymmetrizedVector symmetrize(const CVector& x, Variant v) {
  switch (v) {
    case Variant::plain: return symmetrize(x);
    case Variant::padded: return symmetrize_padded(x);
    case Variant::prime: return symmetrize_prime(x);
  }
  throw std::invalid_argument("symmetrize: unknown variant");
}

RVector intensity_measurements(const CVector& x, Variant v) {
  return signals::dft(symmetrize(x, v).data).cwiseAbs2();
}

operators::BilinearMap circular_correlation_map(std::size_t n) {
  return operators::BilinearMap(
      "circular_correlation", operators::BilinearMap::Kind::custom, n, n, n,
      [](const CVector& x, const CVector& y) { return signals::circular_convolve(x, signals::time_reverse(CVector(y.conjugate()))); });
}

double binomial_difference_check(const CVector& x1, const CVector& x2, const operators::BilinearMap& b,
                                 bool require_symmetric) {
  if (require_symmetric) {
    Rng probe(0x5eed);
    for (int t = 0; t < 3; ++t) {
      const CVector p = probe.complex_normal_vector(b.n1()), q = probe.complex_normal_vector(b.n1());
      const CVector pq = b.apply(p, q), qp = b.apply(q, p);
      if ((pq - qp).norm() > 1e-10 * std::max(1.0, pq.norm())) {
        throw std::invalid_argument("binomial_difference_check: B is not symmetric");
      }
    }
  }
  const CVector lhs = b.apply(x1, x1) - b.apply(x2, x2);
  const CVector rhs = b.apply(x1 - x2, x1 + x2);
  const double scale = std::max(std::pow(x1.norm() + x2.norm(), 2), 1e-300);
  return (lhs - rhs).norm() / scale;
}

double stability_ratio(const CVector& x1, const CVector& x2, Variant v) {
  if (x1.size() != x2.size()) throw std::invalid_argument("stability_ratio: length mismatch");
  double den;
  if (v == Variant::prime) {
    den = 2.0 * (x1 - x2).norm() * (x1 + x2).norm();
  } else {
    den = symmetrize(CVector(x1 - x2), v).data.norm() * symmetrize(CVector(x1 + x2), v).data.norm();
  }
  if (den < kDenominatorThreshold) return std::numeric_limits<double>::quiet_NaN();
  return (intensity_measurements(x1, v) - intensity_measurements(x2, v)).norm() / den;
}

StabilityEstimate stability_constant_estimate(std::size_t n, std::size_t trials, std::uint64_t seed, Variant v,
                                              unsigned threads) {
  if (trials == 0) throw std::invalid_argument("stability_constant_estimate: trials must be positive");
  if (n == 0) throw std::invalid_argument("stability_constant_estimate: n must be positive");
  const bool real_head = v != Variant::prime;
  std::vector<CVector> a(trials), b(trials);
  std::vector<double> ratio(trials);
  const Rng base(seed);
  parallel_for(trials, threads, [&](std::size_t t) {
    Rng rng = base.split(t);
    a[t] = random_signal(rng, n, real_head);
    b[t] = random_signal(rng, n, real_head);
    normalize_pair(a[t], b[t]);
    ratio[t] = ratio_or_inf(a[t], b[t], v);
  });

  StabilityEstimate est;
  est.trials = trials;
  est.variant = v;
  est.excluded = static_cast<std::size_t>(std::count(ratio.begin(), ratio.end(), std::numeric_limits<double>::infinity()));

  std::vector<std::size_t> order(trials);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return ratio[i] < ratio[j]; });
  const std::size_t k = std::min(kRefinedPairs, trials);
  std::vector<double> refined(k);
  std::vector<CVector> ra(k), rb(k);
  parallel_for(k, threads, [&](std::size_t i) {
    ra[i] = a[order[i]];
    rb[i] = b[order[i]];
    refined[i] = compass_search(ra[i], rb[i], v);
  });
  const std::size_t arg = static_cast<std::size_t>(std::min_element(refined.begin(), refined.end()) - refined.begin());
  est.c_hat = refined[arg];
  est.worst_x1 = ra[arg];
  est.worst_x2 = rb[arg];
  est.positive = est.c_hat > 1e-8;
  return est;
}

nlohmann::json StabilityEstimate::worst_pair_json() const {
  nlohmann::json j;
  j["variant"] = to_string(variant);
  j["c_hat"] = c_hat;
  j["trials"] = trials;
  j["excluded"] = excluded;
  j["positive"] = positive;
  j["x1"] = complex_json(worst_x1);
  j["x2"] = complex_json(worst_x2);
  return j;
}

}  // namespace bilin::phase
