#include "bilin/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "bilin/hermitian_eigen.hpp"
#include "bilin/parallel.hpp"
#include "bilin/random.hpp"

namespace bilin::embedding {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

std::size_t ceil_count(double v) {
  require(std::isfinite(v) && v >= 0.0, "bound is not a finite nonnegative number");
  return static_cast<std::size_t>(std::ceil(v - 1e-12 * std::max(1.0, v)));
}

CVector sparse_gaussian(Rng& rng, std::size_t n, const std::vector<std::size_t>& support) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(n));
  for (auto i : support) v[static_cast<Eigen::Index>(i)] = rng.complex_normal();
  return v;
}

std::vector<std::size_t> nonzero_rows(const CMatrix& m) {
  std::vector<std::size_t> out;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    if (m.row(i).squaredNorm() > 0.0) out.push_back(static_cast<std::size_t>(i));
  return out;
}

std::vector<std::size_t> nonzero_cols(const CMatrix& m) {
  std::vector<std::size_t> out;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    if (m.col(j).squaredNorm() > 0.0) out.push_back(static_cast<std::size_t>(j));
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(v[i]);
  }
  return out;
}

// Gram matrix of x_I -> B(x, y) restricted to the support I.
CMatrix restricted_gram(const operators::BilinearMap& b, const std::vector<std::size_t>& support, const CVector& y,
                        bool first_slot) {
  const std::size_t dim = first_slot ? b.n1() : b.n2();
  CMatrix cols(static_cast<Eigen::Index>(b.n_out()), static_cast<Eigen::Index>(support.size()));
  for (std::size_t a = 0; a < support.size(); ++a) {
    CVector e = CVector::Zero(static_cast<Eigen::Index>(dim));
    e[static_cast<Eigen::Index>(support[a])] = 1.0;
    cols.col(static_cast<Eigen::Index>(a)) = first_slot ? b.apply(e, y) : b.apply(y, e);
  }
  return cols.adjoint() * cols;
}

// Alternating extremization of |B(x, y)| over unit x, y on fixed supports.
double refine_pair(const operators::BilinearMap& b, const std::vector<std::size_t>& sx,
                   const std::vector<std::size_t>& sy, CVector x, CVector y, bool minimize) {
  x.normalize();
  y.normalize();
  double prev = std::numeric_limits<double>::quiet_NaN();
  double cur = b.apply(x, y).squaredNorm();
  for (int it = 0; it < 200; ++it) {
    for (int slot = 0; slot < 2; ++slot) {
      const bool first = slot == 0;
      const auto& supp = first ? sx : sy;
      CVector& target = first ? x : y;
      const auto eig = linalg::hermitian_eigen(restricted_gram(b, supp, first ? y : x, first));
      const Eigen::Index pick = minimize ? 0 : eig.values.size() - 1;
      target.setZero();
      for (std::size_t a = 0; a < supp.size(); ++a)
        target[static_cast<Eigen::Index>(supp[a])] = eig.vectors(static_cast<Eigen::Index>(a), pick);
      target.normalize();
      cur = std::max(0.0, eig.values[pick]);
    }
    if (!std::isnan(prev) && std::abs(prev - cur) <= 1e-12 * std::max(prev, 1e-300)) break;
    prev = cur;
  }
  return std::sqrt(cur);
}

bool rank_one_kind(SetKind k) { return k == SetKind::sparse_rank_one || k == SetKind::symmetric_quadratic; }

}  // namespace

double log_binomial(std::size_t n, std::size_t k) {
  require(k <= n, "log_binomial: k > n");
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

double entropy_union_subspaces(double d, double log_L, double eps_hat) {
  require(d > 0.0 && log_L >= 0.0, "entropy_union_subspaces: need d > 0 and L >= 1");
  require(eps_hat > 0.0 && eps_hat < 1.0, "entropy_union_subspaces: need 0 < eps < 1");
  return d * std::log(3.0 / eps_hat) + log_L;
}

double entropy_sparse_vectors(std::size_t n, std::size_t d, double eps_hat) {
  require(d >= 1 && d <= n, "entropy_sparse_vectors: need 1 <= d <= n");
  return entropy_union_subspaces(static_cast<double>(d), log_binomial(n, d), eps_hat);
}

double entropy_sparse_lowrank(std::size_t s, std::size_t f, std::size_t kappa, std::size_t n, double eps_hat) {
  require(s >= 1 && f >= 1 && kappa >= 1 && n >= 1, "entropy_sparse_lowrank: parameters must be positive");
  require(kappa <= std::min(s, f), "entropy_sparse_lowrank: kappa > min(s, f)");
  require(eps_hat > 0.0 && eps_hat < 1.0, "entropy_sparse_lowrank: need 0 < eps < 1");
  const double sf = static_cast<double>(s + f);
  return (2.0 * sf + 1.0) * 2.0 * static_cast<double>(kappa) * std::log(9.0 / eps_hat) +
         2.0 * sf * std::log(std::exp(1.0) * static_cast<double>(n) / (2.0 * static_cast<double>(std::min(s, f))));
}

std::size_t sample_complexity_bilinear(std::size_t s, std::size_t f, std::size_t kappa, std::size_t n, double delta,
                                       double c2) {
  require(s >= 1 && f >= 1 && kappa >= 1, "sample_complexity_bilinear: parameters must be positive");
  require(delta > 0.0 && delta < 1.0, "sample_complexity_bilinear: need 0 < delta < 1");
  require(c2 > 0.0, "sample_complexity_bilinear: c'' must be positive");
  const double arg = static_cast<double>(n) / (static_cast<double>(kappa) * static_cast<double>(std::min(s, f)));
  require(arg > 1.0, "sample_complexity_bilinear: n must exceed kappa min(s, f)");
  return ceil_count(c2 / (delta * delta) * static_cast<double>(s + f) * std::log(arg));
}

std::size_t jl_sparsity_requirement(double rho, double entropy) {
  require(rho >= 0.0 && entropy >= 0.0, "jl_sparsity_requirement: arguments must be nonnegative");
  return ceil_count(40.0 * (rho + entropy + 3.0 * std::log(2.0)));
}

double demodulator_entropy_term(double entropy) { return entropy + 4.0 * std::log(2.0); }

std::size_t demodulator_measurement_bound(double lambda, double h, std::size_t n, double delta, double c) {
  require(lambda > 0.0 && h > 0.0 && n >= 2, "demodulator_measurement_bound: need lambda, h > 0 and n >= 2");
  require(delta > 0.0 && delta < 1.0, "demodulator_measurement_bound: need 0 < delta < 1");
  require(c > 0.0, "demodulator_measurement_bound: c must be positive");
  const double lh = lambda + h;
  const double t = std::log(lh) * std::log(static_cast<double>(n));
  return ceil_count(64.0 * c / (delta * delta) * lh * std::max(t * t, lambda + std::log(2.0)));
}

double epsilon_hat(double delta, double alpha, double beta, double sigma, Strictness strict) {
  require(delta > 0.0 && delta < 1.0, "epsilon_hat: need 0 < delta < 1");
  require(alpha > 0.0 && alpha <= beta, "epsilon_hat: need 0 < alpha <= beta");
  require(sigma >= 1.0, "epsilon_hat: need sigma >= 1");
  const double divisor = strict == Strictness::general ? 7.0 : 4.0;
  return 0.999 * alpha * delta / (beta * sigma * divisor);
}

void SampleComplexityParams::validate() const {
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  require(sigma >= 1.0, "sigma must be >= 1");
  require(alpha > 0.0 && alpha <= beta, "need 0 < alpha <= beta");
  require(c > 0.0 && c1 > 0.0 && c2 > 0.0 && rho > 0.0 && gamma > 0.0 && lambda > 0.0,
          "constants must be positive");
}

std::string to_string(SetKind kind) {
  switch (kind) {
    case SetKind::sparse_vectors: return "sparse_vectors";
    case SetKind::sparse_rank_one: return "sparse_rank_one";
    case SetKind::sparse_rank_one_diff: return "sparse_rank_one_diff";
    case SetKind::sparse_lowrank: return "sparse_lowrank";
    case SetKind::symmetric_quadratic: return "symmetric_quadratic";
  }
  return "unknown";
}

SetKind set_kind_from_string(const std::string& name) {
  for (auto k : {SetKind::sparse_vectors, SetKind::sparse_rank_one, SetKind::sparse_rank_one_diff,
                 SetKind::sparse_lowrank, SetKind::symmetric_quadratic}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown structured set '" + name + "'");
}

void StructuredSetSpec::validate() const {
  require(n1 >= 1 && s >= 1 && s <= n1, "structured set: need 1 <= s <= n1");
  if (kind == SetKind::sparse_vectors) return;
  require(n2 >= 1 && f >= 1 && f <= n2, "structured set: need 1 <= f <= n2");
  require(kappa >= 1 && kappa <= std::min(s, f), "structured set: need 1 <= kappa <= min(s, f)");
  if (kind == SetKind::symmetric_quadratic) require(n1 == n2 && s == f, "symmetric_quadratic: need n1 = n2, s = f");
}

StructuredSample sample_structured(const StructuredSetSpec& spec, Rng& rng) {
  spec.validate();
  StructuredSample out;
  const std::size_t n1 = spec.rows(), n2 = spec.cols();
  switch (spec.kind) {
    case SetKind::sparse_vectors: {
      out.support_x = rng.sample_without_replacement(n1, spec.s);
      out.x = sparse_gaussian(rng, n1, out.support_x);
      out.matrix = out.x;
      break;
    }
    case SetKind::sparse_rank_one: {
      out.support_x = rng.sample_without_replacement(n1, spec.s);
      out.support_y = rng.sample_without_replacement(n2, spec.f);
      out.x = sparse_gaussian(rng, n1, out.support_x).normalized();
      out.y = sparse_gaussian(rng, n2, out.support_y).normalized();
      out.matrix = out.x * out.y.transpose();
      break;
    }
    case SetKind::sparse_rank_one_diff: {
      CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(n1), static_cast<Eigen::Index>(n2));
      for (int r = 0; r < 2; ++r) {
        const auto sx = rng.sample_without_replacement(n1, spec.s);
        const auto sy = rng.sample_without_replacement(n2, spec.f);
        const CVector x = sparse_gaussian(rng, n1, sx).normalized();
        const CVector y = sparse_gaussian(rng, n2, sy).normalized();
        m += (r == 0 ? 1.0 : -1.0) * x * y.transpose();
      }
      out.matrix = m;
      break;
    }
    case SetKind::sparse_lowrank: {
      const auto sx = rng.sample_without_replacement(n1, spec.s);
      const auto sy = rng.sample_without_replacement(n2, spec.f);
      CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(n1), static_cast<Eigen::Index>(n2));
      for (std::size_t r = 0; r < spec.kappa; ++r) m += sparse_gaussian(rng, n1, sx) * sparse_gaussian(rng, n2, sy).transpose();
      out.matrix = m;
      break;
    }
    case SetKind::symmetric_quadratic: {
      const auto s1 = rng.sample_without_replacement(n1, spec.s);
      const auto s2 = rng.sample_without_replacement(n1, spec.s);
      const CVector x1 = sparse_gaussian(rng, n1, s1), x2 = sparse_gaussian(rng, n1, s2);
      // x1 x1^T - x2 x2^T symmetrized through the binomial identity
      out.x = (x1 - x2).normalized();
      out.y = (x1 + x2).normalized();
      out.matrix = out.x * out.y.transpose();
      break;
    }
  }
  const double nrm = out.matrix.norm();
  if (nrm > 0.0) out.matrix /= nrm;
  if (spec.kind == SetKind::sparse_vectors) out.x = out.matrix.col(0);
  if (spec.kind != SetKind::sparse_vectors && spec.kind != SetKind::sparse_rank_one) {
    out.support_x = nonzero_rows(out.matrix);
    out.support_y = nonzero_cols(out.matrix);
  }
  return out;
}

StructuredSample sample_structured(const StructuredSetSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  return sample_structured(spec, rng);
}

std::string DistortionReport::to_csv() const {
  std::string out = "trial_id,ratio,support_x,support_y\n";
  for (const auto& r : records) {
    out += std::to_string(r.trial) + ',' + format_double(r.ratio) + ',' + join(r.support_x) + ',' +
           join(r.support_y) + '\n';
  }
  return out;
}

nlohmann::json descriptor_json(const operators::OperatorDescriptor& d) {
  nlohmann::json j;
  j["ensemble"] = d.ensemble;
  j["rows"] = d.rows;
  j["cols"] = d.cols;
  j["seed"] = d.seed;
  j["seed_aux"] = d.seed_aux;
  j["distribution"] = operators::to_string(d.distribution);
  if (d.omega_seed) {
    j["omega_seed"] = *d.omega_seed;
  } else if (!d.omega.empty()) {
    j["omega"] = d.omega;
  }
  if (d.ensemble == "weyl_heisenberg") {
    j["j1"] = d.j1;
    j["j2"] = d.j2;
  }
  return j;
}

nlohmann::json DistortionReport::summary_json() const {
  nlohmann::json j;
  j["trials"] = trials;
  j["skipped_near_kernel"] = skipped;
  j["min_ratio"] = min_ratio;
  j["max_ratio"] = max_ratio;
  j["delta_hat"] = delta_hat;
  j["delta_hat_is_lower_estimate"] = true;
  j["seed"] = seed;
  j["operator"] = descriptor_json(descriptor);
  return j;
}

DistortionReport verify_embedding(const operators::LinearOperator& phi, const operators::BilinearMap& b,
                                  const StructuredSetSpec& spec, std::size_t trials, std::uint64_t seed,
                                  unsigned threads) {
  spec.validate();
  if (phi.cols() != b.n_out()) throw std::invalid_argument("verify_embedding: Phi.cols != B output dimension");
  if (spec.rows() != b.n1() || spec.cols() != b.n2()) {
    throw std::invalid_argument("verify_embedding: structured set shape does not match B");
  }
  if (trials == 0) throw std::invalid_argument("verify_embedding: trials must be positive");
  DistortionReport rep;
  rep.trials = trials;
  rep.seed = seed;
  rep.descriptor = phi.descriptor();
  rep.records.resize(trials);
  const Rng base(seed);
  parallel_for(trials, threads, [&](std::size_t t) {
    Rng rng = base.split(t);
    const auto u = sample_structured(spec, rng);
    const CVector v = b.lifted_apply(u.matrix);
    TrialRecord& rec = rep.records[t];
    rec.trial = t;
    rec.support_x = u.support_x;
    rec.support_y = u.support_y;
    const double vn = v.norm();
    if (vn < 1e-12 * u.matrix.norm()) {
      rec.skipped = true;
      rec.ratio = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    rec.ratio = phi.apply(v).norm() / vn;
  });
  rep.min_ratio = std::numeric_limits<double>::infinity();
  rep.max_ratio = -std::numeric_limits<double>::infinity();
  for (const auto& r : rep.records) {
    if (r.skipped) {
      ++rep.skipped;
      continue;
    }
    rep.min_ratio = std::min(rep.min_ratio, r.ratio);
    rep.max_ratio = std::max(rep.max_ratio, r.ratio);
    rep.delta_hat = std::max(rep.delta_hat, std::abs(r.ratio - 1.0));
  }
  if (rep.skipped == trials) rep.min_ratio = rep.max_ratio = std::numeric_limits<double>::quiet_NaN();
  return rep;
}

RnmpEstimate rnmp_distortion_of_B(const operators::BilinearMap& b, const StructuredSetSpec& spec, std::size_t trials,
                                  std::uint64_t seed, unsigned threads) {
  spec.validate();
  if (spec.rows() != b.n1() || spec.cols() != b.n2()) {
    throw std::invalid_argument("rnmp_distortion_of_B: structured set shape does not match B");
  }
  if (trials == 0) throw std::invalid_argument("rnmp_distortion_of_B: trials must be positive");
  std::vector<double> ratio(trials);
  std::vector<StructuredSample> samples(trials);
  const Rng base(seed);
  parallel_for(trials, threads, [&](std::size_t t) {
    Rng rng = base.split(t);
    samples[t] = sample_structured(spec, rng);
    ratio[t] = b.lifted_apply(samples[t].matrix).norm() / samples[t].matrix.norm();
  });
  RnmpEstimate est;
  est.draws = trials;
  est.alpha_hat = *std::min_element(ratio.begin(), ratio.end());
  est.beta_hat = *std::max_element(ratio.begin(), ratio.end());
  if (!rank_one_kind(spec.kind)) return est;

  constexpr std::size_t kRefined = 8;
  std::vector<std::size_t> order(trials);
  std::iota(order.begin(), order.end(), 0);
  auto refine = [&](bool minimize) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t c) { return minimize ? ratio[a] < ratio[c] : ratio[a] > ratio[c]; });
    const std::size_t k = std::min(kRefined, trials);
    std::vector<double> vals(k);
    parallel_for(k, threads, [&](std::size_t i) {
      const auto& smp = samples[order[i]];
      vals[i] = refine_pair(b, smp.support_x, smp.support_y, smp.x, smp.y, minimize);
    });
    return minimize ? *std::min_element(vals.begin(), vals.end()) : *std::max_element(vals.begin(), vals.end());
  };
  est.alpha_hat = std::min(est.alpha_hat, refine(true));
  est.beta_hat = std::max(est.beta_hat, refine(false));
  return est;
}

}  // namespace bilin::embedding
