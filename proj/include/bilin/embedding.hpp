#pragma once

// Covering-number and sample-complexity calculators, samplers for the
// structured sets, and Monte Carlo distortion checks of |Phi v| ~ |v| on B(U).
// All logarithms are natural.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "bilin/operators.hpp"
#include "bilin/random.hpp"
#include "bilin/types.hpp"

namespace bilin::embedding {

double log_binomial(std::size_t n, std::size_t k);

// d log(3/eps) + log L.
double entropy_union_subspaces(double d, double log_L, double eps_hat);
// Sigma_d in C^n: L = C(n, d).
double entropy_sparse_vectors(std::size_t n, std::size_t d, double eps_hat);
// (2s + 2f + 1) 2 kappa log(9/eps) + 2(s + f) log(e n / (2 min(s, f))).
double entropy_sparse_lowrank(std::size_t s, std::size_t f, std::size_t kappa, std::size_t n, double eps_hat);

// ceil(c'' delta^-2 (s + f) log(n / (kappa min(s, f)))).
std::size_t sample_complexity_bilinear(std::size_t s, std::size_t f, std::size_t kappa, std::size_t n, double delta,
                                       double c2 = 1.0);
// ceil(40 (rho + H + 3 log 2)).
std::size_t jl_sparsity_requirement(double rho, double entropy);
// h = H + 4 log 2.
double demodulator_entropy_term(double entropy);
// ceil(64 c delta^-2 (lambda + h) max((log(lambda + h) log n)^2, lambda + log 2)).
std::size_t demodulator_measurement_bound(double lambda, double h, std::size_t n, double delta, double c = 1.0);

enum class Strictness { general, norm_preserving };
// 0.999 alpha delta / (beta sigma divisor), divisor 7 (general) or 4 (norm preserving).
double epsilon_hat(double delta, double alpha, double beta, double sigma, Strictness strict = Strictness::general);

struct SampleComplexityParams {
  double delta = 0.5;
  double sigma = 1.0;
  double alpha = 1.0;
  double beta = 1.0;
  double c = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double rho = 1.0;
  double gamma = 1.0;
  double lambda = 1.0;
  void validate() const;  // throws std::invalid_argument
};

enum class SetKind { sparse_vectors, sparse_rank_one, sparse_rank_one_diff, sparse_lowrank, symmetric_quadratic };

std::string to_string(SetKind kind);
SetKind set_kind_from_string(const std::string& name);

struct StructuredSetSpec {
  SetKind kind = SetKind::sparse_rank_one;
  std::size_t n1 = 0;  // rows (the only dimension for sparse_vectors)
  std::size_t n2 = 0;  // columns; ignored for sparse_vectors (treated as 1)
  std::size_t s = 1;
  std::size_t f = 1;
  std::size_t kappa = 1;
  void validate() const;
  std::size_t rows() const { return n1; }
  std::size_t cols() const { return kind == SetKind::sparse_vectors ? 1 : n2; }
};

struct StructuredSample {
  CMatrix matrix;  // unit Frobenius norm; n1 x 1 for sparse vectors
  CVector x;       // rank-one kinds (and the symmetric difference): matrix = x y^T / |x y^T|
  CVector y;
  std::vector<std::size_t> support_x;  // nonzero rows
  std::vector<std::size_t> support_y;  // nonzero columns
};

StructuredSample sample_structured(const StructuredSetSpec& spec, Rng& rng);
StructuredSample sample_structured(const StructuredSetSpec& spec, std::uint64_t seed);

struct TrialRecord {
  std::size_t trial = 0;
  double ratio = 0.0;  // |Phi v| / |v|; NaN when skipped
  bool skipped = false;
  std::vector<std::size_t> support_x;
  std::vector<std::size_t> support_y;
};

struct DistortionReport {
  std::size_t trials = 0;
  std::size_t skipped = 0;  // |B(u)| < 1e-12 |u|
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double delta_hat = 0.0;  // a lower estimate of the uniform distortion
  std::uint64_t seed = 0;
  operators::OperatorDescriptor descriptor;
  std::vector<TrialRecord> records;

  std::string to_csv() const;
  nlohmann::json summary_json() const;
};

DistortionReport verify_embedding(const operators::LinearOperator& phi, const operators::BilinearMap& b,
                                  const StructuredSetSpec& spec, std::size_t trials, std::uint64_t seed,
                                  unsigned threads = 1);

struct RnmpEstimate {
  double alpha_hat = 0.0;
  double beta_hat = 0.0;
  std::size_t draws = 0;
};

// Extremes of |B(u)| / |u| over sampled u, refined by alternating
// minimization / maximization on the supports of the best draws.
RnmpEstimate rnmp_distortion_of_B(const operators::BilinearMap& b, const StructuredSetSpec& spec, std::size_t trials,
                                  std::uint64_t seed, unsigned threads = 1);

nlohmann::json descriptor_json(const operators::OperatorDescriptor& d);

}  // namespace bilin::embedding
