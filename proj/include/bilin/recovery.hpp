#pragma once

// l1 recovery for lifted bilinear problems (synthesis and analysis programs)
// and rank-one factorization of the recovered matrix.

#include <cstddef>
#include <vector>

#include "bilin/operators.hpp"
#include "bilin/types.hpp"

namespace bilin::recovery {

struct SolverOptions {
  std::size_t max_iterations = 5000;
  double tolerance = 1e-8;  // relative primal change
  double penalty = 0.0;     // ADMM penalty rho; 0 picks 1 / (0.1 max|A^* b|)
  bool record_trace = true;
};

struct SolverResult {
  CVector solution;  // best feasible iterate seen (monotone in the objective)
  bool converged = false;
  std::size_t iterations = 0;
  double objective = 0.0;  // l1 norm of the reported iterate (of B^* z for the analysis program)
  double residual = 0.0;   // |A u - b|
  double primal_gap = 0.0; // splitting residual at termination
  std::vector<double> objective_trace;
};

// min |u|_1 subject to |A u - b| <= eps. Complex l1 = sum of magnitudes.
SolverResult bpdn_synthesis(const operators::LinearOperator& a, const CVector& b, double eps,
                            const SolverOptions& opts = {});

// min |B^* z|_1 subject to |Phi z - b| <= eps, with B the lifted operator C^N -> C^n.
SolverResult bpdn_analysis(const operators::LinearOperator& phi, const operators::LinearOperator& b_lift,
                           const CVector& b, double eps, const SolverOptions& opts = {});

// Euclidean projection onto {u : |A u - b| <= eps} for a full-row-rank A.
class FeasibleSetProjector {
 public:
  FeasibleSetProjector(const CMatrix& a, CVector b, double eps);
  CVector project(const CVector& v) const;

 private:
  CMatrix a_;
  CVector b_;
  double eps_;
  RVector lambda_;  // eigenvalues of A A^*
  CMatrix basis_;   // eigenvectors of A A^*
};

struct RankOneFactor {
  CVector x;
  CVector y;
  double residual = 0.0;  // |M - x y^T|_F / |M|_F
};

// Top singular pair with |x| = |y| and the largest-magnitude entry of x real positive.
RankOneFactor rank_one_factor(const CMatrix& m);

double l1_norm(const CVector& v);
CVector soft_threshold(const CVector& v, double tau);

}  // namespace bilin::recovery
