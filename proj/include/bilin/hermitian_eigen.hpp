#pragma once

#include "bilin/types.hpp"

namespace bilin::linalg {

// Eigenvalues in ascending order; column j of `vectors` belongs to values[j].
struct HermitianEigen {
  RVector values;
  CMatrix vectors;
};

// Householder reduction to Hermitian tridiagonal form, a diagonal phase
// similarity that makes the tridiagonal real, then implicit QL with
// Wilkinson-type shifts. Only the lower triangle of `a` is trusted.
HermitianEigen hermitian_eigen(const CMatrix& a);

// Cyclic complex Jacobi rotations. Slower, independent of the routine above.
HermitianEigen hermitian_eigen_jacobi(const CMatrix& a);

// Solves a real symmetric tridiagonal eigenproblem in place. `diag` has n
// entries, `off[i]` couples i and i+1 (off[n-1] is ignored). On return
// `diag` holds eigenvalues (unsorted) and `z` (n x n, initialised by the
// caller) has been right-multiplied by the eigenvector rotations.
void tridiagonal_ql(RVector& diag, RVector& off, Eigen::MatrixXd& z);

double min_eigenvalue(const CMatrix& a);

}  // namespace bilin::linalg
