#pragma once

// Dense decompositions for the desk-scale sizes this tool works at
// (matrices up to 64x64, superoperator actions up to a few hundred).
// Eigenvalues come from cyclic Jacobi, which is slow but accurate to
// roundoff and fully deterministic; QR is Householder; LU has partial
// pivoting.

#include <vector>

#include "rbc/matrix.hpp"

namespace rbc {

struct HermitianEig {
  // descending; a = vectors * diag(values) * vectors^H
  std::vector<double> values;
  ComplexMatrix vectors;
};

// a must be Hermitian to roundoff; no check is made beyond using only the
// Hermitian part of the data.
HermitianEig hermitian_eig(const ComplexMatrix& a);

// Eigenvalues only (descending), skips accumulating vectors.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a);

// Singular values, descending.
std::vector<double> singular_values(const ComplexMatrix& a);

// Orthonormal columns spanning range(a); keeps singular directions with
// sigma > rel_tol * sigma_max. Returns rows x 0 for the zero matrix.
ComplexMatrix range_basis(const ComplexMatrix& a, double rel_tol);

struct QRDecomposition {
  ComplexMatrix q;  // m x n, orthonormal columns
  ComplexMatrix r;  // n x n, upper triangular
};

// Thin Householder QR, requires rows >= cols.
QRDecomposition householder_qr(const ComplexMatrix& a);

// Solve r x = b with r upper triangular.
ComplexMatrix upper_triangular_solve(const ComplexMatrix& r,
                                     const ComplexMatrix& b);

// Solve a x = b, a square, via partially pivoted LU. Throws NotInvertible
// on an exactly singular pivot.
ComplexMatrix lu_solve(const ComplexMatrix& a, const ComplexMatrix& b);

struct InverseResult {
  ComplexMatrix inverse;
  // Frobenius-norm condition proxy |a|_F * |a^-1|_F
  double condition_estimate;
};

InverseResult invert_matrix(const ComplexMatrix& a);

// Modified Gram-Schmidt with reorthogonalization over the columns of b, in
// order. Columns whose residual drops below drop_tol * original_norm are
// dropped; kept_indices records which survive.
ComplexMatrix orthonormalize_columns(const ComplexMatrix& b, double drop_tol,
                                     std::vector<std::size_t>* kept_indices);

// sin of the largest principal angle between the column spans of u and v
// (orthonormal columns). Equals |u u^H - v v^H| in operator norm.
double subspace_gap(const ComplexMatrix& u, const ComplexMatrix& v);

}  // namespace rbc
