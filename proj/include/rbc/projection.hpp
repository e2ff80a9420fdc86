#pragma once

// Certified orthogonal projections and 2x2 block decompositions relative
// to a projection. A Projection carries the unitary change of basis whose
// leading columns span its range; compress/assemble move between the
// original coordinates and that adapted block frame and invert each other
// to roundoff.

#include <cstddef>

#include "rbc/matrix.hpp"

namespace rbc {

class Projection {
 public:
  // Certifies |p^2 - p| <= tol and |p* - p| <= tol (operator norm) and
  // rejects anything else; non-orthogonal idempotents are not repaired.
  static Projection from_matrix(const ComplexMatrix& p, double tol = 1e-10);

  // diag(1,...,1,0,...,0) with the given rank; the adapted basis is the
  // identity.
  static Projection coordinate(std::size_t dim, std::size_t rank);

  const ComplexMatrix& matrix() const { return p_; }
  std::size_t dim() const { return p_.rows(); }
  std::size_t rank() const { return rank_; }
  double tol() const { return tol_; }

  // Unitary whose first rank() columns span the range of p, ordered by
  // descending eigenvalue with a deterministic tie-break.
  const ComplexMatrix& basis() const { return basis_; }

  // id - p, with the adapted basis blocks swapped so both frames agree.
  Projection complement() const;

 private:
  Projection() = default;
  ComplexMatrix p_;
  ComplexMatrix basis_;
  std::size_t rank_ = 0;
  double tol_ = 0.0;
};

struct BlockDecomposition {
  ComplexMatrix a11;  // rank x rank,   p a p
  ComplexMatrix a12;  // rank x corank, p a p_perp
  ComplexMatrix a21;  // corank x rank, p_perp a p
  ComplexMatrix a22;  // corank x corank
  ComplexMatrix basis;
};

BlockDecomposition compress(const ComplexMatrix& a, const Projection& p);
ComplexMatrix assemble(const BlockDecomposition& d, const Projection& p);

}  // namespace rbc
