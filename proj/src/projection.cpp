#include "rbc/projection.hpp"

#include <cmath>
#include <string>

#include "rbc/decomp.hpp"
#include "rbc/errors.hpp"

namespace rbc {

Projection Projection::from_matrix(const ComplexMatrix& p, double tol) {
  if (!p.is_square()) {
    throw DimensionMismatch("projection: matrix must be square");
  }
  if (!p.all_finite()) throw InputError("projection: non-finite entries");

  const double idem = operator_norm(p * p - p);
  const double herm = operator_norm(adjoint(p) - p);
  if (idem > tol || herm > tol) {
    CertificationWitness w;
    w.description = "not an orthogonal projection: |p^2-p|=" +
                    std::to_string(idem) + ", |p*-p|=" + std::to_string(herm);
    w.residual = std::max(idem, herm);
    throw NotProjection("projection certification failed", w);
  }

  const HermitianEig eig = hermitian_eig(p);
  std::size_t rank = 0;
  for (double v : eig.values) {
    if (std::abs(v - 1.0) <= std::max(tol, 1e-8)) ++rank;
  }

  Projection out;
  out.p_ = p;
  out.basis_ = eig.vectors;
  out.rank_ = rank;
  out.tol_ = tol;
  return out;
}

Projection Projection::coordinate(std::size_t dim, std::size_t rank) {
  if (rank > dim) throw InputError("projection: rank exceeds dimension");
  Projection out;
  out.p_ = ComplexMatrix(dim, dim);
  for (std::size_t i = 0; i < rank; ++i) out.p_(i, i) = 1.0;
  out.basis_ = ComplexMatrix::identity(dim);
  out.rank_ = rank;
  out.tol_ = 1e-10;
  return out;
}

Projection Projection::complement() const {
  const std::size_t n = dim();
  Projection out;
  out.p_ = ComplexMatrix::identity(n) - p_;
  out.rank_ = n - rank_;
  out.tol_ = tol_;
  out.basis_ = ComplexMatrix(n, n);
  // kernel columns come first in the complement's frame
  for (std::size_t j = 0; j < n - rank_; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      out.basis_(i, j) = basis_(i, rank_ + j);
    }
  }
  for (std::size_t j = 0; j < rank_; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      out.basis_(i, (n - rank_) + j) = basis_(i, j);
    }
  }
  return out;
}

BlockDecomposition compress(const ComplexMatrix& a, const Projection& p) {
  if (!a.is_square() || a.rows() != p.dim()) {
    throw DimensionMismatch("compress: dimension mismatch");
  }
  const std::size_t r = p.rank();
  const std::size_t s = p.dim() - r;
  const ComplexMatrix b = adjoint(p.basis()) * a * p.basis();
  BlockDecomposition d;
  d.a11 = b.block(0, 0, r, r);
  d.a12 = b.block(0, r, r, s);
  d.a21 = b.block(r, 0, s, r);
  d.a22 = b.block(r, r, s, s);
  d.basis = p.basis();
  return d;
}

ComplexMatrix assemble(const BlockDecomposition& d, const Projection& p) {
  const std::size_t r = p.rank();
  const std::size_t s = p.dim() - r;
  if (d.a11.rows() != r || d.a11.cols() != r || d.a12.rows() != r ||
      d.a12.cols() != s || d.a21.rows() != s || d.a21.cols() != r ||
      d.a22.rows() != s || d.a22.cols() != s) {
    throw DimensionMismatch("assemble: block shapes inconsistent with rank");
  }
  ComplexMatrix b(p.dim(), p.dim());
  b.set_block(0, 0, d.a11);
  b.set_block(0, r, d.a12);
  b.set_block(r, 0, d.a21);
  b.set_block(r, r, d.a22);
  return p.basis() * b * adjoint(p.basis());
}

}  // namespace rbc
