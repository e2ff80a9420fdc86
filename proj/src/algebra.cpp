#include "rbc/algebra.hpp"

#include <cmath>
#include <string>

#include "rbc/decomp.hpp"
#include "rbc/errors.hpp"
#include "rbc/kernels.hpp"

namespace rbc {

namespace {

// Residual of a after orthogonal projection onto the span (vectorized
// Frobenius geometry).
double span_residual(const std::vector<ComplexMatrix>& onb,
                     const ComplexMatrix& a) {
  std::vector<cd> v = a.vec();
  for (const auto& q : onb) {
    const std::vector<cd> qv = q.vec();
    const cd proj = kernels::dot_conj(qv.data(), v.data(), v.size());
    kernels::axpby(1.0, v.data(), -proj, qv.data(), v.data(), v.size());
  }
  return std::sqrt(kernels::norm2sq(v.data(), v.size()));
}

}  // namespace

AlgebraSpace AlgebraSpace::full(std::size_t n) {
  if (n == 0) throw InputError("algebra space: dimension must be positive");
  AlgebraSpace s;
  s.kind_ = Kind::full;
  s.ambient_dim_ = n;
  return s;
}

AlgebraSpace AlgebraSpace::direct_sum(std::vector<std::size_t> parts) {
  if (parts.empty()) throw InputError("direct sum space: no parts");
  AlgebraSpace s;
  s.kind_ = Kind::direct_sum;
  s.parts_ = std::move(parts);
  std::size_t offset = 0;
  for (std::size_t p : s.parts_) {
    if (p == 0) throw InputError("direct sum space: zero-dimensional part");
    s.part_offsets_.push_back(offset);
    offset += p;
  }
  s.ambient_dim_ = offset;
  return s;
}

AlgebraSpace AlgebraSpace::span(const AlgebraSpace& ambient,
                                std::vector<ComplexMatrix> generators,
                                double tol) {
  const std::size_t n = ambient.ambient_dim();
  AlgebraSpace s;
  s.kind_ = Kind::span;
  s.ambient_dim_ = n;
  for (const auto& g : generators) {
    if (g.rows() != n || g.cols() != n) {
      throw DimensionMismatch("span: generator shape mismatch");
    }
  }
  s.generators_ = std::move(generators);

  // orthonormalize in generator order
  ComplexMatrix cols(n * n, s.generators_.size());
  for (std::size_t k = 0; k < s.generators_.size(); ++k) {
    const std::vector<cd> v = s.generators_[k].vec();
    for (std::size_t i = 0; i < v.size(); ++i) cols(i, k) = v[i];
  }
  const ComplexMatrix q = orthonormalize_columns(cols, 1e-12, nullptr);
  for (std::size_t k = 0; k < q.cols(); ++k) {
    std::vector<cd> v(n * n);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = q(i, k);
    s.span_basis_.push_back(ComplexMatrix::unvec(v, n, n));
  }

  // closure certification
  for (std::size_t k = 0; k < s.generators_.size(); ++k) {
    const double d = span_residual(s.span_basis_, adjoint(s.generators_[k]));
    if (d > tol) {
      CertificationWitness w;
      w.description = "generator " + std::to_string(k) +
                      " has adjoint outside the span, residual " +
                      std::to_string(d);
      w.index_a = static_cast<long>(k);
      w.residual = d;
      throw NotSubalgebra("span not closed under involution", w);
    }
  }
  for (std::size_t i = 0; i < s.generators_.size(); ++i) {
    for (std::size_t j = 0; j < s.generators_.size(); ++j) {
      const double d =
          span_residual(s.span_basis_, s.generators_[i] * s.generators_[j]);
      if (d > tol) {
        CertificationWitness w;
        w.description = "product of generators (" + std::to_string(i) + ", " +
                        std::to_string(j) + ") leaves the span, residual " +
                        std::to_string(d);
        w.index_a = static_cast<long>(i);
        w.index_b = static_cast<long>(j);
        w.residual = d;
        throw NotSubalgebra("span not closed under multiplication", w);
      }
    }
  }
  return s;
}

std::size_t AlgebraSpace::basis_size() const {
  switch (kind_) {
    case Kind::full:
      return ambient_dim_ * ambient_dim_;
    case Kind::direct_sum: {
      std::size_t total = 0;
      for (std::size_t p : parts_) total += p * p;
      return total;
    }
    case Kind::span:
      return span_basis_.size();
  }
  return 0;
}

ComplexMatrix AlgebraSpace::basis_element(std::size_t k) const {
  switch (kind_) {
    case Kind::full: {
      const std::size_t n = ambient_dim_;
      if (k >= n * n) throw InputError("basis_element: index out of range");
      return ComplexMatrix::unit(n, k / n, k % n);
    }
    case Kind::direct_sum: {
      std::size_t rem = k;
      for (std::size_t part = 0; part < parts_.size(); ++part) {
        const std::size_t m = parts_[part];
        if (rem < m * m) {
          ComplexMatrix e(ambient_dim_, ambient_dim_);
          e(part_offsets_[part] + rem / m, part_offsets_[part] + rem % m) = 1.0;
          return e;
        }
        rem -= m * m;
      }
      throw InputError("basis_element: index out of range");
    }
    case Kind::span:
      if (k >= span_basis_.size()) {
        throw InputError("basis_element: index out of range");
      }
      return span_basis_[k];
  }
  throw InputError("basis_element: bad space");
}

ComplexMatrix AlgebraSpace::random_element(Prng& rng) const {
  const std::size_t n = ambient_dim_;
  switch (kind_) {
    case Kind::full: {
      ComplexMatrix a(n, n);
      for (std::size_t i = 0; i < a.size(); ++i) {
        a.data()[i] = rng.complex_gaussian();
      }
      return a;
    }
    case Kind::direct_sum: {
      ComplexMatrix a(n, n);
      for (std::size_t part = 0; part < parts_.size(); ++part) {
        const std::size_t off = part_offsets_[part];
        for (std::size_t i = 0; i < parts_[part]; ++i) {
          for (std::size_t j = 0; j < parts_[part]; ++j) {
            a(off + i, off + j) = rng.complex_gaussian();
          }
        }
      }
      return a;
    }
    case Kind::span: {
      ComplexMatrix a(n, n);
      for (const auto& q : span_basis_) {
        const cd coeff = rng.complex_gaussian();
        kernels::axpby(1.0, a.data(), coeff, q.data(), a.data(), a.size());
      }
      return a;
    }
  }
  throw InputError("random_element: bad space");
}

bool AlgebraSpace::is_commutative(double tol) const {
  if (kind_ == Kind::direct_sum) {
    for (std::size_t p : parts_) {
      if (p > 1) return false;
    }
    return true;
  }
  if (kind_ == Kind::full) return ambient_dim_ == 1;
  for (std::size_t i = 0; i < span_basis_.size(); ++i) {
    for (std::size_t j = i + 1; j < span_basis_.size(); ++j) {
      const ComplexMatrix c =
          span_basis_[i] * span_basis_[j] - span_basis_[j] * span_basis_[i];
      if (c.frobenius_norm() > tol) return false;
    }
  }
  return true;
}

double AlgebraSpace::containment_defect(const ComplexMatrix& a) const {
  if (a.rows() != ambient_dim_ || a.cols() != ambient_dim_) {
    throw DimensionMismatch("containment_defect: shape mismatch");
  }
  switch (kind_) {
    case Kind::full:
      return 0.0;
    case Kind::direct_sum: {
      ComplexMatrix off = a;
      for (std::size_t part = 0; part < parts_.size(); ++part) {
        const std::size_t o = part_offsets_[part];
        for (std::size_t i = 0; i < parts_[part]; ++i) {
          for (std::size_t j = 0; j < parts_[part]; ++j) {
            off(o + i, o + j) = 0.0;
          }
        }
      }
      return off.frobenius_norm();
    }
    case Kind::span:
      return span_residual(span_basis_, a);
  }
  throw InputError("containment_defect: bad space");
}

}  // namespace rbc
