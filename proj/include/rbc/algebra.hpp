#pragma once

// Description of the ambient C*-algebra an operator acts on: the full
// matrix algebra M_n, a block-diagonal direct sum embedded in M_N, or the
// span of a generator list inside an ambient space. Spans are certified at
// construction: the generator list must be closed under the involution and
// the span closed under products, both up to a tolerance.

#include <cstddef>
#include <memory>
#include <vector>

#include "rbc/matrix.hpp"
#include "rbc/prng.hpp"

namespace rbc {

class AlgebraSpace {
 public:
  enum class Kind { full, direct_sum, span };

  static AlgebraSpace full(std::size_t n);
  static AlgebraSpace direct_sum(std::vector<std::size_t> parts);
  static AlgebraSpace span(const AlgebraSpace& ambient,
                           std::vector<ComplexMatrix> generators,
                           double tol = 1e-10);

  Kind kind() const { return kind_; }
  std::size_t ambient_dim() const { return ambient_dim_; }
  const std::vector<std::size_t>& parts() const { return parts_; }
  const std::vector<ComplexMatrix>& generators() const { return generators_; }

  // Linear basis of the space as ambient_dim x ambient_dim matrices.
  // full: E_ij row-major; direct_sum: per-part E_ij embedded at the block
  // offsets; span: orthonormalized generators (Frobenius inner product).
  std::size_t basis_size() const;
  ComplexMatrix basis_element(std::size_t k) const;

  // Gaussian element of the space (block structure respected).
  ComplexMatrix random_element(Prng& rng) const;

  // All basis pairs commute within tol.
  bool is_commutative(double tol = 1e-10) const;

  // Distance from a to the space: norm of the component outside the span.
  double containment_defect(const ComplexMatrix& a) const;

 private:
  AlgebraSpace() = default;

  Kind kind_ = Kind::full;
  std::size_t ambient_dim_ = 0;
  std::vector<std::size_t> parts_;          // direct_sum
  std::vector<std::size_t> part_offsets_;   // direct_sum
  std::vector<ComplexMatrix> generators_;   // span, as given
  std::vector<ComplexMatrix> span_basis_;   // span, orthonormalized
};

}  // namespace rbc
