#pragma once

// Linear maps on a matrix algebra M_n, represented on column-stacked
// vectorizations. Structured operators (left/right multiplication,
// triangular block maps, direct sums, oblique span projections, the
// discrete Volterra sum) apply through their defining formula; the dense
// n^2 x n^2 action matrix is materialized lazily and cached, so large
// structured operators never pay for it unless a caller asks.

#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <variant>
#include <vector>

#include "rbc/matrix.hpp"
#include "rbc/projection.hpp"

namespace rbc {

class SuperOperator {
 public:
  struct DenseTag {
    ComplexMatrix action;  // n^2 x n^2
  };
  struct LeftMultTag {
    ComplexMatrix m;  // a -> m a
  };
  struct RightMultTag {
    ComplexMatrix m;  // a -> a m
  };
  // blocks (a11, a12, a21, a22) -> (p1(a11), a12, 0, p2(a22)) in the frame
  // adapted to p
  struct TriangularTag {
    std::shared_ptr<const SuperOperator> p1;  // dim rank(p)
    std::shared_ptr<const SuperOperator> p2;  // dim n - rank(p)
    Projection p;
  };
  // componentwise on the diagonal blocks, zero on off-diagonal blocks
  struct DirectSumTag {
    std::vector<std::shared_ptr<const SuperOperator>> parts;
  };
  // least-squares coordinates on [a1 a2], keep the a1 component
  struct ProjectionOntoTag {
    std::vector<ComplexMatrix> a1;
    std::vector<ComplexMatrix> a2;
    ComplexMatrix coeff;  // (k1 + k2) x n^2
  };
  // on the diagonal algebra of M_m: Q(f)_k = (1/m) * sum_{j<k} f_j
  struct VolterraTag {
    std::size_t samples;
  };

  using Structure = std::variant<DenseTag, LeftMultTag, RightMultTag,
                                 TriangularTag, DirectSumTag,
                                 ProjectionOntoTag, VolterraTag>;

  static SuperOperator zero(std::size_t dim);
  static SuperOperator identity(std::size_t dim);
  static SuperOperator dense(ComplexMatrix action);
  static SuperOperator left_mult(ComplexMatrix m);
  static SuperOperator right_mult(ComplexMatrix m);
  static SuperOperator triangular(SuperOperator p1, SuperOperator p2,
                                  Projection p);
  static SuperOperator direct_sum(std::vector<SuperOperator> parts);
  static SuperOperator projection_onto(std::vector<ComplexMatrix> a1,
                                       std::vector<ComplexMatrix> a2,
                                       std::size_t dim);
  static SuperOperator discrete_volterra(std::size_t samples);
  // dense operator from its images on the unit basis E_ij
  static SuperOperator from_basis_images(
      std::size_t dim,
      const std::function<ComplexMatrix(std::size_t, std::size_t)>& image);

  std::size_t dim() const { return dim_; }
  const Structure& structure() const { return structure_; }
  bool is_dense() const {
    return std::holds_alternative<DenseTag>(structure_);
  }

  ComplexMatrix apply(const ComplexMatrix& a) const;

  // n^2 x n^2 action on column-stacked vectorizations; built on first use
  // for structured operators and cached.
  const ComplexMatrix& dense_action() const;

 private:
  SuperOperator(std::size_t dim, Structure structure);

  struct Cache {
    std::once_flag once;
    ComplexMatrix action;
  };

  std::size_t dim_ = 0;
  Structure structure_;
  std::shared_ptr<Cache> cache_;
};

// apply(compose(s, t), a) == apply(s, apply(t, a)); the result is dense.
SuperOperator compose(const SuperOperator& s, const SuperOperator& t);

// |D(ab) - D(a) b - a D(b)| in operator norm.
double derivation_defect(const SuperOperator& d, const ComplexMatrix& a,
                         const ComplexMatrix& b);

// Dense inverse; throws NotInvertible on a singular action or a condition
// estimate above cond_limit.
SuperOperator invert(const SuperOperator& t, double cond_limit = 1e12);

struct SuperOperatorNorm {
  double value = 0.0;        // best found |T(a)| / |a|, operator norms
  ComplexMatrix witness;     // maximizing a, |a| = 1
};

// Lower bound on the induced operator-norm-to-operator-norm norm via
// seeded multi-start ascent (basis starts plus `starts` Gaussian starts).
SuperOperatorNorm superop_norm(const SuperOperator& t,
                               std::uint64_t seed = 0, int starts = 32);

}  // namespace rbc
