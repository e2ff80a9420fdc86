#pragma once

// Certified *-homomorphisms between matrix algebras, Rota-Baxter
// homomorphism defects, Rota-Baxter *-representations, and both directions
// of the direct-sum representation theorem. Maps are stored by their
// images on the source basis, which turns every certificate into a finite
// sweep.

#include <vector>

#include "rbc/constructions.hpp"
#include "rbc/rb.hpp"

namespace rbc {

struct StarHomomorphism {
  AlgebraSpace source;
  AlgebraSpace target;
  std::vector<ComplexMatrix> images;  // one per source basis element
  double mult_defect = 0.0;
  double invol_defect = 0.0;
  double tol = 0.0;

  // Linear extension: coordinates on the source basis applied to images.
  ComplexMatrix apply(const ComplexMatrix& a) const;
};

// Certify multiplicativity and involution preservation on all basis pairs.
StarHomomorphism star_hom_certify(std::vector<ComplexMatrix> images,
                                  const AlgebraSpace& source,
                                  const AlgebraSpace& target,
                                  double tol = 1e-10);

// max over the source basis of |phi(P1(b)) - P2(phi(b))|.
double rb_hom_defect(const StarHomomorphism& phi, const RotaBaxterOperator& p1,
                     const RotaBaxterOperator& p2);

struct RBRepresentation {
  StarHomomorphism pi;          // source -> Full(n)
  ComplexMatrix f;              // matched operator on the target space
  RotaBaxterOperator p_source;  // on the source algebra
  RotaBaxterOperator p_target;  // on the target algebra
  double intertwine_defect = 0.0;
  double matching_defect = 0.0;
  double tol = 0.0;
};

// Certify the intertwining relation pi o P_source = P_target o pi and that
// P_target matches f on pi(source).
RBRepresentation make_rb_representation(StarHomomorphism pi, ComplexMatrix f,
                                        RotaBaxterOperator p_source,
                                        RotaBaxterOperator p_target,
                                        double tol = 1e-10);

// Combine two representations with f = identity into one on the direct sum
// with f = the projection onto the first summand. The target operator is
// the extension of the direct sum of the two target operators.
RBRepresentation build_direct_sum_representation(const RBRepresentation& r1,
                                                 const RBRepresentation& r2,
                                                 double tol = 1e-10);

// Inverse of the above: restrict to the two source summands, recovering
// representations with f = identity on each block. Requires f = p, a
// two-part source, and block-supported images.
std::pair<RBRepresentation, RBRepresentation> split_representation(
    const RBRepresentation& r, const Projection& p, double tol = 1e-10);

struct InvariantSubspaceRB {
  RotaBaxterOperator op;
  std::vector<double> symmetry_defects;  // one per input image
};

// From images with an invariant subspace (|p_perp a p| <= tol for all a),
// build a -> p a p + p_perp a p_perp + p a p_perp: weight -1, matching p,
// symmetric on the span of the images.
InvariantSubspaceRB invariant_subspace_rb(
    const std::vector<ComplexMatrix>& images, const Projection& p,
    double tol = 1e-10);

}  // namespace rbc
