#pragma once

// Residuals and certification for the Rota-Baxter identity
//
//   P(a) P(b) = P(a P(b)) + P(P(a) b) + lambda P(a b)
//
// together with symmetry, matching and idempotency defects and the tilde
// construction. Every term of the identity is bilinear in (a, b), so an
// exhaustive sweep over ordered basis pairs of the space certifies it on
// the whole space at machine precision; randomized sweeps cover dimensions
// where the n^4 pair count is impractical.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rbc/algebra.hpp"
#include "rbc/matrix.hpp"
#include "rbc/projection.hpp"
#include "rbc/superop.hpp"

namespace rbc {

struct ProbeMode {
  enum class Kind { exhaustive, randomized };
  Kind kind = Kind::exhaustive;
  std::uint64_t trials = 200;
  std::uint64_t seed = 0;

  static ProbeMode exhaustive() { return {}; }
  static ProbeMode randomized(std::uint64_t trials, std::uint64_t seed) {
    return {Kind::randomized, trials, seed};
  }
};

struct WorstPair {
  long index_a = -1;  // basis indices for exhaustive mode, trial for random
  long index_b = -1;
  double residual = 0.0;
  ComplexMatrix a;
  ComplexMatrix b;
};

struct Certificate {
  double max_residual = 0.0;
  ProbeMode mode;
  double tol = 0.0;
  WorstPair worst;
};

struct CertificationOutcome {
  bool certified = false;
  Certificate certificate;
};

class RotaBaxterOperator {
 public:
  RotaBaxterOperator(SuperOperator op, cd weight, AlgebraSpace space,
                     Certificate certificate)
      : op_(std::move(op)),
        weight_(weight),
        space_(std::move(space)),
        certificate_(std::move(certificate)) {}

  const SuperOperator& op() const { return op_; }
  cd weight() const { return weight_; }
  const AlgebraSpace& space() const { return space_; }
  const Certificate& certificate() const { return certificate_; }

  ComplexMatrix apply(const ComplexMatrix& a) const { return op_.apply(a); }

 private:
  SuperOperator op_;
  cd weight_;
  AlgebraSpace space_;
  Certificate certificate_;
};

// |P(a)P(b) - P(aP(b)) - P(P(a)b) - lambda P(ab)| in operator norm.
double rb_residual(const SuperOperator& p, cd weight, const ComplexMatrix& a,
                   const ComplexMatrix& b);

// Sweep without throwing; the certificate always carries the worst pair.
CertificationOutcome run_rb_certification(const SuperOperator& p, cd weight,
                                          const AlgebraSpace& space,
                                          double tol, const ProbeMode& mode);

// Exhaustive when the basis has at most 256 elements, randomized
// (200 trials, seed 0) above that.
ProbeMode default_probe_mode(const AlgebraSpace& space);

// Certify or throw CertificationFailed carrying the worst pair.
RotaBaxterOperator certify_rb(const SuperOperator& p, cd weight,
                              const AlgebraSpace& space, double tol = 1e-10,
                              std::optional<ProbeMode> mode = std::nullopt);

// -lambda id - P, re-certified at the same weight on the same space.
RotaBaxterOperator tilde(const RotaBaxterOperator& r);

// max over probes of |P(a*) - P(a)*|. The defect map is conjugate-linear
// in a, so a basis sweep certifies symmetry on the span.
double symmetry_defect(const SuperOperator& p,
                       const std::vector<ComplexMatrix>& probes);
double symmetry_defect(const SuperOperator& p, const AlgebraSpace& space);

// |P(a) f x - f P(a) x - f a f x - lambda f a x| for a column vector x.
double matching_defect(const SuperOperator& p, cd weight,
                       const ComplexMatrix& f, const ComplexMatrix& a,
                       const ComplexMatrix& x);

// Max of matching_defect over (basis element, coordinate vector) pairs;
// bilinearity in (a, x) makes this a certificate on the whole space.
double matching_defect_max(const SuperOperator& p, cd weight,
                           const ComplexMatrix& f, const AlgebraSpace& space);

struct MatchingCriterion {
  bool matches = false;
  double worst_defect = 0.0;
  std::size_t worst_index = 0;   // basis element index
  std::string worst_kind;        // "lower_block" or "upper_block"
};

// Weight -1 block test: P(a)_21 = 0 and P(a)_12 = a_12 for every basis
// element, evaluated in the frame adapted to p. Equivalent to a vanishing
// matching defect at weight -1.
MatchingCriterion matching_matrix_criterion(
    const SuperOperator& p_op, const Projection& p,
    const std::vector<ComplexMatrix>& basis, double tol = 1e-10);

// max over unit basis elements of |P(P(e)) - P(e)|.
double idempotency_defect(const SuperOperator& p);

std::vector<ComplexMatrix> space_basis(const AlgebraSpace& space);

}  // namespace rbc
