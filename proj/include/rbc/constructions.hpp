#pragma once

// Constructive sources of certified Rota-Baxter operators on matrix
// algebras: left multiplication by a projection, the triangular block
// construction, direct sums, the restriction/extension pair between
// operators matching a projection on M_n and operators on the block
// diagonal subalgebra, the symmetric <-> real-linear correspondence on
// commutative algebras, projections onto a direct summand, and the exact
// discrete Volterra operator on the diagonal algebra.

#include <cstdint>
#include <optional>
#include <vector>

#include "rbc/rb.hpp"

namespace rbc {

// f sampled at left endpoints k/M, k = 0..M-1. The pointwise-product
// algebra of sampled functions is the diagonal subalgebra of M_M.
struct SampledFunction {
  std::vector<cd> samples;

  std::size_t size() const { return samples.size(); }
  double step() const { return 1.0 / static_cast<double>(samples.size()); }
  ComplexMatrix to_diagonal() const {
    return ComplexMatrix::diagonal(samples);
  }
  template <typename F>
  static SampledFunction sample(std::size_t m, F&& f) {
    SampledFunction s;
    s.samples.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
      s.samples.push_back(f(static_cast<double>(k) / static_cast<double>(m)));
    }
    return s;
  }
};

// Two certified C*-subalgebra spans whose sum is direct.
struct DecompositionPair {
  std::vector<ComplexMatrix> a1_basis;
  std::vector<ComplexMatrix> a2_basis;
  std::size_t dim = 0;
  double tol = 0.0;
};

DecompositionPair make_decomposition_pair(std::vector<ComplexMatrix> a1,
                                          std::vector<ComplexMatrix> a2,
                                          std::size_t dim, double tol = 1e-10);

// L_p(a) = p a, weight -1 on the full algebra.
RotaBaxterOperator left_mult_projection(const Projection& p,
                                        double tol = 1e-10);

// Blocks (a11, a12, a21, a22) -> (P1(a11), a12, 0, P2(a22)); weight -1,
// matches p. Inputs must be weight -1 on full algebras of the block sizes.
RotaBaxterOperator triangular_rb(const RotaBaxterOperator& p1,
                                 const RotaBaxterOperator& p2,
                                 const Projection& p, double tol = 1e-10);

// Componentwise operator on the block-diagonal direct sum; weights must
// agree.
RotaBaxterOperator direct_sum_rb(const RotaBaxterOperator& p1,
                                 const RotaBaxterOperator& p2,
                                 double tol = 1e-10);

// Restriction of a weight -1 operator matching p to the block-diagonal
// subalgebra B(pH) + B(p_perp H), expressed in the frame adapted to p.
// Throws NotMatching if the block criterion fails.
RotaBaxterOperator phi_restrict(const RotaBaxterOperator& p_op,
                                const Projection& p, double tol = 1e-10);

// Same, starting from a bare operator: the block criterion is checked
// before anything else, then the input is certified at weight -1.
RotaBaxterOperator phi_restrict(const SuperOperator& op, const Projection& p,
                                double tol = 1e-10);

// Extension of a weight -1 operator on the block-diagonal subalgebra to
// one on the full algebra matching p:
//   P(a) = P'(diag(a11, a22)) + strict upper block of a.
// Inverse of phi_restrict on both sides.
RotaBaxterOperator psi_extend(const RotaBaxterOperator& p_prime,
                              const Projection& p, double tol = 1e-10);

// Real-linear Rota-Baxter operator on the self-adjoint part of a
// commutative algebra, stored on an orthonormal Hermitian basis.
struct RealLinearRBOperator {
  std::vector<ComplexMatrix> basis;  // Hermitian, orthonormal real span
  ComplexMatrix action;              // real entries, basis coordinates
  double weight = 0.0;
  double max_residual = 0.0;
  double tol = 0.0;
};

// Orthonormal Hermitian basis of the self-adjoint part of the space.
std::vector<ComplexMatrix> hermitian_basis(const AlgebraSpace& space);

// Certify a real-linear operator (given by its coordinate action on the
// Hermitian basis) as Rota-Baxter of the given real weight.
RealLinearRBOperator certify_real_rb(std::vector<ComplexMatrix> basis,
                                     ComplexMatrix action, double weight,
                                     double tol = 1e-10);

// Restriction of a symmetric operator on a commutative algebra to the
// self-adjoint part. Throws NotCommutative / NotSymmetric / NonRealWeight.
//
// allow_noncommutative is an escape hatch for experiments on spaces whose
// self-adjoint part is not closed under products: the commutativity gate
// and the Rota-Baxter certification are skipped and max_residual is
// reported as -1 (no certificate is claimed).
RealLinearRBOperator real_restrict(const RotaBaxterOperator& p,
                                   const AlgebraSpace& space,
                                   double tol = 1e-10,
                                   bool allow_noncommutative = false);

// P(a) = P1((a + a*)/2) + i P1((a - a*)/(2i)); certified symmetric
// Rota-Baxter of the same real weight. Inverse of real_restrict.
RotaBaxterOperator symmetric_from_real(const RealLinearRBOperator& p1,
                                       const AlgebraSpace& space,
                                       double tol = 1e-10);

// Linear projection onto span(a1) along span(a2); certified idempotent,
// symmetric, Rota-Baxter of weight -1 and with norm witness <= 1 + 1e-8.
RotaBaxterOperator projection_rb_from_decomposition(
    const DecompositionPair& d, double tol = 1e-10);

// Recover the two subalgebras from an idempotent symmetric weight -1
// operator: bases of range(P) and range(id - P) relative to the operator's
// space.
DecompositionPair decompose_from_rb(const RotaBaxterOperator& r,
                                    double tol = 1e-10);

// Strict left-endpoint prefix sum Q(f)_k = h * sum_{j<k} f_j on the
// diagonal algebra of M_M, h = 1/M. The Rota-Baxter identity holds exactly
// at weight h; at weight 0 the residual on smooth probes decays like h.
RotaBaxterOperator volterra_discrete(std::size_t samples, double tol = 1e-10);

// Matrix of the operator restricted to the space: out(i, j) =
// <basis_i, P(basis_j)> in the Frobenius inner product. leak reports the
// largest component of an image outside the space.
ComplexMatrix restricted_matrix(const SuperOperator& op,
                                const AlgebraSpace& space, double* leak);

}  // namespace rbc
