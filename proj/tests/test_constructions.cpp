#include <cmath>

#include "doctest.h"
#include "rbc/constructions.hpp"
#include "rbc/decomp.hpp"
#include "rbc/errors.hpp"
#include "rbc/prng.hpp"

using namespace rbc;

namespace {

ComplexMatrix random_matrix(std::size_t n, Prng& rng) {
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a.data()[i] = rng.complex_gaussian();
  }
  return a;
}

RotaBaxterOperator id_rb(std::size_t n) {
  return certify_rb(SuperOperator::identity(n), cd{-1.0},
                    AlgebraSpace::full(n), 1e-10);
}

RotaBaxterOperator zero_rb(std::size_t n) {
  return certify_rb(SuperOperator::zero(n), cd{-1.0}, AlgebraSpace::full(n),
                    1e-10);
}

double basis_distance(const SuperOperator& s, const SuperOperator& t,
                      std::size_t n) {
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const ComplexMatrix e = ComplexMatrix::unit(n, i, j);
      worst = std::max(worst, operator_norm(s.apply(e) - t.apply(e)));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("left multiplication by trivial projections") {
  const RotaBaxterOperator z = left_mult_projection(
      Projection::coordinate(2, 0), 1e-10);
  CHECK(z.op().dense_action().frobenius_norm() == 0.0);

  const RotaBaxterOperator full = left_mult_projection(
      Projection::coordinate(2, 2), 1e-10);
  CHECK(basis_distance(full.op(), SuperOperator::identity(2), 2) == 0.0);

  const RotaBaxterOperator half = left_mult_projection(
      Projection::coordinate(2, 1), 1e-10);
  CHECK(half.certificate().max_residual <= 1e-13);
}

TEST_CASE("triangular construction reproduces one-sided multiplications") {
  const Projection p = Projection::coordinate(2, 1);

  // (id, 0) acts as L_p
  const RotaBaxterOperator t1 = triangular_rb(id_rb(1), zero_rb(1), p);
  CHECK(basis_distance(t1.op(), SuperOperator::left_mult(p.matrix()), 2) <=
        1e-14);

  // (0, id) acts as R_{p_perp}
  const RotaBaxterOperator t2 = triangular_rb(zero_rb(1), id_rb(1), p);
  CHECK(basis_distance(
            t2.op(),
            SuperOperator::right_mult(p.complement().matrix()), 2) <= 1e-14);

  // (0, 0) keeps only the strictly upper block and still certifies
  const RotaBaxterOperator t3 = triangular_rb(zero_rb(1), zero_rb(1), p);
  CHECK(t3.certificate().max_residual <= 1e-13);
  const ComplexMatrix e12 = ComplexMatrix::unit(2, 0, 1);
  CHECK(max_abs_diff(t3.apply(e12), e12) <= 1e-14);
  CHECK(t3.apply(ComplexMatrix::unit(2, 0, 0)).frobenius_norm() <= 1e-14);

  CHECK_THROWS_AS(
      triangular_rb(certify_rb(SuperOperator::zero(1), cd{0.0},
                               AlgebraSpace::full(1), 1e-10),
                    id_rb(1), p),
      WeightMismatch);
}

TEST_CASE("direct sums certify componentwise") {
  const RotaBaxterOperator z =
      direct_sum_rb(zero_rb(2), zero_rb(2), 1e-10);
  CHECK(z.op().apply(ComplexMatrix::identity(4)).frobenius_norm() == 0.0);

  const RotaBaxterOperator ii = direct_sum_rb(id_rb(2), id_rb(3), 1e-10);
  CHECK(ii.weight() == cd{-1.0});
  CHECK(ii.space().kind() == AlgebraSpace::Kind::direct_sum);
  for (std::size_t k = 0; k < ii.space().basis_size(); ++k) {
    const ComplexMatrix e = ii.space().basis_element(k);
    CHECK(max_abs_diff(ii.apply(e), e) <= 1e-14);
  }

  // L_{q1} (+) L_{q2} equals L_{q1 (+) q2} on the embedded algebra
  const Projection q1 = Projection::coordinate(2, 1);
  const Projection q2 = Projection::coordinate(3, 2);
  const RotaBaxterOperator sum = direct_sum_rb(
      left_mult_projection(q1), left_mult_projection(q2), 1e-10);
  const ComplexMatrix qq = direct_sum_embed({q1.matrix(), q2.matrix()});
  const SuperOperator lqq = SuperOperator::left_mult(qq);
  for (std::size_t k = 0; k < sum.space().basis_size(); ++k) {
    const ComplexMatrix e = sum.space().basis_element(k);
    CHECK(operator_norm(sum.apply(e) - lqq.apply(e)) <= 1e-14);
  }

  CHECK_THROWS_AS(
      direct_sum_rb(id_rb(2), certify_rb(SuperOperator::zero(2), cd{1.0},
                                         AlgebraSpace::full(2), 1e-10)),
      WeightMismatch);
}

TEST_CASE("restriction of a left multiplication is id (+) 0") {
  const std::size_t n = 4;
  const Projection p = Projection::coordinate(n, 2);
  const RotaBaxterOperator lp = left_mult_projection(p, 1e-10);
  const RotaBaxterOperator res = phi_restrict(lp, p, 1e-10);

  // on block-diagonal a = diag(a11, a22): p a = diag(a11, 0)
  for (std::size_t k = 0; k < res.space().basis_size(); ++k) {
    const ComplexMatrix e = res.space().basis_element(k);
    const ComplexMatrix expect =
        SuperOperator::left_mult(p.matrix()).apply(e);
    CHECK(operator_norm(res.apply(e) - expect) <= 1e-13);
  }
}

TEST_CASE("restriction of a triangular operator is the direct sum") {
  Prng rng(41);
  const std::size_t n = 5;
  const Projection p = Projection::coordinate(n, 2);
  const RotaBaxterOperator p1 = left_mult_projection(
      Projection::coordinate(2, 1), 1e-10);
  const RotaBaxterOperator p2 = left_mult_projection(
      Projection::coordinate(3, 2), 1e-10);
  const RotaBaxterOperator tri = triangular_rb(p1, p2, p, 1e-10);
  const RotaBaxterOperator res = phi_restrict(tri, p, 1e-10);
  const RotaBaxterOperator expect = direct_sum_rb(p1, p2, 1e-10);
  for (std::size_t k = 0; k < res.space().basis_size(); ++k) {
    const ComplexMatrix e = res.space().basis_element(k);
    CHECK(operator_norm(res.apply(e) - expect.apply(e)) <= 1e-13);
  }
}

TEST_CASE("extension with a zero block operator keeps the upper block") {
  const std::size_t n = 4;
  const Projection p = Projection::coordinate(n, 2);
  const RotaBaxterOperator zz = direct_sum_rb(zero_rb(2), zero_rb(2));
  const RotaBaxterOperator ext = psi_extend(zz, p, 1e-10);
  Prng rng(42);
  const ComplexMatrix a = random_matrix(n, rng);
  const ComplexMatrix img = ext.apply(a);
  // strictly upper block of a survives, everything else dies
  const BlockDecomposition blocks = compress(img, p);
  CHECK(blocks.a11.frobenius_norm() <= 1e-13);
  CHECK(blocks.a21.frobenius_norm() <= 1e-13);
  CHECK(blocks.a22.frobenius_norm() <= 1e-13);
  CHECK(max_abs_diff(blocks.a12, compress(a, p).a12) <= 1e-13);

  // id (+) id extends to a - lower block
  const RotaBaxterOperator ii = direct_sum_rb(id_rb(2), id_rb(2));
  const RotaBaxterOperator ext2 = psi_extend(ii, p, 1e-10);
  const ComplexMatrix img2 = ext2.apply(a);
  const BlockDecomposition b2 = compress(img2, p);
  CHECK(max_abs_diff(b2.a11, compress(a, p).a11) <= 1e-13);
  CHECK(max_abs_diff(b2.a12, compress(a, p).a12) <= 1e-13);
  CHECK(max_abs_diff(b2.a22, compress(a, p).a22) <= 1e-13);
  CHECK(b2.a21.frobenius_norm() <= 1e-13);
}

TEST_CASE("restriction and extension invert each other") {
  Prng rng(43);
  for (int trial = 0; trial < 9; ++trial) {
    const std::size_t n = 3 + trial % 3;
    const std::size_t rank = 1 + static_cast<std::size_t>(trial) % (n - 1);
    const Projection p = Projection::coordinate(n, rank);

    std::vector<RotaBaxterOperator> parts;
    parts.push_back(left_mult_projection(
        Projection::coordinate(rank, rng.next_u64() % (rank + 1))));
    parts.push_back(left_mult_projection(Projection::coordinate(
        n - rank, rng.next_u64() % (n - rank + 1))));
    const RotaBaxterOperator tri = triangular_rb(parts[0], parts[1], p);

    const RotaBaxterOperator round =
        psi_extend(phi_restrict(tri, p, 1e-10), p, 1e-10);
    CHECK(basis_distance(tri.op(), round.op(), n) <= 1e-12);

    const RotaBaxterOperator dsum = direct_sum_rb(parts[0], parts[1]);
    const RotaBaxterOperator round2 =
        phi_restrict(psi_extend(dsum, p, 1e-10), p, 1e-10);
    for (std::size_t k = 0; k < dsum.space().basis_size(); ++k) {
      const ComplexMatrix e = dsum.space().basis_element(k);
      CHECK(operator_norm(dsum.apply(e) - round2.apply(e)) <= 1e-12);
    }
  }
}

TEST_CASE("non-matching operators are rejected with a block witness") {
  const std::size_t n = 3;
  const Projection p = Projection::coordinate(n, 1);
  const SuperOperator rp = SuperOperator::right_mult(p.matrix());
  CHECK_THROWS_AS(phi_restrict(rp, p, 1e-10), NotMatching);
}

TEST_CASE("symmetric operators on a commutative algebra restrict to real ones") {
  const std::size_t m = 6;
  const AlgebraSpace space =
      AlgebraSpace::direct_sum(std::vector<std::size_t>(m, 1));

  // identity restricts to the identity
  const RotaBaxterOperator ident = certify_rb(
      SuperOperator::identity(m), cd{-1.0}, space, 1e-10);
  const RealLinearRBOperator rid = real_restrict(ident, space, 1e-10);
  CHECK(max_abs_diff(rid.action, ComplexMatrix::identity(m)) <= 1e-13);

  // zero restricts to zero
  const RotaBaxterOperator z =
      certify_rb(SuperOperator::zero(m), cd{2.0}, space, 1e-10);
  CHECK(real_restrict(z, space, 1e-10).action.frobenius_norm() == 0.0);

  // the discrete Volterra operator restricts to the real summation matrix
  const RotaBaxterOperator q = volterra_discrete(m, 1e-10);
  const RealLinearRBOperator rq = real_restrict(q, space, 1e-10);
  CHECK(rq.weight == doctest::Approx(1.0 / m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double expect = j < i ? 1.0 / m : 0.0;
      CHECK(std::abs(rq.action(i, j) - cd{expect}) <= 1e-13);
    }
  }

  // rebuilding from the real operator reproduces the original
  const RotaBaxterOperator q2 = symmetric_from_real(rq, space, 1e-10);
  CHECK(max_abs_diff(q2.op().dense_action(), q.op().dense_action()) <= 1e-13);
  CHECK(symmetry_defect(q2.op(), space) <= 1e-13);
}

TEST_CASE("real reconstruction demands a real weight and a commutative space") {
  const AlgebraSpace full2 = AlgebraSpace::full(2);
  const RotaBaxterOperator ident =
      certify_rb(SuperOperator::identity(2), cd{-1.0}, full2, 1e-10);
  CHECK_THROWS_AS(real_restrict(ident, full2, 1e-10), NotCommutative);

  const AlgebraSpace diag2 =
      AlgebraSpace::direct_sum(std::vector<std::size_t>(2, 1));
  const RotaBaxterOperator zc = certify_rb(SuperOperator::zero(2),
                                           cd{0.0, 1.0}, diag2, 1e-10);
  CHECK_THROWS_AS(real_restrict(zc, diag2, 1e-10), NonRealWeight);

  // L_p on the full algebra is not symmetric
  const RotaBaxterOperator lp = left_mult_projection(
      Projection::coordinate(2, 1), 1e-10);
  CHECK(symmetry_defect(lp.op(), full2) == doctest::Approx(1.0));

  // escape hatch: restriction on a noncommutative space is computed but
  // carries no certificate
  const RealLinearRBOperator loose =
      real_restrict(ident, full2, 1e-10, true);
  CHECK(loose.max_residual == -1.0);
  CHECK(loose.basis.size() == 4);  // hermitian basis of M_2
  CHECK(max_abs_diff(loose.action, ComplexMatrix::identity(4)) <= 1e-13);
}

TEST_CASE("projection onto a summand certifies and decomposes back") {
  const std::size_t n = 4;
  std::vector<ComplexMatrix> a1 = {ComplexMatrix::unit(n, 0, 0),
                                   ComplexMatrix::unit(n, 1, 1)};
  std::vector<ComplexMatrix> a2 = {ComplexMatrix::unit(n, 2, 2),
                                   ComplexMatrix::unit(n, 3, 3)};
  const DecompositionPair d = make_decomposition_pair(a1, a2, n, 1e-10);
  const RotaBaxterOperator r = projection_rb_from_decomposition(d, 1e-10);

  // acts as L_{diag(1,1,0,0)} on diagonal elements
  const ComplexMatrix probe = ComplexMatrix::diagonal(
      {cd{1.0}, cd{2.0}, cd{3.0}, cd{4.0}});
  const ComplexMatrix expect = ComplexMatrix::diagonal(
      {cd{1.0}, cd{2.0}, cd{0.0}, cd{0.0}});
  CHECK(max_abs_diff(r.apply(probe), expect) <= 1e-12);

  const DecompositionPair back = decompose_from_rb(r, 1e-10);
  CHECK(back.a1_basis.size() == 2);
  CHECK(back.a2_basis.size() == 2);

  // trivial splits
  const DecompositionPair whole = make_decomposition_pair(a1, {}, n, 1e-10);
  const RotaBaxterOperator rw = projection_rb_from_decomposition(whole);
  CHECK(max_abs_diff(rw.apply(ComplexMatrix::unit(n, 0, 0)),
                     ComplexMatrix::unit(n, 0, 0)) <= 1e-12);
  const DecompositionPair none = make_decomposition_pair({}, a2, n, 1e-10);
  const RotaBaxterOperator rn = projection_rb_from_decomposition(none);
  CHECK(rn.apply(ComplexMatrix::unit(n, 2, 2)).frobenius_norm() <= 1e-12);
}

TEST_CASE("decompose_from_rb recovers the split of the identity and zero") {
  const std::size_t n = 3;
  const AlgebraSpace diag =
      AlgebraSpace::direct_sum(std::vector<std::size_t>(n, 1));
  const RotaBaxterOperator ident =
      certify_rb(SuperOperator::identity(n), cd{-1.0}, diag, 1e-10);
  const DecompositionPair d1 = decompose_from_rb(ident, 1e-10);
  CHECK(d1.a1_basis.size() == n);
  CHECK(d1.a2_basis.empty());

  const RotaBaxterOperator z =
      certify_rb(SuperOperator::zero(n), cd{-1.0}, diag, 1e-10);
  const DecompositionPair d0 = decompose_from_rb(z, 1e-10);
  CHECK(d0.a1_basis.empty());
  CHECK(d0.a2_basis.size() == n);
}

TEST_CASE("decompose_from_rb enforces its preconditions") {
  const std::size_t n = 2;
  const AlgebraSpace full = AlgebraSpace::full(n);
  // L_p is idempotent but not symmetric
  const RotaBaxterOperator lp = left_mult_projection(
      Projection::coordinate(n, 1), 1e-10);
  CHECK_THROWS_AS(decompose_from_rb(lp, 1e-10), NotSymmetric);

  const RotaBaxterOperator wrong = certify_rb(
      SuperOperator::zero(n), cd{1.0}, full, 1e-10);
  CHECK_THROWS_AS(decompose_from_rb(wrong, 1e-10), WrongWeight);

  // a non-idempotent operator cannot reach weight -1 honestly, so stage
  // one with a hand-written certificate to exercise the guard
  Certificate fake;
  fake.tol = 1e-10;
  const RotaBaxterOperator doubled(
      SuperOperator::dense(ComplexMatrix::identity(n * n) * cd{2.0}),
      cd{-1.0}, full, fake);
  CHECK_THROWS_AS(decompose_from_rb(doubled, 1e-10), NotIdempotent);
}

TEST_CASE("discrete volterra cases") {
  // a single sample gives the zero operator, certified at any weight
  const RotaBaxterOperator q1 = volterra_discrete(1, 1e-10);
  CHECK(q1.op().dense_action().frobenius_norm() == 0.0);

  // exact weight h certification on constants
  const std::size_t m = 64;
  const SuperOperator q = SuperOperator::discrete_volterra(m);
  const ComplexMatrix ones = ComplexMatrix::identity(m);
  CHECK(rb_residual(q, cd{1.0 / m}, ones, ones) <= 1e-14);

  // weight-0 residual halves when the step halves
  auto residual = [](std::size_t samples) {
    const SuperOperator op = SuperOperator::discrete_volterra(samples);
    const ComplexMatrix f =
        SampledFunction::sample(samples, [](double x) { return cd{x}; })
            .to_diagonal();
    const ComplexMatrix g =
        SampledFunction::sample(samples,
                                [](double x) { return cd{x * x}; })
            .to_diagonal();
    return rb_residual(op, cd{0.0}, f, g);
  };
  const double ratio = residual(2 * m) / residual(m);
  CHECK(ratio >= 0.4);
  CHECK(ratio <= 0.6);

  // exhaustive certification for the acceptance sizes
  for (std::size_t samples : {4u, 8u, 16u, 32u}) {
    const RotaBaxterOperator qq = volterra_discrete(samples, 1e-13);
    CHECK(qq.certificate().max_residual <= 1e-13);
    CHECK(qq.certificate().mode.kind == ProbeMode::Kind::exhaustive);
  }
}

TEST_CASE("a span containing the upper unit cannot be jointly symmetric and matching") {
  // any operator matching p sends E_12 to something with upper block E_12
  // and kills nothing on the lower block, so symmetry must fail on a span
  // containing E_12
  const std::size_t n = 2;
  const Projection p = Projection::coordinate(n, 1);
  for (int variant = 0; variant < 2; ++variant) {
    const RotaBaxterOperator tri =
        variant == 0 ? triangular_rb(id_rb(1), id_rb(1), p)
                     : triangular_rb(id_rb(1), zero_rb(1), p);
    CHECK(matching_matrix_criterion(tri.op(), p,
                                    space_basis(AlgebraSpace::full(n)))
              .matches);
    const double sym =
        symmetry_defect(tri.op(), {ComplexMatrix::unit(n, 0, 1)});
    CHECK(sym >= 1.0 - 1e-12);
  }
}

TEST_CASE("dependent or non-closed decompositions are rejected") {
  const std::size_t n = 2;
  std::vector<ComplexMatrix> a1 = {ComplexMatrix::unit(n, 0, 0)};
  std::vector<ComplexMatrix> dup = {ComplexMatrix::unit(n, 0, 0)};
  CHECK_THROWS_AS(make_decomposition_pair(a1, dup, n, 1e-10), NotDirectSum);

  std::vector<ComplexMatrix> bad = {ComplexMatrix::unit(n, 0, 1)};
  CHECK_THROWS_AS(make_decomposition_pair(a1, bad, n, 1e-10), NotSubalgebra);
}
