#include <cmath>

#include "doctest.h"
#include "rbc/constructions.hpp"
#include "rbc/decomp.hpp"
#include "rbc/errors.hpp"
#include "rbc/prng.hpp"
#include "rbc/rb.hpp"

using namespace rbc;

namespace {

ComplexMatrix random_matrix(std::size_t n, Prng& rng) {
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a.data()[i] = rng.complex_gaussian();
  }
  return a;
}

}  // namespace

TEST_CASE("rb residual on the textbook cases") {
  Prng rng(31);
  const ComplexMatrix a = random_matrix(2, rng);
  const ComplexMatrix b = random_matrix(2, rng);

  CHECK(rb_residual(SuperOperator::zero(2), cd{3.0, 1.0}, a, b) == 0.0);
  // identity at weight -1: ab = ab + ab - ab
  CHECK(rb_residual(SuperOperator::identity(2), cd{-1.0}, a, b) <= 1e-13);
  // identity at weight 0 on the unit: residual |ab| = 1
  const ComplexMatrix eye = ComplexMatrix::identity(2);
  CHECK(rb_residual(SuperOperator::identity(2), cd{0.0}, eye, eye) ==
        doctest::Approx(1.0));
}

TEST_CASE("exhaustive certification of a left multiplication") {
  const RotaBaxterOperator r = certify_rb(
      SuperOperator::left_mult(Projection::coordinate(2, 1).matrix()),
      cd{-1.0}, AlgebraSpace::full(2), 1e-10);
  CHECK(r.certificate().max_residual <= 1e-13);
  CHECK(r.certificate().mode.kind == ProbeMode::Kind::exhaustive);
}

TEST_CASE("identity at weight zero fails with the first basis pair") {
  try {
    certify_rb(SuperOperator::identity(2), cd{0.0}, AlgebraSpace::full(2),
               1e-10);
    FAIL("certification should have thrown");
  } catch (const CertificationFailed& e) {
    CHECK(e.witness().index_a == 0);  // E_11 is basis element 0
    CHECK(e.witness().index_b == 0);
    CHECK(e.witness().residual == doctest::Approx(1.0));
  }
}

TEST_CASE("zero operator certifies at any complex weight") {
  const RotaBaxterOperator r = certify_rb(
      SuperOperator::zero(3), cd{7.0, 2.0}, AlgebraSpace::full(3), 1e-10);
  CHECK(r.certificate().max_residual == 0.0);
}

TEST_CASE("certified exhaustive operators stay certified on random pairs") {
  // bilinearity soundness: basis pairs bound the residual on the whole
  // space up to scaling
  Prng rng(32);
  for (std::size_t n : {2u, 3u}) {
    const RotaBaxterOperator r = left_mult_projection(
        Projection::coordinate(n, 1), 1e-10);
    for (int trial = 0; trial < 100; ++trial) {
      const ComplexMatrix a = random_matrix(n, rng);
      const ComplexMatrix b = random_matrix(n, rng);
      const double res = rb_residual(r.op(), r.weight(), a, b);
      CHECK(res <= 10.0 * 1e-10 * operator_norm(a) * operator_norm(b));
    }
  }
}

TEST_CASE("randomized certification mode records its seed and witness") {
  const AlgebraSpace space = AlgebraSpace::full(3);
  const CertificationOutcome out = run_rb_certification(
      SuperOperator::left_mult(Projection::coordinate(3, 2).matrix()),
      cd{-1.0}, space, 1e-10, ProbeMode::randomized(50, 9));
  CHECK(out.certified);
  CHECK(out.certificate.mode.trials == 50);
  CHECK(out.certificate.mode.seed == 9);
  CHECK(!out.certificate.worst.a.empty());

  // deterministic reruns
  const CertificationOutcome again = run_rb_certification(
      SuperOperator::left_mult(Projection::coordinate(3, 2).matrix()),
      cd{-1.0}, space, 1e-10, ProbeMode::randomized(50, 9));
  CHECK(out.certificate.max_residual == again.certificate.max_residual);
}

TEST_CASE("tilde flips a projection left-multiplication to its complement") {
  const Projection p = Projection::coordinate(2, 1);
  const RotaBaxterOperator lp = left_mult_projection(p, 1e-10);
  const RotaBaxterOperator tl = tilde(lp);
  CHECK(tl.weight() == cd{-1.0});

  const SuperOperator lperp =
      SuperOperator::left_mult(p.complement().matrix());
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      const ComplexMatrix e = ComplexMatrix::unit(2, i, j);
      CHECK(operator_norm(tl.apply(e) - lperp.apply(e)) <= 1e-14);
    }
  }

  // tilde is an involution on operators
  const RotaBaxterOperator back = tilde(tl);
  CHECK(max_abs_diff(back.op().dense_action(), lp.op().dense_action()) <=
        1e-14);

  // tilde of the zero operator at weight zero is zero
  const RotaBaxterOperator z = certify_rb(SuperOperator::zero(2), cd{0.0},
                                          AlgebraSpace::full(2), 1e-10);
  CHECK(tilde(z).op().dense_action().frobenius_norm() == 0.0);
}

TEST_CASE("symmetry defect distinguishes symmetric operators") {
  const std::vector<ComplexMatrix> probes = {
      ComplexMatrix::unit(2, 0, 0), ComplexMatrix::unit(2, 0, 1),
      ComplexMatrix::unit(2, 1, 0), ComplexMatrix::unit(2, 1, 1)};
  CHECK(symmetry_defect(SuperOperator::identity(2), probes) == 0.0);

  // L_p with the E_12 probe: p a* = 0 while (p a)* = a*
  const SuperOperator lp = SuperOperator::left_mult(
      ComplexMatrix::diagonal({cd{1.0}, cd{0.0}}));
  CHECK(symmetry_defect(lp, {ComplexMatrix::unit(2, 0, 1)}) ==
        doctest::Approx(1.0));

  // the discrete Volterra operator is symmetric on the diagonal algebra
  const SuperOperator q = SuperOperator::discrete_volterra(6);
  CHECK(symmetry_defect(
            q, space_basis(AlgebraSpace::direct_sum(
                   std::vector<std::size_t>(6, 1)))) <= 1e-15);
}

TEST_CASE("matching defect on the definition cases") {
  const std::size_t n = 2;
  const Projection p = Projection::coordinate(n, 1);
  const SuperOperator lp = SuperOperator::left_mult(p.matrix());

  // L_p matches p at weight -1 on every basis pair
  CHECK(matching_defect_max(lp, cd{-1.0}, p.matrix(),
                            AlgebraSpace::full(n)) <= 1e-14);

  // f = 0 kills every term
  Prng rng(33);
  const ComplexMatrix a = random_matrix(n, rng);
  ComplexMatrix x(n, 1);
  x(0, 0) = rng.complex_gaussian();
  x(1, 0) = rng.complex_gaussian();
  CHECK(matching_defect(SuperOperator::identity(n), cd{-1.0},
                        ComplexMatrix::zero(n, n), a, x) == 0.0);

  // f = id, weight -1: every operator matches the identity
  CHECK(matching_defect(SuperOperator::identity(n), cd{-1.0},
                        ComplexMatrix::identity(n), a, x) <= 1e-14);
}

TEST_CASE("matrix criterion agrees with the matching defect") {
  const std::size_t n = 2;
  const Projection p = Projection::coordinate(n, 1);
  const auto basis = space_basis(AlgebraSpace::full(n));

  const SuperOperator lp = SuperOperator::left_mult(p.matrix());
  const MatchingCriterion good = matching_matrix_criterion(lp, p, basis);
  CHECK(good.matches);
  CHECK(good.worst_defect <= 1e-14);

  // right multiplication by p does not match: (a p)_12 = 0 misses a_12
  const SuperOperator rp = SuperOperator::right_mult(p.matrix());
  const MatchingCriterion bad = matching_matrix_criterion(rp, p, basis);
  CHECK(!bad.matches);
  CHECK(bad.worst_kind == "upper_block");
  CHECK(bad.worst_defect == doctest::Approx(1.0));
  const double defect =
      matching_defect_max(rp, cd{-1.0}, p.matrix(), AlgebraSpace::full(n));
  CHECK(defect > 1e-10);

  // triangular constructions always match
  const RotaBaxterOperator tri = triangular_rb(
      certify_rb(SuperOperator::identity(1), cd{-1.0}, AlgebraSpace::full(1),
                 1e-10),
      certify_rb(SuperOperator::zero(1), cd{-1.0}, AlgebraSpace::full(1),
                 1e-10),
      p, 1e-10);
  CHECK(matching_matrix_criterion(tri.op(), p, basis).matches);
}

TEST_CASE("idempotency defect") {
  CHECK(idempotency_defect(SuperOperator::identity(3)) == 0.0);
  const SuperOperator lp = SuperOperator::left_mult(
      Projection::coordinate(3, 1).matrix());
  CHECK(idempotency_defect(lp) <= 1e-15);

  // 2 id: |4a - 2a| = 2 on unit basis elements
  const SuperOperator twice =
      SuperOperator::dense(ComplexMatrix::identity(4) * cd{2.0});
  CHECK(idempotency_defect(twice) == doctest::Approx(2.0));
}

TEST_CASE("span spaces certify closure and reject non-subalgebras") {
  // diagonal span closed under products and involution
  std::vector<ComplexMatrix> diag = {ComplexMatrix::unit(2, 0, 0),
                                     ComplexMatrix::unit(2, 1, 1)};
  const AlgebraSpace ds =
      AlgebraSpace::span(AlgebraSpace::full(2), diag, 1e-10);
  CHECK(ds.basis_size() == 2);
  CHECK(ds.is_commutative());

  // span of E_12 alone: product closed (E_12^2 = 0) but not involution
  CHECK_THROWS_AS(AlgebraSpace::span(AlgebraSpace::full(2),
                                     {ComplexMatrix::unit(2, 0, 1)}, 1e-10),
                  NotSubalgebra);

  // span of E_11, E_12 is closed under product but not under *
  CHECK_THROWS_AS(
      AlgebraSpace::span(AlgebraSpace::full(2),
                         {ComplexMatrix::unit(2, 0, 0),
                          ComplexMatrix::unit(2, 0, 1)},
                         1e-10),
      NotSubalgebra);

  // upper triangular algebra: closed under product, not under involution
  // (E_12* = E_21 outside), so it must be rejected as a *-span
  CHECK_THROWS_AS(
      AlgebraSpace::span(AlgebraSpace::full(2),
                         {ComplexMatrix::unit(2, 0, 0),
                          ComplexMatrix::unit(2, 0, 1),
                          ComplexMatrix::unit(2, 1, 1)},
                         1e-10),
      NotSubalgebra);
}
