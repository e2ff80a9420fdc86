#include <cmath>

#include "doctest.h"
#include "rbc/decomp.hpp"
#include "rbc/errors.hpp"
#include "rbc/prng.hpp"
#include "rbc/superop.hpp"

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

TEST_CASE("zero and identity superoperators") {
  Prng rng(21);
  const ComplexMatrix a = random_matrix(3, rng);
  CHECK(SuperOperator::zero(3).apply(a).frobenius_norm() == 0.0);
  CHECK(max_abs_diff(SuperOperator::identity(3).apply(a), a) == 0.0);
}

TEST_CASE("left multiplication kills the lower rows of a rank-1 projection") {
  const SuperOperator lp = SuperOperator::left_mult(
      ComplexMatrix::diagonal({cd{1.0}, cd{0.0}}));
  const ComplexMatrix a = {{cd{1.0}, cd{2.0}}, {cd{3.0}, cd{4.0}}};
  const ComplexMatrix expect = {{cd{1.0}, cd{2.0}}, {cd{0.0}, cd{0.0}}};
  CHECK(max_abs_diff(lp.apply(a), expect) == 0.0);
}

TEST_CASE("structured operators agree with their dense actions on a basis") {
  Prng rng(22);
  const std::size_t n = 3;
  std::vector<SuperOperator> ops;
  ops.push_back(SuperOperator::left_mult(random_matrix(n, rng)));
  ops.push_back(SuperOperator::right_mult(random_matrix(n, rng)));
  ops.push_back(SuperOperator::discrete_volterra(n));
  {
    const ComplexMatrix g = random_matrix(n, rng);
    const ComplexMatrix h = g + adjoint(g);
    const HermitianEig eig = hermitian_eig(h);
    ComplexMatrix p(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        p(i, j) = eig.vectors(i, 0) * std::conj(eig.vectors(j, 0));
      }
    }
    ops.push_back(SuperOperator::triangular(
        SuperOperator::identity(1), SuperOperator::zero(2),
        Projection::from_matrix(p, 1e-10)));
  }
  ops.push_back(SuperOperator::direct_sum(
      {SuperOperator::identity(1), SuperOperator::left_mult(
                                       random_matrix(2, rng))}));
  ops.push_back(SuperOperator::projection_onto(
      {ComplexMatrix::unit(n, 0, 0)},
      {ComplexMatrix::unit(n, 1, 1), ComplexMatrix::unit(n, 2, 2)}, n));

  for (const auto& op : ops) {
    const ComplexMatrix& action = op.dense_action();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const ComplexMatrix e = ComplexMatrix::unit(n, i, j);
        const ComplexMatrix via_action =
            SuperOperator::dense(action).apply(e);
        CHECK(max_abs_diff(via_action, op.apply(e)) < 1e-12);
      }
    }
  }
}

TEST_CASE("apply is linear") {
  Prng rng(23);
  const SuperOperator t = SuperOperator::dense(random_matrix(9, rng));
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix a = random_matrix(3, rng);
    const ComplexMatrix b = random_matrix(3, rng);
    const cd alpha = rng.complex_gaussian();
    const cd beta = rng.complex_gaussian();
    const ComplexMatrix lhs = t.apply(a * alpha + b * beta);
    const ComplexMatrix rhs = t.apply(a) * alpha + t.apply(b) * beta;
    CHECK((lhs - rhs).frobenius_norm() <=
          1e-12 * (a.frobenius_norm() + b.frobenius_norm()));
  }
}

TEST_CASE("compose matches sequential application") {
  Prng rng(24);
  const SuperOperator s = SuperOperator::dense(random_matrix(9, rng));
  const SuperOperator t = SuperOperator::left_mult(random_matrix(3, rng));
  const SuperOperator st = compose(s, t);
  CHECK(st.is_dense());
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix a = random_matrix(3, rng);
    CHECK(max_abs_diff(st.apply(a), s.apply(t.apply(a))) < 1e-11);
  }

  const SuperOperator idc = compose(SuperOperator::identity(3), t);
  CHECK(max_abs_diff(idc.dense_action(), t.dense_action()) < 1e-14);
  const SuperOperator zc = compose(t, SuperOperator::zero(3));
  CHECK(zc.dense_action().frobenius_norm() == 0.0);

  // p idempotent: L_p composed with itself is L_p
  const SuperOperator lp = SuperOperator::left_mult(
      Projection::coordinate(3, 2).matrix());
  CHECK(max_abs_diff(compose(lp, lp).dense_action(), lp.dense_action()) <
        1e-14);
}

TEST_CASE("derivation defect: commutators yes, identity no") {
  Prng rng(25);
  for (std::size_t n : {2u, 3u, 4u}) {
    const ComplexMatrix m = random_matrix(n, rng);
    const SuperOperator d = SuperOperator::from_basis_images(
        n, [&](std::size_t i, std::size_t j) {
          const ComplexMatrix e = ComplexMatrix::unit(n, i, j);
          return m * e - e * m;
        });
    for (int trial = 0; trial < 25; ++trial) {
      const ComplexMatrix a = random_matrix(n, rng);
      const ComplexMatrix b = random_matrix(n, rng);
      CHECK(derivation_defect(d, a, b) <=
            1e-11 * (1.0 + operator_norm(a) * operator_norm(b)));
    }
  }

  const SuperOperator ident = SuperOperator::identity(2);
  const ComplexMatrix eye = ComplexMatrix::identity(2);
  CHECK(derivation_defect(ident, eye, eye) == doctest::Approx(1.0));

  CHECK(derivation_defect(SuperOperator::zero(2), eye, eye) == 0.0);
}

TEST_CASE("invert recovers the inverse map") {
  const SuperOperator ident = SuperOperator::identity(2);
  CHECK(max_abs_diff(invert(ident).dense_action(), ident.dense_action()) <
        1e-14);

  // rank-deficient action
  const SuperOperator lp = SuperOperator::left_mult(
      ComplexMatrix::diagonal({cd{1.0}, cd{0.0}}));
  CHECK_THROWS_AS(invert(lp), NotInvertible);

  // near-identity: id + small commutator action
  Prng rng(26);
  const ComplexMatrix m = random_matrix(2, rng) * cd{0.05};
  const SuperOperator d = SuperOperator::from_basis_images(
      2, [&](std::size_t i, std::size_t j) {
        const ComplexMatrix e = ComplexMatrix::unit(2, i, j);
        return e + m * e - e * m;
      });
  const SuperOperator dinv = invert(d);
  const SuperOperator prod = compose(dinv, d);
  CHECK(max_abs_diff(prod.dense_action(),
                     SuperOperator::identity(2).dense_action()) < 1e-8);
}

TEST_CASE("superop norm finds unit norm for projections onto a summand") {
  CHECK(superop_norm(SuperOperator::identity(2)).value ==
        doctest::Approx(1.0));
  CHECK(superop_norm(SuperOperator::zero(2)).value == doctest::Approx(0.0));

  // oblique-free case: project the diagonal algebra of M_4 onto its first
  // two coordinates
  std::vector<ComplexMatrix> a1 = {ComplexMatrix::unit(4, 0, 0),
                                   ComplexMatrix::unit(4, 1, 1)};
  std::vector<ComplexMatrix> a2 = {ComplexMatrix::unit(4, 2, 2),
                                   ComplexMatrix::unit(4, 3, 3)};
  const SuperOperator p = SuperOperator::projection_onto(a1, a2, 4);
  const SuperOperatorNorm norm = superop_norm(p);
  CHECK(norm.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(operator_norm(norm.witness) == doctest::Approx(1.0));

  // deterministic given the seed
  const SuperOperatorNorm again = superop_norm(p);
  CHECK(norm.value == again.value);
  CHECK(max_abs_diff(norm.witness, again.witness) == 0.0);
}

TEST_CASE("volterra structure is the strict prefix sum on diagonals") {
  const SuperOperator q = SuperOperator::discrete_volterra(4);
  const ComplexMatrix f = ComplexMatrix::diagonal(
      {cd{1.0}, cd{2.0}, cd{3.0}, cd{4.0}});
  const ComplexMatrix img = q.apply(f);
  CHECK(img(0, 0) == cd{0.0});
  CHECK(img(1, 1) == cd{0.25});
  CHECK(img(2, 2) == cd{0.75});
  CHECK(img(3, 3) == cd{1.5});
  // off-diagonal input is annihilated
  CHECK(q.apply(ComplexMatrix::unit(4, 0, 1)).frobenius_norm() == 0.0);
}

TEST_CASE("dimension mismatches are rejected") {
  const SuperOperator t = SuperOperator::identity(2);
  CHECK_THROWS_AS(t.apply(ComplexMatrix::identity(3)), DimensionMismatch);
  CHECK_THROWS_AS(compose(t, SuperOperator::identity(3)),
                  DimensionMismatch);
}
