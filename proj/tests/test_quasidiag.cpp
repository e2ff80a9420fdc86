#include <cmath>

#include "doctest.h"
#include "rbc/errors.hpp"
#include "rbc/prng.hpp"
#include "rbc/quasidiag.hpp"

using namespace rbc;

namespace {

ComplexMatrix random_matrix(std::size_t n, Prng& rng) {
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a.data()[i] = rng.complex_gaussian();
  }
  return a;
}

ComplexMatrix shift_matrix(std::size_t n) {
  ComplexMatrix s(n, n);
  for (std::size_t k = 0; k + 1 < n; ++k) s(k + 1, k) = 1.0;
  return s;
}

}  // namespace

TEST_CASE("commutator norm basics") {
  const Projection p = Projection::coordinate(4, 2);
  CHECK(commutator_norm(ComplexMatrix::diagonal(
                            {cd{1.0}, cd{2.0}, cd{3.0}, cd{4.0}}),
                        p) == 0.0);
  CHECK(commutator_norm(p.matrix(), p) == 0.0);

  // the truncated shift has a single unit entry crossing every cut
  for (std::size_t n : {4u, 8u}) {
    const ComplexMatrix s = shift_matrix(n);
    for (std::size_t r = 1; r < n; ++r) {
      CHECK(commutator_norm(s, Projection::coordinate(n, r)) ==
            doctest::Approx(1.0));
    }
  }

  // |[d, p]| equals |p_perp d p - p d p_perp| entrywise
  Prng rng(61);
  const ComplexMatrix d = random_matrix(5, rng);
  const Projection q = Projection::coordinate(5, 2);
  const ComplexMatrix pm = q.matrix();
  const ComplexMatrix pp = ComplexMatrix::identity(5) - pm;
  CHECK(std::abs(commutator_norm(d, q) -
                 operator_norm(pp * d * pm - pm * d * pp)) <= 1e-13);
}

TEST_CASE("projection chains certify ordering") {
  const ProjectionChain chain = ProjectionChain::coordinate(6, {1, 3, 5});
  CHECK(chain.size() == 3);
  CHECK(chain.at(1).rank() == 3);

  // non-nested projections are rejected
  std::vector<Projection> bad;
  ComplexMatrix p1(4, 4);
  p1(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  ComplexMatrix p2(4, 4);
  p2(2, 2) = 1.0;
  p2(3, 3) = 1.0;
  p2(1, 1) = 1.0;
  bad.push_back(Projection::from_matrix(p1, 1e-10));
  bad.push_back(Projection::from_matrix(p2, 1e-10));
  CHECK_THROWS_AS(ProjectionChain::from_projections(bad, 1e-10),
                  CertificationFailed);
}

TEST_CASE("quasi-symmetric sequence certifies and matches per element") {
  const ProjectionChain chain = ProjectionChain::coordinate(4, {1, 2, 3});
  const auto seq = quasi_symmetric_sequence(chain, 1e-10);
  REQUIRE(seq.size() == 3);
  for (std::size_t k = 0; k < seq.size(); ++k) {
    CHECK(seq[k].certificate().max_residual <= 1e-13);
    CHECK(seq[k].weight() == cd{-1.0});
    const auto crit = matching_matrix_criterion(
        seq[k].op(), chain.at(k), space_basis(AlgebraSpace::full(4)));
    CHECK(crit.matches);
  }

  // degenerate chain 0 <= id gives the identity operator twice
  const ProjectionChain degenerate = ProjectionChain::coordinate(3, {0, 3});
  const auto dseq = quasi_symmetric_sequence(degenerate, 1e-10);
  Prng rng(62);
  const ComplexMatrix a = random_matrix(3, rng);
  CHECK(max_abs_diff(dseq[0].apply(a), a) <= 1e-14);
  CHECK(max_abs_diff(dseq[1].apply(a), a) <= 1e-14);
}

TEST_CASE("symmetry defect equals the commutator norm exactly") {
  Prng rng(63);
  const ProjectionChain chain =
      ProjectionChain::coordinate(8, {1, 2, 3, 4, 5, 6, 7});
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix d = random_matrix(8, rng);
    CHECK(symmetry_equals_commutator_check(d, chain) <= 1e-13);
  }
  // diagonal d: both sides vanish
  CHECK(symmetry_equals_commutator_check(
            ComplexMatrix::diagonal({cd{1.0}, cd{2.0}, cd{3.0}, cd{4.0},
                                     cd{5.0}, cd{6.0}, cd{7.0}, cd{8.0}}),
            chain) == 0.0);
}

TEST_CASE("profiles classify block-diagonal, decaying, and stubborn d") {
  // aligned block-diagonal: all values vanish
  Prng rng(64);
  std::vector<ComplexMatrix> blocks;
  for (int b = 0; b < 3; ++b) blocks.push_back(random_matrix(2, rng));
  const ComplexMatrix bd = direct_sum_embed(blocks);
  const ProjectionChain aligned = ProjectionChain::coordinate(6, {2, 4, 6});
  const QuasidiagonalReport r1 = symmetry_profile(bd, aligned, 4, 1e-10);
  CHECK(r1.verdict == QuasidiagonalVerdict::block_diagonal);
  for (double v : r1.symmetry_profile) CHECK(v <= 1e-13);
  CHECK(r1.final_rank_full);

  // banded with halving entries: value 2^-r at rank r
  const std::size_t n = 8;
  ComplexMatrix banded(n, n);
  for (std::size_t k = 1; k < n; ++k) {
    banded(k - 1, k) = std::ldexp(1.0, -static_cast<int>(k));
  }
  const ProjectionChain chain =
      ProjectionChain::coordinate(n, {1, 2, 3, 4, 5, 6, 7});
  const QuasidiagonalReport r2 = symmetry_profile(banded, chain, 4, 1e-10);
  CHECK(r2.verdict == QuasidiagonalVerdict::decay_observed);
  for (std::size_t k = 0; k < r2.symmetry_profile.size(); ++k) {
    CHECK(std::abs(r2.symmetry_profile[k] -
                   std::ldexp(1.0, -static_cast<int>(k + 1))) <= 1e-13);
  }

  // the truncated shift never decays
  const QuasidiagonalReport r3 =
      symmetry_profile(shift_matrix(16), ProjectionChain::coordinate(
                                             16, {2, 4, 6, 8, 10, 12, 14}),
                       4, 1e-10);
  CHECK(r3.verdict == QuasidiagonalVerdict::no_decay);
  for (double v : r3.commutator_profile) {
    CHECK(v == doctest::Approx(1.0));
  }
  for (double v : r3.word_commutator_profile) {
    CHECK(v == doctest::Approx(1.0));
  }
  for (double v : r3.symmetry_profile) {
    CHECK(v == doctest::Approx(1.0));
  }
}

TEST_CASE("word bound from the induction step holds numerically") {
  // |p_perp b p| <= |p_perp b1 p| |x| + |b1| |[x, p]| for b = b1 x
  Prng rng(65);
  const std::size_t n = 6;
  const ComplexMatrix d = random_matrix(n, rng);
  const ComplexMatrix ds = adjoint(d);
  const Projection p = Projection::coordinate(n, 3);
  const ComplexMatrix pm = p.matrix();
  const ComplexMatrix pp = ComplexMatrix::identity(n) - pm;

  struct Word {
    ComplexMatrix value;
    int last;  // 0 = d, 1 = d*
  };
  std::vector<Word> prev = {{d, 0}, {ds, 1}};
  for (int len = 2; len <= 4; ++len) {
    std::vector<Word> cur;
    for (const auto& w : prev) {
      cur.push_back({w.value * d, 0});
      cur.push_back({w.value * ds, 1});
      for (int last = 0; last < 2; ++last) {
        const Word& b = cur[cur.size() - 2 + last];
        const ComplexMatrix& b1 = w.value;
        const ComplexMatrix& x = last == 0 ? d : ds;
        const double lhs = operator_norm(pp * b.value * pm);
        const double rhs =
            operator_norm(pp * b1 * pm) * operator_norm(x) +
            operator_norm(b1) * commutator_norm(x, p);
        CHECK(lhs <= rhs + 1e-12);
      }
    }
    prev = std::move(cur);
  }
}
