#include "rbc/acceptance.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "rbc/cli_run.hpp"
#include "rbc/constructions.hpp"
#include "rbc/decomp.hpp"
#include "rbc/errors.hpp"
#include "rbc/json_io.hpp"
#include "rbc/prng.hpp"
#include "rbc/quasidiag.hpp"
#include "rbc/representations.hpp"

namespace rbc {

namespace {

ComplexMatrix random_matrix(std::size_t n, Prng& rng) {
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a.data()[i] = rng.complex_gaussian();
  }
  return a;
}

ComplexMatrix random_unitary(std::size_t n, Prng& rng) {
  return householder_qr(random_matrix(n, rng)).q;
}

Projection random_projection(std::size_t n, std::size_t rank, Prng& rng) {
  const ComplexMatrix u = random_unitary(n, rng);
  ComplexMatrix p(n, n);
  for (std::size_t k = 0; k < rank; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        p(i, j) += u(i, k) * std::conj(u(j, k));
      }
    }
  }
  return Projection::from_matrix(p, 1e-10);
}

// Small family of certified weight -1 operators on the full algebra M_n.
RotaBaxterOperator random_weight_minus_one(std::size_t n, Prng& rng) {
  const std::uint64_t pick = rng.next_u64() % 5;
  switch (pick) {
    case 0:
      return certify_rb(SuperOperator::zero(n), cd{-1.0},
                        AlgebraSpace::full(n), 1e-10);
    case 1:
      return certify_rb(SuperOperator::identity(n), cd{-1.0},
                        AlgebraSpace::full(n), 1e-10);
    case 2: {
      const std::size_t rank = n == 0 ? 0 : rng.next_u64() % (n + 1);
      return left_mult_projection(random_projection(n, rank, rng));
    }
    case 3: {
      const std::size_t rank = n == 0 ? 0 : rng.next_u64() % (n + 1);
      return certify_rb(SuperOperator::right_mult(
                            random_projection(n, rank, rng).matrix()),
                        cd{-1.0}, AlgebraSpace::full(n), 1e-10);
    }
    default: {
      const std::size_t rank = n == 0 ? 0 : rng.next_u64() % (n + 1);
      // complement form id - L_q = L_{q_perp}
      return left_mult_projection(
          random_projection(n, rank, rng).complement());
    }
  }
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// ---------------------------------------------------------------------
// criterion 1: exhaustive weight -1 certification of L_p for coordinate
// projections of every rank on M_n, n in {2,3,4}; residual <= 1e-12,
// total runtime < 5 s
CriterionResult criterion_left_mult() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  bool ok = true;
  for (std::size_t n : {2u, 3u, 4u}) {
    for (std::size_t rank = 0; rank <= n; ++rank) {
      const CertificationOutcome out = run_rb_certification(
          SuperOperator::left_mult(
              Projection::coordinate(n, rank).matrix()),
          cd{-1.0}, AlgebraSpace::full(n), 1e-12, ProbeMode::exhaustive());
      worst = std::max(worst, out.certificate.max_residual);
      ok = ok && out.certified;
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  ok = ok && secs < 5.0;
  return {"left_mult_exhaustive", ok,
          "max residual " + fmt(worst) + ", " + fmt(secs) + " s"};
}

// criterion 2: tilde of every criterion-1 operator re-certifies at -1;
// tilde(L_p) equals L_{p_perp} on all basis elements to 1e-13
CriterionResult criterion_tilde() {
  double worst_res = 0.0;
  double worst_diff = 0.0;
  bool ok = true;
  for (std::size_t n : {2u, 3u, 4u}) {
    for (std::size_t rank = 0; rank <= n; ++rank) {
      const Projection p = Projection::coordinate(n, rank);
      const RotaBaxterOperator lp = certify_rb(
          SuperOperator::left_mult(p.matrix()), cd{-1.0},
          AlgebraSpace::full(n), 1e-12);
      const RotaBaxterOperator tl = tilde(lp);
      worst_res = std::max(worst_res, tl.certificate().max_residual);
      const SuperOperator lperp =
          SuperOperator::left_mult(p.complement().matrix());
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const ComplexMatrix e = ComplexMatrix::unit(n, i, j);
          worst_diff = std::max(
              worst_diff, operator_norm(tl.apply(e) - lperp.apply(e)));
        }
      }
    }
  }
  ok = worst_res <= 1e-12 && worst_diff <= 1e-13;
  return {"tilde_closure", ok,
          "re-cert residual " + fmt(worst_res) + ", |tilde(L_p) - L_p_perp| " +
              fmt(worst_diff)};
}

// criterion 3: restriction/extension bijection on M_5 for 20 seeded
// triangular operators, both round trips <= 1e-12; 20 perturbed
// non-matching operators rejected with a block-criterion witness
CriterionResult criterion_bijection() {
  const std::size_t n = 5;
  Prng rng(301);
  double worst = 0.0;
  int rejected = 0;
  bool ok = true;

  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t rank = 1 + trial % 4;
    const Projection p = trial % 2 == 0
                             ? Projection::coordinate(n, rank)
                             : random_projection(n, rank, rng);
    const RotaBaxterOperator p1 = random_weight_minus_one(rank, rng);
    const RotaBaxterOperator p2 = random_weight_minus_one(n - rank, rng);
    const RotaBaxterOperator tri = triangular_rb(p1, p2, p, 1e-10);

    // Psi(Phi(T)) = T on the full basis
    const RotaBaxterOperator restricted = phi_restrict(tri, p, 1e-10);
    const RotaBaxterOperator back = psi_extend(restricted, p, 1e-10);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const ComplexMatrix e = ComplexMatrix::unit(n, i, j);
        worst = std::max(worst, operator_norm(tri.apply(e) - back.apply(e)));
      }
    }

    // Phi(Psi(D)) = D on the block-diagonal basis
    const RotaBaxterOperator dsum = direct_sum_rb(p1, p2, 1e-10);
    const Projection pc = Projection::coordinate(n, rank);
    const RotaBaxterOperator ext = psi_extend(dsum, pc, 1e-10);
    const RotaBaxterOperator re = phi_restrict(ext, pc, 1e-10);
    for (std::size_t k = 0; k < dsum.space().basis_size(); ++k) {
      const ComplexMatrix e = dsum.space().basis_element(k);
      worst = std::max(worst, operator_norm(dsum.apply(e) - re.apply(e)));
    }

    // perturbed operator: inject a strictly-lower block component
    const ComplexMatrix noise = random_matrix(n, rng);
    const ComplexMatrix pperp = ComplexMatrix::identity(n) - p.matrix();
    const SuperOperator bad = SuperOperator::from_basis_images(
        n, [&](std::size_t i, std::size_t j) {
          const ComplexMatrix e = ComplexMatrix::unit(n, i, j);
          return tri.apply(e) + pperp * (noise * e) * p.matrix() * cd{0.01};
        });
    try {
      phi_restrict(bad, p, 1e-10);
    } catch (const NotMatching& e) {
      if (e.witness().residual > 0.0 && e.witness().index_a >= 0) ++rejected;
    }
  }
  ok = worst <= 1e-12 && rejected == 20;
  return {"restriction_extension_bijection", ok,
          "round trip " + fmt(worst) + ", rejected " +
              std::to_string(rejected) + "/20"};
}

// criterion 4: block criterion agrees with the exhaustive matching defect
// on 50 matching + 50 perturbed seeded operators
CriterionResult criterion_matching_equivalence() {
  const std::size_t n = 4;
  Prng rng(401);
  int disagreements = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const bool matching = trial < 50;
    const std::size_t rank = 1 + trial % (n - 1);
    const Projection p = Projection::coordinate(n, rank);
    const RotaBaxterOperator p1 = random_weight_minus_one(rank, rng);
    const RotaBaxterOperator p2 = random_weight_minus_one(n - rank, rng);
    const RotaBaxterOperator tri = triangular_rb(p1, p2, p, 1e-10);

    SuperOperator op = tri.op();
    if (!matching) {
      const ComplexMatrix noise = random_matrix(n, rng);
      const ComplexMatrix pperp = ComplexMatrix::identity(n) - p.matrix();
      op = SuperOperator::from_basis_images(
          n, [&](std::size_t i, std::size_t j) {
            const ComplexMatrix e = ComplexMatrix::unit(n, i, j);
            return tri.apply(e) + pperp * (noise * e) * p.matrix() * cd{0.01};
          });
    }

    const MatchingCriterion crit = matching_matrix_criterion(
        op, p, space_basis(AlgebraSpace::full(n)), 1e-10);
    const double defect =
        matching_defect_max(op, cd{-1.0}, p.matrix(), AlgebraSpace::full(n));
    if (crit.matches != (defect <= 1e-10)) ++disagreements;
  }
  return {"matching_criterion_equivalence", disagreements == 0,
          std::to_string(disagreements) + " disagreements in 100 cases"};
}

// criterion 5: symmetric <-> real-linear correspondence on the diagonal
// algebra of M_8: 20 seeded real operators round trip to 1e-12 and the
// reconstructed operators have symmetry defect <= 1e-13
CriterionResult criterion_real_correspondence() {
  const std::size_t m = 8;
  const AlgebraSpace space =
      AlgebraSpace::direct_sum(std::vector<std::size_t>(m, 1));
  const std::vector<ComplexMatrix> hbasis = hermitian_basis(space);
  Prng rng(501);

  auto mask_action = [&](std::uint64_t bits) {
    ComplexMatrix a(m, m);
    for (std::size_t k = 0; k < m; ++k) {
      if ((bits >> k) & 1) a(k, k) = 1.0;
    }
    return a;
  };
  auto prefix_action = [&](double scale) {
    ComplexMatrix a(m, m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < i; ++j) a(i, j) = scale / double(m);
    }
    return a;
  };

  double worst_round = 0.0;
  double worst_sym = 0.0;
  bool ok = true;
  for (int trial = 0; trial < 20; ++trial) {
    ComplexMatrix action(m, m);
    double weight = -1.0;
    if (trial == 0) {
      action = prefix_action(1.0);  // the real summation operator
      weight = 1.0 / double(m);
    } else {
      switch (rng.next_u64() % 4) {
        case 0:
          action = mask_action(rng.next_u64());
          weight = -1.0;
          break;
        case 1: {
          const double scale =
              1.0 + double(rng.next_u64() % 7);  // scaled summation
          action = prefix_action(scale);
          weight = scale / double(m);
          break;
        }
        case 2:
          action = ComplexMatrix::zero(m, m);
          weight = double(rng.next_u64() % 5) - 2.0;
          break;
        default:
          action = ComplexMatrix::identity(m);
          weight = -1.0;
          break;
      }
    }

    const RealLinearRBOperator p1 =
        certify_real_rb(hbasis, action, weight, 1e-10);
    const RotaBaxterOperator p = symmetric_from_real(p1, space, 1e-10);
    worst_sym = std::max(worst_sym, symmetry_defect(p.op(), space));
    const RealLinearRBOperator p1b = real_restrict(p, space, 1e-10);
    worst_round = std::max(worst_round, max_abs_diff(p1.action, p1b.action));
    // reverse: restrict then rebuild, compare superoperator actions
    const RotaBaxterOperator p2 = symmetric_from_real(p1b, space, 1e-10);
    worst_round = std::max(
        worst_round,
        max_abs_diff(p.op().dense_action(), p2.op().dense_action()));
  }
  ok = worst_round <= 1e-12 && worst_sym <= 1e-13;
  return {"real_correspondence_round_trip", ok,
          "round trip " + fmt(worst_round) + ", symmetry defect " +
              fmt(worst_sym)};
}

// criterion 6: decomposition <-> projection equivalence on the diagonal
// algebra of M_4 split {1,2} | {3,4}
CriterionResult criterion_decomposition() {
  const std::size_t n = 4;
  std::vector<ComplexMatrix> a1 = {ComplexMatrix::unit(n, 0, 0),
                                   ComplexMatrix::unit(n, 1, 1)};
  std::vector<ComplexMatrix> a2 = {ComplexMatrix::unit(n, 2, 2),
                                   ComplexMatrix::unit(n, 3, 3)};
  const DecompositionPair d = make_decomposition_pair(a1, a2, n, 1e-10);
  const RotaBaxterOperator r = projection_rb_from_decomposition(d, 1e-10);

  const double idem = idempotency_defect(r.op());
  const double sym = symmetry_defect(r.op(), r.space());
  const SuperOperatorNorm norm = superop_norm(r.op());

  const DecompositionPair back = decompose_from_rb(r, 1e-10);
  auto span_of = [n](const std::vector<ComplexMatrix>& basis) {
    ComplexMatrix cols(n * n, basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const std::vector<cd> v = basis[k].vec();
      for (std::size_t i = 0; i < v.size(); ++i) cols(i, k) = v[i];
    }
    return orthonormalize_columns(cols, 1e-10, nullptr);
  };
  const double gap1 = subspace_gap(span_of(a1), span_of(back.a1_basis));
  const double gap2 = subspace_gap(span_of(a2), span_of(back.a2_basis));

  const bool ok = r.certificate().max_residual <= 1e-10 && idem <= 1e-10 &&
                  sym <= 1e-10 && norm.value <= 1.0 + 1e-8 &&
                  gap1 <= 1e-10 && gap2 <= 1e-10;
  return {"decomposition_equivalence", ok,
          "residual " + fmt(r.certificate().max_residual) + ", idem " +
              fmt(idem) + ", sym " + fmt(sym) + ", norm " + fmt(norm.value) +
              ", angles " + fmt(std::max(gap1, gap2))};
}

// criterion 7: discrete Volterra certifies exactly at weight 1/M and the
// weight-0 residual halves from M = 64 to M = 128
CriterionResult criterion_volterra() {
  double worst = 0.0;
  bool ok = true;
  for (std::size_t m : {4u, 8u, 16u, 32u}) {
    const RotaBaxterOperator q = volterra_discrete(m, 1e-13);
    ok = ok &&
         q.certificate().mode.kind == ProbeMode::Kind::exhaustive;
    worst = std::max(worst, q.certificate().max_residual);
  }
  ok = ok && worst <= 1e-13;

  auto zero_weight_residual = [](std::size_t m) {
    const SuperOperator q = SuperOperator::discrete_volterra(m);
    const ComplexMatrix f =
        SampledFunction::sample(m, [](double x) { return cd{x}; })
            .to_diagonal();
    const ComplexMatrix g =
        SampledFunction::sample(m, [](double x) { return cd{x * x}; })
            .to_diagonal();
    return rb_residual(q, cd{0.0}, f, g);
  };
  const double r64 = zero_weight_residual(64);
  const double r128 = zero_weight_residual(128);
  const double ratio = r128 / r64;
  ok = ok && ratio >= 0.4 && ratio <= 0.6;
  return {"volterra_exact_weight", ok,
          "max residual " + fmt(worst) + ", decay ratio " + fmt(ratio)};
}

// criterion 8: symmetry defect equals the commutator norm along coordinate
// chains; shift / banded / block-diagonal profiles behave as predicted
CriterionResult criterion_quasidiagonal() {
  bool ok = true;
  std::string detail;

  {
    Prng rng(801);
    const ProjectionChain chain =
        ProjectionChain::coordinate(8, {1, 2, 3, 4, 5, 6, 7});
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const ComplexMatrix d = random_matrix(8, rng);
      worst = std::max(worst, symmetry_equals_commutator_check(d, chain));
    }
    ok = ok && worst <= 1e-13;
    detail += "identity gap " + fmt(worst);
  }

  {
    const std::size_t n = 64;
    ComplexMatrix shift(n, n);
    for (std::size_t k = 0; k + 1 < n; ++k) shift(k + 1, k) = 1.0;
    const ProjectionChain chain =
        ProjectionChain::coordinate(n, {8, 16, 24, 32, 40, 48, 56});
    const QuasidiagonalReport rep = symmetry_profile(shift, chain, 4, 1e-10);
    bool all_one = true;
    for (double v : rep.commutator_profile) {
      if (std::abs(v - 1.0) > 1e-13) all_one = false;
    }
    ok = ok && all_one && rep.verdict == QuasidiagonalVerdict::no_decay;
    detail += std::string(", shift ") + to_string(rep.verdict);
  }

  {
    const std::size_t n = 8;
    ComplexMatrix banded(n, n);
    for (std::size_t k = 1; k < n; ++k) {
      banded(k - 1, k) = std::ldexp(1.0, -static_cast<int>(k));
    }
    const ProjectionChain chain =
        ProjectionChain::coordinate(n, {1, 2, 3, 4, 5, 6, 7});
    const QuasidiagonalReport rep = symmetry_profile(banded, chain, 4, 1e-10);
    bool exact = rep.verdict == QuasidiagonalVerdict::decay_observed;
    for (std::size_t k = 0; k < chain.size(); ++k) {
      const double expected = std::ldexp(1.0, -static_cast<int>(k + 1));
      if (std::abs(rep.symmetry_profile[k] - expected) > 1e-13) exact = false;
    }
    ok = ok && exact;
    detail += std::string(", banded ") + to_string(rep.verdict);
  }

  {
    Prng rng(802);
    std::vector<ComplexMatrix> blocks;
    for (int b = 0; b < 4; ++b) blocks.push_back(random_matrix(2, rng));
    const ComplexMatrix d = direct_sum_embed(blocks);
    const ProjectionChain chain = ProjectionChain::coordinate(8, {2, 4, 6, 8});
    const QuasidiagonalReport rep = symmetry_profile(d, chain, 4, 1e-10);
    bool small = rep.verdict == QuasidiagonalVerdict::block_diagonal;
    for (double v : rep.symmetry_profile) {
      if (v > 1e-13) small = false;
    }
    ok = ok && small;
    detail += std::string(", aligned ") + to_string(rep.verdict);
  }

  return {"quasidiagonal_profiles", ok, detail};
}

// criterion 9: direct-sum representation round trip and the embedding
// homomorphism defect
CriterionResult criterion_representations() {
  Prng rng(901);
  double worst = 0.0;
  bool ok = true;

  auto make_rep = [&](std::size_t n) {
    const ComplexMatrix u = random_unitary(n, rng);
    const ComplexMatrix uh = adjoint(u);
    const RotaBaxterOperator p_target = random_weight_minus_one(n, rng);
    // source operator pulled back through the conjugation so the
    // intertwining holds exactly
    const SuperOperator src_op = SuperOperator::from_basis_images(
        n, [&](std::size_t i, std::size_t j) {
          return uh * p_target.apply(u * ComplexMatrix::unit(n, i, j) * uh) *
                 u;
        });
    const RotaBaxterOperator p_source =
        certify_rb(src_op, cd{-1.0}, AlgebraSpace::full(n), 1e-10);
    std::vector<ComplexMatrix> images;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        images.push_back(u * ComplexMatrix::unit(n, i, j) * uh);
      }
    }
    StarHomomorphism pi = star_hom_certify(
        std::move(images), AlgebraSpace::full(n), AlgebraSpace::full(n),
        1e-10);
    return make_rb_representation(std::move(pi), ComplexMatrix::identity(n),
                                  p_source, p_target, 1e-10);
  };

  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n1 = 2 + trial % 2;
    const std::size_t n2 = 2 + (trial / 2) % 2;
    const RBRepresentation r1 = make_rep(n1);
    const RBRepresentation r2 = make_rep(n2);
    const RBRepresentation combined =
        build_direct_sum_representation(r1, r2, 1e-10);
    const auto [s1, s2] = split_representation(
        combined, Projection::coordinate(n1 + n2, n1), 1e-10);

    for (std::size_t k = 0; k < r1.pi.images.size(); ++k) {
      worst = std::max(worst,
                       max_abs_diff(r1.pi.images[k], s1.pi.images[k]));
    }
    for (std::size_t k = 0; k < r2.pi.images.size(); ++k) {
      worst = std::max(worst,
                       max_abs_diff(r2.pi.images[k], s2.pi.images[k]));
    }
    worst = std::max(worst, max_abs_diff(r1.p_target.op().dense_action(),
                                         s1.p_target.op().dense_action()));
    worst = std::max(worst, max_abs_diff(r2.p_target.op().dense_action(),
                                         s2.p_target.op().dense_action()));
    worst = std::max(worst, max_abs_diff(r1.p_source.op().dense_action(),
                                         s1.p_source.op().dense_action()));
    worst = std::max(worst, max_abs_diff(r2.p_source.op().dense_action(),
                                         s2.p_source.op().dense_action()));
  }
  ok = worst <= 1e-12;

  // embedding of the block-diagonal subalgebra intertwines an operator
  // with its extension
  double worst_hom = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t r = 1 + trial % 3;
    const std::size_t s = 1 + (trial / 3) % 3;
    const std::size_t n = r + s;
    const RotaBaxterOperator d = direct_sum_rb(
        random_weight_minus_one(r, rng), random_weight_minus_one(s, rng),
        1e-10);
    const Projection p = Projection::coordinate(n, r);
    const RotaBaxterOperator ext = psi_extend(d, p, 1e-10);
    std::vector<ComplexMatrix> images;
    for (std::size_t k = 0; k < d.space().basis_size(); ++k) {
      images.push_back(d.space().basis_element(k));
    }
    const StarHomomorphism iota = star_hom_certify(
        std::move(images), d.space(), AlgebraSpace::full(n), 1e-10);
    worst_hom = std::max(worst_hom, rb_hom_defect(iota, d, ext));
  }
  ok = ok && worst_hom <= 1e-12;
  return {"representation_round_trip", ok,
          "round trip " + fmt(worst) + ", embedding defect " +
              fmt(worst_hom)};
}

// criterion 10: inner derivations have zero Leibniz defect, the identity
// map does not
CriterionResult criterion_derivations() {
  Prng rng(1001);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const ComplexMatrix mfix = random_matrix(n, rng);
    const SuperOperator d = SuperOperator::from_basis_images(
        n, [&](std::size_t i, std::size_t j) {
          const ComplexMatrix e = ComplexMatrix::unit(n, i, j);
          return mfix * e - e * mfix;
        });
    ComplexMatrix a = random_matrix(n, rng);
    ComplexMatrix b = random_matrix(n, rng);
    a = a * cd{1.0 / operator_norm(a)};
    b = b * cd{1.0 / operator_norm(b)};
    worst = std::max(worst, derivation_defect(d, a, b));
  }

  double id_defect = 0.0;
  const std::size_t n = 2;
  const SuperOperator ident = SuperOperator::identity(n);
  std::vector<ComplexMatrix> probes;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      probes.push_back(ComplexMatrix::unit(n, i, j));
    }
  }
  probes.push_back(ComplexMatrix::identity(n));
  for (const auto& a : probes) {
    for (const auto& b : probes) {
      id_defect = std::max(id_defect, derivation_defect(ident, a, b));
    }
  }

  const bool ok = worst <= 1e-12 && id_defect >= 0.9;
  return {"derivation_oracle", ok,
          "inner defect " + fmt(worst) + ", identity defect " +
              fmt(id_defect)};
}

// ---------------------------------------------------------------------
// criterion 11: CLI determinism and the exit code contract

struct CliFixture {
  std::string verb;
  std::string args;  // extra flags
  std::string passing;
  std::string failing;  // empty = skip the exit-1 check for this verb
};

std::string coord_projection_json(std::size_t dim, std::size_t rank) {
  return std::string("{\"kind\":\"coordinate\",\"dim\":") +
         std::to_string(dim) + ",\"rank\":" + std::to_string(rank) + "}";
}

std::vector<CliFixture> cli_fixtures() {
  std::vector<CliFixture> out;
  const std::string lp2 =
      std::string("{\"kind\":\"left_mult\",\"p\":") +
      coord_projection_json(2, 1) + "}";
  const std::string id2 =
      "{\"kind\":\"dense\",\"dim\":2,\"action\":{\"rows\":4,\"cols\":4,"
      "\"data\":[[1,0],[0,0],[0,0],[0,0],[0,0],[1,0],[0,0],[0,0],[0,0],[0,0],"
      "[1,0],[0,0],[0,0],[0,0],[0,0],[1,0]]}}";

  out.push_back({"verify", "",
                 "{\"operator\":" + lp2 +
                     ",\"weight\":[-1,0],\"space\":{\"kind\":\"full\","
                     "\"dim\":2},\"mode\":\"exhaustive\"}",
                 "{\"operator\":" + id2 +
                     ",\"weight\":[0,0],\"space\":{\"kind\":\"full\",\"dim\":"
                     "2},\"mode\":\"exhaustive\"}"});
  out.push_back({"construct", "",
                 "{\"operator\":" + lp2 + ",\"weight\":[-1,0]}",
                 "{\"operator\":" + id2 + ",\"weight\":[0,0]}"});
  const std::string rm2 =
      std::string("{\"kind\":\"right_mult\",\"q\":") +
      coord_projection_json(2, 1) + "}";
  out.push_back({"correspond", "--direction phi",
                 "{\"operator\":" + lp2 + ",\"p\":" +
                     coord_projection_json(2, 1) + "}",
                 "{\"operator\":" + rm2 + ",\"p\":" +
                     coord_projection_json(2, 1) + "}"});

  // diagonal algebra of M_4 split {1,2} | {3,4}
  auto diag_unit = [](std::size_t k) {
    std::string data = "[";
    for (std::size_t i = 0; i < 16; ++i) {
      data += (i == 5 * k) ? "[1,0]" : "[0,0]";
      if (i + 1 < 16) data += ",";
    }
    data += "]";
    return "{\"rows\":4,\"cols\":4,\"data\":" + data + "}";
  };
  const std::string proj_onto =
      "{\"kind\":\"projection_onto\",\"dim\":4,\"a1\":[" + diag_unit(0) +
      "," + diag_unit(1) + "],\"a2\":[" + diag_unit(2) + "," + diag_unit(3) +
      "]}";
  const std::string diag_space =
      "{\"kind\":\"span\",\"ambient\":{\"kind\":\"full\",\"dim\":4},"
      "\"generators\":[" +
      diag_unit(0) + "," + diag_unit(1) + "," + diag_unit(2) + "," +
      diag_unit(3) + "]}";
  out.push_back({"decompose", "",
                 "{\"operator\":" + proj_onto + ",\"weight\":[-1,0],"
                     "\"space\":" +
                     diag_space + "}",
                 "{\"operator\":" + lp2 + ",\"weight\":[-1,0]}"});

  out.push_back({"volterra", "--weight-sweep",
                 "{\"samples\":8}",
                 "{\"samples\":8,\"tol\":1e-30,\"mode\":\"random\","
                 "\"trials\":50,\"seed\":1}"});

  const std::string id1 =
      "{\"kind\":\"dense\",\"dim\":1,\"action\":{\"rows\":1,\"cols\":1,"
      "\"data\":[[1,0]]}}";
  const std::string zero1 =
      "{\"kind\":\"dense\",\"dim\":1,\"action\":{\"rows\":1,\"cols\":1,"
      "\"data\":[[0,0]]}}";
  const std::string i1 = "{\"rows\":1,\"cols\":1,\"data\":[[1,0]]}";
  const std::string rep1 =
      "{\"pi\":[" + i1 + "],\"f\":" + i1 + ",\"P_source\":" + id1 +
      ",\"P_target\":" + id1 +
      ",\"weight\":[-1,0],\"source\":{\"kind\":\"full\",\"dim\":1}}";
  const std::string rep_bad =
      "{\"pi\":[{\"rows\":1,\"cols\":1,\"data\":[[2,0]]}],\"f\":" + i1 +
      ",\"P_source\":" + id1 + ",\"P_target\":" + id1 +
      ",\"weight\":[-1,0],\"source\":{\"kind\":\"full\",\"dim\":1}}";
  out.push_back({"rep-check", "", rep1,
                 "{\"pi\":[" + i1 + "],\"f\":" + i1 + ",\"P_source\":" + id1 +
                     ",\"P_target\":" + zero1 +
                     ",\"weight\":[-1,0],\"source\":{\"kind\":\"full\","
                     "\"dim\":1}}"});
  out.push_back({"rep-build", "",
                 "{\"r1\":" + rep1 + ",\"r2\":" + rep1 + "}",
                 "{\"r1\":" + rep_bad + ",\"r2\":" + rep1 + "}"});

  // a split fixture needs a built representation; keep it small: two
  // 1-dimensional sources, target M_2, f = p = diag(1, 0)
  const std::string e11 =
      "{\"rows\":2,\"cols\":2,\"data\":[[1,0],[0,0],[0,0],[0,0]]}";
  const std::string e22 =
      "{\"rows\":2,\"cols\":2,\"data\":[[0,0],[0,0],[0,0],[1,0]]}";
  const std::string tri =
      std::string("{\"kind\":\"triangular\",\"p\":") +
      coord_projection_json(2, 1) + ",\"p1\":" + id1 + ",\"p2\":" + id1 + "}";
  const std::string ds_op =
      "{\"kind\":\"direct_sum\",\"parts\":[" + id1 + "," + id1 + "]}";
  const std::string rep2 =
      "{\"pi\":[" + e11 + "," + e22 + "],\"f\":" + e11 + ",\"P_source\":" +
      ds_op + ",\"P_target\":" + tri +
      ",\"weight\":[-1,0],\"source\":{\"kind\":\"direct_sum\",\"parts\":[1,1]"
      "}}";
  const std::string rep2_bad =
      "{\"pi\":[{\"rows\":2,\"cols\":2,\"data\":[[2,0],[0,0],[0,0],[0,0]]},"
      + e22 + "],\"f\":" + e11 + ",\"P_source\":" + ds_op + ",\"P_target\":" +
      tri +
      ",\"weight\":[-1,0],\"source\":{\"kind\":\"direct_sum\",\"parts\":[1,1]"
      "}}";
  out.push_back({"rep-split", "",
                 "{\"rep\":" + rep2 + ",\"p\":" + coord_projection_json(2, 1) +
                     "}",
                 "{\"rep\":" + rep2_bad + ",\"p\":" +
                     coord_projection_json(2, 1) + "}"});

  const std::string shift8 = [] {
    std::string data = "[";
    for (std::size_t i = 0; i < 8; ++i) {
      for (std::size_t j = 0; j < 8; ++j) {
        data += (i == j + 1) ? "[1,0]" : "[0,0]";
        if (!(i == 7 && j == 7)) data += ",";
      }
    }
    data += "]";
    return "{\"rows\":8,\"cols\":8,\"data\":" + data + "}";
  }();
  const std::string bad_chain =
      "{\"projections\":[{\"kind\":\"coordinate\",\"dim\":8,\"rank\":2},"
      "{\"matrix\":{\"rows\":8,\"cols\":8,\"data\":[" +
      [] {
        std::string cells;
        for (std::size_t i = 0; i < 64; ++i) {
          const std::size_t r = i / 8, c = i % 8;
          const bool one = (r == c) && (r == 2 || r == 3 || r == 4);
          cells += one ? "[1,0]" : "[0,0]";
          if (i + 1 < 64) cells += ",";
        }
        return cells;
      }() +
      "]}}]}";
  out.push_back({"quasidiag", "",
                 "{\"d\":" + shift8 +
                     ",\"chain\":{\"kind\":\"coordinate\",\"dim\":8,"
                     "\"ranks\":[1,2,3,4]},\"max_word_len\":3}",
                 "{\"d\":" + shift8 + ",\"chain\":" + bad_chain + "}"});
  return out;
}

struct CliRun {
  int exit_code = -1;
  std::string report;
  bool report_written = false;
};

CliRun run_cli(const std::string& cli_path, const std::string& verb,
               const std::string& args, const std::string& dir,
               const std::string& tag, const std::string& input) {
  const std::string in_path = dir + "/" + tag + "_in.json";
  const std::string out_path = dir + "/" + tag + "_out.json";
  if (!input.empty()) {
    std::ofstream f(in_path);
    f << input;
  }
  std::string cmd = "'" + cli_path + "' " + verb;
  if (!input.empty()) cmd += " --in '" + in_path + "'";
  if (!args.empty()) cmd += " " + args;
  cmd += " --out '" + out_path + "' 2>/dev/null";
  const int status = std::system(cmd.c_str());
  CliRun r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream f(out_path);
  if (f.good()) {
    std::ostringstream ss;
    ss << f.rdbuf();
    r.report = ss.str();
    r.report_written = !r.report.empty();
  }
  return r;
}

CriterionResult criterion_cli(const std::string& cli_path) {
  if (cli_path.empty()) {
    return {"cli_contract", false,
            "no CLI binary available (set RBC_CLI or run via selftest)"};
  }
  char tmpl[] = "/tmp/rbc_accept_XXXXXX";
  const char* dir_c = mkdtemp(tmpl);
  if (!dir_c) {
    return {"cli_contract", false, "could not create a temporary directory"};
  }
  const std::string dir = dir_c;

  bool ok = true;
  std::string detail;
  for (const CliFixture& fx : cli_fixtures()) {
    const CliRun pass1 =
        run_cli(cli_path, fx.verb, fx.args, dir, fx.verb + "_p1", fx.passing);
    const CliRun pass2 =
        run_cli(cli_path, fx.verb, fx.args, dir, fx.verb + "_p2", fx.passing);
    const CliRun fail =
        run_cli(cli_path, fx.verb, fx.args, dir, fx.verb + "_f", fx.failing);
    const CliRun bad = run_cli(cli_path, fx.verb, fx.args, dir,
                               fx.verb + "_m", "{\"operator\": {");

    const bool verb_ok = pass1.exit_code == 0 && pass2.exit_code == 0 &&
                         pass1.report == pass2.report &&
                         !pass1.report.empty() && fail.exit_code == 1 &&
                         fail.report_written && bad.exit_code == 2;
    if (!verb_ok) {
      ok = false;
      detail += fx.verb + " [" + std::to_string(pass1.exit_code) + "/" +
                std::to_string(fail.exit_code) + "/" +
                std::to_string(bad.exit_code) +
                (pass1.report == pass2.report ? "" : ", nondeterministic") +
                "] ";
    }
  }
  // determinism of a filtered selftest run
  const CliRun st1 = run_cli(cli_path, "selftest", "--filter volterra", dir,
                             "selftest_1", "");
  const CliRun st2 = run_cli(cli_path, "selftest", "--filter volterra", dir,
                             "selftest_2", "");
  if (!(st1.exit_code == 0 && st1.report == st2.report &&
        !st1.report.empty())) {
    ok = false;
    detail += "selftest determinism ";
  }
  if (ok) detail = "9 verbs: exit codes 0/1/2 and byte-identical reruns";
  return {"cli_contract", ok, detail};
}

}  // namespace

std::vector<CriterionResult> run_acceptance_criteria(
    const std::string& filter, const std::string& cli_path) {
  std::vector<std::pair<std::string, std::function<CriterionResult()>>>
      criteria = {
          {"left_mult_exhaustive", [] { return criterion_left_mult(); }},
          {"tilde_closure", [] { return criterion_tilde(); }},
          {"restriction_extension_bijection",
           [] { return criterion_bijection(); }},
          {"matching_criterion_equivalence",
           [] { return criterion_matching_equivalence(); }},
          {"real_correspondence_round_trip",
           [] { return criterion_real_correspondence(); }},
          {"decomposition_equivalence",
           [] { return criterion_decomposition(); }},
          {"volterra_exact_weight", [] { return criterion_volterra(); }},
          {"quasidiagonal_profiles",
           [] { return criterion_quasidiagonal(); }},
          {"representation_round_trip",
           [] { return criterion_representations(); }},
          {"derivation_oracle", [] { return criterion_derivations(); }},
          {"cli_contract",
           [cli_path] { return criterion_cli(cli_path); }},
      };

  std::vector<CriterionResult> out;
  for (auto& [name, fn] : criteria) {
    if (!filter.empty() && name.find(filter) == std::string::npos) continue;
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      out.push_back({name, false, std::string("exception: ") + e.what()});
    }
  }
  return out;
}

}  // namespace rbc
