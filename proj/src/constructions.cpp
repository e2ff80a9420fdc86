#include "rbc/constructions.hpp"

#include <cmath>
#include <string>

#include "rbc/decomp.hpp"
#include "rbc/errors.hpp"
#include "rbc/kernels.hpp"

namespace rbc {

namespace {

constexpr double kWeightSlack = 1e-12;

void require_weight_minus_one(cd weight, const char* where) {
  if (std::abs(weight - cd{-1.0}) > kWeightSlack) {
    throw WrongWeight(std::string(where) + ": weight must be -1");
  }
}

void require_nontrivial(const Projection& p, const char* where) {
  if (p.rank() == 0 || p.rank() == p.dim()) {
    throw InputError(std::string(where) + ": projection must be nontrivial");
  }
}

std::vector<std::size_t> flatten_parts(const AlgebraSpace& space,
                                       const char* where) {
  switch (space.kind()) {
    case AlgebraSpace::Kind::full:
      return {space.ambient_dim()};
    case AlgebraSpace::Kind::direct_sum:
      return space.parts();
    case AlgebraSpace::Kind::span:
      throw InputError(std::string(where) +
                       ": span spaces cannot be direct-summed");
  }
  throw InputError("flatten_parts: bad space");
}

double real_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return kernels::dot_conj(a.data(), b.data(), a.size()).real();
}

// Real-linear MGS over Hermitian matrices; the Frobenius pairing of
// Hermitian elements is already real.
std::vector<ComplexMatrix> real_orthonormalize(
    std::vector<ComplexMatrix> candidates) {
  std::vector<ComplexMatrix> out;
  for (auto& v : candidates) {
    const double orig = v.frobenius_norm();
    if (orig < 1e-14) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : out) {
        const double c = real_inner(q, v);
        kernels::axpby(1.0, v.data(), -c, q.data(), v.data(), v.size());
      }
    }
    const double rem = v.frobenius_norm();
    if (rem <= 1e-12 * orig) continue;
    kernels::scale(1.0 / rem, v.data(), v.data(), v.size());
    out.push_back(std::move(v));
  }
  return out;
}

// Coordinates of x on an orthonormal Hermitian basis, plus the residual of
// x outside the real span.
std::vector<double> real_coords(const std::vector<ComplexMatrix>& basis,
                                const ComplexMatrix& x, double* leak) {
  std::vector<double> c(basis.size());
  ComplexMatrix rem = x;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    c[k] = real_inner(basis[k], x);
    kernels::axpby(1.0, rem.data(), -c[k], basis[k].data(), rem.data(),
                   rem.size());
  }
  if (leak) *leak = rem.frobenius_norm();
  return c;
}

ComplexMatrix real_lift(const std::vector<ComplexMatrix>& basis,
                        const std::vector<double>& coords, std::size_t dim) {
  ComplexMatrix out(dim, dim);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    kernels::axpby(1.0, out.data(), coords[k], basis[k].data(), out.data(),
                   out.size());
  }
  return out;
}

}  // namespace

DecompositionPair make_decomposition_pair(std::vector<ComplexMatrix> a1,
                                          std::vector<ComplexMatrix> a2,
                                          std::size_t dim, double tol) {
  for (const auto* list : {&a1, &a2}) {
    for (const auto& m : *list) {
      if (m.rows() != dim || m.cols() != dim) {
        throw DimensionMismatch("decomposition pair: basis shape mismatch");
      }
    }
  }

  // directness: the union must be linearly independent
  const std::size_t k = a1.size() + a2.size();
  if (k > 0) {
    ComplexMatrix cols(dim * dim, k);
    std::size_t c = 0;
    for (const auto* list : {&a1, &a2}) {
      for (const auto& m : *list) {
        const std::vector<cd> v = m.vec();
        for (std::size_t i = 0; i < v.size(); ++i) cols(i, c) = v[i];
        ++c;
      }
    }
    std::vector<std::size_t> kept;
    orthonormalize_columns(cols, 1e-10, &kept);
    if (kept.size() != k) {
      CertificationWitness w;
      w.description = "basis union is linearly dependent";
      w.residual = 0.0;
      throw NotDirectSum("decomposition pair: sum is not direct", w);
    }
  }

  // each span must be a subalgebra closed under the involution
  const AlgebraSpace ambient = AlgebraSpace::full(dim);
  AlgebraSpace::span(ambient, a1, tol);
  AlgebraSpace::span(ambient, a2, tol);

  DecompositionPair d;
  d.a1_basis = std::move(a1);
  d.a2_basis = std::move(a2);
  d.dim = dim;
  d.tol = tol;
  return d;
}

RotaBaxterOperator left_mult_projection(const Projection& p, double tol) {
  return certify_rb(SuperOperator::left_mult(p.matrix()), cd{-1.0},
                    AlgebraSpace::full(p.dim()), tol);
}

RotaBaxterOperator triangular_rb(const RotaBaxterOperator& p1,
                                 const RotaBaxterOperator& p2,
                                 const Projection& p, double tol) {
  if (std::abs(p1.weight() - cd{-1.0}) > kWeightSlack ||
      std::abs(p2.weight() - cd{-1.0}) > kWeightSlack) {
    throw WeightMismatch("triangular_rb: both inputs must have weight -1");
  }
  const std::size_t r = p.rank();
  const std::size_t s = p.dim() - r;
  if (p1.op().dim() != r || p2.op().dim() != s) {
    throw DimensionMismatch(
        "triangular_rb: block operators must act on rank(p) and its corank");
  }
  RotaBaxterOperator out =
      certify_rb(SuperOperator::triangular(p1.op(), p2.op(), p), cd{-1.0},
                 AlgebraSpace::full(p.dim()), tol);
  return out;
}

RotaBaxterOperator direct_sum_rb(const RotaBaxterOperator& p1,
                                 const RotaBaxterOperator& p2, double tol) {
  if (std::abs(p1.weight() - p2.weight()) > kWeightSlack) {
    throw WeightMismatch("direct_sum_rb: weights disagree");
  }
  std::vector<std::size_t> parts = flatten_parts(p1.space(), "direct_sum_rb");
  for (std::size_t q : flatten_parts(p2.space(), "direct_sum_rb")) {
    parts.push_back(q);
  }
  return certify_rb(SuperOperator::direct_sum({p1.op(), p2.op()}),
                    p1.weight(), AlgebraSpace::direct_sum(std::move(parts)),
                    tol);
}

namespace {

void require_matching_criterion(const SuperOperator& op, const Projection& p,
                                double tol) {
  const MatchingCriterion crit = matching_matrix_criterion(
      op, p, space_basis(AlgebraSpace::full(p.dim())), tol);
  if (!crit.matches) {
    CertificationWitness w;
    w.description = "block criterion fails (" + crit.worst_kind +
                    ") at basis element " + std::to_string(crit.worst_index);
    w.index_a = static_cast<long>(crit.worst_index);
    w.residual = crit.worst_defect;
    throw NotMatching("phi_restrict: operator does not match the projection",
                      w);
  }
}

}  // namespace

RotaBaxterOperator phi_restrict(const SuperOperator& op, const Projection& p,
                                double tol) {
  require_nontrivial(p, "phi_restrict");
  if (op.dim() != p.dim()) {
    throw DimensionMismatch("phi_restrict: operator and projection disagree");
  }
  require_matching_criterion(op, p, tol);
  return phi_restrict(certify_rb(op, cd{-1.0}, AlgebraSpace::full(p.dim()),
                                 tol),
                      p, tol);
}

RotaBaxterOperator phi_restrict(const RotaBaxterOperator& p_op,
                                const Projection& p, double tol) {
  require_weight_minus_one(p_op.weight(), "phi_restrict");
  require_nontrivial(p, "phi_restrict");
  if (p_op.space().kind() != AlgebraSpace::Kind::full ||
      p_op.op().dim() != p.dim()) {
    throw InputError("phi_restrict: operator must act on the full algebra");
  }
  const std::size_t n = p.dim();
  const std::size_t r = p.rank();

  require_matching_criterion(p_op.op(), p, tol);

  const ComplexMatrix u = p.basis();
  const ComplexMatrix uh = adjoint(u);
  auto zero_off_blocks = [n, r](ComplexMatrix m) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if ((i < r) != (j < r)) m(i, j) = 0.0;
      }
    }
    return m;
  };

  const SuperOperator restricted = SuperOperator::from_basis_images(
      n, [&](std::size_t i, std::size_t j) {
        if ((i < r) != (j < r)) return ComplexMatrix::zero(n, n);
        const ComplexMatrix a = u * ComplexMatrix::unit(n, i, j) * uh;
        return zero_off_blocks(uh * p_op.apply(a) * u);
      });

  return certify_rb(restricted, cd{-1.0},
                    AlgebraSpace::direct_sum({r, n - r}), tol);
}

RotaBaxterOperator psi_extend(const RotaBaxterOperator& p_prime,
                              const Projection& p, double tol) {
  require_weight_minus_one(p_prime.weight(), "psi_extend");
  require_nontrivial(p, "psi_extend");
  const std::size_t n = p.dim();
  const std::size_t r = p.rank();
  const std::size_t s = n - r;
  if (p_prime.space().kind() != AlgebraSpace::Kind::direct_sum ||
      p_prime.space().parts() != std::vector<std::size_t>{r, s}) {
    throw InputError(
        "psi_extend: input must live on the two-block diagonal algebra "
        "matching the projection");
  }

  SuperOperator extended = [&] {
    if (const auto* ds = std::get_if<SuperOperator::DirectSumTag>(
            &p_prime.op().structure())) {
      if (ds->parts.size() == 2 && ds->parts[0]->dim() == r &&
          ds->parts[1]->dim() == s) {
        return SuperOperator::triangular(*ds->parts[0], *ds->parts[1], p);
      }
    }
    const ComplexMatrix u = p.basis();
    const ComplexMatrix uh = adjoint(u);
    return SuperOperator::from_basis_images(n, [&](std::size_t i,
                                                   std::size_t j) {
      const ComplexMatrix a_hat = uh * ComplexMatrix::unit(n, i, j) * u;
      ComplexMatrix diag = a_hat;
      ComplexMatrix upper = ComplexMatrix::zero(n, n);
      for (std::size_t ii = 0; ii < n; ++ii) {
        for (std::size_t jj = 0; jj < n; ++jj) {
          if ((ii < r) != (jj < r)) {
            diag(ii, jj) = 0.0;
            if (ii < r) upper(ii, jj) = a_hat(ii, jj);
          }
        }
      }
      return u * (p_prime.apply(diag) + upper) * uh;
    });
  }();

  RotaBaxterOperator out =
      certify_rb(extended, cd{-1.0}, AlgebraSpace::full(n), tol);
  return out;
}

std::vector<ComplexMatrix> hermitian_basis(const AlgebraSpace& space) {
  std::vector<ComplexMatrix> candidates;
  for (std::size_t k = 0; k < space.basis_size(); ++k) {
    const ComplexMatrix b = space.basis_element(k);
    const ComplexMatrix bs = adjoint(b);
    candidates.push_back((b + bs) * cd{0.5});
    candidates.push_back((b - bs) * cd{0.0, -0.5});
  }
  return real_orthonormalize(std::move(candidates));
}

RealLinearRBOperator certify_real_rb(std::vector<ComplexMatrix> basis,
                                     ComplexMatrix action, double weight,
                                     double tol) {
  const std::size_t m = basis.size();
  if (action.rows() != m || action.cols() != m) {
    throw DimensionMismatch("certify_real_rb: action shape mismatch");
  }
  const std::size_t dim = m == 0 ? 0 : basis[0].rows();

  auto apply_p1 = [&](const ComplexMatrix& x) {
    double leak = 0.0;
    const std::vector<double> c = real_coords(basis, x, &leak);
    if (leak > 1e-8) {
      CertificationWitness w;
      w.description = "element leaves the self-adjoint span, residual " +
                      std::to_string(leak);
      w.residual = leak;
      throw NotSubalgebra("real operator: element outside span", w);
    }
    std::vector<double> out(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        out[i] += action(i, j).real() * c[j];
      }
    }
    return real_lift(basis, out, dim);
  };

  double worst = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const ComplexMatrix pa = apply_p1(basis[i]);
    for (std::size_t j = 0; j < m; ++j) {
      const ComplexMatrix pb = apply_p1(basis[j]);
      const ComplexMatrix lhs = pa * pb;
      const ComplexMatrix rhs = apply_p1(basis[i] * pb) +
                                apply_p1(pa * basis[j]) +
                                apply_p1(basis[i] * basis[j]) * cd{weight};
      worst = std::max(worst, operator_norm(lhs - rhs));
    }
  }
  if (worst > tol) {
    CertificationWitness w;
    w.description = "real Rota-Baxter residual " + std::to_string(worst);
    w.residual = worst;
    throw CertificationFailed("real operator certification failed", w);
  }

  RealLinearRBOperator out;
  out.basis = std::move(basis);
  out.action = std::move(action);
  out.weight = weight;
  out.max_residual = worst;
  out.tol = tol;
  return out;
}

RealLinearRBOperator real_restrict(const RotaBaxterOperator& p,
                                   const AlgebraSpace& space, double tol,
                                   bool allow_noncommutative) {
  if (std::abs(p.weight().imag()) > kWeightSlack) {
    throw NonRealWeight("real_restrict: weight must be real");
  }
  if (!allow_noncommutative && !space.is_commutative(tol)) {
    CertificationWitness w;
    w.description = "space has non-commuting basis elements";
    throw NotCommutative("real_restrict: space is not commutative", w);
  }
  const double sym = symmetry_defect(p.op(), space);
  if (sym > tol) {
    CertificationWitness w;
    w.description = "symmetry defect " + std::to_string(sym);
    w.residual = sym;
    throw NotSymmetric("real_restrict: operator is not symmetric", w);
  }

  std::vector<ComplexMatrix> basis = hermitian_basis(space);
  const std::size_t m = basis.size();
  ComplexMatrix action(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    const ComplexMatrix img = p.apply(basis[j]);
    double leak = 0.0;
    const std::vector<double> c = real_coords(basis, img, &leak);
    if (leak > tol) {
      CertificationWitness w;
      w.description = "image of Hermitian basis element " + std::to_string(j) +
                      " leaves the self-adjoint span, residual " +
                      std::to_string(leak);
      w.index_a = static_cast<long>(j);
      w.residual = leak;
      throw CertificationFailed("real_restrict: operator leaves the span", w);
    }
    for (std::size_t i = 0; i < m; ++i) action(i, j) = c[i];
  }
  if (allow_noncommutative) {
    RealLinearRBOperator out;
    out.basis = std::move(basis);
    out.action = std::move(action);
    out.weight = p.weight().real();
    out.max_residual = -1.0;  // uncertified
    out.tol = tol;
    return out;
  }
  return certify_real_rb(std::move(basis), std::move(action),
                         p.weight().real(), tol);
}

RotaBaxterOperator symmetric_from_real(const RealLinearRBOperator& p1,
                                       const AlgebraSpace& space,
                                       double tol) {
  if (!space.is_commutative(tol)) {
    CertificationWitness w;
    w.description = "space has non-commuting basis elements";
    throw NotCommutative("symmetric_from_real: space is not commutative", w);
  }
  const std::size_t n = space.ambient_dim();
  const std::vector<ComplexMatrix>& basis = p1.basis;
  const std::size_t m = basis.size();

  auto apply_real = [&](const ComplexMatrix& hermitian_part) {
    std::vector<double> c(m);
    for (std::size_t k = 0; k < m; ++k) {
      c[k] = real_inner(basis[k], hermitian_part);
    }
    std::vector<double> out(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        out[i] += p1.action(i, j).real() * c[j];
      }
    }
    return real_lift(basis, out, n);
  };

  const SuperOperator op = SuperOperator::from_basis_images(
      n, [&](std::size_t i, std::size_t j) {
        const ComplexMatrix e = ComplexMatrix::unit(n, i, j);
        const ComplexMatrix es = adjoint(e);
        const ComplexMatrix h1 = (e + es) * cd{0.5};
        const ComplexMatrix h2 = (e - es) * cd{0.0, -0.5};
        return apply_real(h1) + apply_real(h2) * cd{0.0, 1.0};
      });

  RotaBaxterOperator out = certify_rb(op, cd{p1.weight}, space, tol);
  const double sym = symmetry_defect(out.op(), space);
  if (sym > tol) {
    CertificationWitness w;
    w.description = "symmetry defect " + std::to_string(sym);
    w.residual = sym;
    throw NotSymmetric("symmetric_from_real: output not symmetric", w);
  }
  return out;
}

RotaBaxterOperator projection_rb_from_decomposition(const DecompositionPair& d,
                                                    double tol) {
  std::vector<ComplexMatrix> all = d.a1_basis;
  all.insert(all.end(), d.a2_basis.begin(), d.a2_basis.end());
  const AlgebraSpace space =
      AlgebraSpace::span(AlgebraSpace::full(d.dim), all, tol);
  const SuperOperator op =
      SuperOperator::projection_onto(d.a1_basis, d.a2_basis, d.dim);

  const double idem = idempotency_defect(op);
  if (idem > tol) {
    CertificationWitness w;
    w.description = "idempotency defect " + std::to_string(idem);
    w.residual = idem;
    throw NotIdempotent("projection operator is not idempotent", w);
  }
  const double sym = symmetry_defect(op, space);
  if (sym > tol) {
    CertificationWitness w;
    w.description = "symmetry defect " + std::to_string(sym);
    w.residual = sym;
    throw NotSymmetric("projection operator is not symmetric", w);
  }
  RotaBaxterOperator out = certify_rb(op, cd{-1.0}, space, tol);
  const SuperOperatorNorm norm = superop_norm(op);
  if (norm.value > 1.0 + 1e-8) {
    CertificationWitness w;
    w.description = "operator norm witness " + std::to_string(norm.value);
    w.residual = norm.value;
    throw CertificationFailed("projection operator norm exceeds 1", w);
  }
  return out;
}

DecompositionPair decompose_from_rb(const RotaBaxterOperator& r, double tol) {
  require_weight_minus_one(r.weight(), "decompose_from_rb");
  const double idem = idempotency_defect(r.op());
  if (idem > tol) {
    CertificationWitness w;
    w.description = "idempotency defect " + std::to_string(idem);
    w.residual = idem;
    throw NotIdempotent("decompose_from_rb: operator is not idempotent", w);
  }
  const double sym = symmetry_defect(r.op(), r.space());
  if (sym > tol) {
    CertificationWitness w;
    w.description = "symmetry defect " + std::to_string(sym);
    w.residual = sym;
    throw NotSymmetric("decompose_from_rb: operator is not symmetric", w);
  }

  double leak = 0.0;
  const ComplexMatrix m = restricted_matrix(r.op(), r.space(), &leak);
  if (leak > tol) {
    CertificationWitness w;
    w.description = "operator leaves its space, residual " +
                    std::to_string(leak);
    w.residual = leak;
    throw CertificationFailed("decompose_from_rb: operator leaves the space",
                              w);
  }

  const std::size_t msize = r.space().basis_size();
  const ComplexMatrix complement = ComplexMatrix::identity(msize) - m;
  const ComplexMatrix u1 = range_basis(m, tol);
  const ComplexMatrix u2 = range_basis(complement, tol);

  auto lift = [&](const ComplexMatrix& coords_cols) {
    std::vector<ComplexMatrix> out;
    for (std::size_t col = 0; col < coords_cols.cols(); ++col) {
      ComplexMatrix acc(r.space().ambient_dim(), r.space().ambient_dim());
      for (std::size_t k = 0; k < msize; ++k) {
        const cd c = coords_cols(k, col);
        kernels::axpby(1.0, acc.data(), c,
                       r.space().basis_element(k).data(), acc.data(),
                       acc.size());
      }
      out.push_back(std::move(acc));
    }
    return out;
  };

  return make_decomposition_pair(lift(u1), lift(u2),
                                 r.space().ambient_dim(), tol);
}

RotaBaxterOperator volterra_discrete(std::size_t samples, double tol) {
  if (samples == 0) throw InputError("volterra_discrete: samples must be >= 1");
  const AlgebraSpace space =
      AlgebraSpace::direct_sum(std::vector<std::size_t>(samples, 1));
  const double h = 1.0 / static_cast<double>(samples);
  return certify_rb(SuperOperator::discrete_volterra(samples), cd{h}, space,
                    tol);
}

ComplexMatrix restricted_matrix(const SuperOperator& op,
                                const AlgebraSpace& space, double* leak) {
  const std::size_t m = space.basis_size();
  ComplexMatrix out(m, m);
  double worst_leak = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const ComplexMatrix img = op.apply(space.basis_element(j));
    ComplexMatrix recon(img.rows(), img.cols());
    for (std::size_t i = 0; i < m; ++i) {
      const ComplexMatrix bi = space.basis_element(i);
      const cd c = kernels::dot_conj(bi.data(), img.data(), img.size());
      out(i, j) = c;
      kernels::axpby(1.0, recon.data(), c, bi.data(), recon.data(),
                     recon.size());
    }
    worst_leak = std::max(worst_leak, (img - recon).frobenius_norm());
  }
  if (leak) *leak = worst_leak;
  return out;
}

}  // namespace rbc
