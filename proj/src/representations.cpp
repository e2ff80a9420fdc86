#include "rbc/representations.hpp"

#include <cmath>
#include <string>

#include "rbc/decomp.hpp"
#include "rbc/errors.hpp"
#include "rbc/kernels.hpp"

namespace rbc {

namespace {

constexpr double kWeightSlack = 1e-12;

// Coordinates of a on the (orthonormal) space basis, with a leak check.
std::vector<cd> space_coords(const AlgebraSpace& space, const ComplexMatrix& a,
                             double leak_tol, const char* where) {
  const std::size_t m = space.basis_size();
  std::vector<cd> c(m);
  ComplexMatrix recon(a.rows(), a.cols());
  for (std::size_t k = 0; k < m; ++k) {
    const ComplexMatrix b = space.basis_element(k);
    c[k] = kernels::dot_conj(b.data(), a.data(), a.size());
    kernels::axpby(1.0, recon.data(), c[k], b.data(), recon.data(),
                   recon.size());
  }
  const double leak = (a - recon).frobenius_norm();
  if (leak > leak_tol) {
    throw InputError(std::string(where) +
                     ": element outside the source space, residual " +
                     std::to_string(leak));
  }
  return c;
}

ComplexMatrix block_of(const ComplexMatrix& a, std::size_t offset,
                       std::size_t size) {
  return a.block(offset, offset, size, size);
}

double off_block_norm(const ComplexMatrix& a, std::size_t offset,
                      std::size_t size) {
  ComplexMatrix rest = a;
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) {
      rest(offset + i, offset + j) = 0.0;
    }
  }
  return rest.frobenius_norm();
}

}  // namespace

namespace {

ComplexMatrix apply_images(const AlgebraSpace& source,
                           const std::vector<ComplexMatrix>& images,
                           std::size_t target_dim, const ComplexMatrix& a) {
  const std::vector<cd> c = space_coords(source, a, 1e-8, "star hom apply");
  ComplexMatrix out(target_dim, target_dim);
  for (std::size_t k = 0; k < images.size(); ++k) {
    kernels::axpby(1.0, out.data(), c[k], images[k].data(), out.data(),
                   out.size());
  }
  return out;
}

}  // namespace

ComplexMatrix StarHomomorphism::apply(const ComplexMatrix& a) const {
  return apply_images(source, images, target.ambient_dim(), a);
}

StarHomomorphism star_hom_certify(std::vector<ComplexMatrix> images,
                                  const AlgebraSpace& source,
                                  const AlgebraSpace& target, double tol) {
  if (images.size() != source.basis_size()) {
    throw DimensionMismatch(
        "star_hom_certify: need one image per source basis element");
  }
  const std::size_t tdim = target.ambient_dim();
  for (const auto& img : images) {
    if (img.rows() != tdim || img.cols() != tdim) {
      throw DimensionMismatch("star_hom_certify: image shape mismatch");
    }
    if (target.containment_defect(img) > tol) {
      throw InputError("star_hom_certify: image outside the target space");
    }
  }

  const std::size_t m = source.basis_size();
  std::vector<ComplexMatrix> basis;
  basis.reserve(m);
  for (std::size_t k = 0; k < m; ++k) basis.push_back(source.basis_element(k));

  double worst_mult = 0.0;
  long worst_i = -1, worst_j = -1;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const ComplexMatrix lhs =
          apply_images(source, images, tdim, basis[i] * basis[j]);
      const double d = operator_norm(lhs - images[i] * images[j]);
      if (d > worst_mult) {
        worst_mult = d;
        worst_i = static_cast<long>(i);
        worst_j = static_cast<long>(j);
      }
    }
  }
  if (worst_mult > tol) {
    CertificationWitness w;
    w.description = "multiplicativity defect at basis pair (" +
                    std::to_string(worst_i) + ", " + std::to_string(worst_j) +
                    ")";
    w.index_a = worst_i;
    w.index_b = worst_j;
    w.residual = worst_mult;
    throw NotMultiplicative("star_hom_certify: map is not multiplicative", w);
  }

  double worst_inv = 0.0;
  long worst_k = -1;
  for (std::size_t k = 0; k < m; ++k) {
    const double d = operator_norm(
        apply_images(source, images, tdim, adjoint(basis[k])) -
        adjoint(images[k]));
    if (d > worst_inv) {
      worst_inv = d;
      worst_k = static_cast<long>(k);
    }
  }
  if (worst_inv > tol) {
    CertificationWitness w;
    w.description =
        "involution defect at basis element " + std::to_string(worst_k);
    w.index_a = worst_k;
    w.residual = worst_inv;
    throw NotInvolutive("star_hom_certify: map does not preserve adjoints", w);
  }
  return StarHomomorphism{source, target, std::move(images), worst_mult,
                          worst_inv, tol};
}

double rb_hom_defect(const StarHomomorphism& phi, const RotaBaxterOperator& p1,
                     const RotaBaxterOperator& p2) {
  if (std::abs(p1.weight() - p2.weight()) > kWeightSlack) {
    throw WeightMismatch("rb_hom_defect: weights disagree");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < phi.source.basis_size(); ++k) {
    const ComplexMatrix b = phi.source.basis_element(k);
    worst = std::max(worst, operator_norm(phi.apply(p1.apply(b)) -
                                          p2.apply(phi.apply(b))));
  }
  return worst;
}

RBRepresentation make_rb_representation(StarHomomorphism pi, ComplexMatrix f,
                                        RotaBaxterOperator p_source,
                                        RotaBaxterOperator p_target,
                                        double tol) {
  if (std::abs(p_source.weight() - p_target.weight()) > kWeightSlack) {
    throw WeightMismatch("rb representation: weights disagree");
  }
  const std::size_t n = pi.target.ambient_dim();
  if (f.rows() != n || f.cols() != n) {
    throw DimensionMismatch("rb representation: f shape mismatch");
  }

  const double intertwine = rb_hom_defect(pi, p_source, p_target);
  if (intertwine > tol) {
    CertificationWitness w;
    w.description = "intertwining defect " + std::to_string(intertwine);
    w.residual = intertwine;
    throw CertificationFailed(
        "rb representation: pi does not intertwine the operators", w);
  }

  // matching of the target operator with f on pi(source): bilinear in the
  // image element and the vector, so basis pairs certify the span
  double worst = 0.0;
  const cd weight = p_target.weight();
  for (std::size_t k = 0; k < pi.source.basis_size(); ++k) {
    const ComplexMatrix img = pi.apply(pi.source.basis_element(k));
    for (std::size_t c = 0; c < n; ++c) {
      ComplexMatrix e(n, 1);
      e(c, 0) = 1.0;
      worst = std::max(worst,
                       matching_defect(p_target.op(), weight, f, img, e));
    }
  }
  if (worst > tol) {
    CertificationWitness w;
    w.description = "matching defect " + std::to_string(worst);
    w.residual = worst;
    throw NotMatching(
        "rb representation: target operator does not match f on the image",
        w);
  }

  return RBRepresentation{std::move(pi),       std::move(f),
                          std::move(p_source), std::move(p_target),
                          intertwine,          worst,
                          tol};
}

RBRepresentation build_direct_sum_representation(const RBRepresentation& r1,
                                                 const RBRepresentation& r2,
                                                 double tol) {
  if (std::abs(r1.p_source.weight() - r2.p_source.weight()) > kWeightSlack) {
    throw WeightMismatch("build_direct_sum_representation: weights disagree");
  }
  const std::size_t n1 = r1.pi.target.ambient_dim();
  const std::size_t n2 = r2.pi.target.ambient_dim();
  for (const auto* r : {&r1, &r2}) {
    const std::size_t n = r->pi.target.ambient_dim();
    if (max_abs_diff(r->f, ComplexMatrix::identity(n)) > tol) {
      throw InputError(
          "build_direct_sum_representation: inputs must match the identity");
    }
  }

  const std::size_t n = n1 + n2;
  const Projection p = Projection::coordinate(n, n1);

  // source = A1 (+) A2 with the block-diagonal embedding
  std::vector<std::size_t> parts;
  for (const auto* r : {&r1, &r2}) {
    switch (r->pi.source.kind()) {
      case AlgebraSpace::Kind::full:
        parts.push_back(r->pi.source.ambient_dim());
        break;
      case AlgebraSpace::Kind::direct_sum:
        for (std::size_t q : r->pi.source.parts()) parts.push_back(q);
        break;
      case AlgebraSpace::Kind::span:
        throw InputError(
            "build_direct_sum_representation: span sources unsupported");
    }
  }
  const AlgebraSpace source = AlgebraSpace::direct_sum(parts);

  std::vector<ComplexMatrix> images;
  images.reserve(source.basis_size());
  for (std::size_t k = 0; k < r1.pi.images.size(); ++k) {
    ComplexMatrix img(n, n);
    img.set_block(0, 0, r1.pi.images[k]);
    images.push_back(std::move(img));
  }
  for (std::size_t k = 0; k < r2.pi.images.size(); ++k) {
    ComplexMatrix img(n, n);
    img.set_block(n1, n1, r2.pi.images[k]);
    images.push_back(std::move(img));
  }

  const StarHomomorphism pi =
      star_hom_certify(std::move(images), source, AlgebraSpace::full(n), tol);

  // support: pi(A_i) inside the corresponding block (exact by construction,
  // still certified)
  for (std::size_t k = 0; k < pi.images.size(); ++k) {
    const bool first = k < r1.pi.images.size();
    const double leak = first ? off_block_norm(pi.images[k], 0, n1)
                              : off_block_norm(pi.images[k], n1, n2);
    if (leak > tol) {
      CertificationWitness w;
      w.description = "image " + std::to_string(k) + " leaks outside its block";
      w.index_a = static_cast<long>(k);
      w.residual = leak;
      throw SupportViolation(
          "build_direct_sum_representation: block support violated", w);
    }
  }

  RotaBaxterOperator p_source = direct_sum_rb(r1.p_source, r2.p_source, tol);
  RotaBaxterOperator p_prime = direct_sum_rb(r1.p_target, r2.p_target, tol);
  RotaBaxterOperator p_target = psi_extend(p_prime, p, tol);

  return make_rb_representation(pi, p.matrix(), std::move(p_source),
                                std::move(p_target), tol);
}

std::pair<RBRepresentation, RBRepresentation> split_representation(
    const RBRepresentation& r, const Projection& p, double tol) {
  const std::size_t n = r.pi.target.ambient_dim();
  if (p.dim() != n) {
    throw DimensionMismatch("split_representation: projection dim mismatch");
  }
  if (max_abs_diff(r.f, p.matrix()) > tol) {
    throw InputError("split_representation: f must equal the projection");
  }
  if (r.pi.source.kind() != AlgebraSpace::Kind::direct_sum ||
      r.pi.source.parts().size() != 2) {
    throw InputError(
        "split_representation: source must be a two-part direct sum");
  }
  const std::size_t m1 = r.pi.source.parts()[0];
  const std::size_t m2 = r.pi.source.parts()[1];
  const std::size_t n1 = p.rank();
  const std::size_t n2 = n - n1;

  // images must respect the block split of the target
  const std::size_t b1 = m1 * m1;  // basis elements of the first summand
  for (std::size_t k = 0; k < r.pi.images.size(); ++k) {
    const bool first = k < b1;
    const double leak = first ? off_block_norm(r.pi.images[k], 0, n1)
                              : off_block_norm(r.pi.images[k], n1, n2);
    if (leak > tol) {
      CertificationWitness w;
      w.description = "image " + std::to_string(k) + " leaks outside block " +
                      (first ? "1" : "2");
      w.index_a = static_cast<long>(k);
      w.residual = leak;
      throw SupportViolation("split_representation: block support violated",
                             w);
    }
  }

  // restrict an operator on the two-part space to one summand
  auto restrict_source_op = [&](const RotaBaxterOperator& op, bool first) {
    const std::size_t m = first ? m1 : m2;
    const std::size_t off = first ? 0 : m1;
    const SuperOperator res = SuperOperator::from_basis_images(
        m, [&](std::size_t i, std::size_t j) {
          ComplexMatrix e(m1 + m2, m1 + m2);
          e(off + i, off + j) = 1.0;
          const ComplexMatrix img = op.apply(e);
          const double leak = off_block_norm(img, off, m);
          if (leak > tol) {
            CertificationWitness w;
            w.description = "source operator mixes the summands";
            w.residual = leak;
            throw SupportViolation(
                "split_representation: source operator does not split", w);
          }
          return block_of(img, off, m);
        });
    return certify_rb(res, op.weight(), AlgebraSpace::full(m), tol);
  };

  // restrict the target operator to one diagonal block
  auto restrict_target_op = [&](bool first) {
    const std::size_t m = first ? n1 : n2;
    const std::size_t off = first ? 0 : n1;
    const SuperOperator res = SuperOperator::from_basis_images(
        m, [&](std::size_t i, std::size_t j) {
          ComplexMatrix e(n, n);
          e(off + i, off + j) = 1.0;
          const ComplexMatrix img = r.p_target.apply(e);
          const double leak = off_block_norm(img, off, m);
          if (leak > tol) {
            CertificationWitness w;
            w.description = "target operator mixes the blocks";
            w.residual = leak;
            throw SupportViolation(
                "split_representation: target operator does not split", w);
          }
          return block_of(img, off, m);
        });
    return certify_rb(res, r.p_target.weight(), AlgebraSpace::full(m), tol);
  };

  auto build_half = [&](bool first) {
    const std::size_t m = first ? m1 : m2;
    const std::size_t toff = first ? 0 : n1;
    const std::size_t tdim = first ? n1 : n2;
    const std::size_t boff = first ? 0 : b1;
    std::vector<ComplexMatrix> images;
    images.reserve(m * m);
    for (std::size_t k = 0; k < m * m; ++k) {
      images.push_back(block_of(r.pi.images[boff + k], toff, tdim));
    }
    StarHomomorphism pi_i =
        star_hom_certify(std::move(images), AlgebraSpace::full(m),
                         AlgebraSpace::full(tdim), tol);
    return make_rb_representation(
        std::move(pi_i), ComplexMatrix::identity(tdim),
        restrict_source_op(r.p_source, first), restrict_target_op(first), tol);
  };

  return {build_half(true), build_half(false)};
}

InvariantSubspaceRB invariant_subspace_rb(
    const std::vector<ComplexMatrix>& images, const Projection& p,
    double tol) {
  if (p.rank() == 0 || p.rank() == p.dim()) {
    throw InputError("invariant_subspace_rb: projection must be nontrivial");
  }
  const std::size_t n = p.dim();
  const ComplexMatrix pm = p.matrix();
  const ComplexMatrix pperp = ComplexMatrix::identity(n) - pm;

  for (std::size_t k = 0; k < images.size(); ++k) {
    if (images[k].rows() != n || images[k].cols() != n) {
      throw DimensionMismatch("invariant_subspace_rb: image shape mismatch");
    }
    const double leak = operator_norm(pperp * images[k] * pm);
    if (leak > tol) {
      CertificationWitness w;
      w.description = "image " + std::to_string(k) +
                      " does not leave the subspace invariant, |p_perp a p| " +
                      std::to_string(leak);
      w.index_a = static_cast<long>(k);
      w.residual = leak;
      throw NotInvariant("invariant_subspace_rb: subspace is not invariant",
                         w);
    }
  }

  InvariantSubspaceRB out{
      triangular_rb(
          certify_rb(SuperOperator::identity(p.rank()), cd{-1.0},
                     AlgebraSpace::full(p.rank()), tol),
          certify_rb(SuperOperator::identity(n - p.rank()), cd{-1.0},
                     AlgebraSpace::full(n - p.rank()), tol),
          p, tol),
      {}};
  out.symmetry_defects.reserve(images.size());
  for (const auto& a : images) {
    out.symmetry_defects.push_back(
        operator_norm(out.op.apply(adjoint(a)) - adjoint(out.op.apply(a))));
  }
  return out;
}

}  // namespace rbc
