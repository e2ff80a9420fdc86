#include "rbc/rb.hpp"

#include <cmath>

#include "rbc/decomp.hpp"
#include "rbc/errors.hpp"
#include "rbc/prng.hpp"

namespace rbc {

double rb_residual(const SuperOperator& p, cd weight, const ComplexMatrix& a,
                   const ComplexMatrix& b) {
  const ComplexMatrix pa = p.apply(a);
  const ComplexMatrix pb = p.apply(b);
  const ComplexMatrix lhs = pa * pb;
  const ComplexMatrix rhs =
      p.apply(a * pb) + p.apply(pa * b) + weight * p.apply(a * b);
  return operator_norm(lhs - rhs);
}

ProbeMode default_probe_mode(const AlgebraSpace& space) {
  return space.basis_size() <= 256 ? ProbeMode::exhaustive()
                                   : ProbeMode::randomized(200, 0);
}

CertificationOutcome run_rb_certification(const SuperOperator& p, cd weight,
                                          const AlgebraSpace& space,
                                          double tol, const ProbeMode& mode) {
  if (p.dim() != space.ambient_dim()) {
    throw DimensionMismatch(
        "certification: operator and space dimensions disagree");
  }

  Certificate cert;
  cert.mode = mode;
  cert.tol = tol;

  if (mode.kind == ProbeMode::Kind::exhaustive) {
    const std::size_t m = space.basis_size();
    std::vector<ComplexMatrix> basis;
    basis.reserve(m);
    std::vector<ComplexMatrix> images;
    images.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
      basis.push_back(space.basis_element(k));
      images.push_back(p.apply(basis.back()));
    }
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        const ComplexMatrix& a = basis[i];
        const ComplexMatrix& b = basis[j];
        const ComplexMatrix lhs = images[i] * images[j];
        const ComplexMatrix rhs = p.apply(a * images[j]) +
                                  p.apply(images[i] * b) +
                                  weight * p.apply(a * b);
        const double res = operator_norm(lhs - rhs);
        if (res > cert.max_residual) {
          cert.max_residual = res;
          cert.worst = {static_cast<long>(i), static_cast<long>(j), res, a, b};
        }
      }
    }
    if (m > 0 && cert.worst.a.empty()) {
      cert.worst = {0, 0, 0.0, basis[0], basis[0]};
    }
  } else {
    Prng rng(mode.seed);
    for (std::uint64_t t = 0; t < mode.trials; ++t) {
      ComplexMatrix a = space.random_element(rng);
      ComplexMatrix b = space.random_element(rng);
      const double na = operator_norm(a);
      const double nb = operator_norm(b);
      if (na < 1e-300 || nb < 1e-300) continue;
      a = a * cd{1.0 / na};
      b = b * cd{1.0 / nb};
      const double res = rb_residual(p, weight, a, b);
      if (res >= cert.max_residual) {
        if (res > cert.max_residual || cert.worst.a.empty()) {
          cert.max_residual = res;
          cert.worst = {static_cast<long>(t), static_cast<long>(t), res, a, b};
        }
      }
    }
    if (cert.worst.a.empty()) {
      const ComplexMatrix z = ComplexMatrix::zero(p.dim(), p.dim());
      cert.worst = {-1, -1, 0.0, z, z};
    }
  }

  CertificationOutcome out;
  out.certified = cert.max_residual <= tol;
  out.certificate = std::move(cert);
  return out;
}

RotaBaxterOperator certify_rb(const SuperOperator& p, cd weight,
                              const AlgebraSpace& space, double tol,
                              std::optional<ProbeMode> mode) {
  const ProbeMode m = mode.value_or(default_probe_mode(space));
  CertificationOutcome outcome = run_rb_certification(p, weight, space, tol, m);
  if (!outcome.certified) {
    CertificationWitness w;
    w.description = "Rota-Baxter identity residual above tolerance";
    w.index_a = outcome.certificate.worst.index_a;
    w.index_b = outcome.certificate.worst.index_b;
    w.residual = outcome.certificate.max_residual;
    throw CertificationFailed("certification failed: max residual " +
                                  std::to_string(w.residual) + " > tol " +
                                  std::to_string(tol),
                              w);
  }
  return RotaBaxterOperator(p, weight, space,
                            std::move(outcome.certificate));
}

RotaBaxterOperator tilde(const RotaBaxterOperator& r) {
  const std::size_t nn = r.op().dim() * r.op().dim();
  const ComplexMatrix action =
      ComplexMatrix::identity(nn) * (-r.weight()) - r.op().dense_action();
  return certify_rb(SuperOperator::dense(action), r.weight(), r.space(),
                    r.certificate().tol, r.certificate().mode);
}

double symmetry_defect(const SuperOperator& p,
                       const std::vector<ComplexMatrix>& probes) {
  double worst = 0.0;
  for (const auto& a : probes) {
    worst = std::max(
        worst, operator_norm(p.apply(adjoint(a)) - adjoint(p.apply(a))));
  }
  return worst;
}

double symmetry_defect(const SuperOperator& p, const AlgebraSpace& space) {
  return symmetry_defect(p, space_basis(space));
}

double matching_defect(const SuperOperator& p, cd weight,
                       const ComplexMatrix& f, const ComplexMatrix& a,
                       const ComplexMatrix& x) {
  const std::size_t n = p.dim();
  if (!f.is_square() || f.rows() != n || a.rows() != n || !a.is_square() ||
      x.rows() != n || x.cols() != 1) {
    throw DimensionMismatch("matching_defect: shape mismatch");
  }
  const ComplexMatrix pa = p.apply(a);
  const ComplexMatrix fx = f * x;
  const ComplexMatrix lhs = pa * fx;
  const ComplexMatrix rhs = f * (pa * x) + f * (a * fx) + weight * (f * (a * x));
  return (lhs - rhs).frobenius_norm();
}

double matching_defect_max(const SuperOperator& p, cd weight,
                           const ComplexMatrix& f, const AlgebraSpace& space) {
  const std::size_t n = space.ambient_dim();
  double worst = 0.0;
  for (std::size_t k = 0; k < space.basis_size(); ++k) {
    const ComplexMatrix a = space.basis_element(k);
    for (std::size_t c = 0; c < n; ++c) {
      ComplexMatrix e(n, 1);
      e(c, 0) = 1.0;
      worst = std::max(worst, matching_defect(p, weight, f, a, e));
    }
  }
  return worst;
}

MatchingCriterion matching_matrix_criterion(
    const SuperOperator& p_op, const Projection& p,
    const std::vector<ComplexMatrix>& basis, double tol) {
  MatchingCriterion out;
  out.matches = true;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const BlockDecomposition img = compress(p_op.apply(basis[k]), p);
    const BlockDecomposition src = compress(basis[k], p);
    const double lower = operator_norm(img.a21);
    const double upper = operator_norm(img.a12 - src.a12);
    if (lower > out.worst_defect) {
      out.worst_defect = lower;
      out.worst_index = k;
      out.worst_kind = "lower_block";
    }
    if (upper > out.worst_defect) {
      out.worst_defect = upper;
      out.worst_index = k;
      out.worst_kind = "upper_block";
    }
  }
  out.matches = out.worst_defect <= tol;
  if (out.worst_kind.empty()) out.worst_kind = "none";
  return out;
}

double idempotency_defect(const SuperOperator& p) {
  const std::size_t n = p.dim();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const ComplexMatrix e = ComplexMatrix::unit(n, i, j);
      const ComplexMatrix pe = p.apply(e);
      worst = std::max(worst, operator_norm(p.apply(pe) - pe));
    }
  }
  return worst;
}

std::vector<ComplexMatrix> space_basis(const AlgebraSpace& space) {
  std::vector<ComplexMatrix> out;
  out.reserve(space.basis_size());
  for (std::size_t k = 0; k < space.basis_size(); ++k) {
    out.push_back(space.basis_element(k));
  }
  return out;
}

}  // namespace rbc
