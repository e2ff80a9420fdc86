#include "rbc/superop.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rbc/decomp.hpp"
#include "rbc/errors.hpp"
#include "rbc/kernels.hpp"
#include "rbc/prng.hpp"

namespace rbc {

namespace {

std::size_t isqrt_exact(std::size_t n) {
  std::size_t r = static_cast<std::size_t>(std::llround(std::sqrt(double(n))));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  if (r * r != n) {
    throw DimensionMismatch("dense action must be n^2 x n^2");
  }
  return r;
}

void require_dim(const SuperOperator& t, const ComplexMatrix& a) {
  if (!a.is_square() || a.rows() != t.dim()) {
    throw DimensionMismatch("superoperator apply: expected " +
                            std::to_string(t.dim()) + "x" +
                            std::to_string(t.dim()) + " input");
  }
}

}  // namespace

SuperOperator::SuperOperator(std::size_t dim, Structure structure)
    : dim_(dim),
      structure_(std::move(structure)),
      cache_(std::make_shared<Cache>()) {}

SuperOperator SuperOperator::zero(std::size_t dim) {
  return dense(ComplexMatrix::zero(dim * dim, dim * dim));
}

SuperOperator SuperOperator::identity(std::size_t dim) {
  return dense(ComplexMatrix::identity(dim * dim));
}

SuperOperator SuperOperator::dense(ComplexMatrix action) {
  if (!action.is_square()) {
    throw DimensionMismatch("dense action must be square");
  }
  if (!action.all_finite()) {
    throw InputError("dense action has non-finite entries");
  }
  const std::size_t dim = isqrt_exact(action.rows());
  return SuperOperator(dim, DenseTag{std::move(action)});
}

SuperOperator SuperOperator::left_mult(ComplexMatrix m) {
  if (!m.is_square()) throw DimensionMismatch("left_mult: m must be square");
  const std::size_t dim = m.rows();
  return SuperOperator(dim, LeftMultTag{std::move(m)});
}

SuperOperator SuperOperator::right_mult(ComplexMatrix m) {
  if (!m.is_square()) throw DimensionMismatch("right_mult: m must be square");
  const std::size_t dim = m.rows();
  return SuperOperator(dim, RightMultTag{std::move(m)});
}

SuperOperator SuperOperator::triangular(SuperOperator p1, SuperOperator p2,
                                        Projection p) {
  if (p1.dim() != p.rank() || p2.dim() != p.dim() - p.rank()) {
    throw DimensionMismatch(
        "triangular: block operator dimensions must match rank(p) and its "
        "corank");
  }
  const std::size_t dim = p.dim();
  return SuperOperator(
      dim, TriangularTag{std::make_shared<SuperOperator>(std::move(p1)),
                         std::make_shared<SuperOperator>(std::move(p2)),
                         std::move(p)});
}

SuperOperator SuperOperator::direct_sum(std::vector<SuperOperator> parts) {
  if (parts.empty()) throw InputError("direct_sum: no parts");
  std::size_t dim = 0;
  DirectSumTag tag;
  for (auto& part : parts) {
    dim += part.dim();
    tag.parts.push_back(std::make_shared<SuperOperator>(std::move(part)));
  }
  return SuperOperator(dim, std::move(tag));
}

SuperOperator SuperOperator::projection_onto(std::vector<ComplexMatrix> a1,
                                             std::vector<ComplexMatrix> a2,
                                             std::size_t dim) {
  const std::size_t nn = dim * dim;
  for (const auto* list : {&a1, &a2}) {
    for (const auto& m : *list) {
      if (m.rows() != dim || m.cols() != dim) {
        throw DimensionMismatch("projection_onto: basis shape mismatch");
      }
    }
  }
  const std::size_t k = a1.size() + a2.size();
  ProjectionOntoTag tag;
  tag.a1 = std::move(a1);
  tag.a2 = std::move(a2);
  if (k == 0) {
    tag.coeff = ComplexMatrix(0, nn);
  } else {
    ComplexMatrix cols(nn, k);
    std::size_t c = 0;
    for (const auto* list : {&tag.a1, &tag.a2}) {
      for (const auto& m : *list) {
        const std::vector<cd> v = m.vec();
        for (std::size_t i = 0; i < nn; ++i) cols(i, c) = v[i];
        ++c;
      }
    }
    const QRDecomposition qr = householder_qr(cols);
    // guard against a dependent basis list
    double rmax = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      rmax = std::max(rmax, std::abs(qr.r(i, i)));
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (std::abs(qr.r(i, i)) <= 1e-12 * rmax || rmax == 0.0) {
        CertificationWitness w;
        w.description = "basis lists are linearly dependent";
        w.index_a = static_cast<long>(i);
        throw NotDirectSum("projection_onto: dependent basis", w);
      }
    }
    tag.coeff = upper_triangular_solve(qr.r, adjoint(qr.q));
  }
  return SuperOperator(dim, std::move(tag));
}

SuperOperator SuperOperator::discrete_volterra(std::size_t samples) {
  if (samples == 0) throw InputError("discrete_volterra: samples must be >= 1");
  return SuperOperator(samples, VolterraTag{samples});
}

SuperOperator SuperOperator::from_basis_images(
    std::size_t dim,
    const std::function<ComplexMatrix(std::size_t, std::size_t)>& image) {
  const std::size_t nn = dim * dim;
  ComplexMatrix action(nn, nn);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      const ComplexMatrix img = image(i, j);
      if (img.rows() != dim || img.cols() != dim) {
        throw DimensionMismatch("from_basis_images: image shape mismatch");
      }
      const std::vector<cd> v = img.vec();
      const std::size_t col = i + dim * j;  // vec index of E_ij
      for (std::size_t row = 0; row < nn; ++row) action(row, col) = v[row];
    }
  }
  return dense(std::move(action));
}

ComplexMatrix SuperOperator::apply(const ComplexMatrix& a) const {
  require_dim(*this, a);
  const std::size_t n = dim_;

  struct Visitor {
    const ComplexMatrix& a;
    std::size_t n;

    ComplexMatrix operator()(const DenseTag& t) const {
      const std::vector<cd> v = a.vec();
      ComplexMatrix out(n * n, 1);
      kernels::matmul(t.action.data(), v.data(), out.data(), n * n, n * n, 1);
      std::vector<cd> ov(out.data(), out.data() + n * n);
      return ComplexMatrix::unvec(ov, n, n);
    }
    ComplexMatrix operator()(const LeftMultTag& t) const { return t.m * a; }
    ComplexMatrix operator()(const RightMultTag& t) const { return a * t.m; }
    ComplexMatrix operator()(const SuperOperator::TriangularTag& t) const {
      BlockDecomposition d = compress(a, t.p);
      d.a11 = t.p1->apply(d.a11);
      d.a22 = t.p2->apply(d.a22);
      d.a21 = ComplexMatrix::zero(d.a21.rows(), d.a21.cols());
      return assemble(d, t.p);
    }
    ComplexMatrix operator()(const SuperOperator::DirectSumTag& t) const {
      ComplexMatrix out(n, n);
      std::size_t off = 0;
      for (const auto& part : t.parts) {
        const std::size_t m = part->dim();
        out.set_block(off, off, part->apply(a.block(off, off, m, m)));
        off += m;
      }
      return out;
    }
    ComplexMatrix operator()(const SuperOperator::ProjectionOntoTag& t) const {
      ComplexMatrix out(n, n);
      if (t.coeff.rows() == 0) return out;
      const std::vector<cd> v = a.vec();
      std::vector<cd> coords(t.coeff.rows());
      kernels::matmul(t.coeff.data(), v.data(), coords.data(), t.coeff.rows(),
                      n * n, 1);
      for (std::size_t i = 0; i < t.a1.size(); ++i) {
        kernels::axpby(1.0, out.data(), coords[i], t.a1[i].data(), out.data(),
                       out.size());
      }
      return out;
    }
    ComplexMatrix operator()(const SuperOperator::VolterraTag& t) const {
      const double h = 1.0 / static_cast<double>(t.samples);
      ComplexMatrix out(n, n);
      cd acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        out(k, k) = h * acc;
        acc += a(k, k);
      }
      return out;
    }
  };

  return std::visit(Visitor{a, n}, structure_);
}

const ComplexMatrix& SuperOperator::dense_action() const {
  std::call_once(cache_->once, [this] {
    if (const auto* d = std::get_if<DenseTag>(&structure_)) {
      cache_->action = d->action;
      return;
    }
    const std::size_t n = dim_;
    ComplexMatrix action(n * n, n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const ComplexMatrix img = apply(ComplexMatrix::unit(n, i, j));
        const std::vector<cd> v = img.vec();
        const std::size_t col = i + n * j;
        for (std::size_t row = 0; row < n * n; ++row) {
          action(row, col) = v[row];
        }
      }
    }
    cache_->action = std::move(action);
  });
  return cache_->action;
}

SuperOperator compose(const SuperOperator& s, const SuperOperator& t) {
  if (s.dim() != t.dim()) {
    throw DimensionMismatch("compose: operator dimensions disagree");
  }
  return SuperOperator::dense(s.dense_action() * t.dense_action());
}

double derivation_defect(const SuperOperator& d, const ComplexMatrix& a,
                         const ComplexMatrix& b) {
  if (a.rows() != d.dim() || b.rows() != d.dim() || !a.is_square() ||
      !b.is_square()) {
    throw DimensionMismatch("derivation_defect: dimension mismatch");
  }
  return operator_norm(d.apply(a * b) - d.apply(a) * b - a * d.apply(b));
}

SuperOperator invert(const SuperOperator& t, double cond_limit) {
  InverseResult inv = invert_matrix(t.dense_action());
  if (inv.condition_estimate > cond_limit) {
    throw NotInvertible("superoperator action condition estimate " +
                        std::to_string(inv.condition_estimate) +
                        " exceeds limit");
  }
  return SuperOperator::dense(std::move(inv.inverse));
}

SuperOperatorNorm superop_norm(const SuperOperator& t, std::uint64_t seed,
                               int starts) {
  const std::size_t n = t.dim();
  if (n == 0) return {};
  const ComplexMatrix adj = adjoint(t.dense_action());
  const SuperOperator t_adj = SuperOperator::dense(adj);

  SuperOperatorNorm best;
  best.witness = ComplexMatrix::unit(n, 0, 0);

  auto consider = [&](ComplexMatrix a) {
    const double na = operator_norm(a);
    if (na < 1e-300) return;
    a = a * cd{1.0 / na};
    // ascent on a |-> |T(a)| over |a| = 1: move towards the Frobenius
    // gradient T^H(u v^H) of the top singular value of T(a)
    for (int it = 0; it < 30; ++it) {
      const ComplexMatrix img = t.apply(a);
      const HermitianEig gram = hermitian_eig(adjoint(img) * img);
      const double sigma =
          std::sqrt(std::max(0.0, gram.values.empty() ? 0.0 : gram.values[0]));
      if (sigma > best.value) {
        best.value = sigma;
        best.witness = a;
      }
      if (sigma < 1e-300) break;
      ComplexMatrix v(n, 1);
      for (std::size_t i = 0; i < n; ++i) v(i, 0) = gram.vectors(i, 0);
      const ComplexMatrix u = img * v * cd{1.0 / sigma};
      ComplexMatrix grad = t_adj.apply(u * adjoint(v));
      const double gn = operator_norm(grad);
      if (gn < 1e-300) break;
      grad = grad * cd{1.0 / gn};
      if (max_abs_diff(grad, a) < 1e-13) break;
      a = grad;
    }
  };

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      consider(ComplexMatrix::unit(n, i, j));
    }
  }
  consider(ComplexMatrix::identity(n));
  Prng rng(seed);
  for (int s = 0; s < starts; ++s) {
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a.data()[i] = rng.complex_gaussian();
    }
    consider(std::move(a));
  }
  return best;
}

}  // namespace rbc
