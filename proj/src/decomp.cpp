#include "rbc/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rbc/kernels.hpp"

namespace rbc {

namespace {

struct JacobiResult {
  std::vector<double> values;  // unsorted diagonal
  ComplexMatrix vectors;       // columns; empty when not requested
};

double off_diagonal_sq(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (i != j) s += std::norm(a(i, j));
    }
  }
  return s;
}

// Cyclic Jacobi on the Hermitian input. Rows rotate through the kernel
// layer (contiguous); columns are strided scalar updates.
JacobiResult jacobi_hermitian(ComplexMatrix a, bool want_vectors) {
  const std::size_t n = a.rows();
  if (!a.is_square()) throw DimensionMismatch("jacobi: matrix must be square");

  // W accumulates G^H ... G^H; eigenvector matrix is W^H.
  ComplexMatrix w =
      want_vectors ? ComplexMatrix::identity(n) : ComplexMatrix();

  const double scale = std::sqrt(kernels::norm2sq(a.data(), a.size()));
  const double stop = 1e-15 * scale;
  const int max_sweeps = 60;

  for (int sweep = 0; sweep < max_sweeps && n > 1; ++sweep) {
    if (std::sqrt(off_diagonal_sq(a)) <= stop) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cd b = a(p, q);
        const double beta = std::abs(b);
        if (beta < 1e-300) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (app - aqq) / (2.0 * beta);
        const double root = std::sqrt(tau * tau + 1.0);
        const double t = tau >= 0.0 ? -1.0 / (tau + root) : 1.0 / (root - tau);
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const cd s = (t * c) * (b / beta);

        // rows: A <- G^H A
        kernels::rotate_rows(a.data() + p * n, a.data() + q * n, c, s, n);
        // columns: A <- A G
        for (std::size_t i = 0; i < n; ++i) {
          const cd xp = a(i, p), xq = a(i, q);
          a(i, p) = c * xp - std::conj(s) * xq;
          a(i, q) = s * xp + c * xq;
        }
        // keep the working matrix exactly Hermitian
        a(p, q) = std::conj(a(q, p));
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        if (want_vectors) {
          kernels::rotate_rows(w.data() + p * n, w.data() + q * n, c, s, n);
        }
      }
    }
  }

  JacobiResult res;
  res.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) res.values[i] = a(i, i).real();
  if (want_vectors) res.vectors = adjoint(w);
  return res;
}

std::size_t first_significant_index(const ComplexMatrix& vectors,
                                    std::size_t col) {
  double colmax = 0.0;
  for (std::size_t i = 0; i < vectors.rows(); ++i) {
    colmax = std::max(colmax, std::abs(vectors(i, col)));
  }
  const double thr = 1e-8 * colmax;
  for (std::size_t i = 0; i < vectors.rows(); ++i) {
    if (std::abs(vectors(i, col)) > thr) return i;
  }
  return vectors.rows();
}

}  // namespace

HermitianEig hermitian_eig(const ComplexMatrix& a) {
  JacobiResult jac = jacobi_hermitian(a, true);
  const std::size_t n = a.rows();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return jac.values[x] > jac.values[y];
  });

  HermitianEig out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = jac.values[order[k]];
    for (std::size_t i = 0; i < n; ++i) {
      out.vectors(i, k) = jac.vectors(i, order[k]);
    }
  }

  // Deterministic representative per column: real positive leading entry,
  // and near-equal eigenvalues ordered by first significant coordinate.
  double vscale = 0.0;
  for (double v : out.values) vscale = std::max(vscale, std::abs(v));
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t lead = first_significant_index(out.vectors, k);
    if (lead >= n) continue;
    const cd z = out.vectors(lead, k);
    const cd phase = std::conj(z) / std::abs(z);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) *= phase;
  }
  for (std::size_t k = 0; k + 1 < n;) {
    std::size_t end = k + 1;
    while (end < n &&
           std::abs(out.values[end] - out.values[k]) <= 1e-12 * (vscale + 1.0)) {
      ++end;
    }
    if (end - k > 1) {
      std::vector<std::size_t> run(end - k);
      std::iota(run.begin(), run.end(), k);
      std::stable_sort(run.begin(), run.end(), [&](std::size_t x, std::size_t y) {
        return first_significant_index(out.vectors, x) <
               first_significant_index(out.vectors, y);
      });
      ComplexMatrix tmp(n, end - k);
      std::vector<double> vals(end - k);
      for (std::size_t m = 0; m < run.size(); ++m) {
        vals[m] = out.values[run[m]];
        for (std::size_t i = 0; i < n; ++i) tmp(i, m) = out.vectors(i, run[m]);
      }
      for (std::size_t m = 0; m < run.size(); ++m) {
        out.values[k + m] = vals[m];
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k + m) = tmp(i, m);
      }
    }
    k = end;
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a) {
  JacobiResult jac = jacobi_hermitian(a, false);
  std::sort(jac.values.begin(), jac.values.end(), std::greater<double>());
  return jac.values;
}

double operator_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  // Gram matrix on the thinner side
  const ComplexMatrix g = a.rows() <= a.cols() ? a * adjoint(a)
                                               : adjoint(a) * a;
  const std::vector<double> ev = hermitian_eigenvalues(g);
  return std::sqrt(std::max(0.0, ev.empty() ? 0.0 : ev.front()));
}

namespace {

// One-sided Jacobi on the columns: orthogonalizes column pairs until the
// Gram matrix is diagonal. Singular values come out as column norms, so
// small ones are not lost to the squaring that an explicit Gram-matrix
// eigendecomposition would do.
struct OneSidedResult {
  ComplexMatrix b;            // rotated copy of the input, columns orthogonal
  std::vector<double> sigma;  // unsorted column norms
};

OneSidedResult one_sided_jacobi(ComplexMatrix b) {
  const std::size_t m = b.rows();
  const std::size_t n = b.cols();
  const double scale = b.frobenius_norm();
  const double stop = 1e-15;
  const int max_sweeps = 60;

  auto col_dot = [&](std::size_t i, std::size_t j) {
    cd acc = 0.0;
    for (std::size_t r = 0; r < m; ++r) acc += std::conj(b(r, i)) * b(r, j);
    return acc;
  };

  for (int sweep = 0; sweep < max_sweeps && n > 1 && scale > 0.0; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const cd gamma = col_dot(i, j);
        const double alpha = col_dot(i, i).real();
        const double beta = col_dot(j, j).real();
        const double mag = std::abs(gamma);
        if (mag <= stop * std::sqrt(alpha * beta) || mag < 1e-300) continue;
        rotated = true;
        const double tau = (alpha - beta) / (2.0 * mag);
        const double root = std::sqrt(tau * tau + 1.0);
        const double t = tau >= 0.0 ? -1.0 / (tau + root) : 1.0 / (root - tau);
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const cd s = (t * c) * (gamma / mag);
        for (std::size_t r = 0; r < m; ++r) {
          const cd xi = b(r, i), xj = b(r, j);
          b(r, i) = c * xi - std::conj(s) * xj;
          b(r, j) = s * xi + c * xj;
        }
      }
    }
    if (!rotated) break;
  }

  OneSidedResult out;
  out.sigma.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    double norm_sq = 0.0;
    for (std::size_t r = 0; r < m; ++r) norm_sq += std::norm(b(r, j));
    out.sigma[j] = std::sqrt(norm_sq);
  }
  out.b = std::move(b);
  return out;
}

}  // namespace

std::vector<double> singular_values(const ComplexMatrix& a) {
  OneSidedResult res =
      one_sided_jacobi(a.rows() >= a.cols() ? a : adjoint(a));
  std::sort(res.sigma.begin(), res.sigma.end(), std::greater<double>());
  return res.sigma;
}

ComplexMatrix range_basis(const ComplexMatrix& a, double rel_tol) {
  // columns of a span the range; orthogonalize them and keep the ones
  // whose singular value clears the threshold
  OneSidedResult res = one_sided_jacobi(a);
  std::vector<std::size_t> order(res.sigma.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x,
                                                   std::size_t y) {
    return res.sigma[x] > res.sigma[y];
  });
  const double smax = order.empty() ? 0.0 : res.sigma[order[0]];
  std::size_t rank = 0;
  for (std::size_t k : order) {
    if (smax > 0.0 && res.sigma[k] > rel_tol * smax) ++rank;
  }
  ComplexMatrix u(a.rows(), rank);
  for (std::size_t k = 0; k < rank; ++k) {
    const std::size_t col = order[k];
    for (std::size_t r = 0; r < a.rows(); ++r) {
      u(r, k) = res.b(r, col) / res.sigma[col];
    }
  }
  return u;
}

QRDecomposition householder_qr(const ComplexMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  if (m < n) throw DimensionMismatch("householder_qr: rows < cols");
  ComplexMatrix r = a;
  // reflectors: v stored per column, applied as (I - beta v v^H)
  std::vector<std::vector<cd>> vs(n);
  std::vector<double> betas(n, 0.0);

  for (std::size_t k = 0; k < n; ++k) {
    std::vector<cd> v(m - k);
    double xnorm_sq = 0.0;
    for (std::size_t i = k; i < m; ++i) {
      v[i - k] = r(i, k);
      xnorm_sq += std::norm(r(i, k));
    }
    const double xnorm = std::sqrt(xnorm_sq);
    if (xnorm < 1e-300) {
      betas[k] = 0.0;
      vs[k] = std::move(v);
      continue;
    }
    const cd x0 = v[0];
    const cd phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cd{1.0};
    const cd alpha = -phase * xnorm;
    v[0] -= alpha;
    double vnorm_sq = 0.0;
    for (const cd& z : v) vnorm_sq += std::norm(z);
    if (vnorm_sq < 1e-300) {
      betas[k] = 0.0;
      vs[k] = std::move(v);
      continue;
    }
    const double beta = 2.0 / vnorm_sq;
    // apply to trailing columns
    for (std::size_t j = k; j < n; ++j) {
      cd dot = 0.0;
      for (std::size_t i = k; i < m; ++i) dot += std::conj(v[i - k]) * r(i, j);
      dot *= beta;
      for (std::size_t i = k; i < m; ++i) r(i, j) -= dot * v[i - k];
    }
    betas[k] = beta;
    vs[k] = std::move(v);
  }

  // Q = H_0 ... H_{n-1} applied to the first n columns of the identity
  ComplexMatrix q(m, n);
  for (std::size_t j = 0; j < n; ++j) q(j, j) = 1.0;
  for (std::size_t k = n; k-- > 0;) {
    if (betas[k] == 0.0) continue;
    const auto& v = vs[k];
    for (std::size_t j = 0; j < n; ++j) {
      cd dot = 0.0;
      for (std::size_t i = k; i < m; ++i) dot += std::conj(v[i - k]) * q(i, j);
      dot *= betas[k];
      for (std::size_t i = k; i < m; ++i) q(i, j) -= dot * v[i - k];
    }
  }

  QRDecomposition out;
  out.q = std::move(q);
  out.r = ComplexMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) out.r(i, j) = r(i, j);
  }
  return out;
}

ComplexMatrix upper_triangular_solve(const ComplexMatrix& r,
                                     const ComplexMatrix& b) {
  const std::size_t n = r.rows();
  if (!r.is_square() || b.rows() != n) {
    throw DimensionMismatch("upper_triangular_solve: shape mismatch");
  }
  ComplexMatrix x = b;
  for (std::size_t col = 0; col < b.cols(); ++col) {
    for (std::size_t i = n; i-- > 0;) {
      cd acc = x(i, col);
      for (std::size_t j = i + 1; j < n; ++j) acc -= r(i, j) * x(j, col);
      const cd piv = r(i, i);
      if (std::abs(piv) < 1e-300) {
        throw NotInvertible("upper_triangular_solve: zero pivot");
      }
      x(i, col) = acc / piv;
    }
  }
  return x;
}

namespace {

struct LuFactors {
  ComplexMatrix lu;
  std::vector<std::size_t> perm;  // row permutation
};

LuFactors lu_factor(const ComplexMatrix& a) {
  if (!a.is_square()) throw DimensionMismatch("lu: matrix must be square");
  const std::size_t n = a.rows();
  LuFactors f{a, std::vector<std::size_t>(n)};
  std::iota(f.perm.begin(), f.perm.end(), 0);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(f.lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(f.lu(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best < 1e-300) throw NotInvertible("lu: singular matrix");
    if (piv != k) {
      std::swap(f.perm[k], f.perm[piv]);
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(f.lu(k, j), f.lu(piv, j));
      }
    }
    const cd pivot = f.lu(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const cd m = f.lu(i, k) / pivot;
      f.lu(i, k) = m;
      for (std::size_t j = k + 1; j < n; ++j) f.lu(i, j) -= m * f.lu(k, j);
    }
  }
  return f;
}

ComplexMatrix lu_apply_solve(const LuFactors& f, const ComplexMatrix& b) {
  const std::size_t n = f.lu.rows();
  ComplexMatrix x(n, b.cols());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) x(i, j) = b(f.perm[i], j);
  }
  // forward
  for (std::size_t col = 0; col < b.cols(); ++col) {
    for (std::size_t i = 1; i < n; ++i) {
      cd acc = x(i, col);
      for (std::size_t j = 0; j < i; ++j) acc -= f.lu(i, j) * x(j, col);
      x(i, col) = acc;
    }
    // back
    for (std::size_t i = n; i-- > 0;) {
      cd acc = x(i, col);
      for (std::size_t j = i + 1; j < n; ++j) acc -= f.lu(i, j) * x(j, col);
      x(i, col) = acc / f.lu(i, i);
    }
  }
  return x;
}

}  // namespace

ComplexMatrix lu_solve(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows()) throw DimensionMismatch("lu_solve: shape mismatch");
  return lu_apply_solve(lu_factor(a), b);
}

InverseResult invert_matrix(const ComplexMatrix& a) {
  const LuFactors f = lu_factor(a);
  const ComplexMatrix inv =
      lu_apply_solve(f, ComplexMatrix::identity(a.rows()));
  InverseResult out{inv, a.frobenius_norm() * inv.frobenius_norm()};
  return out;
}

ComplexMatrix orthonormalize_columns(const ComplexMatrix& b, double drop_tol,
                                     std::vector<std::size_t>* kept_indices) {
  const std::size_t m = b.rows();
  std::vector<std::vector<cd>> q;
  std::vector<std::size_t> kept;
  for (std::size_t col = 0; col < b.cols(); ++col) {
    std::vector<cd> v(m);
    for (std::size_t i = 0; i < m; ++i) v[i] = b(i, col);
    const double orig = std::sqrt(kernels::norm2sq(v.data(), m));
    if (orig < 1e-300) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : q) {
        const cd proj = kernels::dot_conj(u.data(), v.data(), m);
        kernels::axpby(1.0, v.data(), -proj, u.data(), v.data(), m);
      }
    }
    const double rem = std::sqrt(kernels::norm2sq(v.data(), m));
    if (rem <= drop_tol * orig) continue;
    kernels::scale(1.0 / rem, v.data(), v.data(), m);
    q.push_back(std::move(v));
    kept.push_back(col);
  }
  ComplexMatrix out(m, q.size());
  for (std::size_t j = 0; j < q.size(); ++j) {
    for (std::size_t i = 0; i < m; ++i) out(i, j) = q[j][i];
  }
  if (kept_indices) *kept_indices = std::move(kept);
  return out;
}

double subspace_gap(const ComplexMatrix& u, const ComplexMatrix& v) {
  if (u.rows() != v.rows()) {
    throw DimensionMismatch("subspace_gap: ambient dimensions disagree");
  }
  const ComplexMatrix pu = u * adjoint(u);
  const ComplexMatrix pv = v * adjoint(v);
  return operator_norm(pu - pv);
}

}  // namespace rbc
