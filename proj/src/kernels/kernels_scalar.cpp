// Scalar reference kernels. Compiled with -ffp-contract=off so results do
// not depend on compiler FMA contraction; the SIMD variants are compared
// against these in the equivalence tests.

#include "rbc/kernels.hpp"

namespace rbc::kernels {
namespace {

// Arithmetic is spelled out on the interleaved doubles rather than through
// std::complex operator* so the reference path stays free of libc complex
// helper calls.

void axpby_scalar(cd alpha, const cd* x, cd beta, const cd* y, cd* z,
                  std::size_t n) {
  const double ar = alpha.real(), ai = alpha.imag();
  const double br = beta.real(), bi = beta.imag();
  const double* xd = reinterpret_cast<const double*>(x);
  const double* yd = reinterpret_cast<const double*>(y);
  double* zd = reinterpret_cast<double*>(z);
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = xd[2 * i], xi = xd[2 * i + 1];
    const double yr = yd[2 * i], yi = yd[2 * i + 1];
    zd[2 * i] = (ar * xr - ai * xi) + (br * yr - bi * yi);
    zd[2 * i + 1] = (ar * xi + ai * xr) + (br * yi + bi * yr);
  }
}

void scale_scalar(cd alpha, const cd* x, cd* z, std::size_t n) {
  const double ar = alpha.real(), ai = alpha.imag();
  const double* xd = reinterpret_cast<const double*>(x);
  double* zd = reinterpret_cast<double*>(z);
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = xd[2 * i], xi = xd[2 * i + 1];
    zd[2 * i] = ar * xr - ai * xi;
    zd[2 * i + 1] = ar * xi + ai * xr;
  }
}

cd dot_conj_scalar(const cd* x, const cd* y, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  const double* yd = reinterpret_cast<const double*>(y);
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = xd[2 * i], xi = xd[2 * i + 1];
    const double yr = yd[2 * i], yi = yd[2 * i + 1];
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

double norm2sq_scalar(const cd* x, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  double acc = 0.0;
  for (std::size_t i = 0; i < 2 * n; ++i) acc += xd[i] * xd[i];
  return acc;
}

void matmul_scalar(const cd* a, const cd* b, cd* c, std::size_t m,
                   std::size_t k, std::size_t n) {
  const double* ad = reinterpret_cast<const double*>(a);
  const double* bd = reinterpret_cast<const double*>(b);
  double* cd_ = reinterpret_cast<double*>(c);
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = cd_ + 2 * i * n;
    for (std::size_t j = 0; j < 2 * n; ++j) crow[j] = 0.0;
    for (std::size_t l = 0; l < k; ++l) {
      const double ar = ad[2 * (i * k + l)];
      const double ai = ad[2 * (i * k + l) + 1];
      const double* brow = bd + 2 * l * n;
      for (std::size_t j = 0; j < n; ++j) {
        const double br = brow[2 * j], bi = brow[2 * j + 1];
        crow[2 * j] += ar * br - ai * bi;
        crow[2 * j + 1] += ar * bi + ai * br;
      }
    }
  }
}

void rotate_rows_scalar(cd* x, cd* y, double c, cd s, std::size_t n) {
  const double sr = s.real(), si = s.imag();
  double* xd = reinterpret_cast<double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = xd[2 * i], xi = xd[2 * i + 1];
    const double yr = yd[2 * i], yi = yd[2 * i + 1];
    xd[2 * i] = c * xr - (sr * yr - si * yi);
    xd[2 * i + 1] = c * xi - (sr * yi + si * yr);
    yd[2 * i] = (sr * xr + si * xi) + c * yr;
    yd[2 * i + 1] = (sr * xi - si * xr) + c * yi;
  }
}

}  // namespace

namespace detail {

const KernelTable scalar_table = {
    axpby_scalar,  scale_scalar,  dot_conj_scalar,
    norm2sq_scalar, matmul_scalar, rotate_rows_scalar,
};

}  // namespace detail
}  // namespace rbc::kernels
