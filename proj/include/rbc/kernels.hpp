#pragma once

// Complex double-precision inner-loop kernels.
//
// Every kernel has a scalar reference implementation and may have SIMD
// variants (AVX2 on x86-64). The active variant is picked once at startup
// from CPU features; RBC_KERNELS=scalar in the environment forces the
// reference path. All variants agree to roundoff and are equivalence-tested
// against the scalar reference.
//
// Layout: std::complex<double> arrays are addressed as interleaved
// (re, im) double pairs, which the C++ standard guarantees.

#include <complex>
#include <cstddef>

namespace rbc::kernels {

using cd = std::complex<double>;

enum class Backend { scalar, avx2 };

Backend active_backend();
const char* backend_name();

// Test hook. Returns false if the requested backend is unavailable.
bool force_backend(Backend backend);

// z[i] = alpha*x[i] + beta*y[i]
void axpby(cd alpha, const cd* x, cd beta, const cd* y, cd* z, std::size_t n);

// z[i] = alpha*x[i]
void scale(cd alpha, const cd* x, cd* z, std::size_t n);

// sum_i conj(x[i]) * y[i]
cd dot_conj(const cd* x, const cd* y, std::size_t n);

// sum_i |x[i]|^2
double norm2sq(const cd* x, std::size_t n);

// C = A*B, row-major, C is m x n, A is m x k, B is k x n. C must not alias.
void matmul(const cd* a, const cd* b, cd* c, std::size_t m, std::size_t k,
            std::size_t n);

// Unitary plane rotation of two length-n rows, c real:
//   x' = c*x - s*y
//   y' = conj(s)*x + c*y
void rotate_rows(cd* x, cd* y, double c, cd s, std::size_t n);

namespace detail {

struct KernelTable {
  void (*axpby)(cd, const cd*, cd, const cd*, cd*, std::size_t);
  void (*scale)(cd, const cd*, cd*, std::size_t);
  cd (*dot_conj)(const cd*, const cd*, std::size_t);
  double (*norm2sq)(const cd*, std::size_t);
  void (*matmul)(const cd*, const cd*, cd*, std::size_t, std::size_t,
                 std::size_t);
  void (*rotate_rows)(cd*, cd*, double, cd, std::size_t);
};

extern const KernelTable scalar_table;
#if defined(RBC_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif

}  // namespace detail

}  // namespace rbc::kernels
