// AVX2+FMA kernel variants. One __m256d holds two interleaved complex
// doubles; complex products use the permute/fmaddsub pattern. Remainders
// fall through to scalar tails with the same arithmetic.

#if defined(RBC_HAVE_AVX2)

#include <immintrin.h>

#include "rbc/kernels.hpp"

namespace rbc::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// (ar + i*ai) * b for two packed complexes in b.
inline __m256d cmul(__m256d ar, __m256d ai, __m256d b) {
  const __m256d t = _mm256_mul_pd(ai, _mm256_permute_pd(b, 0x5));
  return _mm256_fmaddsub_pd(ar, b, t);
}

void axpby_avx2(cd alpha, const cd* x, cd beta, const cd* y, cd* z,
                std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  const __m256d br = _mm256_set1_pd(beta.real());
  const __m256d bi = _mm256_set1_pd(beta.imag());
  const double* xd = reinterpret_cast<const double*>(x);
  const double* yd = reinterpret_cast<const double*>(y);
  double* zd = reinterpret_cast<double*>(z);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    _mm256_storeu_pd(zd + 2 * i,
                     _mm256_add_pd(cmul(ar, ai, xv), cmul(br, bi, yv)));
  }
  for (; i < n; ++i) {
    const double xr = xd[2 * i], xi_ = xd[2 * i + 1];
    const double yr = yd[2 * i], yi = yd[2 * i + 1];
    zd[2 * i] = (alpha.real() * xr - alpha.imag() * xi_) +
                (beta.real() * yr - beta.imag() * yi);
    zd[2 * i + 1] = (alpha.real() * xi_ + alpha.imag() * xr) +
                    (beta.real() * yi + beta.imag() * yr);
  }
}

void scale_avx2(cd alpha, const cd* x, cd* z, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  const double* xd = reinterpret_cast<const double*>(x);
  double* zd = reinterpret_cast<double*>(z);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    _mm256_storeu_pd(zd + 2 * i, cmul(ar, ai, _mm256_loadu_pd(xd + 2 * i)));
  }
  for (; i < n; ++i) {
    const double xr = xd[2 * i], xi_ = xd[2 * i + 1];
    zd[2 * i] = alpha.real() * xr - alpha.imag() * xi_;
    zd[2 * i + 1] = alpha.real() * xi_ + alpha.imag() * xr;
  }
}

cd dot_conj_avx2(const cd* x, const cd* y, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  const double* yd = reinterpret_cast<const double*>(y);
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    acc_re = _mm256_fmadd_pd(xv, yv, acc_re);
    // even lanes -xi*yr, odd lanes +xr*yi
    acc_im = _mm256_addsub_pd(acc_im,
                              _mm256_mul_pd(_mm256_permute_pd(xv, 0x5), yv));
  }
  double re = hsum(acc_re);
  double im = hsum(acc_im);
  for (; i < n; ++i) {
    const double xr = xd[2 * i], xi_ = xd[2 * i + 1];
    const double yr = yd[2 * i], yi = yd[2 * i + 1];
    re += xr * yr + xi_ * yi;
    im += xr * yi - xi_ * yr;
  }
  return {re, im};
}

double norm2sq_avx2(const cd* x, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= 2 * n; i += 4) {
    const __m256d v = _mm256_loadu_pd(xd + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double out = hsum(acc);
  for (; i < 2 * n; ++i) out += xd[i] * xd[i];
  return out;
}

void matmul_avx2(const cd* a, const cd* b, cd* c, std::size_t m, std::size_t k,
                 std::size_t n) {
  const double* ad = reinterpret_cast<const double*>(a);
  const double* bd = reinterpret_cast<const double*>(b);
  double* cd_ = reinterpret_cast<double*>(c);
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = cd_ + 2 * i * n;
    std::size_t j = 0;
    // 4-complex tiles kept in registers across the k loop
    for (; j + 4 <= n; j += 4) {
      __m256d acc0 = _mm256_setzero_pd();
      __m256d acc1 = _mm256_setzero_pd();
      for (std::size_t l = 0; l < k; ++l) {
        const __m256d ar = _mm256_set1_pd(ad[2 * (i * k + l)]);
        const __m256d ai = _mm256_set1_pd(ad[2 * (i * k + l) + 1]);
        const double* bp = bd + 2 * (l * n + j);
        acc0 = _mm256_add_pd(acc0, cmul(ar, ai, _mm256_loadu_pd(bp)));
        acc1 = _mm256_add_pd(acc1, cmul(ar, ai, _mm256_loadu_pd(bp + 4)));
      }
      _mm256_storeu_pd(crow + 2 * j, acc0);
      _mm256_storeu_pd(crow + 2 * j + 4, acc1);
    }
    for (; j + 2 <= n; j += 2) {
      __m256d acc = _mm256_setzero_pd();
      for (std::size_t l = 0; l < k; ++l) {
        const __m256d ar = _mm256_set1_pd(ad[2 * (i * k + l)]);
        const __m256d ai = _mm256_set1_pd(ad[2 * (i * k + l) + 1]);
        acc = _mm256_add_pd(
            acc, cmul(ar, ai, _mm256_loadu_pd(bd + 2 * (l * n + j))));
      }
      _mm256_storeu_pd(crow + 2 * j, acc);
    }
    for (; j < n; ++j) {
      double sr = 0.0, si = 0.0;
      for (std::size_t l = 0; l < k; ++l) {
        const double ar = ad[2 * (i * k + l)], ai = ad[2 * (i * k + l) + 1];
        const double br = bd[2 * (l * n + j)], bi = bd[2 * (l * n + j) + 1];
        sr += ar * br - ai * bi;
        si += ar * bi + ai * br;
      }
      crow[2 * j] = sr;
      crow[2 * j + 1] = si;
    }
  }
}

void rotate_rows_avx2(cd* x, cd* y, double c, cd s, std::size_t n) {
  const __m256d cv = _mm256_set1_pd(c);
  const __m256d sr = _mm256_set1_pd(s.real());
  const __m256d si = _mm256_set1_pd(s.imag());
  double* xd = reinterpret_cast<double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    const __m256d sy = cmul(sr, si, yv);
    // conj(s)*x: even lanes sr*xr + si*xi, odd lanes sr*xi - si*xr
    const __m256d csx = _mm256_fmsubadd_pd(
        sr, xv, _mm256_mul_pd(si, _mm256_permute_pd(xv, 0x5)));
    _mm256_storeu_pd(xd + 2 * i, _mm256_fmsub_pd(cv, xv, sy));
    _mm256_storeu_pd(yd + 2 * i, _mm256_fmadd_pd(cv, yv, csx));
  }
  for (; i < n; ++i) {
    const double xr = xd[2 * i], xi_ = xd[2 * i + 1];
    const double yr = yd[2 * i], yi = yd[2 * i + 1];
    xd[2 * i] = c * xr - (s.real() * yr - s.imag() * yi);
    xd[2 * i + 1] = c * xi_ - (s.real() * yi + s.imag() * yr);
    yd[2 * i] = (s.real() * xr + s.imag() * xi_) + c * yr;
    yd[2 * i + 1] = (s.real() * xi_ - s.imag() * xr) + c * yi;
  }
}

}  // namespace

namespace detail {

const KernelTable avx2_table = {
    axpby_avx2,  scale_avx2,  dot_conj_avx2,
    norm2sq_avx2, matmul_avx2, rotate_rows_avx2,
};

}  // namespace detail
}  // namespace rbc::kernels

#endif  // RBC_HAVE_AVX2
