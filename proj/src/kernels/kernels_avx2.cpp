// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "mmtrain/kernels.hpp"

namespace mmtrain::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline const double* as_doubles(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(cplx* p) { return reinterpret_cast<double*>(p); }

}  // namespace

double sum_abs2(const cplx* x, std::size_t n) {
  const double* d = as_doubles(x);
  const std::size_t len = 2 * n;
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= len; i += 8) {
    const __m256d v0 = _mm256_loadu_pd(d + i);
    const __m256d v1 = _mm256_loadu_pd(d + i + 4);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    acc1 = _mm256_fmadd_pd(v1, v1, acc1);
  }
  for (; i + 4 <= len; i += 4) {
    const __m256d v = _mm256_loadu_pd(d + i);
    acc0 = _mm256_fmadd_pd(v, v, acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < len; ++i) acc += d[i] * d[i];
  return acc;
}

void matvec(const cplx* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y) {
  const double* xd = as_doubles(x);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = as_doubles(a + r * cols);
    // direct = [ar*xr, ai*xi, ...], cross = [ar*xi, ai*xr, ...]
    __m256d direct = _mm256_setzero_pd();
    __m256d cross = _mm256_setzero_pd();
    std::size_t c = 0;
    for (; c + 2 <= cols; c += 2) {
      const __m256d av = _mm256_loadu_pd(row + 2 * c);
      const __m256d xv = _mm256_loadu_pd(xd + 2 * c);
      const __m256d xs = _mm256_permute_pd(xv, 0b0101);
      direct = _mm256_fmadd_pd(av, xv, direct);
      cross = _mm256_fmadd_pd(av, xs, cross);
    }
    alignas(32) double dv[4];
    alignas(32) double cv[4];
    _mm256_store_pd(dv, direct);
    _mm256_store_pd(cv, cross);
    double re = (dv[0] + dv[2]) - (dv[1] + dv[3]);
    double im = (cv[0] + cv[2]) + (cv[1] + cv[3]);
    for (; c < cols; ++c) {
      const double ar = row[2 * c];
      const double ai = row[2 * c + 1];
      re += ar * xd[2 * c] - ai * xd[2 * c + 1];
      im += ar * xd[2 * c + 1] + ai * xd[2 * c];
    }
    y[r] = {re, im};
  }
}

void matvec_adjoint(const cplx* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y) {
  double* yd = as_doubles(y);
  for (std::size_t c = 0; c < cols; ++c) y[c] = {0.0, 0.0};
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = as_doubles(a + r * cols);
    const double sr = x[r].real();
    const double si = x[r].imag();
    // conj(a)*s: re = ar*sr + ai*si, im = ar*si - ai*sr
    const __m256d re_w = _mm256_setr_pd(sr, si, sr, si);
    const __m256d im_w = _mm256_setr_pd(si, -sr, si, -sr);
    std::size_t c = 0;
    for (; c + 2 <= cols; c += 2) {
      const __m256d av = _mm256_loadu_pd(row + 2 * c);
      const __m256d p = _mm256_mul_pd(av, re_w);
      const __m256d q = _mm256_mul_pd(av, im_w);
      const __m256d sum = _mm256_hadd_pd(p, q);
      _mm256_storeu_pd(yd + 2 * c, _mm256_add_pd(_mm256_loadu_pd(yd + 2 * c), sum));
    }
    for (; c < cols; ++c) {
      const double ar = row[2 * c];
      const double ai = row[2 * c + 1];
      yd[2 * c] += ar * sr + ai * si;
      yd[2 * c + 1] += ar * si - ai * sr;
    }
  }
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    _mm256_storeu_pd(y + i + 4,
                     _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
  }
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace mmtrain::kernels::avx2
