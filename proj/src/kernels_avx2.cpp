// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "mot/kernels.hpp"

namespace mot::kernels::avx2 {

namespace {

inline __m256d vabs(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

inline __m256d vpow(__m256d d, unsigned p) {
  __m256d r = d;
  for (unsigned k = 1; k < p; ++k) r = _mm256_mul_pd(r, d);
  return r;
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_max_sd(lo, sh));
}

}  // namespace

double weighted_abs_pow_sum(const double* a, const double* b, const double* w, std::size_t n, unsigned p) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = vabs(_mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), vpow(d, p), acc);
  }
  double s = hsum(acc);
  return s + scalar::weighted_abs_pow_sum(a + i, b + i, w + i, n - i, p);
}

void abs_pow_diff(double x, const double* ys, std::size_t n, unsigned p, double* out) {
  const __m256d vx = _mm256_set1_pd(x);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4)
    _mm256_storeu_pd(out + j, vpow(vabs(_mm256_sub_pd(vx, _mm256_loadu_pd(ys + j))), p));
  scalar::abs_pow_diff(x, ys + j, n - j, p, out + j);
}

double max_abs_residual(const double* qa, const double* fa, const double* qb, const double* fb,
                        const double* fc, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d t = _mm256_mul_pd(_mm256_loadu_pd(qa + i), _mm256_loadu_pd(fa + i));
    __m256d u = _mm256_mul_pd(_mm256_sub_pd(one, _mm256_loadu_pd(qb + i)), _mm256_loadu_pd(fb + i));
    __m256d r = _mm256_sub_pd(_mm256_add_pd(t, u), _mm256_loadu_pd(fc + i));
    m = _mm256_max_pd(m, vabs(r));
  }
  return std::max(hmax(m), scalar::max_abs_residual(qa + i, fa + i, qb + i, fb + i, fc + i, n - i));
}

}  // namespace mot::kernels::avx2
