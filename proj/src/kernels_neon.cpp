#if defined(__aarch64__)
#include <arm_neon.h>

#include <algorithm>

#include "mot/kernels.hpp"

namespace mot::kernels::neon {

namespace {
inline float64x2_t vpow(float64x2_t d, unsigned p) {
  float64x2_t r = d;
  for (unsigned k = 1; k < p; ++k) r = vmulq_f64(r, d);
  return r;
}
}  // namespace

double weighted_abs_pow_sum(const double* a, const double* b, const double* w, std::size_t n, unsigned p) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t d = vabsq_f64(vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    acc = vfmaq_f64(acc, vld1q_f64(w + i), vpow(d, p));
  }
  return vaddvq_f64(acc) + scalar::weighted_abs_pow_sum(a + i, b + i, w + i, n - i, p);
}

void abs_pow_diff(double x, const double* ys, std::size_t n, unsigned p, double* out) {
  const float64x2_t vx = vdupq_n_f64(x);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) vst1q_f64(out + j, vpow(vabsq_f64(vsubq_f64(vx, vld1q_f64(ys + j))), p));
  scalar::abs_pow_diff(x, ys + j, n - j, p, out + j);
}

double max_abs_residual(const double* qa, const double* fa, const double* qb, const double* fb,
                        const double* fc, std::size_t n) {
  const float64x2_t one = vdupq_n_f64(1.0);
  float64x2_t m = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t t = vmulq_f64(vld1q_f64(qa + i), vld1q_f64(fa + i));
    float64x2_t u = vmulq_f64(vsubq_f64(one, vld1q_f64(qb + i)), vld1q_f64(fb + i));
    m = vmaxq_f64(m, vabsq_f64(vsubq_f64(vaddq_f64(t, u), vld1q_f64(fc + i))));
  }
  return std::max(vmaxvq_f64(m), scalar::max_abs_residual(qa + i, fa + i, qb + i, fb + i, fc + i, n - i));
}

}  // namespace mot::kernels::neon
#endif
