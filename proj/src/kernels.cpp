#include "mot/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

namespace mot::kernels {

namespace scalar {

namespace {
inline double ipow(double d, unsigned p) {
  double r = d;
  for (unsigned k = 1; k < p; ++k) r *= d;
  return r;
}
}  // namespace

double weighted_abs_pow_sum(const double* a, const double* b, const double* w, std::size_t n, unsigned p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * ipow(std::fabs(a[i] - b[i]), p);
  return acc;
}

void abs_pow_diff(double x, const double* ys, std::size_t n, unsigned p, double* out) {
  for (std::size_t j = 0; j < n; ++j) out[j] = ipow(std::fabs(x - ys[j]), p);
}

double max_abs_residual(const double* qa, const double* fa, const double* qb, const double* fb,
                        const double* fc, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    m = std::max(m, std::fabs(qa[i] * fa[i] + (1.0 - qb[i]) * fb[i] - fc[i]));
  return m;
}

}  // namespace scalar

namespace {

Isa detect() {
#if defined(__x86_64__) || defined(_M_X64)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::avx2;
#elif defined(__aarch64__)
  return Isa::neon;
#endif
  return Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
    default:
      return "scalar";
  }
}

bool isa_available(Isa isa) {
  if (isa == Isa::scalar) return true;
  return isa == detect();
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void select_isa(Isa isa) {
  if (!isa_available(isa)) throw ParameterError(std::string("instruction set not available: ") + isa_name(isa));
  current().store(isa, std::memory_order_relaxed);
}

double weighted_abs_pow_sum(const double* a, const double* b, const double* w, std::size_t n,
                            const Exponent& rho) {
  if (!rho.is_integer()) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * std::pow(std::fabs(a[i] - b[i]), rho.value());
    return acc;
  }
  switch (active_isa()) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::avx2:
      return avx2::weighted_abs_pow_sum(a, b, w, n, rho.integer());
#endif
#if defined(__aarch64__)
    case Isa::neon:
      return neon::weighted_abs_pow_sum(a, b, w, n, rho.integer());
#endif
    default:
      return scalar::weighted_abs_pow_sum(a, b, w, n, rho.integer());
  }
}

void abs_pow_diff(double x, const double* ys, std::size_t n, const Exponent& rho, double* out) {
  if (!rho.is_integer()) {
    for (std::size_t j = 0; j < n; ++j) out[j] = std::pow(std::fabs(x - ys[j]), rho.value());
    return;
  }
  switch (active_isa()) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::avx2:
      return avx2::abs_pow_diff(x, ys, n, rho.integer(), out);
#endif
#if defined(__aarch64__)
    case Isa::neon:
      return neon::abs_pow_diff(x, ys, n, rho.integer(), out);
#endif
    default:
      return scalar::abs_pow_diff(x, ys, n, rho.integer(), out);
  }
}

double max_abs_residual(const double* qa, const double* fa, const double* qb, const double* fb,
                        const double* fc, std::size_t n) {
  switch (active_isa()) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::avx2:
      return avx2::max_abs_residual(qa, fa, qb, fb, fc, n);
#endif
#if defined(__aarch64__)
    case Isa::neon:
      return neon::max_abs_residual(qa, fa, qb, fb, fc, n);
#endif
    default:
      return scalar::max_abs_residual(qa, fa, qb, fb, fc, n);
  }
}

}  // namespace mot::kernels
