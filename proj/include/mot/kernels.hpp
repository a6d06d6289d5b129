#pragma once

#include <cstddef>

#include "mot/scalar.hpp"

// Double-precision inner loops with a scalar reference and vector variants chosen at runtime.
namespace mot::kernels {

enum class Isa { scalar, avx2, neon };

const char* isa_name(Isa isa);
bool isa_available(Isa isa);
Isa active_isa();
// Overrides the runtime choice; throws ParameterError when the ISA is not available.
void select_isa(Isa isa);

// sum_i w[i] * |a[i] - b[i]|^rho
double weighted_abs_pow_sum(const double* a, const double* b, const double* w, std::size_t n,
                            const Exponent& rho);
// out[j] = |x - ys[j]|^rho
void abs_pow_diff(double x, const double* ys, std::size_t n, const Exponent& rho, double* out);
// max_i |qa[i]*fa[i] + (1 - qb[i])*fb[i] - fc[i]|
double max_abs_residual(const double* qa, const double* fa, const double* qb, const double* fb,
                        const double* fc, std::size_t n);

namespace scalar {
double weighted_abs_pow_sum(const double* a, const double* b, const double* w, std::size_t n, unsigned p);
void abs_pow_diff(double x, const double* ys, std::size_t n, unsigned p, double* out);
double max_abs_residual(const double* qa, const double* fa, const double* qb, const double* fb,
                        const double* fc, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double weighted_abs_pow_sum(const double* a, const double* b, const double* w, std::size_t n, unsigned p);
void abs_pow_diff(double x, const double* ys, std::size_t n, unsigned p, double* out);
double max_abs_residual(const double* qa, const double* fa, const double* qb, const double* fb,
                        const double* fc, std::size_t n);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
double weighted_abs_pow_sum(const double* a, const double* b, const double* w, std::size_t n, unsigned p);
void abs_pow_diff(double x, const double* ys, std::size_t n, unsigned p, double* out);
double max_abs_residual(const double* qa, const double* fa, const double* qb, const double* fb,
                        const double* fc, std::size_t n);
}  // namespace neon
#endif

}  // namespace mot::kernels
