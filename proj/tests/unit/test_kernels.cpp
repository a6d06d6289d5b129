#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mot/kernels.hpp"
#include "mot/measure.hpp"

using namespace mot;
namespace k = mot::kernels;

namespace {
std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

std::vector<k::Isa> vector_isas() {
  std::vector<k::Isa> out;
  for (auto isa : {k::Isa::avx2, k::Isa::neon})
    if (k::isa_available(isa)) out.push_back(isa);
  return out;
}

// Per-ISA entry points; only the variants compiled for this architecture are reachable.
double variant_sum(k::Isa isa, const double* a, const double* b, const double* w, std::size_t n, unsigned p) {
#if defined(__x86_64__) || defined(_M_X64)
  if (isa == k::Isa::avx2) return k::avx2::weighted_abs_pow_sum(a, b, w, n, p);
#endif
#if defined(__aarch64__)
  if (isa == k::Isa::neon) return k::neon::weighted_abs_pow_sum(a, b, w, n, p);
#endif
  return k::scalar::weighted_abs_pow_sum(a, b, w, n, p);
}

void variant_row(k::Isa isa, double x, const double* ys, std::size_t n, unsigned p, double* out) {
#if defined(__x86_64__) || defined(_M_X64)
  if (isa == k::Isa::avx2) return k::avx2::abs_pow_diff(x, ys, n, p, out);
#endif
#if defined(__aarch64__)
  if (isa == k::Isa::neon) return k::neon::abs_pow_diff(x, ys, n, p, out);
#endif
  k::scalar::abs_pow_diff(x, ys, n, p, out);
}

double variant_residual(k::Isa isa, const double* qa, const double* fa, const double* qb, const double* fb,
                        const double* fc, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
  if (isa == k::Isa::avx2) return k::avx2::max_abs_residual(qa, fa, qb, fb, fc, n);
#endif
#if defined(__aarch64__)
  if (isa == k::Isa::neon) return k::neon::max_abs_residual(qa, fa, qb, fb, fc, n);
#endif
  return k::scalar::max_abs_residual(qa, fa, qb, fb, fc, n);
}

// Restores the runtime choice after a test forces an ISA.
struct IsaGuard {
  k::Isa saved = k::active_isa();
  ~IsaGuard() { k::select_isa(saved); }
};
}  // namespace

TEST(Kernels, ScalarReferenceByHand) {
  const double a[] = {0.0, 1.0, -2.0};
  const double b[] = {1.0, 1.0, 1.0};
  const double w[] = {0.5, 0.25, 0.25};
  // 0.5 * 1 + 0 + 0.25 * 9
  EXPECT_DOUBLE_EQ(k::scalar::weighted_abs_pow_sum(a, b, w, 3, 2), 2.75);
  double out[3];
  k::scalar::abs_pow_diff(1.0, a, 3, 3, out);
  EXPECT_DOUBLE_EQ(out[2], 27.0);
}

TEST(Kernels, ScalarIsAlwaysAvailable) {
  EXPECT_TRUE(k::isa_available(k::Isa::scalar));
  IsaGuard guard;
  EXPECT_NO_THROW(k::select_isa(k::Isa::scalar));
  EXPECT_EQ(k::active_isa(), k::Isa::scalar);
  for (auto isa : {k::Isa::avx2, k::Isa::neon})
    if (!k::isa_available(isa)) EXPECT_THROW(k::select_isa(isa), ParameterError);
}

TEST(Kernels, VectorVariantsMatchScalar) {
  std::mt19937_64 rng(71);
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 64u, 1001u}) {
    const auto a = random_vec(rng, n, -3, 3), b = random_vec(rng, n, -3, 3), w = random_vec(rng, n, 0, 1);
    const auto c = random_vec(rng, n, 0, 1), d = random_vec(rng, n, 0, 1), e = random_vec(rng, n, 0, 1);
    for (unsigned p : {1u, 2u, 3u, 5u}) {
      const double ref = k::scalar::weighted_abs_pow_sum(a.data(), b.data(), w.data(), n, p);
      std::vector<double> ref_row(n), row(n);
      if (n > 0) k::scalar::abs_pow_diff(0.5, b.data(), n, p, ref_row.data());
      for (auto isa : vector_isas()) {
        const double got = variant_sum(isa, a.data(), b.data(), w.data(), n, p);
        EXPECT_NEAR(got, ref, 1e-12 * (1.0 + std::fabs(ref))) << k::isa_name(isa) << " n=" << n << " p=" << p;
        if (n == 0) continue;
        variant_row(isa, 0.5, b.data(), n, p, row.data());
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(row[i], ref_row[i], 1e-12 * (1.0 + ref_row[i]));
      }
    }
    const double ref = k::scalar::max_abs_residual(a.data(), c.data(), d.data(), e.data(), w.data(), n);
    for (auto isa : vector_isas()) {
      const double got = variant_residual(isa, a.data(), c.data(), d.data(), e.data(), w.data(), n);
      EXPECT_DOUBLE_EQ(got, ref);
    }
  }
}

TEST(Kernels, DispatchedEntryPointsAgreeAcrossIsas) {
  std::mt19937_64 rng(72);
  const std::size_t n = 257;
  const auto a = random_vec(rng, n, -2, 2), b = random_vec(rng, n, -2, 2), w = random_vec(rng, n, 0, 1);
  IsaGuard guard;
  k::select_isa(k::Isa::scalar);
  const double ref_int = k::weighted_abs_pow_sum(a.data(), b.data(), w.data(), n, Exponent(2));
  const double ref_real = k::weighted_abs_pow_sum(a.data(), b.data(), w.data(), n, Exponent::real(1.5));
  double direct = 0.0;
  for (std::size_t i = 0; i < n; ++i) direct += w[i] * std::pow(std::fabs(a[i] - b[i]), 1.5);
  EXPECT_NEAR(ref_real, direct, 1e-12);
  for (auto isa : vector_isas()) {
    k::select_isa(isa);
    EXPECT_NEAR(k::weighted_abs_pow_sum(a.data(), b.data(), w.data(), n, Exponent(2)), ref_int, 1e-12);
    EXPECT_NEAR(k::weighted_abs_pow_sum(a.data(), b.data(), w.data(), n, Exponent::real(1.5)), ref_real, 1e-12);
  }
}

TEST(Kernels, ApproxWassersteinUsesTheSameValue) {
  const DiscreteMeasure<double> a({{-1.0, 0.25}, {0.0, 0.5}, {1.0, 0.25}});
  const DiscreteMeasure<double> b({{-2.0, 0.25}, {-1.0, 0.25}, {1.0, 0.25}, {2.0, 0.25}});
  IsaGuard guard;
  for (auto isa : {k::Isa::scalar, k::Isa::avx2, k::Isa::neon}) {
    if (!k::isa_available(isa)) continue;
    k::select_isa(isa);
    EXPECT_DOUBLE_EQ(wasserstein_pow(a, b, Exponent(2)), 1.0);
  }
}
