#include <gtest/gtest.h>

#include "mot/adapted.hpp"
#include "mot/itmc.hpp"
#include "random_instances.hpp"

using namespace mot;
using Q = Rational;

namespace {
Q r(long p, long q = 1) { return Q(p) / Q(q); }

DiscreteMeasure<Q> mu_a() { return DiscreteMeasure<Q>({{-1, r(1, 4)}, {0, r(1, 2)}, {1, r(1, 4)}}); }
DiscreteMeasure<Q> nu_a() { return DiscreteMeasure<Q>({{-2, r(1, 4)}, {-1, r(1, 4)}, {1, r(1, 4)}, {2, r(1, 4)}}); }
}  // namespace

TEST(AdaptedWasserstein, ZeroOnIdenticalCouplings) {
  const auto hf = hoeffding_frechet(mu_a(), nu_a());
  const auto res = adapted_wasserstein(hf, hf, Exponent(2));
  EXPECT_EQ(res.cost, r(0));
  EXPECT_EQ(res.distance, 0.0);
}

TEST(AdaptedWasserstein, ComonotoneVersusInverseTransform) {
  // Kernel distances 1, 1/3, 1 on the diagonal; any off-diagonal pairing costs at least 1 more.
  const auto res = adapted_wasserstein(hoeffding_frechet(mu_a(), nu_a()), itmc(mu_a(), nu_a()), Exponent(1));
  EXPECT_EQ(res.cost, r(2, 3));
  EXPECT_EQ(res.plan.mass(1, 1), r(1, 2));
}

TEST(AdaptedWasserstein, EquidistanceOfTheMartingaleCoupling) {
  const DiscreteMeasure<Q> mu({{-1, r(1, 2)}, {1, r(1, 2)}});
  const DiscreteMeasure<Q> nu({{-2, r(1, 2)}, {2, r(1, 2)}});
  const DiscreteCoupling<Q> m({{-1, -2, r(3, 8)}, {-1, 2, r(1, 8)}, {1, -2, r(1, 8)}, {1, 2, r(3, 8)}});
  ASSERT_TRUE(is_martingale(m));
  // W_2^2(d_{-2}, 3/4 d_{-2} + 1/4 d_2) = 16/4 on each atom.
  EXPECT_EQ(adapted_wasserstein(m, hoeffding_frechet(mu, nu), Exponent(2)).cost, r(4));
}

TEST(AdaptedWasserstein, DiracFirstMarginalReducesToKernelDistance) {
  const DiscreteCoupling<Q> a({{0, -1, r(1, 2)}, {0, 1, r(1, 2)}});
  const DiscreteCoupling<Q> b({{2, 3, r(1)}});
  // |0 - 2| + W_1(1/2(d_{-1} + d_1), d_3) = 2 + 3
  EXPECT_EQ(adapted_wasserstein(a, b, Exponent(1)).cost, r(5));
  // 4 + (16 + 4) / 2
  EXPECT_EQ(adapted_wasserstein(a, b, Exponent(2)).cost, r(14));
}

TEST(AdaptedWasserstein, SymmetryAndTriangleInequality) {
  mot::testing::Rng rng(41);
  for (int t = 0; t < 25; ++t) {
    const auto a = mot::testing::random_coupling(rng, 3, 3);
    const auto b = mot::testing::random_coupling(rng, 3, 3);
    const auto c = mot::testing::random_coupling(rng, 3, 3);
    const Q ab = adapted_wasserstein(a, b, Exponent(1)).cost;
    EXPECT_EQ(ab, adapted_wasserstein(b, a, Exponent(1)).cost);
    EXPECT_LE(ab, adapted_wasserstein(a, c, Exponent(1)).cost + adapted_wasserstein(c, b, Exponent(1)).cost);
    EXPECT_GE(ab, wasserstein_pow(a.first_marginal(), b.first_marginal(), Exponent(1)));
  }
}

TEST(NestedBruteForce, AgreesOnSmallInstances) {
  mot::testing::Rng rng(42);
  for (int t = 0; t < 15; ++t) {
    const auto a = mot::testing::random_coupling(rng, 3, 3);
    const auto b = mot::testing::random_coupling(rng, 3, 3);
    EXPECT_EQ(nested_wasserstein_bruteforce(a, b, Exponent(1)), adapted_wasserstein(a, b, Exponent(1)).cost);
  }
}

TEST(NestedBruteForce, RefusesLargeSupports) {
  std::vector<Point<Q>> pts;
  for (long i = 0; i < 6; ++i) pts.push_back({Q(i), Q(0), r(1, 6)});
  const DiscreteCoupling<Q> big(pts);
  EXPECT_THROW(nested_wasserstein_bruteforce(big, big, Exponent(1)), ScaleError);
}

TEST(LiftedAdapted, InverseTransformAgainstLiftedComonotone) {
  const auto hf = lifted_hoeffding_frechet(mu_a(), nu_a());
  const auto it = itmc_lifted(mu_a(), nu_a());
  // Identity in u costs the integral of |F_mu^{-1} - F_nu^{-1}|, which is W_1(mu, nu) = 1.
  EXPECT_EQ(lifted_diagonal_bound(hf, it, Exponent(1)), r(1));
  const auto res = lifted_adapted_wasserstein(hf, it, Exponent(1));
  EXPECT_LE(res.lower, res.value);
  EXPECT_LE(res.value, res.upper);
  EXPECT_LE(res.value, r(1));
  EXPECT_LE(lifted_segment_lower_bound(hf, it, Exponent(1)), res.value);
}

TEST(LiftedAdapted, IdenticalIsExactZero) {
  const auto hf = lifted_hoeffding_frechet(mu_a(), nu_a());
  const auto res = lifted_adapted_wasserstein(hf, hf, Exponent(2));
  EXPECT_TRUE(res.exact);
  EXPECT_EQ(res.value, r(0));
}

TEST(LiftedAdapted, DominatesCollapsedDistance) {
  mot::testing::Rng rng(43);
  for (int t = 0; t < 15; ++t) {
    const auto [mu, nu] = mot::testing::random_convex_pair(rng, 5);
    const auto a = lifted_hoeffding_frechet(mu, nu);
    const auto b = itmc_lifted(mu, nu);
    const auto res = lifted_adapted_wasserstein(a, b, Exponent(1));
    EXPECT_LE(res.lower, res.upper);
    EXPECT_LE(adapted_wasserstein(collapse(a), collapse(b), Exponent(1)).cost, res.upper);
  }
}

TEST(RhoEquivalence, ConstantAndSeparatedSequences) {
  const auto hf = hoeffding_frechet(mu_a(), nu_a());
  const auto it = itmc(mu_a(), nu_a());
  const auto same = aw_rho_equivalence_check(std::vector{hf, hf}, hf, Exponent(2));
  EXPECT_TRUE(same.aw_rho_vanishes);
  EXPECT_TRUE(same.consistent());
  const auto apart = aw_rho_equivalence_check(std::vector{it, it}, hf, Exponent(2));
  EXPECT_FALSE(apart.aw_rho_vanishes);
  EXPECT_TRUE(apart.consistent());
}
