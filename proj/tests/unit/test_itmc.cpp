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
DiscreteMeasure<Q> mu_b() { return DiscreteMeasure<Q>({{-2, r(1, 2)}, {2, r(1, 2)}}); }
DiscreteMeasure<Q> nu_b() { return DiscreteMeasure<Q>({{-4, r(1, 3)}, {-1, r(1, 6)}, {1, r(1, 6)}, {4, r(1, 3)}}); }

Intervals<Q> merged(const Intervals<Q>& iv) {
  Intervals<Q> out;
  for (const auto& p : iv) {
    if (!out.empty() && out.back().second == p.first)
      out.back().second = p.second;
    else
      out.push_back(p);
  }
  return out;
}

void expect_rearrangement_properties(const LiftedCoupling<Q>& lifted, const DiscreteMeasure<Q>& mu,
                                     const DiscreteMeasure<Q>& nu) {
  const auto m = collapse(lifted);
  EXPECT_EQ(m.first_marginal(), mu);
  EXPECT_EQ(m.second_marginal(), nu);
  EXPECT_TRUE(is_martingale(m));
  EXPECT_TRUE(lifted.is_martingale());
}
}  // namespace

TEST(Psi, EqualMarginalsAreTrivial) {
  const auto sys = build_psi(mu_a(), mu_a());
  EXPECT_EQ(sys.total, r(0));
  EXPECT_TRUE(sys.u_plus.empty());
  EXPECT_EQ(merged(sys.u_zero), (Intervals<Q>{{r(0), r(1)}}));
  EXPECT_EQ(sys.phi(r(1, 3)), r(1, 3));
}

TEST(Psi, FirstExampleMatchingIsHalfShift) {
  const auto sys = build_psi(mu_a(), nu_a());
  EXPECT_EQ(sys.total, r(1, 2));
  EXPECT_EQ(sys.psi_plus(r(1)), sys.psi_minus(r(1)));
  EXPECT_EQ(sys.phi(r(1, 8)), r(5, 8));
  EXPECT_EQ(sys.phi(r(3, 8)), r(7, 8));
  EXPECT_EQ(sys.phi(r(3, 4)), r(1, 4));
  EXPECT_EQ(merged(sys.u_plus), (Intervals<Q>{{r(0), r(1, 2)}}));
}

TEST(Psi, SecondExampleSignSets) {
  const auto sys = build_psi(mu_b(), nu_b());
  EXPECT_EQ(merged(sys.u_plus), (Intervals<Q>{{r(0), r(1, 3)}, {r(1, 2), r(2, 3)}}));
  EXPECT_EQ(merged(sys.u_minus), (Intervals<Q>{{r(1, 3), r(1, 2)}, {r(2, 3), r(1)}}));
  EXPECT_TRUE(sys.u_zero.empty());
}

TEST(Psi, MatchingIsAnInvolutionMovingRightOnPlus) {
  mot::testing::Rng rng(51);
  for (int t = 0; t < 40; ++t) {
    const auto [mu, nu] = mot::testing::random_convex_pair(rng, 6);
    const auto sys = build_psi(mu, nu);
    EXPECT_EQ(sys.psi_plus(r(1)), sys.psi_minus(r(1)));
    for (std::size_t i = 0; i < sys.pieces(); ++i) {
      const Q u = (sys.breaks[i] + sys.breaks[i + 1]) / 2;
      if (sys.sign[i] == Sign::zero) continue;
      EXPECT_EQ(sys.phi(sys.phi(u)), u);
      if (sys.sign[i] == Sign::plus) EXPECT_GT(sys.phi(u), u);
      if (sys.sign[i] == Sign::minus) EXPECT_LT(sys.phi(u), u);
    }
  }
}

TEST(Psi, UnequalMeansRejected) {
  EXPECT_THROW(build_psi(mu_a(), DiscreteMeasure<Q>::dirac(r(1))), OrderError);
}

TEST(Itmc, FirstPieceKernelOfFirstExample) {
  const auto lifted = itmc_kernel(build_psi(mu_a(), nu_a()));
  // p = (-1 - (-2)) / (1 - (-2)) = 1/3 on (0, 1/4].
  EXPECT_EQ(lifted.at(r(1, 8)).kernel, DiscreteMeasure<Q>({{-2, r(2, 3)}, {1, r(1, 3)}}));
  EXPECT_EQ(lifted.at(r(1, 8)).x, r(-1));
}

TEST(Itmc, FirstExampleCollapsed) {
  const DiscreteCoupling<Q> want({{-1, -2, r(1, 6)},
                                  {-1, 1, r(1, 12)},
                                  {0, -2, r(1, 12)},
                                  {0, -1, r(1, 6)},
                                  {0, 1, r(1, 6)},
                                  {0, 2, r(1, 12)},
                                  {1, -1, r(1, 12)},
                                  {1, 2, r(1, 6)}});
  EXPECT_EQ(itmc(mu_a(), nu_a()), want);
}

TEST(Itmc, EqualMarginalsGiveDiagonal) {
  EXPECT_EQ(itmc(nu_a(), nu_a()), diagonal_coupling(nu_a()));
  EXPECT_THROW(itmc(nu_a(), mu_a()), OrderError);
}

TEST(Itmc, DoubleModeMatchesExact) {
  std::vector<Atom<double>> m, n;
  const auto mu = mu_b(), nu = nu_b();
  for (const auto& a : mu.atoms()) m.push_back({num::to_double(a.x), num::to_double(a.w)});
  for (const auto& a : nu.atoms()) n.push_back({num::to_double(a.x), num::to_double(a.w)});
  const auto approx = itmc(DiscreteMeasure<double>(m), DiscreteMeasure<double>(n));
  const auto exact = itmc(mu_b(), nu_b());
  ASSERT_EQ(approx.size(), exact.size());
  for (std::size_t i = 0; i < exact.size(); ++i) EXPECT_NEAR(approx.points()[i].w, num::to_double(exact.points()[i].w), 1e-12);
}

TEST(QMeasure, InverseTransformQReproducesItmc) {
  mot::testing::Rng rng(52);
  for (int t = 0; t < 30; ++t) {
    const auto [mu, nu] = mot::testing::random_convex_pair(rng, 6);
    const auto sys = build_psi(mu, nu);
    EXPECT_EQ(collapse(mq_kernel(itmc_q(sys), mu, nu)), collapse(itmc_kernel(sys)));
  }
}

TEST(QMeasure, RandomAdmissibleQGivesMartingaleCouplings) {
  mot::testing::Rng rng(53);
  for (int t = 0; t < 40; ++t) {
    const auto [mu, nu] = mot::testing::random_convex_pair(rng, 6);
    const auto sys = build_psi(mu, nu);
    const auto q = mot::testing::random_q(rng, sys);
    EXPECT_NO_THROW(validate_q(q, mu, nu));
    const auto lifted = mq_kernel(q, mu, nu);
    expect_rearrangement_properties(lifted, mu, nu);
    // Each kernel averages |y - F_nu^{-1}(u)| to |F_mu^{-1}(u) - F_nu^{-1}(u)|.
    for (std::size_t i = 0; i < sys.pieces(); ++i) {
      const Q u = (sys.breaks[i] + sys.breaks[i + 1]) / 2;
      Q lhs(0);
      for (const auto& a : lifted.at(u).kernel.atoms()) lhs += a.w * num::abs(a.x - sys.qnu[i]);
      EXPECT_EQ(lhs, num::abs(sys.qmu[i] - sys.qnu[i]));
    }
  }
}

TEST(QMeasure, ValidationRejectsBadBlocks) {
  const auto sys = build_psi(mu_a(), nu_a());
  auto q = itmc_q(sys);
  EXPECT_NO_THROW(validate_q(q, mu_a(), nu_a()));
  auto swapped = q;
  std::swap(swapped.blocks.front().u, swapped.blocks.front().v);
  EXPECT_THROW(validate_q(swapped, mu_a(), nu_a()), ParameterError);
  auto heavy = q;
  heavy.blocks.front().mass += r(1, 10);
  EXPECT_THROW(validate_q(heavy, mu_a(), nu_a()), ParameterError);
  auto self = q;
  self.blocks.front().v = self.blocks.front().u;
  EXPECT_THROW(validate_q(self, mu_a(), nu_a()), ParameterError);
}

TEST(QRearrangement, FirstExampleMatchesDirectRearrangement) {
  const auto m = collapse(mq_kernel(build_Q_rearrangement(mu_a(), nu_a()), mu_a(), nu_a()));
  const DiscreteCoupling<Q> want({{-1, -2, r(3, 16)},
                                  {-1, 2, r(1, 16)},
                                  {0, -1, r(1, 4)},
                                  {0, 1, r(1, 4)},
                                  {1, -2, r(1, 16)},
                                  {1, 2, r(3, 16)}});
  EXPECT_EQ(m, want);
}

TEST(QRearrangement, SecondExampleBothChoices) {
  const DiscreteCoupling<Q> want({{-2, -4, r(13, 48)},
                                  {-2, -1, r(1, 6)},
                                  {-2, 4, r(1, 16)},
                                  {2, -4, r(1, 16)},
                                  {2, 1, r(1, 6)},
                                  {2, 4, r(13, 48)}});
  for (auto choice : {QxChoice::monotone, QxChoice::product}) {
    const auto m = collapse(mq_kernel(build_Q_rearrangement(mu_b(), nu_b(), choice), mu_b(), nu_b()));
    EXPECT_EQ(m, want);
  }
}

TEST(QRearrangement, ConstantSignOnJumpsGivesInverseTransform) {
  const DiscreteMeasure<Q> mu({{-1, r(1, 2)}, {1, r(1, 2)}});
  const DiscreteMeasure<Q> nu({{-3, r(1, 4)}, {-2, r(1, 4)}, {2, r(1, 4)}, {3, r(1, 4)}});
  const auto m = collapse(mq_kernel(build_Q_rearrangement(mu, nu), mu, nu));
  EXPECT_EQ(m, itmc(mu, nu));
}

TEST(QRearrangement, AttainsBarycentreBoundOnRandomPairs) {
  mot::testing::Rng rng(54);
  for (int t = 0; t < 40; ++t) {
    const auto [mu, nu] = mot::testing::random_convex_pair(rng, 6);
    const auto hf = hoeffding_frechet(mu, nu);
    const auto mono = mq_kernel(build_Q_rearrangement(mu, nu), mu, nu);
    const auto prod = mq_kernel(build_Q_rearrangement(mu, nu, QxChoice::product), mu, nu);
    expect_rearrangement_properties(mono, mu, nu);
    EXPECT_EQ(collapse(mono), collapse(prod));
    EXPECT_EQ(adapted_wasserstein(hf, collapse(mono), Exponent(1)).cost, barycentre_deviation(hf));
  }
}

TEST(QRearrangement, EqualMarginalsRejected) {
  EXPECT_THROW(build_Q_rearrangement(mu_a(), mu_a()), DomainError);
}
