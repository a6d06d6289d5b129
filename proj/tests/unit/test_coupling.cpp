#include <gtest/gtest.h>

#include "mot/coupling.hpp"
#include "random_instances.hpp"

using namespace mot;
using Q = Rational;

namespace {
Q r(long p, long q = 1) { return Q(p) / Q(q); }

DiscreteMeasure<Q> mu_a() { return DiscreteMeasure<Q>({{-1, r(1, 4)}, {0, r(1, 2)}, {1, r(1, 4)}}); }
DiscreteMeasure<Q> nu_a() { return DiscreteMeasure<Q>({{-2, r(1, 4)}, {-1, r(1, 4)}, {1, r(1, 4)}, {2, r(1, 4)}}); }
DiscreteMeasure<Q> two_point(long a, long b) { return DiscreteMeasure<Q>({{a, r(1, 2)}, {b, r(1, 2)}}); }
}  // namespace

TEST(HoeffdingFrechet, FirstExample) {
  const auto hf = hoeffding_frechet(mu_a(), nu_a());
  const DiscreteCoupling<Q> want({{-1, -2, r(1, 4)}, {0, -1, r(1, 4)}, {0, 1, r(1, 4)}, {1, 2, r(1, 4)}});
  EXPECT_EQ(hf, want);
  EXPECT_EQ(hf.first_marginal(), mu_a());
  EXPECT_EQ(hf.second_marginal(), nu_a());
}

TEST(HoeffdingFrechet, SecondExample) {
  const DiscreteMeasure<Q> nu({{-4, r(1, 3)}, {-1, r(1, 6)}, {1, r(1, 6)}, {4, r(1, 3)}});
  const DiscreteCoupling<Q> want({{-2, -4, r(1, 3)}, {-2, -1, r(1, 6)}, {2, 1, r(1, 6)}, {2, 4, r(1, 3)}});
  EXPECT_EQ(hoeffding_frechet(two_point(-2, 2), nu), want);
}

TEST(Kernel, DisintegrateAndReassemble) {
  const auto hf = hoeffding_frechet(mu_a(), nu_a());
  const auto k = disintegrate(hf);
  ASSERT_EQ(k.size(), 3u);
  EXPECT_EQ(k.at(r(0)), two_point(-1, 1));
  EXPECT_EQ(k.at(r(-1)), DiscreteMeasure<Q>::dirac(r(-2)));
  EXPECT_THROW(k.at(r(5)), StructuralError);
  EXPECT_EQ(reassemble(mu_a(), k), hf);
  EXPECT_THROW(reassemble(two_point(-1, 1), k), StructuralError);
}

TEST(Coupling, ValidatesWeights) {
  EXPECT_THROW(DiscreteCoupling<Q>({{0, 0, r(1, 2)}}), StructuralError);
  EXPECT_THROW(DiscreteCoupling<Q>({{0, 0, r(3, 2)}, {0, 1, r(-1, 2)}}), StructuralError);
  const DiscreteCoupling<Q> merged({{0, 1, r(1, 2)}, {0, 1, r(1, 2)}});
  EXPECT_EQ(merged.size(), 1u);
}

TEST(Coupling, ProductAndDiagonal) {
  const auto p = product_coupling(mu_a(), nu_a());
  EXPECT_EQ(p.size(), 12u);
  EXPECT_EQ(p.first_marginal(), mu_a());
  EXPECT_EQ(p.second_marginal(), nu_a());
  const auto d = diagonal_coupling(nu_a());
  EXPECT_TRUE(is_martingale(d));
  EXPECT_TRUE(is_monge(d));
}

TEST(Coupling, MartingaleAndMongeFlags) {
  const DiscreteCoupling<Q> rearranged({{-1, -2, r(3, 16)},
                                        {-1, 2, r(1, 16)},
                                        {0, -1, r(1, 4)},
                                        {0, 1, r(1, 4)},
                                        {1, -2, r(1, 16)},
                                        {1, 2, r(3, 16)}});
  EXPECT_TRUE(is_martingale(rearranged));
  EXPECT_FALSE(is_monge(rearranged));
  const auto hf = hoeffding_frechet(mu_a(), nu_a());
  EXPECT_FALSE(is_martingale(hf));
  EXPECT_FALSE(is_monge(hf));
  EXPECT_TRUE(is_monge(hoeffding_frechet(two_point(-1, 1), two_point(-2, 2))));
}

TEST(Barycentre, DeviationOfFirstExample) {
  // Kernel means -2, 0, 2 against atoms -1, 0, 1 with weights 1/4, 1/2, 1/4.
  EXPECT_EQ(barycentre_deviation(hoeffding_frechet(mu_a(), nu_a())), r(1, 2));
}

TEST(Barycentre, AnticomonotoneFailsDispersion) {
  const DiscreteCoupling<Q> anti({{-1, 2, r(1, 2)}, {1, -2, r(1, 2)}});
  EXPECT_FALSE(bda_atom_scan(anti));
  EXPECT_FALSE(bda_delta_form(anti));
  EXPECT_FALSE(barycentre_dispersion(anti));
  EXPECT_TRUE(barycentre_dispersion(hoeffding_frechet(two_point(-1, 1), two_point(-2, 2))));
}

TEST(Barycentre, FormsAgreeOnRandomCouplings) {
  mot::testing::Rng rng(21);
  for (int t = 0; t < 60; ++t) {
    const auto bda = mot::testing::random_bda_coupling(rng, 5);
    EXPECT_TRUE(bda_atom_scan(bda));
    EXPECT_TRUE(bda_delta_form(bda));
    const auto [mu, nu] = mot::testing::random_convex_pair(rng, 6);
    EXPECT_TRUE(barycentre_dispersion(hoeffding_frechet(mu, nu)));
    const auto any = mot::testing::random_coupling(rng, 4, 4);
    if (mean(any.first_marginal()) == mean(any.second_marginal()))
      EXPECT_EQ(bda_atom_scan(any), bda_delta_form(any));
  }
}

TEST(Lifted, LiftCollapseRoundTrip) {
  const auto hf = hoeffding_frechet(mu_a(), nu_a());
  const auto lifted = lift(hf);
  ASSERT_EQ(lifted.size(), 3u);
  EXPECT_EQ(lifted.segments()[1].a, r(1, 4));
  EXPECT_EQ(lifted.segments()[1].b, r(3, 4));
  EXPECT_EQ(collapse(lifted), hf);
  EXPECT_EQ(lifted.first_marginal(), mu_a());
  EXPECT_EQ(lifted.second_marginal(), nu_a());
  EXPECT_FALSE(lifted.is_martingale());
}

TEST(Lifted, ComonotoneOnMergedPartition) {
  const auto l = lifted_hoeffding_frechet(mu_a(), nu_a());
  ASSERT_EQ(l.size(), 4u);
  EXPECT_EQ(l.at(r(1, 2)).kernel, DiscreteMeasure<Q>::dirac(r(-1)));
  EXPECT_EQ(l.at(r(1, 2) + r(1, 100)).kernel, DiscreteMeasure<Q>::dirac(r(1)));
  EXPECT_EQ(collapse(l), hoeffding_frechet(mu_a(), nu_a()));
  EXPECT_EQ(l.simplified().size(), 4u);
}

TEST(Lifted, RejectsBrokenPartitions) {
  const auto k = DiscreteMeasure<Q>::dirac(r(0));
  EXPECT_THROW(LiftedCoupling<Q>({{r(0), r(1, 2), r(0), k}}), StructuralError);
  EXPECT_THROW(LiftedCoupling<Q>({{r(0), r(1, 3), r(0), k}, {r(1, 2), r(1), r(0), k}}), StructuralError);
  EXPECT_THROW(LiftedCoupling<Q>({{r(0), r(1, 2), r(1), k}, {r(1, 2), r(1), r(0), k}}), StructuralError);
  const LiftedCoupling<Q> ok({{r(0), r(1, 2), r(0), k}, {r(1, 2), r(1), r(0), k}});
  EXPECT_EQ(ok.simplified().size(), 1u);
  EXPECT_TRUE(ok.is_martingale());
}
