#include <gtest/gtest.h>

#include "hubbard_rg/oracle.hpp"

using namespace hrg;

TEST(G1Map, SingleStep) {
  auto s = iterate(0.1, CoefficientSequence(0.25, SigmaModel::zero, 0), 1);
  EXPECT_NEAR(s.g[1].real(), 0.0975, 1e-15);
  EXPECT_EQ(s.g[1].imag(), 0.0);
}

TEST(G1Map, ApproximantFormula) {
  EXPECT_EQ(approximant(0.1, 0.25, 0), cplx(0.1));
  EXPECT_NEAR(std::abs(approximant(cplx(0.01, 0.02), 0.3, 50) - cplx(0.01, 0.02) / (1.0 + cplx(0.01, 0.02) * 15.0)),
              0.0, 1e-16);
}

TEST(G1Map, SectorExampleNearTheEdge) {
  const double delta = pi / 4;
  SectorDomain D{default_epsilon0(delta), delta};
  cplx g0 = std::polar(0.5 * D.epsilon, 3 * pi / 4);
  auto s = iterate(g0, CoefficientSequence(0.25, SigmaModel::zero, 0), 10000);
  auto r = verify_sector(s, D);
  EXPECT_TRUE(r.map_inside);
  EXPECT_TRUE(r.approximant_inside);
  EXPECT_TRUE(verify_closeness(s).pass);
  EXPECT_TRUE(verify_denominator(s, delta));
}

TEST(G1Map, RealAxisDecaysLikeOneOverN) {
  const double a = 0.25;
  auto s = iterate(1e-3, CoefficientSequence(a, SigmaModel::zero, 0), 1000000);
  for (std::size_t n = 1; n < s.g.size(); n *= 10) EXPECT_LT(s.g[n].real(), s.g[n - 1].real());
  const double n = double(s.g.size() - 1);
  EXPECT_NEAR(n * s.g.back().real(), 1 / a, 0.01 / a);
  EXPECT_TRUE(verify_closeness(s).pass);
  auto [sum, cont] = square_sums(s);
  EXPECT_NEAR(sum / cont, 1.0, 1e-2);
}

TEST(G1Map, RandomPerturbationsStayClose) {
  const double eps = 1e-2, delta = pi / 4, a = 0.25, c0 = a / (2 * eps);
  SectorDomain D{eps, delta};
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> ur(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    double r = eps * std::sqrt(ur(rng)), th = (pi - delta) * (2 * ur(rng) - 1);
    cplx g0 = std::polar(r, th);
    auto s = iterate(g0, CoefficientSequence(a, SigmaModel::random_disk, c0 * r, 100 + trial), 2000);
    EXPECT_TRUE(verify_sector(s, D).map_inside) << trial;
    EXPECT_TRUE(verify_closeness(s).pass) << trial;
    EXPECT_TRUE(verify_averages(s, c0)) << trial;
  }
}

TEST(G1Map, ConstantPerturbationLongRun) {
  const double eps = 1e-2, delta = pi / 4, a = 0.25, c0 = a / (2 * eps);
  cplx g0 = std::polar(0.5 * eps, 2.0);
  auto s = iterate(g0, CoefficientSequence(a, SigmaModel::constant, c0 * std::abs(g0)), 100000, SectorDomain{eps, delta});
  EXPECT_FALSE(s.escape.has_value());
  EXPECT_TRUE(verify_closeness(s).pass);
  EXPECT_TRUE(verify_averages(s, c0));
  EXPECT_NEAR(std::abs(s.A.back() - (a + c0 * std::abs(g0))), 0.0, 1e-12);
}

TEST(G1Map, SeededSequencesRepeat) {
  CoefficientSequence x(0.25, SigmaModel::random_disk, 0.1, 9), y(0.25, SigmaModel::random_disk, 0.1, 9);
  for (int i = 0; i < 50; ++i) {
    cplx a = x.next(), b = y.next();
    EXPECT_EQ(a, b);
    EXPECT_LE(std::abs(a - 0.25), 0.1 + 1e-15);
  }
  CoefficientSequence alt(0.25, SigmaModel::alternating, 0.1);
  EXPECT_EQ(alt.next(), cplx(0.35));
  EXPECT_EQ(alt.next(), cplx(0.15));
}

TEST(G1Map, ExtendedPrecisionAgrees) {
  cplx g0 = std::polar(4e-3, 1.1);
  auto s = iterate(g0, CoefficientSequence(0.25, SigmaModel::random_disk, 0.05 * std::abs(g0), 4), 20000);
  auto ref = iterate_extended(g0, s.a_seq);
  ASSERT_EQ(ref.size(), s.g.size());
  double worst = 0;
  for (std::size_t n = 0; n < ref.size(); ++n) {
    std::complex<double> r(double(ref[n].real()), double(ref[n].imag()));
    worst = std::max(worst, std::abs(s.g[n] - r) / std::abs(r));
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(SectorDomain, Containment) {
  SectorDomain D{1e-2, pi / 4};
  EXPECT_TRUE(D.contains(std::polar(5e-3, 3 * pi / 4)));
  EXPECT_FALSE(D.contains(std::polar(5e-3, 3 * pi / 4 + 0.01)));
  EXPECT_FALSE(D.contains(2e-2));
  EXPECT_NEAR(D.map_domain().delta, pi / 16, 1e-15);
  EXPECT_NEAR(D.approximant_domain().epsilon, 2e-2 / std::sin(pi / 4), 1e-15);
}
