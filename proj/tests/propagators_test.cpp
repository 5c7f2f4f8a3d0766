#include <gtest/gtest.h>

#include <random>

#include "hubbard_rg/propagators.hpp"

using namespace hrg;

namespace {
constexpr double gam = 2.0;
}

TEST(FreeKernel, StableAtLargeBetaE) {
  for (double e : {-50.0, -1.0, 0.3, 80.0})
    for (double tau : {-999.0, -0.5, 0.0, 0.5, 999.0}) EXPECT_TRUE(std::isfinite(free_kernel(e, tau, 1000.0)));
  EXPECT_NEAR(free_kernel(0.1, 0.5, 10), 0.6954044310, 1e-9);
  // the jump at tau = 0 is one
  for (double e : {-0.4, 0.0, 0.7})
    EXPECT_NEAR(free_kernel_at_zero(e, 10, +1) - free_kernel_at_zero(e, 10, -1), 1.0, 1e-15);
}

TEST(FreePropagator, Antiperiodic) {
  FreePropagator P(0.5, 16, 32, gam);
  for (int x : {0, 3, -5})
    for (double x0 : {0.3, 4.0, -7.5}) {
      EXPECT_NEAR(P.kernel_sum(x, x0 + 16).real(), -P.kernel_sum(x, x0).real(), 1e-14);
      EXPECT_NEAR(P.cutoff_sum(x, x0 + 16, 8).real(), -P.cutoff_sum(x, x0, 8).real(), 1e-12);
    }
}

TEST(FreePropagator, EqualTimeIsLowerBranch) {
  FreePropagator P(0.5, 20, 24, gam);
  for (int x : {0, 1, 7}) EXPECT_NEAR(P.kernel_sum(x, 0.0).real(), P.kernel_sum_at_zero(x, -1).real(), 1e-15);
}

TEST(FreePropagator, CutoffRepresentationConverges) {
  FreePropagator P(0.5, 256, 256, gam);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> ux(-12, 12);
  std::uniform_real_distribution<double> ut(-3.0, 3.0);
  for (int i = 0; i < 10; ++i) {
    int x = ux(rng);
    double x0 = ut(rng);
    double k = P.kernel_sum(x, x0).real();
    double c8 = std::abs(k - P.cutoff_sum(x, x0, 8).real()) * std::pow(gam, 8);
    double d12 = std::abs(k - P.cutoff_sum(x, x0, 12).real());
    EXPECT_LE(d12, std::max(c8, 1e-12) * std::pow(gam, -12)) << x << ' ' << x0;
  }
}

TEST(FreePropagator, EqualPointHalfSum) {
  FreePropagator P(0.5, 256, 256, gam);
  double half = 0.5 * (P.kernel_sum_at_zero(0, 1) + P.kernel_sum_at_zero(0, -1)).real();
  EXPECT_NEAR(half, 0.5 - 1.0 / 3, 5e-3);
  double d10 = std::abs(P.cutoff_sum(0, 0.0, 10).real() - half);
  double d12 = std::abs(P.cutoff_sum(0, 0.0, 12).real() - half);
  EXPECT_LT(d12, d10);
  EXPECT_LT(d12, 1e-3);
}

TEST(GroundState, SpaceAxisIsExact) {
  const double pF = pi / 3;
  for (int x : {1, 2, 5, 17, 40}) EXPECT_NEAR(ground_state_propagator(x, 0.0, 0.5), -std::sin(pF * x) / (pi * x), 1e-12);
  auto f = FermiPoint::make(pF, gam);
  for (int x : {3, 11}) EXPECT_NEAR(free_asymptotic(x, 0.0, f).real(), -std::sin(pF * x) / (pi * x), 1e-15);
}

TEST(GroundState, MatchesLargeRing) {
  FreePropagator Q(0.5, 400, 2000, gam);
  EXPECT_NEAR(ground_state_propagator(7, -3.1, 0.5), Q.kernel_sum(7, -3.1).real(), 1e-4);
  EXPECT_NEAR(ground_state_propagator(20, 40, 0.5), Q.kernel_sum(20, 40).real(), 1e-5);
  EXPECT_NEAR(ground_state_propagator(0, 1e-9, 0.5) - ground_state_propagator(0, 0.0, 0.5), 1.0, 1e-6);
}

TEST(AppendixDelta, VanishingOddPartAtZero) {
  Cutoff chi(gam);
  for (int M : {6, 8, 10}) {
    double e = 0.4;
    cplx d = appendix_delta(0.0, M, e, 64, chi);
    EXPECT_LE(std::abs(d), 4 * std::pow(gam, -M)) << M;
  }
}

TEST(ScaleDecomposition, Telescoping) {
  const int L = 64;
  auto f = FermiPoint::make(pi / 3, gam, L).snapped(gam, L);
  ScaleDecomposition D(f, 64, L, gam, 8);
  FreePropagator Q(f.mu, 64, L, gam);
  for (auto [x, x0] : std::vector<std::pair<int, double>>{{3, 1.7}, {0, 0.3}, {10, -5.2}, {-7, 10.5}}) {
    double uv = 0;
    for (int h = 1; h <= 8; ++h) uv += D.uv_single_scale(h, x, x0);
    EXPECT_NEAR(uv, D.uv_total(x, x0), 1e-13);
    for (int w : {1, -1}) {
      cplx ir = 0;
      for (int h = D.lowest(); h <= 0; ++h) ir += D.ir_single_scale(h, w, x, x0);
      EXPECT_NEAR(std::abs(ir - D.ir_total(w, x, x0)), 0.0, 1e-14);
    }
    EXPECT_NEAR(D.recombined(x, x0).real(), Q.cutoff_sum(x, x0, 8).real(), 1e-13);
  }
}

TEST(ScaleDecomposition, OmegaSymmetry) {
  const int L = 256;
  auto f = FermiPoint::make(pi / 3, gam, L).snapped(gam, L);
  ScaleDecomposition D(f, L, L, gam, 8);
  for (int h : {-1, -3})
    for (auto [x, x0] : std::vector<std::pair<int, double>>{{3, 5.0}, {-10, 2.0}}) {
      cplx p = D.ir_single_scale(h, 1, x, x0), m = D.ir_single_scale(h, -1, -x, x0);
      EXPECT_NEAR(std::abs(p - m), 0.0, 1e-12);
    }
}

TEST(DiracProfile, SplineMatchesDirectQuadrature) {
  const auto& P = dirac_profile(gam);
  for (double s : {0.01, 0.5, 3.0, 20.0, 120.0}) EXPECT_NEAR(P.phi(s), P.direct(s), 1e-7) << s;
  EXPECT_EQ(&P, &dirac_profile(gam));
}

TEST(DiracProfile, ScaleSumApproachesFullPropagator) {
  const auto& P = dirac_profile(gam);
  auto f = FermiPoint::make(pi / 3, gam);
  double prev = INFINITY;
  for (double R : {10.0, 100.0, 1000.0}) {
    int x = static_cast<int>(R);
    double x0 = 0.37 * R;
    cplx s = 0;
    for (int h = 0; h >= -60; --h) s += P.single_scale(h, 1, x, x0, f);
    cplx full = 1.0 / (2 * pi * cplx(f.v_F * x0, x));
    double dev = std::abs(s / full - 1.0);
    EXPECT_LT(dev, prev);
    prev = dev;
  }
  EXPECT_LT(prev, 1e-4);
}

TEST(Gram, RegressionBaselines) {
  auto f = FermiPoint::make(pi / 3, gam);
  auto ir = gram_certify(-4, ScaleKind::ir, f, gam);
  EXPECT_NEAR(ir.normA2 / 6.3313222691e+02, 1.0, 1e-6);
  EXPECT_NEAR(ir.normB2 / 9.4253278374e-09, 1.0, 1e-6);
  EXPECT_NEAR(std::sqrt(ir.normA2 * ir.normB2), 2.442842e-03, 1e-8);
  auto uv = gram_certify(4, ScaleKind::uv, f, gam);
  EXPECT_NEAR(uv.normA2 / 5.7409467000e-05, 1.0, 1e-6);
  EXPECT_NEAR(uv.normB2 / 1.3323544608e+03, 1.0, 1e-6);
  EXPECT_THROW(gram_certify(1, ScaleKind::uv, f, gam), std::out_of_range);
}

TEST(Gram, ScalingSlopes) {
  auto f = FermiPoint::make(pi / 3, gam);
  const double lg = std::log(gam);
  std::vector<double> h, a, b;
  for (int k = -5; k >= -8; --k) {
    auto c = gram_certify(k, ScaleKind::ir, f, gam);
    h.push_back(k);
    a.push_back(std::log(c.normA2));
    b.push_back(std::log(c.normB2));
  }
  EXPECT_NEAR(fit_line(h, a).slope / lg, -2, 0.2);
  EXPECT_NEAR(fit_line(h, b).slope / lg, 4, 0.4);
}

TEST(UvScaleProfile, L1NormHalvesPerScale) {
  double l4 = UvScaleProfile(4, 0.5, gam).l1_norm(), l5 = UvScaleProfile(5, 0.5, gam).l1_norm();
  EXPECT_NEAR(l5 / l4, 0.5, 0.05);
  EXPECT_THROW(UvScaleProfile(1, 0.5, gam), std::out_of_range);
}
