#include <gtest/gtest.h>

#include "hubbard_rg/rgflow.hpp"

using namespace hrg;

namespace {
constexpr double gam = 2.0;
const FermiPoint fermi = FermiPoint::make(pi / 3, gam);
}  // namespace

TEST(Bubble, Constant) {
  double a = bubble_constant(fermi, gam);
  EXPECT_NEAR(a, 0.25476804628189603, 1e-15);
  EXPECT_NEAR(a, 0.254839, 1e-4);
  EXPECT_NEAR(bubble_constant(1.0, std::exp(1.0)), 1 / pi, 1e-15);
}

TEST(Flow, InitialCouplings) {
  auto c = initial_couplings(0.02, InteractionPotential::uv(1.0, 0.5), fermi);
  EXPECT_NEAR(c.g1.real(), 0.04 * (1 + 0.5 * std::cos(2 * pi / 3)), 1e-15);
  EXPECT_NEAR(c.g2.real(), 0.04 * 1.5, 1e-15);
  EXPECT_EQ(c.g2, c.g4);
  EXPECT_EQ(c.delta, cplx(0));
}

TEST(Flow, TruncatedIdentities) {
  for (double lam : {0.01, 0.05}) {
    auto t = run_flow(flow_input(lam, InteractionPotential::onsite(), fermi, gam), BetaConfig{}, -3000);
    const auto& s = t.v.front();
    for (const auto& c : t.v) {
      EXPECT_NEAR(std::abs((c.g2 - s.g2) - (c.g1 - s.g1) / 2.0), 0.0, 1e-12);
      EXPECT_EQ(c.g4, s.g4);
      EXPECT_EQ(c.delta, s.delta);
    }
    EXPECT_TRUE(t.all_pass());
  }
}

TEST(Flow, ThresholdScale) {
  auto in = flow_input(0.02, InteractionPotential::onsite(), fermi, gam);
  auto t = run_flow(in, BetaConfig{}, -100);
  EXPECT_EQ(t.j0, -25);
  EXPECT_LT(threshold_j0(0.0, 0.2), -1000000);
}

TEST(Flow, FixedPointNearFirstOrder) {
  for (double lam : {0.01, 0.02}) {
    auto v = InteractionPotential::uv(1.0, 0.5);
    auto t = run_flow(flow_input(lam, v, fermi, gam), BetaConfig{}, -5000);
    auto lim = fixed_point_values(t);
    EXPECT_LE(std::abs(lim.g2.real() - g2_limit_first_order(lam, v, fermi)), 3 * std::pow(lam, 1.5));
    EXPECT_EQ(lim.g4.real(), g4_limit_first_order(lam, v));
    EXPECT_EQ(lim.g1, cplx(0));
  }
}

TEST(Flow, FixedPointNeedsConvergedTail) {
  auto in = flow_input(0.02, InteractionPotential::onsite(), fermi, gam);
  EXPECT_THROW(fixed_point_values(run_flow(in, BetaConfig{}, -5)), numeric_error);
  EXPECT_THROW(fixed_point_values(run_flow(in, BetaConfig{}, -40)), numeric_error);
  EXPECT_THROW(run_flow(in, BetaConfig{}, 3), config_error);
}

TEST(Flow, RemainderModelsPassChecks) {
  auto in = flow_input(0.02, InteractionPotential::onsite(), fermi, gam);
  for (auto model : {RemainderModel::theta_tail, RemainderModel::finite_size, RemainderModel::both})
    for (auto draw : {RemainderDraw::random, RemainderDraw::worst}) {
      BetaConfig cfg;
      cfg.remainder_model = model;
      cfg.draw = draw;
      cfg.h_lbeta = -2100;
      cfg.a_mode = AMode::finite_scale;
      auto t = run_flow(in, cfg, -2000);
      for (const auto& c : t.checks) EXPECT_TRUE(c.pass) << c.name << " measured " << c.measured;
      EXPECT_FALSE(t.escaped_at.has_value());
    }
}

TEST(Flow, SeedDeterminism) {
  auto in = flow_input(0.02, InteractionPotential::onsite(), fermi, gam);
  BetaConfig cfg;
  cfg.remainder_model = RemainderModel::both;
  cfg.h_lbeta = -600;
  cfg.seed = 42;
  auto x = run_flow(in, cfg, -500), y = run_flow(in, cfg, -500);
  ASSERT_EQ(x.v.size(), y.v.size());
  for (std::size_t i = 0; i < x.v.size(); ++i) EXPECT_EQ(x.v[i].g1, y.v[i].g1);
  cfg.seed = 43;
  auto z = run_flow(in, cfg, -500);
  EXPECT_NE(x.v.back().g1, z.v.back().g1);
}

TEST(Flow, FiniteScaleBubble) {
  BetaConfig cfg;
  cfg.a_mode = AMode::finite_scale;
  cfg.h_lbeta = -10;
  EXPECT_NEAR(bubble_at_scale(1.0, -9, cfg), 0.5, 1e-15);
  EXPECT_NEAR(bubble_at_scale(1.0, 0, cfg), 1 - std::pow(2.0, -10), 1e-15);
  cfg.a_mode = AMode::exact_limit;
  EXPECT_EQ(bubble_at_scale(1.0, -9, cfg), 1.0);
}

TEST(Flow, ParseRemainderModel) {
  EXPECT_EQ(parse_remainder_model("both"), RemainderModel::both);
  EXPECT_EQ(parse_remainder_model("none"), RemainderModel::none);
  EXPECT_THROW(parse_remainder_model("tail"), config_error);
}

TEST(Borel, ComplexRayStaysBounded) {
  auto r = probe_flow(std::polar(0.02, 0.7 * (pi - pi / 4)), -3000, InteractionPotential::onsite(), fermi, BetaConfig{});
  EXPECT_TRUE(r.bounded);
  EXPECT_LE(r.max_eps_ratio, 2 * FlowConstants{}.c3);
}

TEST(Borel, RepulsiveOnsiteEscapes) {
  auto r = probe_flow(-0.02, -2000, InteractionPotential::onsite(), fermi, BetaConfig{});
  EXPECT_FALSE(r.bounded);
  ASSERT_TRUE(r.escaped_at.has_value());
  EXPECT_GT(r.g1_growth, 1.0);
}

TEST(Borel, DiskRadiusAndChain) {
  double a = bubble_constant(fermi, gam);
  EXPECT_NEAR(borel_disk_radius(a), 1 / (8 * a), 1e-15);
  EXPECT_NEAR(borel_disk_radius(a), 0.49064, 1e-5);
  double peak = 0;
  EXPECT_TRUE(smallness_chain(0.9 * borel_disk_radius(a) / 201, a, 200, &peak));
  EXPECT_GT(peak, 0.9 * borel_disk_radius(a) / 201);
  EXPECT_FALSE(smallness_chain(0.5, a, 200));
}

TEST(LogSums, GapsAndSplit) {
  const double lam = 0.05;
  auto in = flow_input(lam, InteractionPotential::onsite(), fermi, gam);
  auto head = run_flow(in, BetaConfig{}, -100);
  int h = scale_for_log_argument(100, head.at(head.j0).g1, head.j0, in.a);
  auto t = run_flow(in, BetaConfig{}, h - 20);
  auto lim = fixed_point_values(t);
  auto r = log_sum_lemma(t, lam, lim);
  double worst = 0;
  for (const auto& p : r.points)
    if (p.h >= h) worst = std::max({worst, std::abs(p.gap1), std::abs(p.gap2)});
  EXPECT_LE(worst, 2 * std::sqrt(lam));
  EXPECT_LE(r.points.front().log_arg, 1.0);
  EXPECT_GE(r.points.back().log_arg, 100.0);
  EXPECT_TRUE(std::isfinite(r.wb1_constant));
  EXPECT_NEAR(in.a * std::abs(t.at(t.j0).g1) * (t.j0 - r.h_ref), 1.0, in.a * std::abs(t.at(t.j0).g1));
}
