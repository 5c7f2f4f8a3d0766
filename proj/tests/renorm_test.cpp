#include <gtest/gtest.h>

#include "hubbard_rg/renorm.hpp"

using namespace hrg;

namespace {

constexpr double gam = 2.0;

struct Run {
  double lambda;
  FermiPoint f = FermiPoint::make(pi / 3, gam);
  InteractionPotential v = InteractionPotential::onsite();
  FlowInput in;
  FlowTrajectory t;
  FixedPoint lim;
  int h = 0;

  explicit Run(double lam) : lambda(lam) {
    in = flow_input(lam, v, f, gam);
    BetaConfig cfg;
    int j0 = threshold_j0(in.start.g1, cfg.k.c4);
    auto head = run_flow(in, cfg, std::min(j0, -1));
    cplx g = head.at(j0).g1;
    h = std::min(-static_cast<int>(std::ceil(1e3 / (in.a * std::abs(g)))), scale_for_log_argument(1e3, g, j0, in.a));
    t = run_flow(in, cfg, h - 20);
    lim = fixed_point_values(t, 1e-5);
  }
  ExponentSet exps() const { return exponents(lim, f, lambda, v, in.a, t.at(t.j0).g1, gam); }
};

const Run& run05() {
  static const Run r(0.05);
  return r;
}

}  // namespace

TEST(Channels, CoefficientTable) {
  EXPECT_EQ(ratio_coefficients(Channel::C2).g1, -1.0);
  EXPECT_EQ(ratio_coefficients(Channel::C2).g2, 0.5);
  EXPECT_EQ(ratio_coefficients(Channel::S2).g1, 0.0);
  EXPECT_EQ(ratio_coefficients(Channel::SC2).g2, -0.5);
  EXPECT_EQ(ratio_coefficients(Channel::TC2).g1, 0.5);
  for (Channel c : {Channel::z, Channel::C1, Channel::S1, Channel::SC1}) {
    EXPECT_EQ(ratio_coefficients(c).g1, 0.0);
    EXPECT_EQ(ratio_coefficients(c).g2, 0.0);
    EXPECT_EQ(zeta_bar(c), 0.0);
  }
  // along the flow g2 - g2_lim tracks g1 / 2
  for (Channel c : oscillating_channels) {
    auto k = ratio_coefficients(c);
    EXPECT_EQ(k.g1 + k.g2 / 2, zeta_bar(c) / 2) << to_string(c);
  }
  EXPECT_EQ(to_string(Channel::TC2), "2TC");
}

TEST(ZFlow, ResidualsOffLeaveUniformChannelsFlat) {
  const auto& r = run05();
  auto R = z_flow(r.t, r.lim);
  for (Channel c : {Channel::z, Channel::C1, Channel::S1, Channel::SC1})
    for (int h : {0, -10, -1000, r.t.target()}) EXPECT_EQ(R.log_z(c, h), 0.0);
  EXPECT_EQ(R.target, r.t.target());
  EXPECT_EQ(R.zhat(Channel::C2, 0), 1.0);
}

TEST(ZFlow, LogCoefficientsApproachHalfZeta) {
  const auto& r = run05();
  auto R = z_flow(r.t, r.lim);
  for (Channel c : oscillating_channels) {
    double q = q_coefficient(R, c, r.h);
    EXPECT_NEAR(q, zeta_bar(c) / 2, 5 * r.lambda) << to_string(c);
  }
  EXPECT_THROW(q_coefficient(R, Channel::C2, 0), config_error);
}

TEST(ZFlow, EnvelopeResidualsAreSeeded) {
  const auto& r = run05();
  ResidualConfig rc;
  rc.mode = ResidualMode::envelope;
  rc.seed = 5;
  auto A = z_flow(r.t, r.lim, rc), B = z_flow(r.t, r.lim, rc);
  EXPECT_EQ(A.log_z(Channel::z, r.h), B.log_z(Channel::z, r.h));
  EXPECT_NE(A.log_z(Channel::z, r.h), 0.0);
  for (Channel c : oscillating_channels) EXPECT_NEAR(q_coefficient(A, c, r.h), zeta_bar(c) / 2, 5 * r.lambda);
}

TEST(Exponents, FrozenValues) {
  const auto& r = run05();
  auto e = r.exps();
  EXPECT_NEAR(e.eta(Channel::C2), 0.009188814923696444, 1e-9);
  EXPECT_EQ(e.eta(Channel::S2), e.eta(Channel::C2));
  EXPECT_EQ(e.eta(Channel::SC2), -e.eta(Channel::C2));
  EXPECT_NEAR(e.eta_z, 0.5 * e.eta(Channel::C2) * e.eta(Channel::C2), 1e-18);
  EXPECT_NEAR(e.c_linear, 0.18378, 1e-5);
  EXPECT_THROW(e.eta(Channel::z), std::out_of_range);
}

TEST(Exponents, ScalingRelations) {
  const auto& r = run05();
  auto e = r.exps();
  for (Channel c : oscillating_channels) EXPECT_NEAR(e.x(c), 1 - e.eta(c) - e.eta_z, 1e-15);
  // X_C = 1 - c lambda up to O(lambda^{3/2})
  EXPECT_NEAR(e.x(Channel::C2), 1 - e.c_linear * r.lambda, std::pow(r.lambda, 1.5));
  EXPECT_GT(e.f_lambda, 0.0);
  EXPECT_LT(e.f_lambda, e.f_first_order);
  EXPECT_NEAR(e.f_first_order, 2 * r.lambda / (pi * r.f.v_F), 1e-15);
}
