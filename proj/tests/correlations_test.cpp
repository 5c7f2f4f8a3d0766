#include <gtest/gtest.h>

#include "hubbard_rg/oracle.hpp"

using namespace hrg;

namespace {

constexpr double gam = 2.0;
const FermiPoint fermi = FermiPoint::make(pi / 3, gam);

struct Interacting {
  double lambda = 0.03;
  InteractionPotential v = InteractionPotential::onsite();
  FlowTrajectory t;
  FixedPoint lim;
  ScaleWeights w;

  Interacting() {
    auto in = flow_input(lambda, v, fermi, gam);
    t = run_flow(in, BetaConfig{}, -20000);
    lim = fixed_point_values(t, 1e-5);
    w = ScaleWeights(z_flow(t, lim), exponents(lim, fermi, lambda, v, in.a, t.at(t.j0).g1, gam), gam);
  }
};

const Interacting& interacting() {
  static const Interacting s;
  return s;
}

}  // namespace

TEST(FreeAssembly, MatchesWickOnTimeAxis) {
  auto W0 = ScaleWeights::free(gam);
  auto gs = ground_state(fermi.mu);
  auto radii = geometric_radii(20, 200, 5);
  for (Response a : {Response::C, Response::SC}) {
    std::vector<double> res, lead;
    for (double r : radii) {
      auto p = time_axis_point(r, fermi);
      double exact = wick_free_response(p, a, gs);
      res.push_back(assemble_response(p, a, W0, fermi, gam).scale_sum.real() - exact);
      lead.push_back(exact);
    }
    EXPECT_LE(power_slope(radii, res) - power_slope(radii, lead), -1.0) << to_string(a);
  }
}

TEST(FreeAssembly, TripletClosedForm) {
  auto gs = ground_state(fermi.mu);
  auto p = time_axis_point(200, fermi);
  double tc = wick_free_response(p, Response::TC, gs);
  double closed = -fermi.v_F * fermi.v_F / (pi * pi * 200.0 * 200.0);
  EXPECT_NEAR(tc / closed, 1.0, 1e-3);
  EXPECT_NEAR(wick_free_response(p, Response::TC, gs, 1), tc / 2, 1e-18);
}

TEST(FreeAssembly, TwoPointMatchesGroundState) {
  auto W0 = ScaleWeights::free(gam);
  for (double r : {100.0, 400.0}) {
    auto p = time_axis_point(r, fermi);
    auto s = two_point(p, W0, fermi, gam);
    EXPECT_NEAR(s.scale_sum.real(), ground_state_propagator(p.x, p.x0, fermi.mu), 1e-2 / r);
    EXPECT_LE(s.rel_error, 1e-2);
  }
}

TEST(FreeAssembly, RejectsShortDistances) {
  auto W0 = ScaleWeights::free(gam);
  EXPECT_THROW(assemble_response({0, 0.5}, Response::C, W0, fermi, gam), config_error);
  EXPECT_THROW(two_point({0, 0.1}, W0, fermi, gam), config_error);
}

TEST(Spectrum, DominantFrequency) {
  const int N = 256;
  std::vector<double> s(N);
  const double w = 2 * pi * 37 / N;
  for (int i = 0; i < N; ++i) s[i] = 3 + std::cos(w * i + 0.4);
  EXPECT_NEAR(dominant_frequency(s), w, 1e-12);
  EXPECT_NEAR(fold_frequency(2 * pi / 3 * 2), 2 * pi / 3, 1e-15);
  EXPECT_NEAR(fold_frequency(-0.5), 0.5, 1e-15);
}

TEST(Spectrum, PowerSlope) {
  auto r = geometric_radii(1, 1000, 7);
  EXPECT_DOUBLE_EQ(r.front(), 1.0);
  EXPECT_NEAR(r.back(), 1000.0, 1e-9);
  std::vector<double> y;
  for (double x : r) y.push_back(-5 * std::pow(x, -1.7));
  EXPECT_NEAR(power_slope(r, y), -1.7, 1e-12);
}

TEST(InteractingAssembly, CloseToClosedForms) {
  const auto& s = interacting();
  for (double r : {1e2, 1e3})
    for (Response a : all_responses) {
      auto c = assemble_response(time_axis_point(r, fermi), a, s.w, fermi, gam);
      EXPECT_LE(c.rel_error, 10 * std::sqrt(s.lambda)) << to_string(a) << ' ' << r;
    }
  auto tp = two_point(time_axis_point(1e3, fermi), s.w, fermi, gam);
  EXPECT_LE(tp.rel_error, 1e-2);
}

TEST(InteractingAssembly, UniformPartDecaysWithExponentTwo) {
  const auto& s = interacting();
  auto radii = geometric_radii(1e2, 1e4, 5);
  std::vector<double> u;
  for (double r : radii)
    u.push_back(assemble_response(time_axis_point(r, fermi), Response::C, s.w, fermi, gam).non_oscillating.real());
  EXPECT_NEAR(-power_slope(radii, u), 2.0, 0.05);
}

TEST(ScaleWeights, OwnsItsRenormalizationFlow) {
  const auto& s = interacting();
  auto e = exponents(s.lim, fermi, s.lambda, s.v, s.t.a, s.t.at(s.t.j0).g1, gam);
  ScaleWeights tmp(z_flow(s.t, s.lim), e, gam);
  ScaleWeights copy = tmp;
  ASSERT_NE(copy.renorm(), nullptr);
  EXPECT_EQ(copy.log_Z1(Channel::C2, -100), s.w.log_Z1(Channel::C2, -100));
  EXPECT_THROW(copy.log_Z(s.t.target() - 1), config_error);
  EXPECT_EQ(ScaleWeights::free(gam).renorm(), nullptr);
  EXPECT_EQ(ScaleWeights::free(gam).log_Z(-50), 0.0);
}
