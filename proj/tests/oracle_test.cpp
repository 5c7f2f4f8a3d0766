#include <gtest/gtest.h>

#include "hubbard_rg/oracle.hpp"

using namespace hrg;

namespace {

const ExactDiagonalization& free_ed() {
  static const ExactDiagonalization ed{EdConfig{}};
  return ed;
}

}  // namespace

TEST(ExactDiagonalization, FreeKernel) {
  EdConfig c;
  FreePropagator fp(c.mu, c.beta, c.L, 2.0);
  for (int x = 0; x < c.L; ++x)
    for (double t : {-9.0, -2.5, 0.0, 0.7, 6.0}) EXPECT_NEAR(free_ed().two_point(x, t), fp.kernel_sum(x, t).real(), 1e-10);
}

TEST(ExactDiagonalization, FreeDensityResponse) {
  EdConfig c;
  FreePropagator fp(c.mu, c.beta, c.L, 2.0);
  auto g = finite_volume(fp);
  for (int x = 0; x < c.L; ++x)
    for (double t : {0.5, 4.0}) EXPECT_NEAR(free_ed().density_response(x, t), wick_free_response({x, t}, Response::C, g), 1e-10);
}

TEST(ExactDiagonalization, Limits) {
  EdConfig c;
  c.L = 9;
  EXPECT_THROW(ExactDiagonalization{c}, config_error);
  c.L = 4;
  c.beta = 25;
  EXPECT_THROW(ExactDiagonalization{c}, config_error);
  c.beta = 10;
  c.L = 1;
  EXPECT_THROW(ExactDiagonalization{c}, config_error);
}

TEST(ExactDiagonalization, FirstOrderSlope) {
  EdConfig c;
  for (int x : {0, 1})
    for (double t : {0.5, 3.0}) {
      double w = first_order_density_slope(x, t, c).value, e = ed_density_slope(x, t, c);
      EXPECT_NEAR(w / e, 1.0, 1e-2) << x << ' ' << t;
    }
}

TEST(Wick, ExpectationOfOneBilinear) {
  EdConfig c;
  FreePropagator fp(c.mu, c.beta, c.L, 2.0);
  auto g = finite_volume(fp);
  double n = wick_expectation({{2, 2, 0, 1.0}}, g);
  EXPECT_NEAR(n, -g(0, 0.0), 1e-15);
  EXPECT_NEAR(n, -free_ed().two_point(0, 0.0), 1e-10);
  EXPECT_NEAR(wick_expectation({{2, 2, 0, 1.0}, {1, 1, 1, 0.3}}, g), n * n, 1e-15);
}

TEST(Wick, TripletComponents) {
  auto gs = ground_state(0.5);
  Point p{0, 60.0};
  EXPECT_NEAR(wick_free_response(p, Response::TC, gs, 2), 2 * wick_free_response(p, Response::TC, gs, 1), 1e-18);
  EXPECT_NEAR(wick_free_response(p, Response::S, gs), wick_free_response(p, Response::C, gs), 0.0);
}

TEST(Bubble, QuadratureAndExtrapolation) {
  auto f = FermiPoint::make(pi / 3, 2.0);
  auto raw = bubble_quadrature(-8, f, 2.0);
  EXPECT_NEAR(raw.value, 0.280790, 1e-6);
  auto rich = bubble_richardson(-8, f, 2.0);
  EXPECT_NEAR(rich.value, bubble_constant(f, 2.0), 1e-9);
  EXPECT_THROW(bubble_quadrature(0, f, 2.0), config_error);
}
