#pragma once

#include <array>
#include <random>

#include "rgflow.hpp"

namespace hrg {

enum class Channel { z, C1, S1, SC1, C2, S2, SC2, TC2 };
inline constexpr std::array<Channel, 8> all_channels{Channel::z,  Channel::C1, Channel::S1,  Channel::SC1,
                                                     Channel::C2, Channel::S2, Channel::SC2, Channel::TC2};
inline constexpr std::array<Channel, 4> oscillating_channels{Channel::C2, Channel::S2, Channel::SC2, Channel::TC2};

inline std::string to_string(Channel c) {
  switch (c) {
    case Channel::z: return "z";
    case Channel::C1: return "1C";
    case Channel::S1: return "1S";
    case Channel::SC1: return "1SC";
    case Channel::C2: return "2C";
    case Channel::S2: return "2S";
    case Channel::SC2: return "2SC";
    case Channel::TC2: return "2TC";
  }
  return "?";
}

// reference log-correction exponents zeta_bar; q_2 tends to half of these
inline double zeta_bar(Channel c) {
  switch (c) {
    case Channel::C2:
    case Channel::SC2: return -1.5;
    case Channel::S2:
    case Channel::TC2: return 0.5;
    default: return 0.0;
  }
}

// linear coefficients of (a g1, a (g2 - g2_lim)) in the ratio Zhat_{h-1}/Zhat_h
struct RatioCoefficients {
  double g1 = 0, g2 = 0;
};

inline RatioCoefficients ratio_coefficients(Channel c) {
  switch (c) {
    case Channel::C2: return {-1.0, 0.5};
    case Channel::S2: return {0.0, 0.5};
    case Channel::SC2: return {-0.5, -0.5};
    case Channel::TC2: return {0.5, -0.5};
    default: return {0.0, 0.0};
  }
}

enum class ResidualMode { off, envelope };

struct ResidualConfig {
  ResidualMode mode = ResidualMode::off;
  double c_lin = 1;  // |O(g1 lambda)| <= c_lin |g1| |lambda|
  double c_sum = 1;  // sum |r_h| <= c_sum lambda^2
  std::uint64_t seed = 1;
};

// log Zhat^{(t)}_h for h = 0, -1, ..., target; Zhat_0 = 1
struct RenormSet {
  std::array<std::vector<double>, all_channels.size()> log_zhat;
  double a = 0;
  double g1_0 = 0;
  int target = 0;

  double log_z(Channel c, int h) const { return log_zhat[static_cast<std::size_t>(c)].at(static_cast<std::size_t>(-h)); }
  double zhat(Channel c, int h) const { return std::exp(log_z(c, h)); }
};

inline RenormSet z_flow(const FlowTrajectory& t, const FixedPoint& lim, const ResidualConfig& res = {}) {
  RenormSet r;
  r.a = t.a;
  r.g1_0 = std::abs(t.v.front().g1);
  r.target = t.target();
  const double lam = t.eps0;
  std::mt19937_64 rng(res.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& v : r.log_zhat) {
    v.reserve(t.v.size());
    v.push_back(0.0);
  }
  // Zhat_{h-1}/Zhat_h uses the couplings at scale h
  for (std::size_t i = 0; i + 1 < t.v.size(); ++i) {
    const auto& c = t.v[i];
    const double g1 = c.g1.real(), dg2 = (c.g2 - lim.g2).real();
    const double h = static_cast<double>(c.j);
    for (Channel ch : all_channels) {
      auto k = ratio_coefficients(ch);
      double ratio = 1 + t.a * (k.g1 * g1 + k.g2 * dg2);
      if (res.mode == ResidualMode::envelope) {
        ratio += u(rng) * res.c_lin * std::abs(g1) * lam;
        ratio += u(rng) * res.c_sum * lam * lam * 6 / (pi * pi * (1 + h * h));
      }
      auto& v = r.log_zhat[static_cast<std::size_t>(ch)];
      v.push_back(v.back() + std::log(ratio));
    }
  }
  return r;
}

// log Zhat_h / log(1 + a g1_0 |h|)
inline double q_coefficient(const RenormSet& r, Channel c, int h) {
  double den = std::log1p(r.a * r.g1_0 * std::abs(h));
  if (!(den > 0)) throw config_error("q coefficient needs h below the first scale and a nonzero coupling");
  return r.log_z(c, h) / den;
}

struct ExponentSet {
  double eta_z = 0;
  std::array<double, 4> eta2{};  // C, S, SC, TC
  std::array<double, 4> X{};
  double f_lambda = 0;
  double f_first_order = 0;
  double c_linear = 0;  // X_C = 1 - c lambda
  int order = 1;

  static std::size_t index(Channel c) {
    switch (c) {
      case Channel::C2: return 0;
      case Channel::S2: return 1;
      case Channel::SC2: return 2;
      case Channel::TC2: return 3;
      default: throw std::out_of_range("not an oscillating channel");
    }
  }
  double eta(Channel c) const { return eta2[index(c)]; }
  double x(Channel c) const { return X[index(c)]; }
};

struct ExponentOptions {
  double c_eta = 0.5;  // eta_z = c_eta (g2_lim / (2 pi v_F))^2
};

inline ExponentSet exponents(const FixedPoint& lim, const FermiPoint& f, double lambda, const InteractionPotential& v,
                             double a, cplx g1_j0, double gamma, const ExponentOptions& opt = {}) {
  ExponentSet e;
  double u = lim.g2.real() / (2 * pi * f.v_F);
  e.eta_z = opt.c_eta * u * u;
  e.eta2 = {u, u, -u, -u};
  for (std::size_t i = 0; i < 4; ++i) e.X[i] = 1 - e.eta2[i] - e.eta_z;
  e.f_lambda = a * std::abs(g1_j0) / std::log(gamma);
  e.f_first_order = 2 * lambda * v.fourier(2 * f.p_F) / (pi * f.v_F);
  e.c_linear = (2 * v.fourier(0) - v.fourier(2 * f.p_F)) / (2 * pi * f.v_F);
  return e;
}

}  // namespace hrg
