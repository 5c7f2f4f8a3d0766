#pragma once

#include <array>
#include <memory>

#include "propagators.hpp"
#include "renorm.hpp"

namespace hrg {

enum class Response { C, S, SC, TC };
inline constexpr std::array<Response, 4> all_responses{Response::C, Response::S, Response::SC, Response::TC};

inline std::string to_string(Response r) {
  switch (r) {
    case Response::C: return "C";
    case Response::S: return "S";
    case Response::SC: return "SC";
    case Response::TC: return "TC";
  }
  return "?";
}

inline Channel density_channel(Response r) {
  switch (r) {
    case Response::C: return Channel::C1;
    case Response::S: return Channel::S1;
    default: return Channel::SC1;
  }
}
inline Channel oscillating_channel(Response r) {
  switch (r) {
    case Response::C: return Channel::C2;
    case Response::S: return Channel::S2;
    case Response::SC: return Channel::SC2;
    case Response::TC: return Channel::TC2;
  }
  return Channel::C2;
}

struct Point {
  int x = 0;
  double x0 = 0;
};

inline double tilde_norm(Point p, const FermiPoint& f) { return std::hypot(double(p.x), f.v_F * p.x0); }

// renormalization constants per scale h = 0 .. lowest, built from Zhat and the exponents
class ScaleWeights {
 public:
  ScaleWeights() = default;
  ScaleWeights(RenormSet r, const ExponentSet& e, double gamma)
      : r_(std::make_shared<const RenormSet>(std::move(r))), e_(e), lg_(std::log(gamma)) {}

  static ScaleWeights free(double gamma) {
    ScaleWeights w;
    w.lg_ = std::log(gamma);
    return w;
  }

  double log_Z(int h) const { return -e_.eta_z * h * lg_ + lz(Channel::z, h); }
  double log_Z1(Channel c, int h) const { return -e_.eta_z * h * lg_ + lz(c, h); }
  double log_Z2(Channel c, int h) const { return -(e_.eta(c) + 2 * e_.eta_z) * h * lg_ + lz(c, h); }

  const RenormSet* renorm() const { return r_.get(); }
  const ExponentSet& exponents() const { return e_; }

  // q_t interpolated linearly in log|x| between h_x and h_x - 1
  double q_at(Channel c, double r, double gamma) const {
    if (!r_) return 0;
    double s = std::log(r) / std::log(gamma);
    int hx = static_cast<int>(std::ceil(-s));
    double w = hx + s;
    auto q = [&](int h) { return h >= 0 ? 0.0 : q_coefficient(*r_, c, std::max(h, r_->target)); };
    return (1 - w) * q(hx) + w * q(hx - 1);
  }

 private:
  double lz(Channel c, int h) const {
    if (!r_) return 0;
    if (h < r_->target) throw config_error("renormalization flow does not reach the requested scale");
    return r_->log_z(c, h);
  }
  std::shared_ptr<const RenormSet> r_;
  ExponentSet e_{};
  double lg_ = std::log(2.0);
};

inline int default_lowest_scale(double r, double gamma) {
  return static_cast<int>(std::floor(std::log(1e-3 / r) / std::log(gamma)));
}

// single-scale Dirac propagators g_D^{(h)}_omega(x) for h = 0 .. lowest
struct DiracScales {
  int lowest = 0;
  std::vector<cplx> plus, minus;
};

inline DiracScales dirac_scales(Point p, const FermiPoint& f, double gamma, int lowest) {
  const auto& prof = dirac_profile(gamma);
  DiracScales d;
  d.lowest = lowest;
  for (int h = 0; h >= lowest; --h) {
    d.plus.push_back(prof.single_scale(h, +1, p.x, p.x0, f));
    d.minus.push_back(prof.single_scale(h, -1, p.x, p.x0, f));
  }
  return d;
}

// sum_{h,h'} exp(2 log Zc_{h v h'} - log Z_h - log Z_h') u_h v_h', ordered by the larger scale
template <class LogZc>
cplx double_scale_sum(const ScaleWeights& w, LogZc&& logZc, const std::vector<cplx>& u, const std::vector<cplx>& v) {
  const int n = static_cast<int>(u.size());
  std::vector<double> lz(n);
  for (int i = 0; i < n; ++i) lz[i] = w.log_Z(-i);
  kahan<cplx> s;
  for (int i = 0; i < n; ++i) {
    double lc = 2 * logZc(-i);
    // pairs whose larger scale is -i: (i, k >= i) and (k > i, i)
    kahan<cplx> row;
    for (int k = i; k < n; ++k) {
      double wt = std::exp(lc - lz[i] - lz[k]);
      row += wt * u[i] * v[k];
      if (k > i) row += wt * u[k] * v[i];
    }
    s += row.value();
  }
  return s.value();
}

inline cplx omega_1(Channel c, const ScaleWeights& w, const DiracScales& d) {
  auto lz = [&](int h) { return w.log_Z1(c, h); };
  return 2.0 * (double_scale_sum(w, lz, d.plus, d.plus) + double_scale_sum(w, lz, d.minus, d.minus));
}

inline cplx omega_2(Channel c, const ScaleWeights& w, const DiracScales& d) {
  auto lz = [&](int h) { return w.log_Z2(c, h); };
  return 4.0 * double_scale_sum(w, lz, d.plus, d.minus);
}

struct CorrelationResult {
  Point x;
  Response alpha = Response::C;
  cplx scale_sum = 0;
  double closed_form = 0;
  cplx non_oscillating = 0;
  cplx oscillating = 0;
  double closed_non_oscillating = 0;
  double closed_oscillating = 0;
  double rel_error = 0;
  double X = 1;
  double zeta = 0;
};

inline double uniform_shape(Point p, const FermiPoint& f) {
  double t = f.v_F * p.x0, r2 = t * t + double(p.x) * p.x;
  return (t * t - double(p.x) * p.x) / r2;
}

// closed form L^zeta / (pi^2 |x~|^{2X})
inline double power_law(double r, double X, double zeta, double f_lambda) {
  double L = 1 + f_lambda * std::log(r);
  return std::pow(L, zeta) / (pi * pi * std::pow(r, 2 * X));
}

inline CorrelationResult assemble_response(Point p, Response alpha, const ScaleWeights& w, const FermiPoint& f,
                                           double gamma, std::optional<int> lowest = std::nullopt) {
  const double r = tilde_norm(p, f);
  if (r < 1) throw config_error("response assembly needs |x| >= 1");
  const int lo = lowest.value_or(default_lowest_scale(r, gamma));
  auto d = dirac_scales(p, f, gamma, lo);
  CorrelationResult out;
  out.x = p;
  out.alpha = alpha;
  const Channel c2 = oscillating_channel(alpha), c1 = density_channel(alpha);
  const auto& ex = w.exponents();
  const double fl = ex.f_first_order;
  out.X = ex.x(c2);
  out.zeta = 2 * (w.q_at(c2, r, gamma) - w.q_at(Channel::z, r, gamma));
  const double zeta1 = 2 * (w.q_at(c1, r, gamma) - w.q_at(Channel::z, r, gamma));
  const double osc = std::cos(2 * f.p_F * p.x);
  const double lead2 = power_law(r, out.X, out.zeta, fl);
  const double lead1 = uniform_shape(p, f) * power_law(r, 1.0, zeta1, fl);
  cplx o2 = omega_2(c2, w, d);
  switch (alpha) {
    case Response::C:
    case Response::S: {
      out.non_oscillating = omega_1(c1, w, d);
      out.oscillating = o2;
      out.closed_non_oscillating = lead1;
      out.closed_oscillating = lead2;
      out.scale_sum = out.non_oscillating + osc * out.oscillating;
      out.closed_form = lead1 + osc * lead2;
      break;
    }
    case Response::SC: {
      out.non_oscillating = -o2;
      out.oscillating = -omega_1(c1, w, d);
      out.closed_non_oscillating = -lead2;
      out.closed_oscillating = -lead1;
      out.scale_sum = out.non_oscillating + osc * out.oscillating;
      out.closed_form = -lead2 - osc * lead1;
      break;
    }
    case Response::TC: {
      double v2 = f.v_F * f.v_F;
      out.non_oscillating = -v2 * o2;
      out.closed_non_oscillating = -v2 * lead2;
      out.scale_sum = out.non_oscillating;
      out.closed_form = out.closed_non_oscillating;
      break;
    }
  }
  out.rel_error = std::abs(out.scale_sum - out.closed_form) / std::abs(out.closed_form);
  return out;
}

struct TwoPointResult {
  cplx scale_sum = 0;
  double closed_form = 0;
  double rel_error = 0;
};

// S_2 with the 1/pi normalization of the free asymptotics
inline TwoPointResult two_point(Point p, const ScaleWeights& w, const FermiPoint& f, double gamma,
                                std::optional<int> lowest = std::nullopt) {
  const double r = tilde_norm(p, f);
  if (r < 1) throw config_error("two-point assembly needs |x| >= 1");
  const int lo = lowest.value_or(default_lowest_scale(r, gamma));
  auto d = dirac_scales(p, f, gamma, lo);
  TwoPointResult out;
  kahan<cplx> sp, sm;
  for (int i = 0; i < static_cast<int>(d.plus.size()); ++i) {
    double iz = std::exp(-w.log_Z(-i));
    sp += iz * d.plus[i];
    sm += iz * d.minus[i];
  }
  out.scale_sum = std::exp(-I * (f.p_F * p.x)) * sp.value() + std::exp(I * (f.p_F * p.x)) * sm.value();
  const auto& ex = w.exponents();
  double S0 = (f.v_F * p.x0 * std::cos(f.p_F * p.x) - p.x * std::sin(f.p_F * p.x)) / r;
  double zz = 2 * w.q_at(Channel::z, r, gamma);
  double L = 1 + ex.f_first_order * std::log(r);
  out.closed_form = S0 * std::pow(L, zz) / (pi * std::pow(r, 1 + ex.eta_z));
  out.rel_error = std::abs(out.scale_sum - out.closed_form) / (std::pow(r, -1 - ex.eta_z) / pi);
  return out;
}

// frequency in [0, pi] of the largest DFT component of (samples - mean)
inline double dominant_frequency(const std::vector<double>& s) {
  const std::size_t n = s.size();
  double mean = std::accumulate(s.begin(), s.end(), 0.0) / double(n);
  double best = 0, freq = 0;
  for (std::size_t k = 1; k <= n / 2; ++k) {
    cplx acc = 0;
    for (std::size_t j = 0; j < n; ++j) acc += (s[j] - mean) * std::exp(-I * (2 * pi * double(k * j) / double(n)));
    if (std::abs(acc) > best) {
      best = std::abs(acc);
      freq = 2 * pi * double(k) / double(n);
    }
  }
  return freq;
}

inline double fold_frequency(double w) {
  double r = std::fmod(std::abs(w), 2 * pi);
  return r > pi ? 2 * pi - r : r;
}

// log-log slope of |values| against radii
inline double power_slope(const std::vector<double>& radii, const std::vector<double>& values) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    lx.push_back(std::log(radii[i]));
    ly.push_back(std::log(std::abs(values[i])));
  }
  return fit_line(lx, ly).slope;
}

inline std::vector<double> geometric_radii(double lo, double hi, int n) {
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) r[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
  return r;
}

// points on the time axis with |x~| = r
inline Point time_axis_point(double r, const FermiPoint& f) { return {0, r / f.v_F}; }

}  // namespace hrg
