#pragma once

#include <optional>
#include <random>

#include "core.hpp"

namespace hrg {

struct SectorDomain {
  double epsilon;
  double delta;
  bool contains(cplx z) const { return std::abs(z) < epsilon && std::abs(std::arg(z)) <= pi - delta + 1e-14; }
  // the domains reached by the approximant and by the map
  SectorDomain approximant_domain() const { return {2 * epsilon / std::sin(delta), delta / 2}; }
  SectorDomain map_domain() const { return {3 * epsilon / std::sin(delta), delta / 4}; }
};

inline double default_epsilon0(double delta) { return 1e-2 * std::sin(delta) * std::sin(delta); }

enum class SigmaModel { zero, constant, random_disk, alternating };

inline std::string to_string(SigmaModel m) {
  switch (m) {
    case SigmaModel::zero: return "zero";
    case SigmaModel::constant: return "constant";
    case SigmaModel::random_disk: return "random_disk";
    case SigmaModel::alternating: return "alternating";
  }
  return "?";
}

// a_n = a + sigma_n with |sigma_n| <= c0 |g0|
class CoefficientSequence {
 public:
  CoefficientSequence(double a, SigmaModel model, double bound, std::uint64_t seed = 1)
      : a_(a), model_(model), bound_(bound), rng_(seed) {}

  cplx next() {
    cplx s = 0;
    switch (model_) {
      case SigmaModel::zero: break;
      case SigmaModel::constant: s = bound_; break;
      case SigmaModel::alternating: s = (n_ % 2 == 0) ? bound_ : -bound_; break;
      case SigmaModel::random_disk: {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double r = bound_ * std::sqrt(u(rng_)), t = 2 * pi * u(rng_);
        s = std::polar(r, t);
        break;
      }
    }
    ++n_;
    return a_ + s;
  }
  double a() const { return a_; }

 private:
  double a_;
  SigmaModel model_;
  double bound_;
  std::mt19937_64 rng_;
  long n_ = 0;
};

struct MapState {
  cplx g0;
  double a;
  std::vector<cplx> a_seq;  // a_0 .. a_{n-1}
  std::vector<cplx> g;      // g_0 .. g_n
  std::vector<cplx> A;      // A_n, with A_0 = a
  std::optional<long> escape;
};

inline cplx approximant(cplx g0, cplx A, long n) { return g0 / (1.0 + g0 * double(n) * A); }

// iterates g_{k+1} = g_k - a_k g_k^2, recording the Cesaro averages of a_k
inline MapState iterate(cplx g0, CoefficientSequence seq, long n, std::optional<SectorDomain> watch = std::nullopt) {
  MapState s;
  s.g0 = g0;
  s.a = seq.a();
  s.g.reserve(n + 1);
  s.A.reserve(n + 1);
  s.a_seq.reserve(n);
  s.g.push_back(g0);
  s.A.push_back(seq.a());
  kahan<cplx> sum;
  cplx g = g0;
  for (long k = 0; k < n; ++k) {
    cplx ak = seq.next();
    s.a_seq.push_back(ak);
    sum += ak;
    g = g - ak * g * g;
    s.g.push_back(g);
    s.A.push_back(sum.value() / double(k + 1));
    if (watch && !s.escape && !watch->map_domain().contains(g)) s.escape = k + 1;
  }
  return s;
}

struct MapReport {
  bool pass = true;
  std::optional<long> first_violation;
  double worst_ratio = 0;  // max |g_n - gt_n| / |gt_n|^{3/2}
};

inline MapReport verify_closeness(const MapState& s) {
  MapReport r;
  for (std::size_t n = 0; n < s.g.size(); ++n) {
    cplx gt = approximant(s.g0, s.A[n], long(n));
    double err = std::abs(s.g[n] - gt), bound = std::pow(std::abs(gt), 1.5);
    double ratio = bound > 0 ? err / bound : (err > 0 ? INFINITY : 0);
    r.worst_ratio = std::max(r.worst_ratio, ratio);
    if (err > bound && r.pass) {
      r.pass = false;
      r.first_violation = long(n);
    }
  }
  return r;
}

struct SectorReport {
  bool approximant_inside = true;
  bool map_inside = true;
  std::optional<long> first_exit;
  double max_abs_arg = 0;
};

inline SectorReport verify_sector(const MapState& s, const SectorDomain& inner) {
  SectorReport r;
  auto d1 = inner.approximant_domain(), d2 = inner.map_domain();
  for (std::size_t n = 0; n < s.g.size(); ++n) {
    cplx gt = approximant(s.g0, s.A[n], long(n));
    if (!d1.contains(gt)) r.approximant_inside = false;
    if (!d2.contains(s.g[n])) {
      if (r.map_inside) r.first_exit = long(n);
      r.map_inside = false;
    }
    r.max_abs_arg = std::max(r.max_abs_arg, std::abs(std::arg(s.g[n])));
  }
  return r;
}

// |1 + g0 n alpha_n| >= max{sin delta, (sin delta/3)(1 + |g0| n |alpha_n|)} with alpha_n = A_n
inline bool verify_denominator(const MapState& s, double delta) {
  double sd = std::sin(delta);
  for (std::size_t n = 0; n < s.A.size(); ++n) {
    double lhs = std::abs(1.0 + s.g0 * double(n) * s.A[n]);
    double rhs = std::max(sd, sd / 3 * (1 + std::abs(s.g0) * double(n) * std::abs(s.A[n])));
    if (lhs < rhs * (1 - 1e-12)) return false;
  }
  return true;
}

// Cesaro-average properties: Re A_n >= a/2 and |Im A_n| <= c0 |g0|
inline bool verify_averages(const MapState& s, double c0) {
  for (const auto& A : s.A)
    if (A.real() < s.a / 2 || std::abs(A.imag()) > c0 * std::abs(s.g0) * (1 + 1e-12)) return false;
  return true;
}

// sum_n |g_n|^2 and the same quantity for the continuum approximant g0/(1 + g0 a s)
inline std::pair<double, double> square_sums(const MapState& s) {
  kahan<double> acc;
  for (const auto& g : s.g) acc += std::norm(g);
  double a = s.a;
  cplx g0 = s.g0;
  // int_0^N |g0|^2/|1 + g0 a t|^2 dt in closed form
  double N = double(s.g.size() - 1);
  double r = std::abs(g0), th = std::arg(g0);
  double cont;
  if (std::abs(std::sin(th)) < 1e-14) {
    cont = r * r * N / (1 + r * a * N);
  } else {
    double st = std::sin(th), ct = std::cos(th);
    auto F = [&](double t) { return std::atan((r * a * t + ct) / st) / (a * st); };
    cont = r * (F(N) - F(0));
  }
  return {acc.value(), cont + std::norm(g0) / 2};
}

}  // namespace hrg
