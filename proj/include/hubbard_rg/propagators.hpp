#pragma once

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <map>
#include <math.h>
#include <memory>
#include <mutex>

#include "cutoff.hpp"
#include "quadrature.hpp"

namespace hrg {

// Time-ordered kernel for -beta < tau < beta; tau <= 0 takes the lower branch.
inline double free_kernel(double e, double tau, double beta) {
  if (tau > 0) {
    if (e >= 0) return std::exp(-tau * e) / (1 + std::exp(-beta * e));
    return std::exp((beta - tau) * e) / (std::exp(beta * e) + 1);
  }
  if (e >= 0) return -std::exp(-(beta + tau) * e) / (1 + std::exp(-beta * e));
  return -std::exp(-tau * e) / (1 + std::exp(beta * e));
}

// one-sided limits tau -> 0+ (side = +1) and 0- (side = -1)
inline double free_kernel_at_zero(double e, double beta, int side) {
  if (side < 0) return free_kernel(e, 0.0, beta);
  return e >= 0 ? 1 / (1 + std::exp(-beta * e)) : std::exp(beta * e) / (std::exp(beta * e) + 1);
}

struct Representation {
  enum Kind { kernel_sum, cutoff_sum } kind = kernel_sum;
  int M = 10;
  static Representation kernel() { return {kernel_sum, 0}; }
  static Representation cutoff(int M) { return {cutoff_sum, M}; }
};

// Free propagator on the L-site ring at inverse temperature beta.
class FreePropagator {
 public:
  FreePropagator(double mu, double beta, int L, double gamma)
      : mu_(mu), beta_(beta), L_(L), chi0_(gamma), grids_{L, beta} {
    ks_ = grids_.spatial();
  }

  double mu() const { return mu_; }
  double beta() const { return beta_; }
  int L() const { return L_; }
  const Cutoff& cutoff() const { return chi0_; }

  // x0 is reduced by antiperiodicity; x0 = 0 means 0-
  cplx operator()(int x, double x0, Representation rep) const {
    return rep.kind == Representation::kernel_sum ? kernel_sum(x, x0) : cutoff_sum(x, x0, rep.M);
  }

  cplx kernel_sum(int x, double x0) const {
    double s = 1;
    double t = fold(x0, s);
    kahan<double> acc;
    for (double k : ks_) acc += std::cos(k * x) * free_kernel(mu_ - std::cos(k), t, beta_);
    return s * acc.value() / L_;
  }

  cplx kernel_sum_at_zero(int x, int side) const {
    kahan<double> acc;
    for (double k : ks_) acc += std::cos(k * x) * free_kernel_at_zero(mu_ - std::cos(k), beta_, side);
    return acc.value() / L_;
  }

  // at x = (0,0) this converges to the half-sum of the two one-sided limits
  cplx cutoff_sum(int x, double x0, int M) const {
    double gM = std::pow(chi0_.gamma(), -M);
    auto w = [&](double, double k0) { return chi0_(gM * k0); };
    auto W = [&](double k0) { return chi0_(gM * k0); };
    return matsubara_sum(x, x0, w, W, std::pow(chi0_.gamma(), M + 1));
  }

  // (1/beta L) sum_k sum_k0 w(k,k0) e^{-ikx - ik0 x0}/(-ik0 + e(k)), for w even in k0 and in k,
  // with w(k,k0) = W(k0) above the split frequency and support inside |k0| <= kmax.
  template <class W2, class W1>
  double matsubara_sum(int x, double x0, W2&& w, W1&& W, double kmax) const {
    const double split = std::max(8.0, 4 * (std::abs(mu_) + 1));
    const double dk0 = 2 * pi / beta_;
    kahan<double> low;
    for (double k : ks_) {
      double e = mu_ - std::cos(k);
      kahan<double> s;
      for (int n = 0;; ++n) {
        double k0 = dk0 * (n + 0.5);
        if (k0 > split || k0 > kmax) break;
        double wk = w(k, k0);
        if (wk == 0) continue;
        s += wk * (k0 * std::sin(k0 * x0) + e * std::cos(k0 * x0)) / (k0 * k0 + e * e);
      }
      low += std::cos(k * x) * s.value();
    }
    double total = 2 * low.value() / (beta_ * L_);
    if (kmax <= split) return total;

    // above the split, 1/(-ik0+e) = sum_n (-e)^n (-ik0)^{-n-1}
    constexpr int N = 40;
    std::array<double, N> m{};
    for (double k : ks_) {
      double e = -(mu_ - std::cos(k)), p = 1, c = std::cos(k * x);
      for (int n = 0; n < N; ++n) {
        m[n] += c * p;
        p *= e;
      }
    }
    int n0 = static_cast<int>(std::floor(split / dk0 - 0.5)) + 1;
    while (dk0 * (n0 + 0.5) <= split) ++n0;
    std::array<kahan<double>, N> Fk;
    for (int n = n0;; ++n) {
      double k0 = dk0 * (n + 0.5);
      if (k0 > kmax) break;
      double wk = W(k0);
      if (wk == 0) continue;
      cplx z = std::polar(wk, -k0 * x0);
      cplx q = 1.0 / cplx(0, -k0), pw = q;
      for (int j = 0; j < N; ++j) {
        Fk[j] += (z * pw).real();
        pw *= q;
      }
    }
    kahan<double> high;
    for (int j = 0; j < N; ++j) high += m[j] / L_ * 2 * Fk[j].value() / beta_;
    return total + high.value();
  }

 private:
  double fold(double x0, double& sign) const {
    sign = 1;
    double t = x0;
    while (t > beta_) {
      t -= beta_;
      sign = -sign;
    }
    while (t <= -beta_) {
      t += beta_;
      sign = -sign;
    }
    return t;
  }

  double mu_, beta_;
  int L_;
  Cutoff chi0_;
  MomentumGrids grids_;
  std::vector<double> ks_;
};

// (1/2 pi) sum_omega e^{-i omega p_F x}/(v_F x0 + i omega x)
inline cplx free_asymptotic(int x, double x0, const FermiPoint& f) {
  cplx s = 0;
  for (int w : {1, -1}) s += std::exp(-I * (w * f.p_F * x)) / cplx(f.v_F * x0, w * double(x));
  return s / (2 * pi);
}

// infinite volume, zero temperature; x0 <= 0 takes the lower branch
inline double ground_state_propagator(int x, double x0, double mu) {
  const double pF = std::acos(mu);
  const bool upper = x0 > 0;
  const double a = upper ? pF : 0.0, b = upper ? pi : pF;
  // panels shrink geometrically towards the Fermi point where exp(-x0 e) varies fastest
  std::vector<double> cuts;
  const double width = b - a, scale = std::max(1.0, std::abs(x0));
  int levels = static_cast<int>(std::ceil(std::log2(width * scale * 1e3))) + 1;
  for (int m = levels; m >= 0; --m) cuts.push_back(std::ldexp(width, -m));
  kahan<double> s;
  double lo = 0;
  for (double hi : cuts) {
    int sub = 1 + static_cast<int>(std::ceil((hi - lo) * std::abs(x) / pi));
    s += integrate(
        [&](double d) {
          double k = upper ? pF + d : pF - d;
          return std::cos(k * x) * std::exp(-x0 * dispersion(k, mu));
        },
        lo, hi, sub);
    lo = hi;
  }
  return (upper ? 1.0 : -1.0) * s.value() / pi;
}

// high-frequency remainder (1/beta) sum_{|k0| >= gamma^M} chi0(gamma^-M k0) e^{-ik0 tau}/(-ik0+e)
inline cplx appendix_delta(double tau, int M, double e, double beta, const Cutoff& chi0) {
  double gM = std::pow(chi0.gamma(), M);
  double dk0 = 2 * pi / beta;
  int n = static_cast<int>(std::ceil(gM / dk0 - 0.5));
  kahan<double> s1, s2;
  for (;; ++n) {
    double k0 = dk0 * (n + 0.5);
    if (k0 < gM) continue;
    double c = chi0(k0 / gM);
    if (c == 0) break;
    s1 += c * k0 * std::sin(k0 * tau) / (k0 * k0 + e * e);
    s2 += c * e * std::cos(k0 * tau) / (k0 * k0 + e * e);
  }
  return 2 * (s1.value() + s2.value()) / beta;
}

struct ScaleSample {
  int h;
  std::string kind;
  int omega;
  int x;
  double x0;
  cplx value;
};

// Single-scale decomposition of the cutoff propagator on a finite ring.
// The Fermi point should sit on the shifted grid (FermiPoint::snapped) for exact telescoping.
class ScaleDecomposition {
 public:
  ScaleDecomposition(const FermiPoint& fermi, double beta, int L, double gamma, int M)
      : fermi_(fermi), cuts_{Cutoff(gamma), fermi}, free_(fermi.mu, beta, L, gamma), beta_(beta), L_(L), M_(M) {
    h_lb_ = lowest_scale(fermi, gamma, beta, L);
  }

  int lowest() const { return h_lb_; }
  int M() const { return M_; }
  const FreePropagator& free() const { return free_; }
  const ScaleCutoffs& cutoffs() const { return cuts_; }

  double uv_single_scale(int h, int x, double x0) const {
    if (h < 1 || h > M_) throw std::out_of_range("uv scale outside [1, M]");
    double g = cuts_.chi0.gamma();
    auto w = [&](double k, double k0) { return cuts_.f_uv(k, k0) * cuts_.H(h, k0); };
    auto W = [&](double k0) { return cuts_.H(h, k0); };
    return free_.matsubara_sum(x, x0, w, W, std::pow(g, h + 1));
  }

  double uv_total(int x, double x0) const {
    double gM = std::pow(cuts_.chi0.gamma(), -M_);
    auto w = [&](double k, double k0) { return cuts_.f_uv(k, k0) * cuts_.chi0(gM * k0); };
    auto W = [&](double k0) { return cuts_.chi0(gM * k0); };
    return free_.matsubara_sum(x, x0, w, W, std::pow(cuts_.chi0.gamma(), M_ + 1));
  }

  cplx ir_single_scale(int h, int omega, int x, double x0) const {
    return ir_sum(x, x0, [&](double kp, double k0) { return cuts_.f_ir(h, kp, k0); },
                  [&](double kp) { return ir_dispersion(kp, fermi_, omega); }, radius_bound(h + 1));
  }

  cplx ir_total(int omega, int x, double x0) const {
    return ir_sum(x, x0, [&](double kp, double k0) { return cuts_.chi_ir(kp, k0); },
                  [&](double kp) { return ir_dispersion(kp, fermi_, omega); }, radius_bound(1));
  }

  cplx dirac_single_scale(int h, int omega, int x, double x0, double Z = 1.0) const {
    return ir_sum(x, x0, [&](double kp, double k0) { return cuts_.f_ir(h, kp, k0); },
                  [&](double kp) { return omega * fermi_.v_F * kp; }, radius_bound(h + 1)) /
           Z;
  }

  // uv part plus both infrared components with their Fermi phases
  cplx recombined(int x, double x0) const {
    cplx s = uv_total(x, x0);
    for (int w : {1, -1}) s += std::exp(-I * (w * fermi_.p_F * x)) * ir_total(w, x, x0);
    return s;
  }

 private:
  double radius_bound(int h) const { return fermi_.t0 * std::pow(cuts_.chi0.gamma(), h); }

  template <class Wt, class Disp>
  cplx ir_sum(int x, double x0, Wt&& w, Disp&& E, double rmax) const {
    double dk = 2 * pi / L_, dk0 = 2 * pi / beta_;
    int nk = static_cast<int>(std::ceil(rmax / fermi_.v_F / dk)) + 1;
    int nk0 = static_cast<int>(std::ceil(rmax / dk0)) + 1;
    kahan<cplx> acc;
    for (int n = -nk - 1; n <= nk; ++n) {
      double kp = dk * (n + 0.5);
      if (std::abs(kp) >= pi) continue;
      double e = E(kp);
      kahan<double> s;
      for (int m = 0; m <= nk0; ++m) {
        double k0 = dk0 * (m + 0.5);
        double wk = w(kp, k0);
        if (wk == 0) continue;
        s += wk * (k0 * std::sin(k0 * x0) + e * std::cos(k0 * x0)) / (k0 * k0 + e * e);
      }
      acc += std::exp(-I * (kp * x)) * s.value();
    }
    return 2.0 * acc.value() / (beta_ * L_);
  }

  FermiPoint fermi_;
  ScaleCutoffs cuts_;
  FreePropagator free_;
  double beta_;
  int L_, M_;
  int h_lb_;
};

// Infinite-volume Dirac single-scale profile.
// g_D^{(h)}(x) = (1/2 pi) Phi(t0 gamma^h R)/(v_F x0 + i omega x), R = sqrt(x0^2 + x^2/v_F^2),
// Phi(s) = s int (chi0(u) - chi0(gamma u)) J_1(u s) du.
class DiracProfile {
 public:
  explicit DiracProfile(double gamma) : chi0_(gamma) {
    double g = gamma;
    auto F = [&](double u) { return chi0_(u) - chi0_(g * u); };
    m1_ = integrate([&](double u) { return F(u) * u; }, 1 / g, g, 16);
    m3_ = integrate([&](double u) { return F(u) * u * u * u; }, 1 / g, g, 16);
    const int n = static_cast<int>(s_max_ / step_) + 1;
    std::vector<double> tab(n);
    for (int i = 0; i < n; ++i) tab[i] = direct(i * step_);
    spline_ = std::make_unique<boost::math::interpolators::cardinal_cubic_b_spline<double>>(
        tab.begin(), tab.end(), 0.0, step_, 0.0, 0.0);
  }

  double gamma() const { return chi0_.gamma(); }

  double direct(double s) const {
    if (s == 0) return 0;
    double g = chi0_.gamma();
    int panels = 4 + static_cast<int>(s * (g - 1 / g) / 4);
    return s * integrate([&](double u) { return (chi0_(u) - chi0_(g * u)) * ::j1(u * s); }, 1 / g, g, panels);
  }

  double phi(double s) const {
    if (s < 0.05) return s * s * m1_ / 2 - s * s * s * s * m3_ / 16;
    if (s >= s_max_) return 0;
    return (*spline_)(s);
  }

  static double radius(int x, double x0, double v_F) { return std::hypot(x0, x / v_F); }

  cplx single_scale(int h, int omega, int x, double x0, const FermiPoint& f) const {
    double R = radius(x, x0, f.v_F);
    return phi(f.t0 * std::pow(chi0_.gamma(), h) * R) / (2 * pi * cplx(f.v_F * x0, omega * double(x)));
  }

  // scales carrying non-negligible weight at distance R, from the top scale down
  int lowest_relevant(double R, const FermiPoint& f) const {
    return static_cast<int>(std::floor(std::log(1e-4 / (f.t0 * R)) / std::log(chi0_.gamma())));
  }

  double s_max() const { return s_max_; }

 private:
  Cutoff chi0_;
  double m1_ = 0, m3_ = 0;
  double s_max_ = 320, step_ = 0.05;
  std::unique_ptr<boost::math::interpolators::cardinal_cubic_b_spline<double>> spline_;
};

inline const DiracProfile& dirac_profile(double gamma) {
  static std::mutex mx;
  static std::map<double, std::unique_ptr<DiracProfile>> cache;
  std::lock_guard lock(mx);
  auto& p = cache[gamma];
  if (!p) p = std::make_unique<DiracProfile>(gamma);
  return *p;
}

// Ultraviolet scale at infinite beta, k0 integrated by quadrature, k summed on a ring of L sites.
class UvScaleProfile {
 public:
  UvScaleProfile(int h, double mu, double gamma, int L = 32, int panels = 24)
      : h_(h), L_(L), cuts_{Cutoff(gamma), FermiPoint::from_mu(mu, gamma)} {
    if (h < 2) throw std::out_of_range("UvScaleProfile needs h >= 2");
    double g = gamma;
    q_ = gauss_panels(std::pow(g, h - 1), std::pow(g, h + 1), panels);
    A_.assign(L, std::vector<double>(q_.x.size()));
    B_ = A_;
    MomentumGrids grid{L, 1.0};
    auto ks = grid.spatial();
    for (int x = 0; x < L; ++x)
      for (std::size_t j = 0; j < q_.x.size(); ++j) {
        double k0 = q_.x[j];
        kahan<double> a, b;
        for (double k : ks) {
          double e = mu - std::cos(k), d = k0 * k0 + e * e, c = std::cos(k * x);
          a += c * k0 / d;
          b += c * e / d;
        }
        double wj = q_.w[j] * cuts_.H(h, k0) / pi / L;
        A_[x][j] = a.value() * wj;
        B_[x][j] = b.value() * wj;
      }
  }

  double operator()(int x, double x0) const {
    int xi = ((x % L_) + L_) % L_;
    kahan<double> s;
    for (std::size_t j = 0; j < q_.x.size(); ++j)
      s += A_[xi][j] * std::sin(q_.x[j] * x0) + B_[xi][j] * std::cos(q_.x[j] * x0);
    return s.value();
  }

  // sum over |x| <= xr of the time integral of |g^{(h)}|
  double l1_norm(int xr = 8, double width = 40) const {
    double g = cuts_.chi0.gamma(), T = width * std::pow(g, -h_);
    kahan<double> s;
    for (int x = -xr; x <= xr; ++x) {
      auto f = [&](double t) { return std::abs((*this)(x, t)); };
      s += integrate(f, -T, 0, 80) + integrate(f, 0, T, 80);
    }
    return s.value();
  }

 private:
  int h_, L_;
  ScaleCutoffs cuts_;
  nodes q_;
  std::vector<std::vector<double>> A_, B_;
};

struct GramCertificate {
  int h = 0;
  double normA2 = 0;
  double normB2 = 0;
  double bound_constant = 0;
};

enum class ScaleKind { uv, ir };

// ||A_h||^2 = int f/(k0^2+e^2)^2, ||B_h||^2 = int f (k0^2+e^2) over d^2k/(2 pi)^2
inline GramCertificate gram_certify(int h, ScaleKind kind, const FermiPoint& f, double gamma, int omega = 1) {
  ScaleCutoffs cuts{Cutoff(gamma), f};
  GramCertificate c;
  c.h = h;
  double g = gamma;
  if (kind == ScaleKind::uv) {
    if (h < 2) throw std::out_of_range("gram_certify: uv needs h >= 2");
    auto qk = gauss_panels(-pi, pi, 16);
    auto q0 = gauss_panels(std::pow(g, h - 1), std::pow(g, h + 1), 16);
    kahan<double> a, b;
    for (std::size_t i = 0; i < qk.x.size(); ++i)
      for (std::size_t j = 0; j < q0.x.size(); ++j) {
        double e = f.mu - std::cos(qk.x[i]), k0 = q0.x[j];
        double d = k0 * k0 + e * e, wt = 2 * qk.w[i] * q0.w[j] * cuts.H(h, k0) / (4 * pi * pi);
        a += wt / (d * d);
        b += wt * d;
      }
    c.normA2 = a.value();
    c.normB2 = b.value();
    c.bound_constant = std::max(c.normA2 * std::pow(g, 3 * h), c.normB2 * std::pow(g, -3 * h));
  } else {
    double r0 = f.t0 * std::pow(g, h - 1), r1 = f.t0 * std::pow(g, h + 1);
    auto qr = gauss_panels(r0, r1, 16);
    auto qp = gauss_panels(0, 2 * pi, 32);
    kahan<double> a, b;
    for (std::size_t i = 0; i < qr.x.size(); ++i)
      for (std::size_t j = 0; j < qp.x.size(); ++j) {
        double r = qr.x[i], k0 = r * std::cos(qp.x[j]), kp = r * std::sin(qp.x[j]) / f.v_F;
        double E = ir_dispersion(kp, f, omega), d = k0 * k0 + E * E;
        double wt = qr.w[i] * qp.w[j] * r / f.v_F * cuts.f_ir(h, kp, k0) / (4 * pi * pi);
        a += wt / (d * d);
        b += wt * d;
      }
    c.normA2 = a.value();
    c.normB2 = b.value();
    c.bound_constant = std::max(c.normA2 * std::pow(g, 2 * h), c.normB2 * std::pow(g, -4 * h));
  }
  return c;
}

}  // namespace hrg
