#pragma once

#include "model.hpp"

namespace hrg {

// Smooth even cutoff: 1 on |t| <= 1, 0 on |t| >= gamma, with the exp(-1/s) smoothstep in between.
class Cutoff {
 public:
  explicit Cutoff(double gamma = 2.0) : gamma_(gamma) {
    if (!(gamma > 1)) throw config_error("cutoff: gamma must exceed 1");
  }
  double gamma() const { return gamma_; }

  double operator()(double t) const {
    double a = std::abs(t);
    if (a <= 1.0) return 1.0;
    if (a >= gamma_) return 0.0;
    double s = (a - 1.0) / (gamma_ - 1.0);
    double p = psi(1.0 - s), q = psi(s);
    return p / (p + q);
  }

  // scale-h shell in a radial variable r (already divided by t0 in the IR)
  double shell(int h, double r) const {
    return (*this)(std::pow(gamma_, -h) * r) - (*this)(std::pow(gamma_, -h + 1) * r);
  }

 private:
  static double psi(double s) { return s > 0 ? std::exp(-1.0 / s) : 0.0; }
  double gamma_;
};

// IR radial variable |k'| = sqrt(k0^2 + v_F^2 ||k'||^2), ||.|| the distance on the circle
inline double ir_radius(double kp, double k0, const FermiPoint& f) {
  double d = std::remainder(kp, 2 * pi);
  return std::hypot(k0, f.v_F * d);
}

struct ScaleCutoffs {
  Cutoff chi0;
  FermiPoint fermi;

  double chi_ir(double kp, double k0) const { return chi0(ir_radius(kp, k0, fermi) / fermi.t0); }
  double f_ir(int h, double kp, double k0) const { return chi0.shell(h, ir_radius(kp, k0, fermi) / fermi.t0); }
  // full-momentum UV weight 1 - chi(k - p_F) - chi(k + p_F)
  double f_uv(double k, double k0) const {
    return 1.0 - chi_ir(k - fermi.p_F, k0) - chi_ir(k + fermi.p_F, k0);
  }
  // Matsubara-frequency UV shells: H_1 = chi0(|k0|/gamma), H_h the difference of consecutive dilations
  double H(int h, double k0) const {
    if (h == 1) return chi0(std::abs(k0) / chi0.gamma());
    return chi0.shell(h, std::abs(k0));
  }
};

// lowest IR scale: min{h : t0 gamma^(h+1) > |k_m|}
inline int lowest_scale(const FermiPoint& f, double gamma, double beta, int L) {
  double km = std::hypot(pi / beta, f.v_F * pi / L);
  int h = static_cast<int>(std::floor(std::log(km / f.t0) / std::log(gamma) - 1.0)) - 2;
  while (!(f.t0 * std::pow(gamma, h + 1) > km)) ++h;
  while (f.t0 * std::pow(gamma, h) > km) --h;
  return h;
}

}  // namespace hrg
