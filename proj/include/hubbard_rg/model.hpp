#pragma once

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "core.hpp"

namespace hrg {

inline double fermi_momentum_free(double mu_bar) {
  if (!(std::abs(mu_bar) < 1.0)) throw std::domain_error("fermi_momentum_free: |mu| must be < 1");
  return std::acos(mu_bar);
}

inline double dispersion(double k, double mu) { return mu - std::cos(k); }

// Even short-range potential stored by its values at x >= 0.
class InteractionPotential {
 public:
  InteractionPotential() = default;
  InteractionPotential(std::vector<double> half, double kappa, double C)
      : half_(std::move(half)), kappa_(kappa), C_(C) {
    if (half_.empty()) throw config_error("potential: empty support");
  }

  static InteractionPotential onsite() { return InteractionPotential({1.0}, 1.0, 1.0); }
  // v(0) = U, v(+-1) = V/2, so that fourier(p) = U + V cos p
  static InteractionPotential uv(double U, double V) {
    return InteractionPotential({U, V / 2}, 1.0, std::max(std::abs(U), std::abs(V)) * std::exp(1.0));
  }

  static InteractionPotential from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open potential file: " + path);
    std::string line;
    double kappa = -1, C = -1;
    std::map<int, double> vals;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (line[0] == '#') {
        auto kp = line.find("kappa=");
        auto cp = line.find("C=");
        if (kp != std::string::npos) kappa = std::stod(line.substr(kp + 6));
        if (cp != std::string::npos) C = std::stod(line.substr(cp + 2));
        continue;
      }
      std::istringstream ls(line);
      int x;
      double v;
      if (!(ls >> x >> v) || x < 0) throw config_error("bad potential line: " + line);
      vals[x] = v;
    }
    if (kappa <= 0 || C < 0) throw config_error("potential file needs header '# kappa=<rate> C=<const>'");
    if (vals.empty()) throw config_error("potential file has no values");
    std::vector<double> half(vals.rbegin()->first + 1, 0.0);
    for (auto [x, v] : vals) half[x] = v;
    return InteractionPotential(std::move(half), kappa, C);
  }

  double operator()(int x) const {
    std::size_t ax = static_cast<std::size_t>(std::abs(x));
    return ax < half_.size() ? half_[ax] : 0.0;
  }
  int radius() const { return static_cast<int>(half_.size()) - 1; }
  double kappa() const { return kappa_; }
  double decay_constant() const { return C_; }

  double fourier(double p) const {
    kahan<double> s;
    s += half_[0];
    for (std::size_t x = 1; x < half_.size(); ++x) s += 2.0 * half_[x] * std::cos(p * double(x));
    return s.value();
  }

  bool satisfies_decay_bound() const {
    for (std::size_t x = 0; x < half_.size(); ++x)
      if (std::abs(half_[x]) > C_ * std::exp(-kappa_ * double(x)) * (1 + 1e-12)) return false;
    return true;
  }

 private:
  std::vector<double> half_{1.0};
  double kappa_ = 1.0;
  double C_ = 1.0;
};

struct FermiPoint {
  double p_F = 0;
  double v_F = 0;
  double p_FL = 0;
  double a0 = 0;
  double t0 = 0;
  double mu = 0;  // cos p_F

  static FermiPoint make(double p_F, double gamma, int L = 0) {
    if (!(p_F > 0 && p_F < pi)) throw config_error("Fermi momentum must lie in (0, pi)");
    FermiPoint f;
    f.p_F = p_F;
    f.v_F = std::sin(p_F);
    f.mu = std::cos(p_F);
    f.a0 = std::min(p_F / 2, (pi - p_F) / 2);
    f.t0 = f.a0 * f.v_F / gamma;
    f.p_FL = p_F;
    if (L > 0) {
      double n = std::round(p_F * L / (2 * pi) - 0.5);
      f.p_FL = 2 * pi / L * (n + 0.5);
    }
    return f;
  }
  static FermiPoint from_mu(double mu, double gamma, int L = 0) { return make(fermi_momentum_free(mu), gamma, L); }
  // Fermi point moved onto the shifted grid, so that k -> k -+ p_F maps D_L to D'_L exactly
  FermiPoint snapped(double gamma, int L) const { return make(make(p_F, gamma, L).p_FL, gamma, L); }
};

inline double ir_dispersion(double kp, const FermiPoint& f, int omega) {
  return omega * f.v_F * std::sin(kp) + f.mu * (1 - std::cos(kp));
}

struct ModelParams {
  cplx lambda = 0.0;
  double mu_bar = 0.5;
  InteractionPotential potential = InteractionPotential::onsite();
  double beta = 64;
  int L = 64;
  double gamma = 2;
  int M_uv = 10;
  double theta = 0.75;

  void validate() const {
    if (!(gamma > 1)) throw config_error("gamma must exceed 1");
    if (!(beta > 0) || L <= 0) throw config_error("beta and L must be positive");
    if (!(std::abs(mu_bar) < 1)) throw config_error("|mu_bar| must be < 1");
    if (mu_bar == 0) throw config_error("mu_bar = 0 (half filling) is excluded");
    if (!(theta > 0 && theta < 1)) throw config_error("theta must lie in (0,1)");
  }
};

// rejects Fermi momenta within 10 grid spacings of 0, pi/2, pi
inline bool fermi_point_admissible(double p_F, int L) {
  double tol = 10 * 2 * pi / L;
  for (double bad : {0.0, pi / 2, pi})
    if (std::abs(p_F - bad) < tol) return false;
  return true;
}

inline bool check_positivity(const ModelParams& m, const FermiPoint& f, bool strict = false) {
  double vh = m.potential.fourier(2 * f.p_F);
  if (strict) return vh > 0 && m.lambda.real() >= 0;
  return m.lambda.real() * vh >= 0;
}

struct MomentumGrids {
  int L;
  double beta;
  double k(int n) const { return 2 * pi / L * n; }                 // D_L
  double k_shifted(int n) const { return 2 * pi / L * (n + 0.5); }  // D'_L
  double k0(int n) const { return 2 * pi / beta * (n + 0.5); }      // Matsubara
  std::vector<double> spatial() const {
    std::vector<double> v(L);
    for (int n = 0; n < L; ++n) v[n] = k(n - L / 2 + 1);
    return v;
  }
  std::vector<double> spatial_shifted() const {
    std::vector<double> v(L);
    for (int n = 0; n < L; ++n) v[n] = k_shifted(n - L / 2);
    return v;
  }
};

}  // namespace hrg
