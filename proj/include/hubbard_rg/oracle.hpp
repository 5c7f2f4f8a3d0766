#pragma once

#include <Eigen/Dense>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>

#include "correlations.hpp"
#include "g1map.hpp"

namespace hrg {

// free propagator as a callable of (x, x0)
using PropagatorFn = std::function<double(int, double)>;

inline PropagatorFn ground_state(double mu) {
  return [mu](int x, double x0) { return ground_state_propagator(x, x0, mu); };
}
inline PropagatorFn finite_volume(const FreePropagator& g) {
  return [&g](int x, double x0) { return g.kernel_sum(x, x0).real(); };
}

// Wick-rule response functions at lambda = 0; TC is the i = 2 triplet component
inline double wick_free_response(Point p, Response alpha, const PropagatorFn& g, int triplet = 2) {
  const int x = p.x;
  const double t = p.x0;
  switch (alpha) {
    case Response::C:
    case Response::S: return -2 * g(x, t) * g(-x, -t);
    case Response::SC: return -(g(x, t) * g(x, t) + g(-x, -t) * g(-x, -t));
    case Response::TC: {
      double v = g(1 - x, -t) * g(-x - 1, -t) - g(-x, -t) * g(-x, -t) + g(x - 1, t) * g(x + 1, t) - g(x, t) * g(x, t);
      return (triplet == 2 ? 0.5 : 0.25) * v;
    }
  }
  return 0;
}

// 2 (1/|h|) int dk/(2pi)^2 g_{D,+}(k) g_{D,-}(-k) with the cutoff of scales >= h, in polar coordinates
inline estimate bubble_quadrature(int h, const FermiPoint& f, double gamma, int panels_per_scale = 2, int angular = 4) {
  if (h > -1) throw config_error("bubble quadrature needs h <= -1");
  Cutoff chi0(gamma);
  auto C = [&](double r) { return chi0(r / f.t0) - chi0(std::pow(gamma, -h + 1) * r / f.t0); };
  auto run = [&](int pps, int ang) {
    // k0 = r cos(phi), v_F k = r sin(phi): dk dk0 = r dr dphi / v_F, integrand C^2 / r^2
    const double lo = std::log(f.t0 * std::pow(gamma, h - 1)), hi = std::log(f.t0 * gamma);
    double radial = integrate([&](double s) { double c = C(std::exp(s)); return c * c; }, lo, hi,
                              pps * (1 - h + 2));
    double angle = integrate([](double) { return 1.0; }, 0, 2 * pi, ang);
    return 2.0 / std::abs(h) * radial * angle / (4 * pi * pi * f.v_F);
  };
  double coarse = run(panels_per_scale, angular), fine = run(2 * panels_per_scale, 2 * angular);
  return {fine, std::abs(fine - coarse)};
}

// removes the 1/|h| term using scales h and 2h
inline estimate bubble_richardson(int h, const FermiPoint& f, double gamma) {
  auto a = bubble_quadrature(h, f, gamma), b = bubble_quadrature(2 * h, f, gamma);
  return {2 * b.value - a.value, 2 * b.error + a.error};
}

// the quadratic map iterated in extended precision, as a reference for the double trajectory
inline std::vector<std::complex<long double>> iterate_extended(cplx g0, const std::vector<cplx>& a_seq) {
  std::vector<std::complex<long double>> g{std::complex<long double>(g0)};
  for (const auto& a : a_seq) {
    auto c = g.back();
    g.push_back(c - std::complex<long double>(a) * c * c);
  }
  return g;
}

// density bilinear a^+_{u,s}(tau) a^-_{w,s}(tau)
struct Bilinear {
  int u, w, s;
  double tau;
};

// <T prod bilinears> for free fermions: (-1)^n det g(w_k - u_l, tau_k - tau_l), one determinant per spin
inline double wick_expectation(const std::vector<Bilinear>& ops, const PropagatorFn& g) {
  double r = 1;
  for (int s : {0, 1}) {
    std::vector<const Bilinear*> b;
    for (const auto& o : ops)
      if (o.s == s) b.push_back(&o);
    const int n = static_cast<int>(b.size());
    if (n == 0) continue;
    Eigen::MatrixXd M(n, n);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) M(k, l) = g(b[k]->w - b[l]->u, b[k]->tau - b[l]->tau);
    r *= (n % 2 ? -1.0 : 1.0) * M.determinant();
  }
  return r;
}

struct EdConfig {
  int L = 4;
  double beta = 10;
  double mu = 0.5;
  double lambda = 0;
  InteractionPotential potential = InteractionPotential::onsite();
};

// exact diagonalization on the full Fock space, blocked by (N_up, N_down)
class ExactDiagonalization {
 public:
  explicit ExactDiagonalization(const EdConfig& c) : c_(c) {
    if (c.L < 2) throw config_error("exact diagonalization needs L >= 2");
    if (c.L > 8) throw config_error("exact diagonalization is limited to L <= 8");
    if (!(c.beta > 0 && c.beta <= 20)) throw config_error("exact diagonalization is limited to 0 < beta <= 20");
    const int L = c.L;
    for (std::uint32_t st = 0; st < (1u << (2 * L)); ++st) {
      auto [nu, nd] = counts(st);
      auto& sec = sectors_[{nu, nd}];
      sec.index[st] = static_cast<int>(sec.states.size());
      sec.states.push_back(st);
    }
    e0_ = INFINITY;
    for (auto& [key, sec] : sectors_) {
      const int n = static_cast<int>(sec.states.size());
      Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        const std::uint32_t st = sec.states[i];
        H(i, i) = diagonal(st);
        for (int x = 0; x < L; ++x)
          for (int s = 0; s < 2; ++s)
            for (int d : {1, -1}) {
              int y = ((x + d) % L + L) % L;
              // -1/2 a^+_{x,s} a^-_{y,s}
              double sg = 1;
              std::uint32_t t = st;
              if (!annihilate(t, mode(y, s), sg) || !create(t, mode(x, s), sg)) continue;
              H(sec.index.at(t), i) += -0.5 * sg;
            }
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
      sec.E = es.eigenvalues();
      sec.U = es.eigenvectors();
      e0_ = std::min(e0_, sec.E.minCoeff());
    }
    z_ = 0;
    for (auto& [key, sec] : sectors_) {
      sec.w = (-c.beta * (sec.E.array() - e0_)).exp();
      z_ += sec.w.sum();
    }
  }

  int L() const { return c_.L; }
  double partition_weight() const { return z_; }

  // <T a^-_{x,s}(tau) a^+_{0,s}>, tau in (-beta, beta); tau = 0 is the lower branch
  double two_point(int x, double tau, int s = 0) const {
    const int L = c_.L;
    x = ((x % L) + L) % L;
    double sign = 1;
    while (tau > 0 && tau >= c_.beta) tau -= c_.beta, sign = -sign;
    while (tau <= -c_.beta) tau += c_.beta, sign = -sign;
    kahan<double> acc;
    for (const auto& [key, sec] : sectors_) {
      auto up = key;
      (s == 0 ? up.first : up.second) += 1;
      auto it = sectors_.find(up);
      if (it == sectors_.end()) continue;
      const Sector& hi = it->second;
      // A = <lo| a_x |hi>, B = <hi| a^+_0 |lo> in eigenbases
      Eigen::MatrixXd a = operator_matrix(sec, hi, mode(x, s), false);
      Eigen::MatrixXd b = operator_matrix(hi, sec, mode(0, s), true);
      Eigen::MatrixXd A = sec.U.transpose() * a * hi.U;
      Eigen::MatrixXd B = hi.U.transpose() * b * sec.U;
      for (int m = 0; m < A.rows(); ++m)
        for (int n = 0; n < A.cols(); ++n) {
          if (tau > 0) {
            // e^{-beta E_m} e^{tau (E_m - E_n)}, m in lo, n in hi
            double ex = -(c_.beta - tau) * (sec.E(m) - e0_) - tau * (hi.E(n) - e0_);
            acc += std::exp(ex) * A(m, n) * B(n, m);
          } else {
            // -e^{-beta E_n} <n|a^+_0|m> e^{tau (E_m - E_n)} <m|a_x|n>, n in hi
            double ex = -c_.beta * (hi.E(n) - e0_) + tau * (sec.E(m) - hi.E(n));
            acc += -std::exp(ex) * B(n, m) * A(m, n);
          }
        }
    }
    return sign * acc.value() / z_;
  }

  // <T rho_x(tau) rho_0> - <rho>^2 for the charge density, tau in [0, beta)
  double density_response(int x, double tau) const {
    const int L = c_.L;
    x = ((x % L) + L) % L;
    kahan<double> acc, mean;
    for (const auto& [key, sec] : sectors_) {
      const int n = static_cast<int>(sec.states.size());
      Eigen::VectorXd rx(n), r0(n);
      for (int i = 0; i < n; ++i) {
        rx(i) = site_count(sec.states[i], x);
        r0(i) = site_count(sec.states[i], 0);
      }
      Eigen::MatrixXd Rx = sec.U.transpose() * rx.asDiagonal() * sec.U;
      Eigen::MatrixXd R0 = sec.U.transpose() * r0.asDiagonal() * sec.U;
      for (int m = 0; m < n; ++m) {
        mean += std::exp(-c_.beta * (sec.E(m) - e0_)) * R0(m, m);
        for (int k = 0; k < n; ++k) {
          double ex = -(c_.beta - tau) * (sec.E(m) - e0_) - tau * (sec.E(k) - e0_);
          acc += std::exp(ex) * Rx(m, k) * R0(k, m);
        }
      }
    }
    double rho = mean.value() / z_;
    return acc.value() / z_ - rho * rho;
  }

 private:
  struct Sector {
    std::vector<std::uint32_t> states;
    std::map<std::uint32_t, int> index;
    Eigen::VectorXd E, w;
    Eigen::MatrixXd U;
  };

  static int mode(int x, int s) { return 2 * x + s; }

  std::pair<int, int> counts(std::uint32_t st) const {
    int nu = 0, nd = 0;
    for (int x = 0; x < c_.L; ++x) {
      nu += (st >> mode(x, 0)) & 1u;
      nd += (st >> mode(x, 1)) & 1u;
    }
    return {nu, nd};
  }

  int site_count(std::uint32_t st, int x) const {
    return static_cast<int>(((st >> mode(x, 0)) & 1u) + ((st >> mode(x, 1)) & 1u));
  }

  double periodic_potential(int d) const {
    const int L = c_.L;
    d = ((d % L) + L) % L;
    if (d > (L - 1) / 2) d -= L;
    return c_.potential(d);
  }

  double diagonal(std::uint32_t st) const {
    double e = 0;
    for (int x = 0; x < c_.L; ++x) {
      e += c_.mu * site_count(st, x);
      for (int y = 0; y < c_.L; ++y) e += c_.lambda * periodic_potential(x - y) * site_count(st, x) * site_count(st, y);
    }
    return e;
  }

  static bool create(std::uint32_t& st, int m, double& sign) {
    if (st >> m & 1u) return false;
    if (std::popcount(st & ((1u << m) - 1)) % 2) sign = -sign;
    st |= 1u << m;
    return true;
  }
  static bool annihilate(std::uint32_t& st, int m, double& sign) {
    if (!(st >> m & 1u)) return false;
    st &= ~(1u << m);
    if (std::popcount(st & ((1u << m) - 1)) % 2) sign = -sign;
    return true;
  }

  // matrix of a^-_m (from `from` into `to`) or a^+_m, in the occupation basis
  Eigen::MatrixXd operator_matrix(const Sector& to, const Sector& from, int m, bool creation) const {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(to.states.size()),
                                              static_cast<Eigen::Index>(from.states.size()));
    for (std::size_t j = 0; j < from.states.size(); ++j) {
      std::uint32_t t = from.states[j];
      double sg = 1;
      bool ok = creation ? create(t, m, sg) : annihilate(t, m, sg);
      if (ok) M(to.index.at(t), static_cast<Eigen::Index>(j)) = sg;
    }
    return M;
  }

  EdConfig c_;
  std::map<std::pair<int, int>, Sector> sectors_;
  double e0_ = 0, z_ = 0;
};

// d Omega_C(x, tau) / d lambda at lambda = 0: -int_0^beta dtau' of the joint cumulant of (V(tau'), rho_x(tau), rho_0(0))
inline estimate first_order_density_slope(int x, double tau, const EdConfig& c, int panels = 6) {
  FreePropagator free(c.mu, c.beta, c.L, 2.0);
  auto g = finite_volume(free);
  const int L = c.L;
  auto vL = [&](int d) {
    d = ((d % L) + L) % L;
    if (d > (L - 1) / 2) d -= L;
    return c.potential(d);
  };
  auto rho = [](int site, double t) {
    return std::vector<Bilinear>{{site, site, 0, t}, {site, site, 1, t}};
  };
  // E[prod of the given density-like factors], each factor a sum of bilinear monomials
  using Monomial = std::pair<double, std::vector<Bilinear>>;
  auto expand = [](const std::vector<std::vector<Monomial>>& factors) {
    std::vector<Monomial> out{{1.0, {}}};
    for (const auto& f : factors) {
      std::vector<Monomial> nxt;
      for (const auto& [c1, b1] : out)
        for (const auto& [c2, b2] : f) {
          auto b = b1;
          b.insert(b.end(), b2.begin(), b2.end());
          nxt.push_back({c1 * c2, b});
        }
      out = std::move(nxt);
    }
    return out;
  };
  auto E = [&](const std::vector<std::vector<Monomial>>& factors) {
    kahan<double> s;
    for (const auto& [coef, b] : expand(factors)) s += coef * wick_expectation(b, g);
    return s.value();
  };
  auto density = [&](int site, double t) {
    std::vector<Monomial> m;
    for (const auto& b : rho(site, t)) m.push_back({1.0, {b}});
    return m;
  };
  auto interaction = [&](double t) {
    std::vector<Monomial> m;
    for (int y = 0; y < L; ++y)
      for (int z = 0; z < L; ++z) {
        double v = vL(y - z);
        if (v == 0) continue;
        for (int s = 0; s < 2; ++s)
          for (int s2 = 0; s2 < 2; ++s2) m.push_back({v, {{y, y, s, t}, {z, z, s2, t}}});
      }
    // n_{y,s}^2 = n_{y,s}: the equal-time determinant drops this normal-ordering term
    for (int y = 0; y < L; ++y)
      for (int s = 0; s < 2; ++s) m.push_back({vL(0), {{y, y, s, t}}});
    return m;
  };
  const auto A = density(x, tau), B = density(0, 0.0);
  const double eA = E({A}), eB = E({B}), eAB = E({A, B});
  auto integrand = [&](double t) {
    auto V = interaction(t);
    double eV = E({V});
    double k3 = E({V, A, B}) - eV * eAB - eA * E({V, B}) - eB * E({V, A}) + 2 * eV * eA * eB;
    return -k3;
  };
  auto run = [&](int p) {
    return integrate(integrand, 0.0, tau, p) + integrate(integrand, tau, c.beta, p);
  };
  double coarse = run(panels), fine = run(2 * panels);
  return {fine, std::abs(fine - coarse)};
}

// the same slope by symmetric finite differences of the exact diagonalization
inline double ed_density_slope(int x, double tau, EdConfig c, double step = 1e-4) {
  c.lambda = step;
  double up = ExactDiagonalization(c).density_response(x, tau);
  c.lambda = -step;
  double dn = ExactDiagonalization(c).density_response(x, tau);
  return (up - dn) / (2 * step);
}

}  // namespace hrg
