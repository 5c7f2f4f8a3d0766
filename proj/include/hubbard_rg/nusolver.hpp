#pragma once

#include <functional>
#include <random>

#include "rgflow.hpp"

namespace hrg {

// nu_j on scales lowest <= j <= 1, stored from the top scale down
class NuSequence {
 public:
  NuSequence() = default;
  NuSequence(int lowest, double gamma, double theta)
      : lowest_(lowest), gamma_(gamma), theta_(theta), v_(static_cast<std::size_t>(2 - lowest), 0.0) {
    if (lowest > 0) throw config_error("nu sequence: lowest scale must be <= 0");
  }

  int lowest() const { return lowest_; }
  int size() const { return static_cast<int>(v_.size()); }
  double gamma() const { return gamma_; }
  double theta() const { return theta_; }
  cplx& operator[](int j) { return v_.at(static_cast<std::size_t>(1 - j)); }
  const cplx& operator[](int j) const { return v_.at(static_cast<std::size_t>(1 - j)); }

  double norm() const {
    double m = 0;
    for (int j = lowest_; j <= 1; ++j) m = std::max(m, std::pow(gamma_, -theta_ * j) * std::abs((*this)[j]));
    return m;
  }
  NuSequence operator-(const NuSequence& o) const {
    NuSequence r = *this;
    for (std::size_t i = 0; i < v_.size(); ++i) r.v_[i] -= o.v_[i];
    return r;
  }

 private:
  int lowest_ = 0;
  double gamma_ = 2, theta_ = 0.75;
  std::vector<cplx> v_;
};

// bar beta_nu^{(j)} = eps_j sum_{i>=j} nu_i B_{j,i} gamma^{-theta'(i-j)} + eps_j gamma^{theta' j} b_j
struct NuBetaModel {
  int lowest = -40;
  double gamma = 2;
  double theta = 0.75;
  double theta_prime = 0.9;
  double bound = 1;                    // |B_{j,i}|, |b_j| <= bound
  std::vector<double> b;               // b_j, indexed by 1 - j
  std::vector<std::vector<double>> B;  // B_{j,i}, indexed by (1 - j, 1 - i)
  std::function<double(int)> eps;      // eps_j

  double coefficient(int j) const { return b.at(static_cast<std::size_t>(1 - j)); }
  double kernel(int j, int i) const { return B.at(static_cast<std::size_t>(1 - j)).at(static_cast<std::size_t>(1 - i)); }
};

struct NuModelOptions {
  int lowest = -40;
  double gamma = 2;
  double theta = 0.75;
  double theta_prime = 0.9;
  double tadpole = 1;     // b_j = tadpole * v(0) * p_F / pi
  double kernel = 0.5;    // B_{j,i}, at the envelope unless randomized
  bool random_kernel = false;
  std::uint64_t seed = 1;
};

inline NuBetaModel default_nu_model(cplx lambda, const FermiPoint& f, const InteractionPotential& v,
                                    const NuModelOptions& o = {}) {
  if (!(o.theta > 0 && o.theta < o.theta_prime && o.theta_prime < 1))
    throw config_error("nu model needs 0 < theta < theta' < 1");
  NuBetaModel m;
  m.lowest = o.lowest;
  m.gamma = o.gamma;
  m.theta = o.theta;
  m.theta_prime = o.theta_prime;
  const std::size_t n = static_cast<std::size_t>(2 - o.lowest);
  const double bj = o.tadpole * v.fourier(0) * f.p_F / pi;
  m.b.assign(n, bj);
  m.B.assign(n, std::vector<double>(n, o.kernel));
  if (o.random_kernel) {
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> u(-o.kernel, o.kernel);
    for (auto& row : m.B)
      for (auto& x : row) x = u(rng);
  }
  m.bound = std::max(std::abs(bj), std::abs(o.kernel));
  const double e = std::abs(lambda);
  m.eps = [e](int) { return e; };
  return m;
}

// eps_j read from a flow trajectory; scale 1 uses eps_0, scales past the flow use its last value
inline void couple_to_flow(NuBetaModel& m, const FlowTrajectory& t) {
  std::vector<double> e = t.eps;
  m.eps = [e](int j) {
    std::size_t i = static_cast<std::size_t>(std::max(0, -j));
    return e.at(std::min(i, e.size() - 1));
  };
}

inline NuSequence T_operator(const NuSequence& nu, const NuBetaModel& m) {
  const int lo = m.lowest;
  if (nu.lowest() != lo) throw config_error("nu sequence and model disagree on the lowest scale");
  std::vector<cplx> beta(static_cast<std::size_t>(2 - lo), 0.0);
  for (int j = lo + 1; j <= 1; ++j) {
    kahan<cplx> s;
    for (int i = j; i <= 1; ++i) s += nu[i] * m.kernel(j, i) * std::pow(m.gamma, -m.theta_prime * (i - j));
    beta[static_cast<std::size_t>(1 - j)] = m.eps(j) * (s.value() + std::pow(m.gamma, m.theta_prime * j) * m.coefficient(j));
  }
  NuSequence r(lo, m.gamma, m.theta);
  // T_h = -sum_{j=lo+1}^{h} gamma^{-(h-j+1)} beta_j, accumulated upwards
  cplx acc = 0;
  r[lo] = 0;
  for (int h = lo + 1; h <= 1; ++h) {
    acc = acc / m.gamma + beta[static_cast<std::size_t>(1 - h)] / m.gamma;
    r[h] = -acc;
  }
  return r;
}

struct NuSolution {
  NuSequence nu;
  int iterations = 0;
  double contraction_ratio = 0;  // largest ratio of successive differences
  double residual = 0;           // ||nu - T(nu)||
  bool contracted = true;
};

inline NuSolution solve_fixed_point(const NuBetaModel& m, double tol = 1e-12, int max_iter = 200,
                                    const NuSequence* start = nullptr) {
  NuSolution s;
  s.nu = start ? *start : NuSequence(m.lowest, m.gamma, m.theta);
  double prev = -1;
  for (s.iterations = 1; s.iterations <= max_iter; ++s.iterations) {
    NuSequence nxt = T_operator(s.nu, m);
    double d = (nxt - s.nu).norm();
    if (prev > 0 && d > 0) {
      double r = d / prev;
      s.contraction_ratio = std::max(s.contraction_ratio, r);
      if (r >= 1) s.contracted = false;
    }
    s.nu = nxt;
    if (d < tol) break;
    prev = d;
  }
  s.residual = (T_operator(s.nu, m) - s.nu).norm();
  if (!s.contracted) throw numeric_error("counterterm map is not contracting");
  if (s.residual >= tol) throw numeric_error("counterterm iteration did not converge");
  return s;
}

// measured Lipschitz constant of T on random pairs from the ball of radius xi |lambda|
inline double measured_contraction(const NuBetaModel& m, double radius, int pairs = 20, std::uint64_t seed = 3) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto sample = [&] {
    NuSequence n(m.lowest, m.gamma, m.theta);
    for (int j = m.lowest + 1; j <= 1; ++j) n[j] = radius * std::pow(m.gamma, m.theta * j) * u(rng);
    return n;
  };
  double worst = 0;
  for (int p = 0; p < pairs; ++p) {
    auto x = sample(), y = sample();
    double d = (x - y).norm();
    if (d > 0) worst = std::max(worst, (T_operator(x, m) - T_operator(y, m)).norm() / d);
  }
  return worst;
}

struct PfInversion {
  double p_F = 0;
  double mu = 0;
  double nu1 = 0;
  double dnu_dmu = 0;
  int iterations = 0;
};

using NuModelFactory = std::function<NuBetaModel(double mu)>;

inline NuModelFactory standard_nu_factory(cplx lambda, const InteractionPotential& v, double gamma,
                                          const NuModelOptions& o = {}) {
  return [=](double mu) { return default_nu_model(lambda, FermiPoint::from_mu(mu, gamma), v, o); };
}

inline double top_counterterm(const NuModelFactory& make, double mu, double tol) {
  return solve_fixed_point(make(mu), tol).nu[1].real();
}

// solves mu_bar = mu + nu_1(mu) by fixed-point iteration in mu
inline PfInversion invert_pF(double mu_bar, const NuModelFactory& make, double tol = 1e-12, double fd_step = 1e-4) {
  if (!(std::abs(mu_bar) < 1)) throw config_error("|mu_bar| must be < 1");
  PfInversion r;
  double mu = mu_bar;
  for (r.iterations = 1; r.iterations <= 200; ++r.iterations) {
    double next = mu_bar - top_counterterm(make, mu, tol * 1e-2);
    if (!(std::abs(next) < 1)) throw numeric_error("p_F inversion left the band");
    bool done = std::abs(next - mu) < tol;
    mu = next;
    if (done) break;
  }
  r.mu = mu;
  r.p_F = std::acos(mu);
  r.nu1 = mu_bar - mu;
  double up = top_counterterm(make, mu + fd_step, tol * 1e-2), dn = top_counterterm(make, mu - fd_step, tol * 1e-2);
  r.dnu_dmu = (up - dn) / (2 * fd_step);
  if (std::abs(r.dnu_dmu) >= 0.5) throw numeric_error("|d nu / d mu| >= 1/2: outside the contracting regime");
  return r;
}

}  // namespace hrg
