#pragma once

#include <array>
#include <map>
#include <optional>
#include <random>

#include "g1map.hpp"
#include "model.hpp"

namespace hrg {

inline double bubble_constant(double v_F, double gamma) { return std::log(gamma) / (pi * v_F); }
inline double bubble_constant(const FermiPoint& f, double gamma) { return bubble_constant(f.v_F, gamma); }

struct Couplings {
  cplx g1 = 0, g2 = 0, g4 = 0, delta = 0, nu = 0;
  int j = 0;

  double local_norm() const {
    return std::max({std::abs(g1), std::abs(g2), std::abs(g4), std::abs(delta)});
  }
  double distance(const Couplings& o) const {
    return std::max({std::abs(g1 - o.g1), std::abs(g2 - o.g2), std::abs(g4 - o.g4), std::abs(delta - o.delta)});
  }
};

inline Couplings initial_couplings(cplx lambda, const InteractionPotential& v, const FermiPoint& f) {
  Couplings c;
  c.g1 = 2.0 * lambda * v.fourier(2 * f.p_F);
  c.g2 = c.g4 = 2.0 * lambda * v.fourier(0);
  return c;
}

struct Increments {
  cplx g1, g2, g4, delta;
};

inline Increments beta_second_order(const Couplings& v, cplx a_j) {
  cplx q = v.g1 * v.g1;
  return {-a_j * q, -a_j / 2.0 * q, 0.0, 0.0};
}

enum class AMode { exact_limit, finite_scale };
enum class RemainderModel { none, theta_tail, finite_size, both };
enum class RemainderDraw { random, worst };

inline RemainderModel parse_remainder_model(const std::string& s) {
  if (s == "none") return RemainderModel::none;
  if (s == "theta_tail") return RemainderModel::theta_tail;
  if (s == "finite_size") return RemainderModel::finite_size;
  if (s == "both") return RemainderModel::both;
  throw config_error("unknown remainder model: " + s);
}

struct FlowConstants {
  double b1 = 0.5, b2 = 0.5, b3 = 0.5;
  double c_bar = 0.25;
  double c0 = 1;
  double c4 = 0.2;
  double c5 = 1;
  double xi = 1;
  double c1 = -1;  // negative selects 4a
  double c2 = 6;
  double c3 = 2;
};

struct BetaConfig {
  double gamma = 2;
  AMode a_mode = AMode::exact_limit;
  RemainderModel remainder_model = RemainderModel::none;
  RemainderDraw draw = RemainderDraw::random;
  double theta = 0.75;
  double theta_prime = 0.9;
  FlowConstants k;
  std::optional<int> h_lbeta;
  std::uint64_t seed = 1;

  bool theta_terms() const {
    return remainder_model == RemainderModel::theta_tail || remainder_model == RemainderModel::both;
  }
  bool size_terms() const {
    return h_lbeta && (remainder_model == RemainderModel::finite_size || remainder_model == RemainderModel::both);
  }
};

// scale-dependent bubble a^{(j)}: the limit value, or the value cut off by the lowest scale
inline double bubble_at_scale(double a, int j, const BetaConfig& cfg) {
  if (cfg.a_mode == AMode::finite_scale && cfg.h_lbeta) return a * (1 - std::pow(cfg.gamma, -(j - *cfg.h_lbeta)));
  return a;
}

inline double finite_size_factor(int j, const BetaConfig& cfg) {
  return cfg.h_lbeta ? std::pow(cfg.gamma, -(j - *cfg.h_lbeta)) : 0.0;
}

struct RemainderState {
  std::mt19937_64 rng;
  bool complex_draws = false;
  explicit RemainderState(std::uint64_t seed = 1, bool cplx_draws = false) : rng(seed), complex_draws(cplx_draws) {}

  // a unit-bounded factor; along `dir` in worst-case mode
  cplx draw(const BetaConfig& cfg, cplx dir = 1.0) {
    if (cfg.draw == RemainderDraw::worst) return std::abs(dir) > 0 ? dir / std::abs(dir) : 1.0;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    if (!complex_draws) return u(rng);
    for (;;) {
      cplx z(u(rng), u(rng));
      if (std::norm(z) <= 1) return z;
    }
  }
};

struct StepContext {
  double a = 0;           // limit bubble constant
  double eps = 0;         // epsilon_j
  double eps0 = 0;        // initial smallness
  double memory = 0;      // sum_{j'>j} gamma^{-theta(j'-j)} |v_j' - v_j|
  cplx nu_remainder = 0;  // supplied by the counterterm model in coupled runs
};

// one step v_j -> v_{j-1}; returns the bubble coefficient used
inline Couplings flow_step(const Couplings& v, const BetaConfig& cfg, RemainderState& rs, const StepContext& ctx,
                           double* a_used = nullptr) {
  const int j = v.j;
  double aj = bubble_at_scale(ctx.a, j, cfg);
  if (a_used) *a_used = aj;
  auto inc = beta_second_order(v, aj);
  Couplings w = v;
  w.j = j - 1;
  w.g1 += inc.g1;
  w.g2 += inc.g2;
  w.g4 += inc.g4;
  w.delta += inc.delta;
  w.nu = cfg.gamma * v.nu + ctx.nu_remainder;

  const double e = ctx.eps, ag1 = std::abs(v.g1);
  if (cfg.theta_terms()) {
    double Et = std::pow(cfg.gamma, cfg.theta * j);
    double tilde = cfg.k.b1 * e * ag1 * ag1;
    w.g1 += rs.draw(cfg, v.g1) * (tilde + cfg.k.b2 * e * ag1 * Et + cfg.k.b3 * e * ctx.memory);
    w.g2 += rs.draw(cfg) * (tilde + cfg.k.b2 * e * e * Et);
    w.g4 += rs.draw(cfg) * (tilde + cfg.k.b2 * e * e * Et);
    w.delta += rs.draw(cfg) * (tilde + (cfg.k.c_bar * ctx.eps0 + cfg.k.b2 * e * e) * Et);
  }
  if (cfg.size_terms()) {
    double El = finite_size_factor(j, cfg);
    w.g1 += rs.draw(cfg, v.g1) * cfg.k.b2 * e * ag1 * El;
    w.g2 += rs.draw(cfg) * cfg.k.b2 * e * e * El;
    w.g4 += rs.draw(cfg) * cfg.k.b2 * e * e * El;
    w.delta += rs.draw(cfg) * cfg.k.b2 * e * e * El;
  }
  return w;
}

struct CheckResult {
  std::string name;
  bool pass = true;
  double measured = 0;    // the smallest constant that makes the inequality hold
  double configured = 0;  // the constant it is compared with
  std::optional<int> first_violation;

  void record(double ratio, double limit, int j) {
    measured = std::max(measured, ratio);
    if (ratio > limit * (1 + 1e-12) && pass) {
      pass = false;
      first_violation = j;
    }
  }
};

struct FlowTrajectory {
  std::vector<Couplings> v;    // v[i] at scale j = -i
  std::vector<double> eps;     // epsilon_j
  std::vector<cplx> a_eff;     // (g1_j - g1_{j-1})/g1_j^2, indexed like v (last entry unused)
  std::vector<unsigned> flags; // per-scale check bits, set bit = violated
  double a = 0;
  double eps0 = 0;
  int j0 = 0;
  std::optional<int> h_star;
  std::optional<int> escaped_at;
  std::vector<CheckResult> checks;
  BetaConfig cfg;

  int target() const { return -static_cast<int>(v.size()) + 1; }
  const Couplings& at(int j) const { return v.at(static_cast<std::size_t>(-j)); }
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  const CheckResult& check(const std::string& n) const {
    for (const auto& c : checks)
      if (c.name == n) return c;
    throw std::out_of_range("no check named " + n);
  }

  // closed-form approximant of g1 started at j0
  cplx gtilde(int j) const {
    if (j > j0) return at(j).g1;
    int n = j0 - j;
    if (n == 0) return at(j0).g1;
    kahan<cplx> s;
    for (int i = 0; i < n; ++i) s += a_eff[static_cast<std::size_t>(-(j0 - i))];
    return approximant(at(j0).g1, s.value() / double(n), n);
  }
};

enum CheckBit : unsigned { vdiff1_bit = 1, bej_bit = 2, vdiff_bit = 4, gerr_bit = 8, bAj_bit = 16, overstar_bit = 32 };

inline int threshold_j0(cplx g10, double c4) {
  double r = std::abs(g10);
  if (r == 0) return std::numeric_limits<int>::min() / 4;
  return -static_cast<int>(std::ceil(1.0 / (c4 * std::sqrt(r))));
}

struct FlowInput {
  Couplings start;
  double a = 0;
  cplx lambda = 0;
  std::vector<cplx> nu_fixed;  // optional nu_j indexed by -j
};

inline FlowInput flow_input(cplx lambda, const InteractionPotential& v, const FermiPoint& f, double gamma) {
  return {initial_couplings(lambda, v, f), bubble_constant(f, gamma), lambda, {}};
}

inline FlowTrajectory run_flow(const FlowInput& in, const BetaConfig& cfg, int target_h) {
  if (target_h > 0) throw config_error("target scale must be <= 0");
  FlowTrajectory t;
  t.cfg = cfg;
  t.a = in.a;
  const double g = cfg.gamma;
  int stop = target_h;
  if (cfg.h_lbeta) stop = std::max(stop, *cfg.h_lbeta + 1);
  const std::size_t N = static_cast<std::size_t>(-stop);
  t.v.reserve(N + 1);
  t.eps.reserve(N + 1);

  Couplings cur = in.start;
  cur.j = 0;
  if (!in.nu_fixed.empty()) cur.nu = in.nu_fixed[0];
  t.eps0 = std::max(std::abs(in.lambda), cur.local_norm());
  double eps = t.eps0;
  bool complex_run = in.lambda.imag() != 0;
  RemainderState rs(cfg.seed, complex_run);
  t.v.push_back(cur);
  t.eps.push_back(eps);
  const double c1 = cfg.k.c1 > 0 ? cfg.k.c1 : 4 * in.a;

  for (std::size_t i = 0; i < N; ++i) {
    StepContext ctx{in.a, eps, t.eps0, 0.0, 0.0};
    if (cfg.theta_terms() && cfg.k.b3 > 0) {
      kahan<double> m;
      for (std::size_t d = 1; d <= 60 && d <= i; ++d)
        m += std::pow(g, -cfg.theta * double(d)) * t.v[i - d].distance(cur);
      ctx.memory = m.value();
    }
    double aj = in.a;
    Couplings nxt = flow_step(cur, cfg, rs, ctx, &aj);
    if (!in.nu_fixed.empty() && i + 1 < in.nu_fixed.size()) nxt.nu = in.nu_fixed[i + 1];
    t.a_eff.push_back(cur.g1 != 0.0 ? (cur.g1 - nxt.g1) / (cur.g1 * cur.g1) : cplx(aj));
    eps = std::max(eps, nxt.local_norm());
    cur = nxt;
    t.v.push_back(cur);
    t.eps.push_back(eps);
    if (!t.escaped_at && eps > 2 * cfg.k.c3 * t.eps0) t.escaped_at = cur.j;
    if (!std::isfinite(std::abs(cur.g1)) || eps > 1e6) break;
  }
  t.a_eff.push_back(in.a);

  // thresholds
  t.j0 = threshold_j0(in.start.g1, cfg.k.c4);
  if (cfg.h_lbeta) {
    for (int j = std::min(t.j0 - 1, 0); j >= t.target(); --j)
      if (finite_size_factor(j, cfg) <= std::norm(t.at(j).g1)) t.h_star = j;
  }

  // per-scale checks
  t.flags.assign(t.v.size(), 0u);
  CheckResult vdiff1{"vdiff1", true, 0, 1, {}}, bej{"bej", true, 0, cfg.k.c3, {}}, vdiff{"vdiff", true, 0, c1, {}},
      gerr{"gerr", true, 0, 1, {}}, bAj{"bAj", true, 0, cfg.k.c2, {}}, over{"overstar", true, 0, 2, {}},
      thr{"threshold", true, 0, 1, {}};
  const int lowest = t.target();
  const int hs = t.h_star.value_or(lowest);
  const cplx g1j0 = t.j0 >= lowest ? t.at(t.j0).g1 : 0.0;
  for (int j = 0; j > lowest; --j) {
    const auto& vj = t.at(j);
    const auto& vn = t.at(j - 1);
    const double dv = vn.distance(vj), e = t.eps[static_cast<std::size_t>(-j)];
    unsigned& fl = t.flags[static_cast<std::size_t>(-j)];
    double El = finite_size_factor(j, cfg);
    if (j >= t.j0) {
      double rhs = 2 * in.a * std::norm(vj.g1) + 2 * cfg.k.c_bar * t.eps0 * std::pow(g, cfg.theta * j / 2) +
                   2 * cfg.k.b2 * e * e * El;
      bool ok = dv <= rhs * (1 + 1e-12);
      vdiff1.record(rhs > 0 ? dv / rhs : (dv > 0 ? INFINITY : 0), 1, j);
      if (!ok) fl |= vdiff1_bit;
    }
    if (j >= hs) {
      double r = t.eps0 > 0 ? e / t.eps0 : 0;
      bej.record(r, cfg.k.c3, j);
      if (r > cfg.k.c3) fl |= bej_bit;
    }
    if (j <= t.j0 && j - 1 >= hs) {
      double q = std::norm(vj.g1);
      double r = q > 0 ? dv / q : (dv > 0 ? INFINITY : 0);
      vdiff.record(r, c1, j - 1);
      if (r > c1) t.flags[static_cast<std::size_t>(-(j - 1))] |= vdiff_bit;
    }
  }
  if (t.j0 >= lowest && std::abs(g1j0) > 0) {
    kahan<cplx> asum;
    for (int j = t.j0; j >= std::max(hs, lowest); --j) {
      int n = t.j0 - j;
      cplx gt = n == 0 ? g1j0 : approximant(g1j0, asum.value() / double(n), n);
      double err = std::abs(t.at(j).g1 - gt), bound = std::pow(std::abs(gt), 1.5);
      gerr.record(bound > 0 ? err / bound : 0, 1, j);
      if (err > bound) t.flags[static_cast<std::size_t>(-j)] |= gerr_bit;
      double ad = std::abs(t.a_eff[static_cast<std::size_t>(-j)] - in.a) / std::abs(g1j0);
      if (j > lowest) {
        bAj.record(ad, cfg.k.c2, j);
        if (ad > cfg.k.c2) t.flags[static_cast<std::size_t>(-j)] |= bAj_bit;
      }
      asum += t.a_eff[static_cast<std::size_t>(-j)];
      if (cfg.h_lbeta && j <= t.j0) {
        double r = std::norm(t.at(j).g1) > 0 ? finite_size_factor(j, cfg) / std::norm(t.at(j).g1) : 0;
        thr.record(r, 1, j);
      }
    }
  }
  if (t.h_star) {
    double gs = std::abs(t.at(*t.h_star).g1);
    for (int j = *t.h_star - 1; j >= lowest; --j) {
      double r1 = gs > 0 ? std::abs(t.at(j).g1) / gs : 0;
      double r2 = t.eps[static_cast<std::size_t>(-j)] / (cfg.k.c3 * t.eps0);
      over.record(std::max(r1, r2), 2, j);
      if (std::max(r1, r2) > 2) t.flags[static_cast<std::size_t>(-j)] |= overstar_bit;
    }
  }
  t.checks = {vdiff1, bej, vdiff, gerr, bAj, over, thr};
  return t;
}

struct FixedPoint {
  cplx g1, g2, g4, delta;
  double last_increment = 0;
};

// limits of the couplings; the g1 tail still to come shifts g2 by half of it
inline FixedPoint fixed_point_values(const FlowTrajectory& t, double tol = 1e-5, int window = 10) {
  const int lo = t.target();
  if (t.v.size() < static_cast<std::size_t>(window) + 1) throw numeric_error("flow too short for a limit");
  double inc = 0;
  for (int j = lo + window; j > lo; --j) inc = std::max(inc, t.at(j - 1).distance(t.at(j)));
  if (inc > tol) throw numeric_error("flow not converged within the scale budget");
  const auto& e = t.at(lo);
  return {0.0, e.g2 - e.g1 / 2.0, e.g4, e.delta, inc};
}

// first-order predictions for the limits
inline double g2_limit_first_order(double lambda, const InteractionPotential& v, const FermiPoint& f) {
  return (2 * v.fourier(0) - v.fourier(2 * f.p_F)) * lambda;
}
inline double g4_limit_first_order(double lambda, const InteractionPotential& v) { return 2 * lambda * v.fourier(0); }

struct LogSumPoint {
  int h = 0;
  double log_arg = 0;  // a g1_j0 (j0 - h)
  double sum1 = 0, sum2 = 0;
  double w1 = 0, w2 = 0;
  double gap1 = 0, gap2 = 0;  // sum - (1/a) log(1 + ...) and its g2 analogue
};

struct LogSumReport {
  double d1 = 0, d2 = 0;
  int h_ref = 0;
  std::vector<LogSumPoint> points;  // from j0 downwards
  double max_gap1 = 0, max_gap2 = 0;
  double max_w1 = 0, max_w2 = 0;
  double wb1_constant = 0;  // max |w_{h-1} - w_h| (1 + x) log(1 + x) / lambda
};

// splits the g1 and g2 sums into a multiplicative w and an additive d fixed where a g1_j0 (j0 - h) = 1
inline LogSumReport log_sum_lemma(const FlowTrajectory& t, double lambda, const FixedPoint& lim) {
  LogSumReport r;
  const int lo = t.target();
  if (t.j0 < lo) throw config_error("flow does not reach j0");
  const double a = t.a, g = std::abs(t.at(t.j0).g1);
  kahan<double> s1, s2;
  for (int h = t.j0; h >= lo; --h) {
    s1 += t.at(h).g1.real();
    s2 += (t.at(h).g2 - lim.g2).real();
    LogSumPoint p;
    p.h = h;
    p.log_arg = a * g * (t.j0 - h);
    p.sum1 = s1.value();
    p.sum2 = s2.value();
    double L = std::log1p(p.log_arg);
    p.gap1 = p.sum1 - L / a;
    p.gap2 = p.sum2 - L / (2 * a);
    r.points.push_back(p);
  }
  std::size_t iref = 0;
  while (iref + 1 < r.points.size() && r.points[iref].log_arg < 1) ++iref;
  r.h_ref = r.points[iref].h;
  // at h_ref w vanishes by construction
  r.d1 = r.points[iref].sum1 - std::log1p(r.points[iref].log_arg) / a;
  r.d2 = r.points[iref].sum2 - std::log1p(r.points[iref].log_arg) / (2 * a);
  for (auto& p : r.points) {
    double L = std::log1p(p.log_arg);
    if (L > 0) {
      p.w1 = (p.sum1 - r.d1) / (L / a) - 1;
      p.w2 = (p.sum2 - r.d2) / (L / (2 * a)) - 1;
    }
    r.max_gap1 = std::max(r.max_gap1, std::abs(p.gap1));
    r.max_gap2 = std::max(r.max_gap2, std::abs(p.gap2));
    if (p.h <= r.h_ref) {
      r.max_w1 = std::max(r.max_w1, std::abs(p.w1));
      r.max_w2 = std::max(r.max_w2, std::abs(p.w2));
    }
  }
  for (std::size_t i = iref + 1; i < r.points.size(); ++i) {
    const auto &p = r.points[i], &q = r.points[i - 1];
    double x = q.log_arg;
    double env = (1 + x) * std::log1p(x);
    double c = std::max(std::abs(p.w1 - q.w1), std::abs(p.w2 - q.w2)) * env / std::abs(lambda);
    r.wb1_constant = std::max(r.wb1_constant, c);
  }
  return r;
}

// smallest h with a g1_j0 (j0 - h) >= x
inline int scale_for_log_argument(double x, cplx g1_j0, int j0, double a) {
  return j0 - static_cast<int>(std::ceil(x / (a * std::abs(g1_j0))));
}

struct BorelRay {
  cplx lambda;
  int target = 0;
  bool bounded = true;
  std::optional<int> escaped_at;
  double max_eps_ratio = 0;  // max eps_j / eps0
  double g1_growth = 0;      // max |g1_j| / |g1_0|
};

inline BorelRay probe_flow(cplx lambda, int target, const InteractionPotential& v, const FermiPoint& f,
                           BetaConfig cfg) {
  if (!cfg.h_lbeta) cfg.h_lbeta = target - 100;
  auto t = run_flow(flow_input(lambda, v, f, cfg.gamma), cfg, target);
  BorelRay r;
  r.lambda = lambda;
  r.target = target;
  r.escaped_at = t.escaped_at;
  double g0 = std::abs(t.v.front().g1);
  for (std::size_t i = 0; i < t.v.size(); ++i) {
    r.max_eps_ratio = std::max(r.max_eps_ratio, t.eps[i] / t.eps0);
    if (g0 > 0) r.g1_growth = std::max(r.g1_growth, std::abs(t.v[i].g1) / g0);
  }
  r.bounded = !t.escaped_at && t.target() == target && r.max_eps_ratio <= 2 * cfg.k.c3;
  return r;
}

// scalar smallness chain l_{j-1} = l_j + c l_j^2 over n scales; true if it stays below 2 l_0
inline bool smallness_chain(double l0, double c, int n, double* peak = nullptr) {
  double l = l0;
  for (int i = 0; i < n; ++i) l += c * l * l;
  if (peak) *peak = l;
  return l <= 2 * l0;
}

struct BorelReport {
  std::vector<BorelRay> sector;
  std::vector<BorelRay> disk;
  std::vector<bool> disk_chain;
  BorelRay excluded;
  bool sector_ok() const {
    for (const auto& r : sector)
      if (!r.bounded) return false;
    return true;
  }
  bool disk_ok() const {
    for (const auto& r : disk)
      if (!r.bounded) return false;
    for (bool b : disk_chain)
      if (!b) return false;
    return true;
  }
};

struct BorelProbe {
  double modulus = 0.02;
  double delta = pi / 4;
  int rays = 16;
  int target = -5000;
  std::vector<int> disk_scales{-10, -50, -200, -1000};
  double chain_constant = 0;  // 0 selects the bubble constant
  double excluded_lambda = -0.02;
  int excluded_target = -2000;
};

// disk radius c0 with c0 = 1/(8 c)
inline double borel_disk_radius(double chain_constant) { return 1 / (8 * chain_constant); }

inline BorelReport borel_domain_probe(const BorelProbe& p, const InteractionPotential& v, const FermiPoint& f,
                                      const BetaConfig& cfg) {
  BorelReport rep;
  double cbar = p.chain_constant > 0 ? p.chain_constant : bubble_constant(f, cfg.gamma);
  double c0 = borel_disk_radius(cbar);
  double amax = pi - p.delta;
  for (int i = 0; i < p.rays; ++i) {
    double arg = p.rays == 1 ? 0 : -amax + 2 * amax * i / (p.rays - 1);
    rep.sector.push_back(probe_flow(std::polar(p.modulus, arg), p.target, v, f, cfg));
  }
  for (int h : p.disk_scales) {
    double l = 0.9 * c0 / (1 + std::abs(h));
    rep.disk_chain.push_back(smallness_chain(l, cbar, std::abs(h)));
    for (double s : {1.0, -1.0}) rep.disk.push_back(probe_flow(s * l, h, v, f, cfg));
  }
  rep.excluded = probe_flow(p.excluded_lambda, p.excluded_target, v, f, cfg);
  return rep;
}

}  // namespace hrg
