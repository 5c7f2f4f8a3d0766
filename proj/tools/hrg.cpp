#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

#include "hubbard_rg/nusolver.hpp"
#include "hubbard_rg/oracle.hpp"

using namespace hrg;

namespace {

constexpr int exit_ok = 0, exit_config = 2, exit_numeric = 3, exit_check = 4;

// output sink for one table; "-" is stdout
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw config_error("cannot open output file: " + path);
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string num(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

class Csv {
 public:
  Csv(std::ostream& os, std::initializer_list<std::string> cols) : os_(os) {
    bool first = true;
    for (const auto& c : cols) {
      os_ << (first ? "" : ",") << c;
      first = false;
    }
    os_ << '\n';
  }
  template <class... T>
  void row(const T&... v) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cell(v), first = false), ...);
    os_ << '\n';
  }

 private:
  static std::string cell(double v) { return num(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(long v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }
  static std::string cell(bool v) { return v ? "1" : "0"; }
  std::ostream& os_;
};

// flat key=value summary, one pair per line
class Summary {
 public:
  explicit Summary(std::ostream& os) : os_(os) {}
  void put(const std::string& k, double v) { os_ << k << '=' << num(v) << '\n'; }
  void put(const std::string& k, int v) { os_ << k << '=' << v << '\n'; }
  void put(const std::string& k, const std::string& v) { os_ << k << '=' << v << '\n'; }
  void put(const std::string& k, const char* v) { os_ << k << '=' << v << '\n'; }
  void put(const std::string& k, bool v) { os_ << k << '=' << (v ? "pass" : "fail") << '\n'; }

 private:
  std::ostream& os_;
};

struct Common {
  double mu = 0.5;
  double gamma = 2;
  std::string potential = "onsite";
  double U = 1, V = 0.5;
  std::string out = "-";
  std::string summary = "-";
  std::uint64_t seed = 1;
};

void add_common(CLI::App* c, Common& o) {
  c->add_option("--mu", o.mu, "bare chemical potential mu_bar, |mu| < 1");
  c->add_option("--gamma", o.gamma, "scale ratio");
  c->add_option("--potential", o.potential, "onsite, uv, or a potential file");
  c->add_option("--U", o.U, "on-site strength for --potential uv");
  c->add_option("--V", o.V, "nearest-neighbour strength for --potential uv");
  c->add_option("--out", o.out, "CSV table path, - for stdout");
  c->add_option("--summary", o.summary, "key=value summary path, - for stdout");
  c->add_option("--seed", o.seed, "random seed");
}

InteractionPotential load_potential(const Common& o) {
  if (o.potential == "onsite") return InteractionPotential::onsite();
  if (o.potential == "uv") return InteractionPotential::uv(o.U, o.V);
  return InteractionPotential::from_file(o.potential);
}

FermiPoint fermi(const Common& o) {
  if (!(std::abs(o.mu) < 1)) throw config_error("|mu| must be < 1");
  return FermiPoint::from_mu(o.mu, o.gamma);
}

// summary goes to stdout after the table unless redirected
struct Outputs {
  Sink table, sum;
  explicit Outputs(const Common& o) : table(o.out), sum(o.summary) {}
};

std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> v;
  auto a = s.find(':'), b = s.rfind(':');
  if (a == std::string::npos || a == b) throw config_error("grid must be start:stop:step");
  double lo = std::stod(s.substr(0, a)), hi = std::stod(s.substr(a + 1, b - a - 1)), st = std::stod(s.substr(b + 1));
  if (!(st > 0) || hi < lo) throw config_error("grid needs step > 0 and stop >= start");
  for (int i = 0;; ++i) {
    double x = lo + i * st;
    if (x > hi + 1e-9 * st) break;
    v.push_back(x);
  }
  return v;
}

// ---- prop

struct PropOptions {
  Common c;
  double beta = 64;
  int L = 256;
  int M = 10;
  std::string points;
  std::string scale_table;
  int scale_M = 8;
};

int cmd_prop(const PropOptions& o) {
  load_potential(o.c);
  auto f = fermi(o.c);
  if (!(o.beta > 0) || o.L <= 0 || o.M < 1) throw config_error("prop needs beta > 0, L > 0, M >= 1");
  std::vector<std::pair<int, double>> pts;
  if (!o.points.empty()) {
    std::ifstream in(o.points);
    if (!in) throw config_error("cannot open points file: " + o.points);
    int x;
    double x0;
    while (in >> x >> x0) pts.emplace_back(x, x0);
    if (pts.empty()) throw config_error("points file has no 'x x0' rows");
  } else {
    for (int x : {0, 1, 3, 10})
      for (double x0 : {-2.5, 0.0, 0.5, 4.0}) pts.emplace_back(x, x0);
  }
  FreePropagator P(o.c.mu, o.beta, o.L, o.c.gamma);
  Outputs out(o.c);
  Csv csv(out.table.os(), {"x", "x0", "kernel", "cutoff", "abs_diff", "asymptotic_re", "asymptotic_im", "flag"});
  double worst = 0;
  int flagged = 0;
  for (auto [x, x0] : pts) {
    double k = P.kernel_sum(x, x0).real(), c = P.cutoff_sum(x, x0, o.M).real();
    std::string flag;
    // at the equal point the cutoff sum tends to the half-sum of the one-sided limits
    if (x % o.L == 0 && std::remainder(x0, o.beta) == 0) {
      k = 0.5 * (P.kernel_sum_at_zero(x, 1) + P.kernel_sum_at_zero(x, -1)).real();
      flag = "discontinuity";
      ++flagged;
    } else {
      worst = std::max(worst, std::abs(k - c));
    }
    cplx a = (x == 0 && x0 == 0) ? cplx(NAN, NAN) : free_asymptotic(x, x0, f);
    csv.row(x, x0, k, c, std::abs(k - c), a.real(), a.imag(), flag);
  }
  Summary s(out.sum.os());
  s.put("points", int(pts.size()));
  s.put("discontinuity_points", flagged);
  s.put("max_abs_diff", worst);
  s.put("M", o.M);
  if (!o.scale_table.empty()) {
    auto fs = f.snapped(o.c.gamma, o.L);
    ScaleDecomposition D(fs, o.beta, o.L, o.c.gamma, o.scale_M);
    Sink st(o.scale_table);
    Csv t(st.os(), {"h", "kind", "omega", "x", "x0", "re", "im"});
    for (auto [x, x0] : pts) {
      for (int h = 1; h <= o.scale_M; ++h) t.row(h, "uv", 0, x, x0, D.uv_single_scale(h, x, x0), 0.0);
      for (int h = 0; h >= D.lowest(); --h)
        for (int w : {1, -1}) {
          cplx g = D.ir_single_scale(h, w, x, x0);
          t.row(h, "ir", w, x, x0, g.real(), g.imag());
        }
    }
    s.put("lowest_scale", D.lowest());
  }
  return exit_ok;
}

// ---- flow

struct FlowOptions {
  Common c;
  double lambda = 0.02;
  double arg = 0;
  int h = -2000;
  std::string remainders = "none";
  std::string draw = "random";
  std::string a_mode = "exact";
  std::optional<int> h_lbeta;
  int stride = 1;
};

BetaConfig beta_config(const FlowOptions& o) {
  BetaConfig cfg;
  cfg.gamma = o.c.gamma;
  cfg.remainder_model = parse_remainder_model(o.remainders);
  if (o.draw == "random") cfg.draw = RemainderDraw::random;
  else if (o.draw == "worst") cfg.draw = RemainderDraw::worst;
  else throw config_error("draw must be random or worst");
  if (o.a_mode == "exact") cfg.a_mode = AMode::exact_limit;
  else if (o.a_mode == "finite") cfg.a_mode = AMode::finite_scale;
  else throw config_error("a-mode must be exact or finite");
  cfg.h_lbeta = o.h_lbeta;
  cfg.seed = o.c.seed;
  return cfg;
}

int cmd_flow(const FlowOptions& o) {
  auto v = load_potential(o.c);
  auto f = fermi(o.c);
  if (o.stride < 1) throw config_error("stride must be >= 1");
  auto cfg = beta_config(o);
  cplx lam = std::polar(o.lambda, o.arg);
  auto t = run_flow(flow_input(lam, v, f, o.c.gamma), cfg, o.h);
  Outputs out(o.c);
  Csv csv(out.table.os(), {"j", "g1_re", "g1_im", "g2_re", "g2_im", "g4_re", "g4_im", "delta_re", "delta_im", "eps",
                           "flags"});
  for (std::size_t i = 0; i < t.v.size(); ++i) {
    if (i % static_cast<std::size_t>(o.stride) && i + 1 != t.v.size()) continue;
    const auto& c = t.v[i];
    csv.row(c.j, c.g1.real(), c.g1.imag(), c.g2.real(), c.g2.imag(), c.g4.real(), c.g4.imag(), c.delta.real(),
            c.delta.imag(), t.eps[i], int(t.flags[i]));
  }
  Summary s(out.sum.os());
  s.put("a", t.a);
  s.put("eps0", t.eps0);
  s.put("j0", t.j0);
  s.put("lowest", t.target());
  if (t.h_star) s.put("h_star", *t.h_star);
  if (t.escaped_at) s.put("escaped_at", *t.escaped_at);
  for (const auto& c : t.checks) {
    s.put("check_" + c.name, c.pass);
    s.put("check_" + c.name + "_measured", c.measured);
    s.put("check_" + c.name + "_configured", c.configured);
    if (c.first_violation) s.put("check_" + c.name + "_first_violation", *c.first_violation);
  }
  return t.all_pass() ? exit_ok : exit_check;
}

// ---- exponents

struct ExponentsOptions {
  Common c;
  double lambda = 0.03;
  std::string grid;
  double log_argument = 1e3;
  double c_eta = 0.5;
};

struct ExponentRun {
  FlowTrajectory t;
  FixedPoint lim;
  RenormSet R;
  ExponentSet e;
  int h = 0;
};

ExponentRun exponent_run(double lam, const InteractionPotential& v, const FermiPoint& f, double gamma, double log_arg,
                         double c_eta) {
  if (!(lam > 0)) throw config_error("exponents need lambda > 0");
  BetaConfig cfg;
  cfg.gamma = gamma;
  auto in = flow_input(lam, v, f, gamma);
  int j0 = threshold_j0(in.start.g1, cfg.k.c4);
  auto head = run_flow(in, cfg, std::min(j0, -1));
  ExponentRun r;
  r.h = -static_cast<int>(std::ceil(log_arg / (in.a * std::abs(head.at(j0).g1))));
  r.h = std::min(r.h, scale_for_log_argument(log_arg, head.at(j0).g1, j0, in.a));
  r.t = run_flow(in, cfg, r.h - 20);
  r.lim = fixed_point_values(r.t, 1e-5);
  r.R = z_flow(r.t, r.lim);
  r.e = exponents(r.lim, f, lam, v, in.a, r.t.at(j0).g1, gamma, ExponentOptions{c_eta});
  return r;
}

int cmd_exponents(const ExponentsOptions& o) {
  auto v = load_potential(o.c);
  auto f = fermi(o.c);
  std::vector<double> lams = o.grid.empty() ? std::vector<double>{o.lambda} : parse_grid(o.grid);
  Outputs out(o.c);
  Csv csv(out.table.os(), {"lambda", "h", "g2_lim", "eta_z", "eta_C", "eta_S", "eta_SC", "eta_TC", "X_C", "X_S", "X_SC",
                           "X_TC", "f", "f_first_order", "c", "q_2C", "q_2S", "q_2SC", "q_2TC"});
  int inside = 0;
  for (double lam : lams) {
    auto r = exponent_run(lam, v, f, o.c.gamma, o.log_argument, o.c_eta);
    std::array<double, 4> q{};
    bool ok = true;
    for (std::size_t i = 0; i < 4; ++i) {
      q[i] = q_coefficient(r.R, oscillating_channels[i], r.h);
      if (std::abs(q[i] - zeta_bar(oscillating_channels[i]) / 2) > 5 * lam) ok = false;
    }
    inside += ok;
    const auto& e = r.e;
    csv.row(lam, r.h, r.lim.g2.real(), e.eta_z, e.eta2[0], e.eta2[1], e.eta2[2], e.eta2[3], e.X[0], e.X[1], e.X[2],
            e.X[3], e.f_lambda, e.f_first_order, e.c_linear, q[0], q[1], q[2], q[3]);
  }
  Summary s(out.sum.os());
  s.put("runs", int(lams.size()));
  s.put("check_q_band", inside == int(lams.size()));
  return inside == int(lams.size()) ? exit_ok : exit_check;
}

// ---- nu

struct NuOptions {
  Common c;
  double lambda = 0.01;
  int lowest = -40;
  double theta = 0.75, theta_prime = 0.9;
  double tadpole = 1, kernel = 0.5;
  bool random_kernel = false;
  bool invert = true;
  double tol = 1e-12;
};

int cmd_nu(const NuOptions& o) {
  auto v = load_potential(o.c);
  NuModelOptions mo{o.lowest, o.c.gamma, o.theta, o.theta_prime, o.tadpole, o.kernel, o.random_kernel, o.c.seed};
  auto f = fermi(o.c);
  auto m = default_nu_model(o.lambda, f, v, mo);
  auto sol = solve_fixed_point(m, o.tol);
  Outputs out(o.c);
  Csv csv(out.table.os(), {"j", "nu_re", "nu_im", "weighted"});
  for (int j = 1; j >= o.lowest; --j)
    csv.row(j, sol.nu[j].real(), sol.nu[j].imag(), std::pow(o.c.gamma, -o.theta * j) * std::abs(sol.nu[j]));
  Summary s(out.sum.os());
  s.put("iterations", sol.iterations);
  s.put("contraction_ratio", sol.contraction_ratio);
  s.put("lipschitz_measured", measured_contraction(m, std::abs(o.lambda)));
  s.put("residual", sol.residual);
  s.put("norm", sol.nu.norm());
  s.put("nu_top", sol.nu[1].real());
  bool ok = sol.contraction_ratio <= 0.5 && sol.residual < o.tol;
  s.put("check_contraction", sol.contraction_ratio <= 0.5);
  if (o.invert) {
    auto inv = invert_pF(o.c.mu, standard_nu_factory(o.lambda, v, o.c.gamma, mo), o.tol);
    s.put("p_F", inv.p_F);
    s.put("p_F_shift", inv.p_F - std::acos(o.c.mu));
    s.put("mu_bare", inv.mu);
    s.put("dnu_dmu", inv.dnu_dmu);
    s.put("check_dnu_dmu", std::abs(inv.dnu_dmu) < 0.5);
  }
  return ok ? exit_ok : exit_check;
}

// ---- correlations

struct CorrelationOptions {
  Common c;
  double lambda = 0;
  double rmin = 10, rmax = 1e3;
  int n = 12;
  std::string direction = "time";
  double log_argument = 1e3;
};

int cmd_correlations(const CorrelationOptions& o) {
  auto v = load_potential(o.c);
  auto f = fermi(o.c);
  if (!(o.rmin >= 1 && o.rmax > o.rmin) || o.n < 2) throw config_error("need 1 <= rmin < rmax and n >= 2");
  if (o.direction != "time" && o.direction != "space") throw config_error("direction must be time or space");
  ScaleWeights w = ScaleWeights::free(o.c.gamma);
  if (o.lambda != 0) {
    auto r = exponent_run(o.lambda, v, f, o.c.gamma, o.log_argument, 0.5);
    w = ScaleWeights(std::move(r.R), r.e, o.c.gamma);
  }
  std::optional<PropagatorFn> oracle;
  if (o.lambda == 0) oracle = ground_state(f.mu);
  Outputs out(o.c);
  Csv csv(out.table.os(), {"r", "x", "x0", "alpha", "scale_sum", "closed_form", "rel_error", "X", "zeta", "wick"});
  double worst = 0;
  for (double r : geometric_radii(o.rmin, o.rmax, o.n)) {
    Point p = o.direction == "time" ? time_axis_point(r, f) : Point{static_cast<int>(std::lround(r)), 0.0};
    for (Response a : all_responses) {
      auto c = assemble_response(p, a, w, f, o.c.gamma);
      worst = std::max(worst, c.rel_error);
      double wk = oracle ? wick_free_response(p, a, *oracle) : NAN;
      csv.row(r, p.x, p.x0, to_string(a), c.scale_sum.real(), c.closed_form, c.rel_error, c.X, c.zeta, wk);
    }
    auto s2 = two_point(p, w, f, o.c.gamma);
    csv.row(r, p.x, p.x0, "S2", s2.scale_sum.real(), s2.closed_form, s2.rel_error, 1.0, 0.0,
            oracle ? (*oracle)(p.x, p.x0) : NAN);
  }
  Summary s(out.sum.os());
  s.put("max_rel_error", worst);
  if (o.lambda != 0) {
    bool ok = worst <= 10 * std::sqrt(std::abs(o.lambda));
    s.put("check_envelope", ok);
    return ok ? exit_ok : exit_check;
  }
  return exit_ok;
}

// ---- g1map

struct G1MapOptions {
  Common c;
  double modulus = 5e-3, arg = 0;
  double a = 0.25;
  std::string sigma = "zero";
  double c0 = -1;  // negative: a / (2 epsilon)
  long n = 100000;
  double delta = pi / 4, eps = 1e-2;
  long stride = 1000;
};

SigmaModel parse_sigma(const std::string& s) {
  for (SigmaModel m : {SigmaModel::zero, SigmaModel::constant, SigmaModel::random_disk, SigmaModel::alternating})
    if (to_string(m) == s) return m;
  throw config_error("unknown sigma model: " + s);
}

int cmd_g1map(const G1MapOptions& o) {
  if (o.n < 1 || o.stride < 1) throw config_error("n and stride must be >= 1");
  SectorDomain D{o.eps, o.delta};
  cplx g0 = std::polar(o.modulus, o.arg);
  if (!D.contains(g0)) throw config_error("g0 lies outside the sector domain");
  double c0 = o.c0 >= 0 ? o.c0 : o.a / (2 * o.eps);
  auto st = iterate(g0, CoefficientSequence(o.a, parse_sigma(o.sigma), c0 * std::abs(g0), o.c.seed), o.n);
  Outputs out(o.c);
  Csv csv(out.table.os(), {"n", "g_re", "g_im", "gt_re", "gt_im"});
  for (std::size_t k = 0; k < st.g.size(); ++k) {
    if (k % static_cast<std::size_t>(o.stride) && k + 1 != st.g.size()) continue;
    cplx gt = approximant(st.g0, st.A[k], long(k));
    csv.row(long(k), st.g[k].real(), st.g[k].imag(), gt.real(), gt.imag());
  }
  auto sr = verify_sector(st, D);
  auto cr = verify_closeness(st);
  bool den = verify_denominator(st, o.delta), avg = verify_averages(st, c0);
  Summary s(out.sum.os());
  s.put("check_sector", sr.map_inside);
  s.put("check_approximant_sector", sr.approximant_inside);
  s.put("check_closeness", cr.pass);
  s.put("closeness_worst_ratio", cr.worst_ratio);
  s.put("check_denominator", den);
  s.put("check_averages", avg);
  s.put("max_abs_arg", sr.max_abs_arg);
  bool ok = sr.map_inside && sr.approximant_inside && cr.pass && den && avg;
  return ok ? exit_ok : exit_check;
}

// ---- borel

struct BorelOptions {
  Common c;
  double modulus = 0.02;
  double delta = pi / 4;
  int rays = 16;
  int target = -5000;
  int radii = 4;
};

int cmd_borel(const BorelOptions& o) {
  auto v = load_potential(o.c);
  auto f = fermi(o.c);
  if (o.rays < 1 || o.radii < 1 || o.target > 0) throw config_error("borel needs rays, radii >= 1 and target <= 0");
  BorelProbe p;
  p.modulus = o.modulus;
  p.delta = o.delta;
  p.rays = o.rays;
  p.target = o.target;
  p.disk_scales.clear();
  for (int i = 0; i < o.radii; ++i)
    p.disk_scales.push_back(-static_cast<int>(std::lround(10 * std::pow(100.0, o.radii == 1 ? 0.0 : double(i) / (o.radii - 1)))));
  BetaConfig cfg;
  cfg.gamma = o.c.gamma;
  cfg.seed = o.c.seed;
  auto rep = borel_domain_probe(p, v, f, cfg);
  Outputs out(o.c);
  Csv csv(out.table.os(), {"kind", "lambda_re", "lambda_im", "target", "bounded", "max_eps_ratio", "g1_growth",
                           "escaped_at"});
  auto row = [&](const char* k, const BorelRay& r) {
    csv.row(k, r.lambda.real(), r.lambda.imag(), r.target, r.bounded, r.max_eps_ratio, r.g1_growth,
            r.escaped_at ? std::to_string(*r.escaped_at) : std::string());
  };
  for (const auto& r : rep.sector) row("sector", r);
  for (const auto& r : rep.disk) row("disk", r);
  row("excluded", rep.excluded);
  Summary s(out.sum.os());
  s.put("disk_radius", borel_disk_radius(bubble_constant(f, o.c.gamma)));
  s.put("check_sector", rep.sector_ok());
  s.put("check_disk", rep.disk_ok());
  s.put("excluded_g1_growth", rep.excluded.g1_growth);
  return rep.sector_ok() && rep.disk_ok() ? exit_ok : exit_check;
}

// ---- oracle

struct OracleOptions {
  Common c;
  int L = 4;
  double beta = 10;
  double lambda = 0;
  double step = 1e-4;
  bool slopes = true;
};

int cmd_oracle(const OracleOptions& o) {
  EdConfig e;
  e.L = o.L;
  e.beta = o.beta;
  e.mu = o.c.mu;
  e.lambda = o.lambda;
  e.potential = load_potential(o.c);
  ExactDiagonalization ed(e);
  FreePropagator fp(e.mu, e.beta, e.L, o.c.gamma);
  auto g = finite_volume(fp);
  Outputs out(o.c);
  Csv csv(out.table.os(), {"quantity", "x", "tau", "exact", "reference", "abs_diff"});
  double kern = 0, slope = 0;
  for (int x = 0; x < e.L; ++x)
    for (double t : {-0.75 * e.beta, -0.1 * e.beta, 0.0, 0.1 * e.beta, 0.5 * e.beta, 0.9 * e.beta}) {
      double a = ed.two_point(x, t), b = g(x, t);
      kern = std::max(kern, std::abs(a - b));
      csv.row("two_point", x, t, a, b, std::abs(a - b));
    }
  Summary s(out.sum.os());
  bool ok = true;
  if (o.lambda == 0) {
    s.put("kernel_max_diff", kern);
    s.put("check_kernel", kern <= 1e-10);
    ok = kern <= 1e-10;
  }
  if (o.slopes) {
    EdConfig z = e;
    z.lambda = 0;
    for (int x = 0; x < e.L; ++x)
      for (double t : {0.05 * e.beta, 0.3 * e.beta}) {
        double w = first_order_density_slope(x, t, z).value, d = ed_density_slope(x, t, z, o.step);
        slope = std::max(slope, std::abs(w - d) / std::abs(d));
        csv.row("density_slope", x, t, d, w, std::abs(w - d));
      }
    s.put("slope_max_rel_diff", slope);
    s.put("check_slope", slope <= 1e-2);
    ok = ok && slope <= 1e-2;
  }
  auto f = fermi(o.c);
  auto b = bubble_richardson(-8, f, o.c.gamma);
  s.put("bubble_richardson", b.value);
  s.put("bubble_exact", bubble_constant(f, o.c.gamma));
  return ok ? exit_ok : exit_check;
}

template <class F>
int guarded(F&& run) {
  try {
    return run();
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return exit_numeric;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return exit_numeric;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Renormalization-group engine for the one-dimensional extended Hubbard model"};
  app.set_config("--config", "", "key=value configuration file with [command] sections");
  app.require_subcommand(1);

  PropOptions prop;
  auto* p = app.add_subcommand("prop", "free propagator tables and representation diagnostics");
  add_common(p, prop.c);
  p->add_option("--beta", prop.beta);
  p->add_option("--L", prop.L);
  p->add_option("--M", prop.M, "ultraviolet cutoff scale");
  p->add_option("--points", prop.points, "file of 'x x0' rows");
  p->add_option("--scale-table", prop.scale_table, "write single-scale propagators (h, kind, omega, x, x0, re, im)");
  p->add_option("--scale-M", prop.scale_M);

  FlowOptions flow;
  auto* fl = app.add_subcommand("flow", "running couplings with remainder models and per-scale checks");
  fl->set_help_flag("--help", "Print this help message and exit");
  add_common(fl, flow.c);
  fl->add_option("--lambda", flow.lambda, "coupling modulus");
  fl->add_option("--lambda-arg", flow.arg, "coupling argument in radians");
  fl->add_option("--h", flow.h, "lowest scale");
  fl->add_option("--remainders", flow.remainders, "none, theta_tail, finite_size or both");
  fl->add_option("--draw", flow.draw, "random or worst");
  fl->add_option("--a-mode", flow.a_mode, "exact or finite");
  fl->add_option("--h-lbeta", flow.h_lbeta, "finite-volume scale");
  fl->add_option("--stride", flow.stride, "emit every n-th scale");

  ExponentsOptions ex;
  auto* e = app.add_subcommand("exponents", "anomalous exponents and logarithmic corrections");
  add_common(e, ex.c);
  e->add_option("--lambda", ex.lambda);
  e->add_option("--lambda-grid", ex.grid, "start:stop:step");
  e->add_option("--log-argument", ex.log_argument, "run until a g1 |h| reaches this value");
  e->add_option("--c-eta", ex.c_eta, "eta_z = c_eta (g2 / 2 pi v_F)^2");

  NuOptions nu;
  auto* n = app.add_subcommand("nu", "counterterm fixed point and Fermi momentum inversion");
  add_common(n, nu.c);
  n->add_option("--lambda", nu.lambda);
  n->add_option("--lowest", nu.lowest);
  n->add_option("--theta", nu.theta);
  n->add_option("--theta-prime", nu.theta_prime);
  n->add_option("--tadpole", nu.tadpole);
  n->add_option("--kernel", nu.kernel);
  n->add_flag("--random-kernel", nu.random_kernel);
  n->add_option("--invert", nu.invert, "solve for the bare chemical potential");
  n->add_option("--tol", nu.tol);

  CorrelationOptions co;
  auto* c = app.add_subcommand("correlations", "response functions from the scale sums and closed forms");
  add_common(c, co.c);
  c->add_option("--lambda", co.lambda);
  c->add_option("--rmin", co.rmin);
  c->add_option("--rmax", co.rmax);
  c->add_option("--n", co.n, "number of radii");
  c->add_option("--direction", co.direction, "time or space");
  c->add_option("--log-argument", co.log_argument);

  G1MapOptions gm;
  auto* g = app.add_subcommand("g1map", "quadratic map, approximant and sector bounds");
  add_common(g, gm.c);
  g->add_option("--modulus", gm.modulus, "|g0|");
  g->add_option("--arg", gm.arg, "arg g0");
  g->add_option("--a", gm.a);
  g->add_option("--sigma", gm.sigma, "zero, constant, random_disk or alternating");
  g->add_option("--c0", gm.c0, "perturbation bound |sigma| <= c0 |g0|");
  g->add_option("--n", gm.n, "iterations");
  g->add_option("--delta", gm.delta);
  g->add_option("--eps", gm.eps);
  g->add_option("--stride", gm.stride);

  BorelOptions bo;
  auto* b = app.add_subcommand("borel", "boundedness of the flow on the sector and the disk chain");
  add_common(b, bo.c);
  b->add_option("--modulus", bo.modulus);
  b->add_option("--delta", bo.delta);
  b->add_option("--rays", bo.rays);
  b->add_option("--target", bo.target);
  b->add_option("--radii", bo.radii, "number of disk-chain scales between -10 and -1000");

  OracleOptions orc;
  auto* o = app.add_subcommand("oracle", "exact diagonalization against the free kernels and Wick slopes");
  add_common(o, orc.c);
  o->add_option("--L", orc.L);
  o->add_option("--beta", orc.beta);
  o->add_option("--lambda", orc.lambda);
  o->add_option("--step", orc.step, "finite-difference step in lambda");
  o->add_option("--slopes", orc.slopes);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err) == 0 ? exit_ok : exit_config;
  }

  if (*p) return guarded([&] { return cmd_prop(prop); });
  if (*fl) return guarded([&] { return cmd_flow(flow); });
  if (*e) return guarded([&] { return cmd_exponents(ex); });
  if (*n) return guarded([&] { return cmd_nu(nu); });
  if (*c) return guarded([&] { return cmd_correlations(co); });
  if (*g) return guarded([&] { return cmd_g1map(gm); });
  if (*b) return guarded([&] { return cmd_borel(bo); });
  return guarded([&] { return cmd_oracle(orc); });
}
