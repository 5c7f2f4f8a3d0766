#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include "core.hpp"

namespace hrg {

struct nodes {
  std::vector<double> x, w;
};

// composite 20-point Gauss-Legendre rule on [a,b] split into equal panels
inline nodes gauss_panels(double a, double b, int panels) {
  using rule = boost::math::quadrature::gauss<double, 20>;
  const auto& abs = rule::abscissa();
  const auto& wts = rule::weights();
  nodes r;
  double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    double c = a + (p + 0.5) * h, s = h / 2;
    for (std::size_t i = 0; i < abs.size(); ++i) {
      if (abs[i] == 0.0) {
        r.x.push_back(c);
        r.w.push_back(s * wts[i]);
        continue;
      }
      r.x.push_back(c - s * abs[i]);
      r.w.push_back(s * wts[i]);
      r.x.push_back(c + s * abs[i]);
      r.w.push_back(s * wts[i]);
    }
  }
  return r;
}

template <class F>
double integrate(F&& f, double a, double b, int panels) {
  auto q = gauss_panels(a, b, panels);
  kahan<double> s;
  for (std::size_t i = 0; i < q.x.size(); ++i) s += q.w[i] * f(q.x[i]);
  return s.value();
}

// value at two refinement levels, the difference serving as error bar
template <class F>
estimate integrate_refined(F&& f, double a, double b, int panels) {
  double coarse = integrate(f, a, b, panels);
  double fine = integrate(f, a, b, 2 * panels);
  return {fine, std::abs(fine - coarse)};
}

}  // namespace hrg
