#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace hrg {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// compensated summation, usable for real or complex T
template <class T>
class kahan {
 public:
  void add(T x) {
    T y = x - c_;
    T t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  kahan& operator+=(T x) {
    add(x);
    return *this;
  }
  T value() const { return s_; }

 private:
  T s_{};
  T c_{};
};

// a value with a two-level refinement error bar
struct estimate {
  double value = 0;
  double error = 0;
};

struct line_fit {
  double slope = 0;
  double intercept = 0;
};

template <class X, class Y>
line_fit fit_line(const X& x, const Y& y) {
  const std::size_t n = std::size(x);
  if (n < 2 || std::size(y) != n) throw numeric_error("fit_line: need two or more points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  line_fit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

// distance from t to the nearest multiple of period
inline double periodic_distance(double t, double period) {
  double r = std::fmod(std::abs(t), period);
  return std::min(r, period - r);
}

}  // namespace hrg
