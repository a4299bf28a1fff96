#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>

#include "hopfsym/error.hpp"

namespace hopfsym {

/// Value and first two derivatives at a point.
struct Jet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

namespace numeric {

struct BisectionResult {
  double x = 0.0;
  double width = 0.0;
  int iterations = 0;
};

/// Bisection for a sign change of `f` on [lo, hi].  `f(lo)` and `f(hi)` must
/// not have the same strict sign; the returned point is the midpoint of the
/// final bracket.
template <class F>
BisectionResult bisect(F&& f, double lo, double hi, double width_tol = 1e-12, int max_iter = 200) {
  double flo = f(lo);
  int it = 0;
  while (hi - lo > width_tol && it < max_iter) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) {
      return {mid, 0.0, it + 1};
    }
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    ++it;
  }
  return {0.5 * (lo + hi), hi - lo, it};
}

// 5-point Gauss-Legendre on [-1, 1].
inline constexpr std::array<double, 5> kGL5Nodes = {
    -0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
inline constexpr std::array<double, 5> kGL5Weights = {
    0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
    0.2369268850561891};

template <class F>
double gauss_legendre5(F&& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t i = 0; i < kGL5Nodes.size(); ++i) {
    s += kGL5Weights[i] * f(mid + half * kGL5Nodes[i]);
  }
  return s * half;
}

/// Composite 5-point Gauss-Legendre with `panels` equal panels.
template <class F>
double gauss_legendre(F&& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    s += gauss_legendre5(f, a + p * h, a + (p + 1) * h);
  }
  return s;
}

/// Least-squares fit of y = C x^p in log-log space.  All inputs must be
/// positive.
struct PowerLaw {
  double coefficient = 0.0;
  double exponent = 0.0;

  double operator()(double x) const { return coefficient * std::pow(x, exponent); }

  /// Closed-form integral over [0, x]; requires exponent > -1.
  double integral_from_zero(double x) const {
    return coefficient * std::pow(x, exponent + 1.0) / (exponent + 1.0);
  }
};

inline PowerLaw fit_power_law(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  if (n < 2 || ys.size() != n) {
    throw Error(ErrorKind::too_few_samples, "power-law fit needs at least two points");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) {
      throw Error(ErrorKind::invalid_argument, "power-law fit needs positive samples");
    }
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double dn = static_cast<double>(n);
  const double denom = dn * sxx - sx * sx;
  const double p = (dn * sxy - sx * sy) / denom;
  const double logc = (sy - p * sx) / dn;
  return {std::exp(logc), p};
}

/// Quintic Hermite interpolant on [x0, x1] matching value, first and second
/// derivative at both ends.
class QuinticHermite {
 public:
  QuinticHermite() = default;
  QuinticHermite(double x0, double x1, const Jet& left, const Jet& right) : x0_(x0), h_(x1 - x0) {
    const double dy = right.value - left.value;
    const double d0 = h_ * left.d1;
    const double d1 = h_ * right.d1;
    const double a0 = h_ * h_ * left.d2;
    const double a1 = h_ * h_ * right.d2;
    c_[0] = left.value;
    c_[1] = d0;
    c_[2] = 0.5 * a0;
    c_[3] = 10.0 * dy - 6.0 * d0 - 4.0 * d1 - (3.0 * a0 - a1) / 2.0;
    c_[4] = -15.0 * dy + 8.0 * d0 + 7.0 * d1 + (3.0 * a0 - 2.0 * a1) / 2.0;
    c_[5] = 6.0 * dy - 3.0 * (d0 + d1) - (a0 - a1) / 2.0;
  }

  Jet operator()(double x) const {
    const double s = (x - x0_) / h_;
    double p = 0, dp = 0, ddp = 0;
    for (int k = 5; k >= 0; --k) {
      ddp = ddp * s + 2.0 * dp;
      dp = dp * s + p;
      p = p * s + c_[static_cast<std::size_t>(k)];
    }
    return {p, dp / h_, ddp / (h_ * h_)};
  }

  double start() const { return x0_; }
  double end() const { return x0_ + h_; }

  /// Smallest sampled first derivative over the open interval.
  double min_slope(int samples = 2000) const {
    double m = INFINITY;
    for (int i = 1; i < samples; ++i) {
      m = std::min(m, (*this)(x0_ + h_ * i / samples).d1);
    }
    return m;
  }

 private:
  double x0_ = 0.0;
  double h_ = 1.0;
  std::array<double, 6> c_{};
};

}  // namespace numeric
}  // namespace hopfsym
