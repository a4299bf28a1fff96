#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <vector>

#include "hopfsym/planar_curve.hpp"

namespace hopfsym::shapes {

inline PlanarCurve circle(std::size_t n, double radius = 1.0, double cx = 0.0, double cy = 0.0) {
  std::vector<Point> p(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    p[k] = {cx + radius * std::cos(a), cy + radius * std::sin(a)};
  }
  return PlanarCurve(std::move(p));
}

/// Axis-aligned ellipse with semi-axes a (x1) and b (x2); carries the exact
/// curvature.
inline PlanarCurve ellipse(double a, double b, std::size_t n, double cx = 0.0, double cy = 0.0) {
  std::vector<Point> p(n);
  std::vector<double> k(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    const double s = std::sin(t), c = std::cos(t);
    p[i] = {cx + a * c, cy + b * s};
    k[i] = a * b / std::pow(a * a * s * s + b * b * c * c, 1.5);
  }
  return PlanarCurve(std::move(p), std::move(k));
}

/// Stadium with vertical flat sides x1 = +-r joining semicircular caps of
/// radius r; the flats span x2 in [-half_flat, half_flat].
inline PlanarCurve stadium(double r, double half_flat, std::size_t n) {
  const double perimeter = 2 * std::numbers::pi * r + 4 * half_flat;
  const double h = perimeter / static_cast<double>(n);
  std::vector<Point> p;
  std::vector<double> k;
  auto flat = [&](double x, double y0, double y1) {
    const auto m = static_cast<std::size_t>(std::llround(std::abs(y1 - y0) / h));
    for (std::size_t i = 0; i < m; ++i) {
      p.push_back({x, y0 + (y1 - y0) * static_cast<double>(i) / static_cast<double>(m)});
      k.push_back(i == 0 ? 0.5 / r : 0.0);
    }
  };
  auto arc = [&](double cy, double a0) {
    const auto m = static_cast<std::size_t>(std::llround(std::numbers::pi * r / h));
    for (std::size_t i = 0; i < m; ++i) {
      const double a = a0 + std::numbers::pi * static_cast<double>(i) / static_cast<double>(m);
      p.push_back({r * std::cos(a), cy + r * std::sin(a)});
      k.push_back(i == 0 ? 0.5 / r : 1.0 / r);
    }
  };
  flat(r, -half_flat, half_flat);
  arc(half_flat, 0.0);
  flat(-r, half_flat, -half_flat);
  arc(-half_flat, std::numbers::pi);
  return PlanarCurve(std::move(p), std::move(k));
}

/// Unit disc minus the disc of radius 0.8 centred at (0.6, 0): the inner
/// arc has a vertical tangent at x1 = -0.2.
inline PlanarCurve crescent(std::size_t n) {
  const double d = 0.6, r = 0.8;
  const double top = std::atan2(0.8, 0.6);
  const double inner_top = std::atan2(0.8, 0.6 - d);
  std::vector<Point> p;
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < half; ++i) {
    const double a = top + (2 * std::numbers::pi - 2 * top) * static_cast<double>(i) / static_cast<double>(half);
    p.push_back({std::cos(a), std::sin(a)});
  }
  for (std::size_t i = 0; i < n - half; ++i) {
    const double a = -inner_top - (2 * std::numbers::pi - 2 * inner_top) * static_cast<double>(i) /
                                      static_cast<double>(n - half);
    p.push_back({d + r * std::cos(a), r * std::sin(a)});
  }
  return PlanarCurve(std::move(p));
}

/// Self-crossing figure-eight with lobes of different size.
inline PlanarCurve figure_eight(std::size_t n) {
  std::vector<Point> p(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = 2 * std::numbers::pi * (static_cast<double>(k) + 0.25) / static_cast<double>(n);
    p[k] = {std::sin(t) * (1.0 + 0.3 * std::sin(t)), std::sin(t) * std::cos(t)};
  }
  return PlanarCurve(std::move(p));
}

/// Unit circle with deterministic radial noise of relative size `amplitude`.
inline PlanarCurve perturbed_circle(std::size_t n, double amplitude, unsigned seed = 7) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> noise(-1.0, 1.0);
  std::vector<Point> p(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    const double r = 1.0 + amplitude * noise(rng);
    p[k] = {r * std::cos(a), r * std::sin(a)};
  }
  return PlanarCurve(std::move(p));
}

}  // namespace hopfsym::shapes
