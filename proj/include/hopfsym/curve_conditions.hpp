#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "hopfsym/planar_curve.hpp"

namespace hopfsym {

/// One intersection of a line with the curve.
struct FiberPoint {
  Point point;
  double position = 0.0;  // coordinate along the line
  double curvature = 0.0;
  bool tangential = false;
};

/// Witness for a failed or strict comparison.
struct PairWitness {
  Point a;  // smaller ordering coordinate
  Point b;
  double value_a = 0.0;
  double value_b = 0.0;
  double slack = 0.0;
};

struct ConditionReport {
  bool holds = true;
  double margin = 0.0;
  std::vector<PairWitness> violations;
  std::size_t violation_count = 0;
  std::size_t pairs_tested = 0;
  // monotone-curvature extras
  std::vector<PairWitness> strict_pairs;
  std::size_t strict_count = 0;
  double max_gap = 0.0;
  std::size_t lines_tested = 0;
  std::size_t lines_skipped = 0;
  double tolerance = 0.0;
  double strict_threshold = 0.0;
};

struct CurveCheckOptions {
  double condition_tolerance = 1e-6;
  double strict_threshold = 1e-4;
  std::size_t uniform_lines = 512;
  bool vertex_midlevels = true;
  std::size_t max_witnesses = 32;
  double tangency_slope = 1e-7;
  double side_tolerance = 1e-9;  // relative to the diameter
};

namespace detail {

inline void sort_fiber(std::vector<FiberPoint>& f) {
  std::sort(f.begin(), f.end(), [](const FiberPoint& a, const FiberPoint& b) { return a.position < b.position; });
}

// Intersections of {coord(normal) = level} with the whole curve, including
// vertices lying exactly on the line.
inline std::vector<FiberPoint> fiber_full(const PlanarCurve& c, std::span<const double> kappa, Axis normal,
                                          double level) {
  const std::size_t n = c.size();
  const Axis along = other(normal);
  std::vector<int> side(n);
  std::size_t on_line = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = coord(c[i], normal) - level;
    side[i] = d > 0 ? 1 : (d < 0 ? -1 : 0);
    on_line += side[i] == 0 ? 1 : 0;
  }
  std::vector<FiberPoint> out;
  if (on_line == n) {
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    if (side[i] * side[j] < 0) {
      const double a = coord(c[i], normal) - level, b = coord(c[j], normal) - level;
      const double w = a / (a - b);
      const Point p{c[i].x + w * (c[j].x - c[i].x), c[i].y + w * (c[j].y - c[i].y)};
      out.push_back({p, coord(p, along), (1 - w) * kappa[i] + w * kappa[j], false});
    }
  }
  // runs of on-line vertices, started right after an off-line vertex
  std::size_t start = 0;
  while (side[start] == 0) {
    ++start;
  }
  for (std::size_t step = 1; step <= n; ++step) {
    const std::size_t i = (start + step) % n;
    if (side[i] != 0 || side[(i + n - 1) % n] == 0) {
      continue;
    }
    std::size_t len = 0;
    while (side[(i + len) % n] == 0) {
      ++len;
    }
    const int before = side[(i + n - 1) % n];
    const int after = side[(i + len) % n];
    const std::size_t mid = (i + len / 2) % n;
    out.push_back({c[mid], coord(c[mid], along), kappa[mid], before == after});
  }
  sort_fiber(out);
  return out;
}

}  // namespace detail

/// Intersections of the line {coord(other(ordering)) = level} with the
/// curve, ascending in the ordering coordinate.
inline std::vector<FiberPoint> fiber(const PlanarCurve& c, Axis ordering, double level) {
  const auto kappa = curvature_profile(c);
  return detail::fiber_full(c, kappa, other(ordering), level);
}

/// Heights where the vertical line x1 = x meets the curve.
inline std::vector<FiberPoint> vertical_fiber(const PlanarCurve& c, double x) { return fiber(c, Axis::x2, x); }

/// Line levels used by the fiber-based checks: uniform lines across the
/// range plus the midpoints between consecutive distinct vertex levels.
inline std::vector<double> fiber_levels(const PlanarCurve& c, Axis normal, const CurveCheckOptions& opt) {
  const auto [lo, hi] = c.range(normal);
  std::vector<double> levels;
  for (std::size_t k = 0; k < opt.uniform_lines; ++k) {
    levels.push_back(lo + (hi - lo) * (static_cast<double>(k) + 0.5) / static_cast<double>(opt.uniform_lines));
  }
  if (opt.vertex_midlevels) {
    std::vector<double> v;
    v.reserve(c.size());
    for (const auto& p : c.points()) {
      v.push_back(coord(p, normal));
    }
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      const double m = 0.5 * (v[i] + v[i + 1]);
      if (m > v[i] && m < v[i + 1]) {
        levels.push_back(m);
      }
    }
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  return levels;
}

/// Visits the fiber of every level in ascending order with a sweep over the
/// edges, so the total cost is near-linear in curve size plus line count.
template <class Visit>
void for_each_fiber(const PlanarCurve& c, std::span<const double> kappa, Axis normal,
                    std::span<const double> levels, Visit&& visit) {
  const std::size_t n = c.size();
  const Axis along = other(normal);
  struct Edge {
    double lo, hi;
    std::size_t i;
  };
  std::vector<Edge> edges(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = coord(c[i], normal), b = coord(c[(i + 1) % n], normal);
    edges[i] = {std::min(a, b), std::max(a, b), i};
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.lo < b.lo; });
  std::vector<double> vertex_levels(n);
  for (std::size_t i = 0; i < n; ++i) {
    vertex_levels[i] = coord(c[i], normal);
  }
  std::sort(vertex_levels.begin(), vertex_levels.end());

  std::vector<Edge> active;
  std::size_t next = 0;
  std::vector<FiberPoint> f;
  for (double level : levels) {
    while (next < n && edges[next].lo <= level) {
      active.push_back(edges[next++]);
    }
    std::erase_if(active, [&](const Edge& e) { return e.hi < level; });
    if (std::binary_search(vertex_levels.begin(), vertex_levels.end(), level)) {
      visit(level, detail::fiber_full(c, kappa, normal, level));
      continue;
    }
    f.clear();
    for (const Edge& e : active) {
      const Point& p = c[e.i];
      const Point& q = c[(e.i + 1) % n];
      const double a = coord(p, normal) - level, b = coord(q, normal) - level;
      const double w = a / (a - b);
      const Point x{p.x + w * (q.x - p.x), p.y + w * (q.y - p.y)};
      f.push_back({x, coord(x, along), (1 - w) * kappa[e.i] + w * kappa[(e.i + 1) % n], false});
    }
    detail::sort_fiber(f);
    visit(level, f);
  }
}

/// Along every sampled fiber ordered by `ordering`, the curvature at the
/// point with the larger ordering coordinate must not exceed the curvature
/// at the smaller one (interior-normal curvature).
inline ConditionReport check_monotone_curvature_condition(const PlanarCurve& c, Axis ordering,
                                                          const CurveCheckOptions& opt = {}) {
  const auto kappa = curvature_profile(c);
  const Axis normal = other(ordering);
  const auto levels = fiber_levels(c, normal, opt);
  ConditionReport rep;
  rep.tolerance = opt.condition_tolerance;
  rep.strict_threshold = opt.strict_threshold;
  double margin = std::numeric_limits<double>::infinity();
  for_each_fiber(c, kappa, normal, levels, [&](double, const std::vector<FiberPoint>& f) {
    const bool tangent = std::any_of(f.begin(), f.end(), [](const FiberPoint& p) { return p.tangential; });
    if (f.size() < 2 || tangent || f.size() % 2 != 0) {
      ++rep.lines_skipped;
      return;
    }
    ++rep.lines_tested;
    for (std::size_t i = 0; i < f.size(); ++i) {
      for (std::size_t j = i + 1; j < f.size(); ++j) {
        const double slack = f[i].curvature - f[j].curvature;
        ++rep.pairs_tested;
        margin = std::min(margin, slack);
        const PairWitness w{f[i].point, f[j].point, f[i].curvature, f[j].curvature, slack};
        if (slack < -opt.condition_tolerance) {
          ++rep.violation_count;
          if (rep.violations.size() < opt.max_witnesses) rep.violations.push_back(w);
        }
        if (slack > rep.max_gap) {
          rep.max_gap = slack;
        }
        if (slack > opt.strict_threshold) {
          ++rep.strict_count;
          if (rep.strict_pairs.size() < opt.max_witnesses) rep.strict_pairs.push_back(w);
        }
      }
    }
  });
  rep.margin = rep.pairs_tested > 0 ? margin : 0.0;
  rep.holds = rep.violation_count == 0;
  return rep;
}

/// Every tangent line parallel to `axis` must leave the whole curve weakly
/// on one side.  Per-line slack is minus the smaller overshoot.
inline ConditionReport check_condition_S(const PlanarCurve& c, Axis axis, const CurveCheckOptions& opt = {}) {
  const std::size_t n = c.size();
  const Axis normal = other(axis);
  const auto [lo, hi] = c.range(normal);
  const double tol = opt.side_tolerance * std::max(1.0, c.diameter());
  std::size_t argmin = 0, argmax = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (coord(c[i], normal) < coord(c[argmin], normal)) argmin = i;
    if (coord(c[i], normal) > coord(c[argmax], normal)) argmax = i;
  }
  ConditionReport rep;
  rep.tolerance = tol;
  double margin = std::numeric_limits<double>::infinity();
  auto delta = [&](std::size_t i) {
    const Point& p = c[i];
    const Point& q = c[(i + 1) % n];
    return (coord(q, normal) - coord(p, normal)) / distance(p, q);
  };
  for (std::size_t i = 0; i < n; ++i) {
    const double d0 = delta((i + n - 1) % n), d1 = delta(i);
    const bool flat = std::abs(d0) < opt.tangency_slope || std::abs(d1) < opt.tangency_slope;
    const bool turn = (d0 > 0) != (d1 > 0);
    if (!flat && !turn) {
      continue;
    }
    const double level = coord(c[i], normal);
    const double slack = -std::min(level - lo, hi - level);
    ++rep.pairs_tested;
    margin = std::min(margin, slack);
    if (slack < -tol) {
      ++rep.violation_count;
      if (rep.violations.size() < opt.max_witnesses) {
        const std::size_t far = level - lo < hi - level ? argmin : argmax;
        rep.violations.push_back({c[i], c[far], level, coord(c[far], normal), slack});
      }
    }
  }
  rep.margin = rep.pairs_tested > 0 ? margin : 0.0;
  rep.holds = rep.violation_count == 0;
  return rep;
}

}  // namespace hopfsym
