#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hopfsym/curve_conditions.hpp"
#include "hopfsym/error.hpp"
#include "hopfsym/hopf_lemmas.hpp"
#include "hopfsym/planar_curve.hpp"
#include "hopfsym/sampled_function.hpp"

namespace hopfsym {

/// Coordinates in which the sweep axis becomes x2.  For x1 this is the
/// rotation (x, y) -> (-y, x), so orientation is preserved.
struct SweepFrame {
  Axis axis = Axis::x2;

  Point to(const Point& p) const { return axis == Axis::x2 ? p : Point{-p.y, p.x}; }
  Point from(const Point& p) const { return axis == Axis::x2 ? p : Point{p.y, -p.x}; }

  PlanarCurve to(const PlanarCurve& c) const {
    if (axis == Axis::x2) return c;
    std::vector<Point> pts;
    pts.reserve(c.size());
    for (const auto& p : c.points()) pts.push_back(to(p));
    const auto k = c.curvature_override();
    return PlanarCurve(std::move(pts), std::vector<double>(k.begin(), k.end()));
  }
};

namespace detail {

// upper arcs in frame coordinates, reflected to 2 lambda - y
inline std::vector<Polyline> reflect_upper_frame(const PlanarCurve& c, double lambda) {
  const std::size_t n = c.size();
  std::size_t start = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (c[i].y < lambda) {
      start = i;
      break;
    }
  }
  auto mirror = [lambda](Point p) { return Point{p.x, 2 * lambda - p.y}; };
  std::vector<Polyline> out;
  if (start == n) {
    Polyline all;
    for (const auto& p : c.points()) all.push_back(mirror(p));
    all.push_back(all.front());
    out.push_back(std::move(all));
    return out;
  }
  auto clip = [lambda](const Point& a, const Point& b) {
    if (b.y == lambda) return b;
    if (a.y == lambda) return a;
    const double s = (lambda - a.y) / (b.y - a.y);
    return Point{a.x + s * (b.x - a.x), lambda};
  };
  auto push = [](Polyline& arc, Point p) {
    if (arc.empty() || arc.back().x != p.x || arc.back().y != p.y) arc.push_back(p);
  };
  Polyline arc;
  bool above = false;
  for (std::size_t k = 1; k <= n; ++k) {
    const Point& prev = c[(start + k - 1) % n];
    const Point& cur = c[(start + k) % n];
    const bool cur_above = cur.y >= lambda;
    if (cur_above && !above) {
      arc.clear();
      push(arc, mirror(clip(prev, cur)));
      push(arc, mirror(cur));
    } else if (cur_above) {
      push(arc, mirror(cur));
    } else if (above) {
      push(arc, mirror(clip(prev, cur)));
      out.push_back(std::move(arc));
      arc = {};
    }
    above = cur_above;
  }
  return out;
}

}  // namespace detail

/// Part of the curve with coord(axis) >= lambda, mirrored to
/// 2 lambda - coord.  Arc ends are clipped onto the line.
inline std::vector<Polyline> reflect_upper(const PlanarCurve& c, double lambda, Axis axis = Axis::x2) {
  const SweepFrame f{axis};
  auto arcs = detail::reflect_upper_frame(f.to(c), lambda);
  for (auto& arc : arcs) {
    for (auto& p : arc) p = f.from(p);
  }
  return arcs;
}

/// Mirrors points across {coord(axis) = lambda}.
inline Polyline reflect_points(const Polyline& pts, double lambda, Axis axis = Axis::x2) {
  Polyline out = pts;
  for (auto& p : out) (axis == Axis::x1 ? p.x : p.y) = 2 * lambda - coord(p, axis);
  return out;
}

struct ContainmentReport {
  bool contained = true;
  double margin = std::numeric_limits<double>::infinity();  // min signed distance, positive inside
  Point witness{};
};

/// Every fragment vertex must lie inside the closed region or within
/// `tolerance` of its boundary.
inline ContainmentReport region_contains(const SegmentGrid& region, const std::vector<Polyline>& fragments,
                                         double tolerance) {
  ContainmentReport r;
  for (const auto& arc : fragments) {
    for (const auto& p : arc) {
      const double sd = region.signed_distance(p);
      if (sd < r.margin) {
        r.margin = sd;
        r.witness = p;
      }
    }
  }
  r.contained = r.margin >= -tolerance;
  return r;
}

inline ContainmentReport region_contains(const PlanarCurve& c, const std::vector<Polyline>& fragments,
                                         double tolerance) {
  return region_contains(SegmentGrid::closed(c), fragments, tolerance);
}

enum class TouchCase { none, interior, tangential, both };

inline const char* touch_case_name(TouchCase t) {
  switch (t) {
    case TouchCase::none: return "NONE";
    case TouchCase::interior: return "INTERIOR_TOUCH";
    case TouchCase::tangential: return "TANGENTIAL_TOUCH";
    case TouchCase::both: return "BOTH";
  }
  return "NONE";
}

struct SweepOptions {
  std::size_t scan_steps = 512;
  double width = 1e-9;              // relative to the curve height
  double tolerance_cells = 2.0;     // containment tolerance in max segment lengths
  double line_cells = 3.0;          // touch points this close to the line count as tangential
  double angle_tolerance = 1e-3;    // radians
  std::size_t max_touch_points = 64;
};

struct SweepResult {
  Axis axis = Axis::x2;
  double lambda0 = 0.0;
  TouchCase touch = TouchCase::none;
  std::vector<Point> touch_points;
  std::size_t touch_count = 0;
  std::vector<Polyline> reflected_arc;
  double containment_margin = 0.0;
  double tolerance = 0.0;
  double grid_step = 0.0;
  double angle_tolerance = 0.0;
  bool condition_s = true;
  std::vector<std::pair<double, double>> trace;  // (lambda, margin) along the bisection, contained side
};

namespace detail {

inline bool contained_fast(const SegmentGrid& g, const std::vector<Polyline>& arcs, double tol) {
  for (const auto& arc : arcs) {
    for (const auto& p : arc) {
      if (!g.inside(p) && g.distance(p) > tol) return false;
    }
  }
  return true;
}

// min signed distance over vertices farther than `skip` from the line
inline double off_line_margin(const SegmentGrid& g, const std::vector<Polyline>& arcs, double lambda, double skip) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& arc : arcs) {
    for (const auto& p : arc) {
      if (std::abs(p.y - lambda) > skip) m = std::min(m, g.signed_distance(p));
    }
  }
  return m;
}

}  // namespace detail

/// Lowers the line {coord(axis) = lambda} from the top of the curve and
/// returns the last level at which the reflected upper part stays inside.
inline SweepResult sweep(const PlanarCurve& curve, Axis axis = Axis::x2, const SweepOptions& opt = {}) {
  const SweepFrame frame{axis};
  const PlanarCurve c = frame.to(curve);
  const SegmentGrid grid = SegmentGrid::closed(c);
  const auto [ymin, ymax] = c.range(Axis::x2);
  const double height = ymax - ymin;
  const double cell = c.max_segment_length();
  SweepResult r;
  r.axis = axis;
  r.grid_step = cell;
  r.tolerance = opt.tolerance_cells * cell;
  const double skip = opt.line_cells * cell;

  double ok = ymax, bad = ymin;
  bool failed = false;
  for (std::size_t k = 1; k < opt.scan_steps; ++k) {
    const double lambda = ymax - height * static_cast<double>(k) / static_cast<double>(opt.scan_steps);
    if (!detail::contained_fast(grid, detail::reflect_upper_frame(c, lambda), r.tolerance)) {
      bad = lambda;
      failed = true;
      break;
    }
    ok = lambda;
  }
  if (failed) {
    while (ok - bad > opt.width * height) {
      const double mid = 0.5 * (ok + bad);
      const auto arcs = detail::reflect_upper_frame(c, mid);
      if (detail::contained_fast(grid, arcs, r.tolerance)) {
        ok = mid;
        r.trace.emplace_back(mid, detail::off_line_margin(grid, arcs, mid, skip));
      } else {
        bad = mid;
      }
    }
  }
  r.lambda0 = ok;
  const auto arcs = detail::reflect_upper_frame(c, ok);
  r.containment_margin = detail::off_line_margin(grid, arcs, ok, skip);

  bool interior = false, tangential = false;
  double kmax = 0;
  for (double k : curvature_profile(c)) kmax = std::max(kmax, std::abs(k));
  r.angle_tolerance = std::max(opt.angle_tolerance, 4 * cell * kmax);
  for (const auto& arc : arcs) {
    for (std::size_t i = 0; i < arc.size(); ++i) {
      const Point& p = arc[i];
      if (std::abs(p.y - ok) <= skip) continue;
      if (std::abs(grid.signed_distance(p)) <= r.tolerance) {
        interior = true;
        ++r.touch_count;
        if (r.touch_points.size() < opt.max_touch_points) r.touch_points.push_back(frame.from(p));
      }
    }
    if (arc.size() < 2) continue;
    // an arc end on the line: the reflection matches the tangent iff it is perpendicular
    for (const auto& [end, next] : {std::pair{arc.front(), arc[1]}, std::pair{arc.back(), arc[arc.size() - 2]}}) {
      const double dx = next.x - end.x, dy = next.y - end.y;
      const double tilt = std::atan2(std::abs(dx), std::abs(dy));
      if (2 * tilt <= r.angle_tolerance) {
        tangential = true;
        ++r.touch_count;
        if (r.touch_points.size() < opt.max_touch_points) r.touch_points.push_back(frame.from(end));
      }
    }
  }
  r.touch = interior && tangential ? TouchCase::both
          : interior               ? TouchCase::interior
          : tangential             ? TouchCase::tangential
                                   : TouchCase::none;
  for (auto& a : arcs) {
    Polyline back;
    back.reserve(a.size());
    for (const auto& p : a) back.push_back(frame.from(p));
    r.reflected_arc.push_back(std::move(back));
  }
  r.condition_s = check_condition_S(curve, axis).holds;
  return r;
}

struct SymmetryVerdict {
  Verdict verdict;
  Axis axis = Axis::x2;
  double level = 0.0;      // estimated axis {coord(axis) = level}
  double deviation = 0.0;  // Hausdorff distance between the curve and its mirror image
};

namespace detail {

inline double mirror_deviation(const PlanarCurve& c, const SegmentGrid& g, Axis axis, double level,
                               Point* where = nullptr) {
  double worst = 0;
  for (const auto& p : c.points()) {
    Point q = p;
    (axis == Axis::x1 ? q.x : q.y) = 2 * level - coord(p, axis);
    const double d = g.distance(q);
    if (d > worst) {
      worst = d;
      if (where) *where = p;
    }
  }
  return worst;
}

}  // namespace detail

/// Best mirror axis {coord(axis) = level} near the hint (or the sweep
/// level), and whether the curve coincides with its mirror image.
inline SymmetryVerdict symmetry_verdict(const PlanarCurve& c, Axis axis = Axis::x2,
                                        std::optional<double> hint = std::nullopt) {
  const SegmentGrid g = SegmentGrid::closed(c);
  const double cell = c.max_segment_length();
  const double seed = hint ? *hint : sweep(c, axis).lambda0;
  // mirroring is a distance-preserving involution, so one direction suffices
  auto dev = [&](double level) { return detail::mirror_deviation(c, g, axis, level); };
  const double phi = 0.5 * (std::sqrt(5.0) - 1);
  double a = seed - 8 * cell, b = seed + 8 * cell;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = dev(x1), f2 = dev(x2);
  for (int it = 0; it < 60 && b - a > 1e-12 * std::max(1.0, c.diameter()); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = dev(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = dev(x2);
    }
  }
  SymmetryVerdict s;
  s.axis = axis;
  s.level = f1 <= f2 ? x1 : x2;
  Point where{};
  s.deviation = detail::mirror_deviation(c, g, axis, s.level, &where);
  const auto kappa = curvature_profile(c);
  double sag = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double l = distance(c[i], c[(i + 1) % c.size()]);
    sag = std::max(sag, l * l * std::max(std::abs(kappa[i]), std::abs(kappa[(i + 1) % c.size()])));
  }
  const double tol = std::max(1e-10 * c.diameter(), sag);
  s.verdict = make_verdict(s.deviation, coord(where, other(axis)), tol);
  return s;
}

struct PlateauRecord {
  std::vector<Interval> intervals;
  std::string side = "function";
  double level = 0.0;
  double tolerance = 0.0;
};

/// Maximal node runs with |f - level| <= tolerance.  Single nodes are
/// transversal crossings, not plateaus, and are dropped.
inline PlateauRecord plateau_intervals(const SampledFunction& f, double level, double tolerance = 1e-8) {
  PlateauRecord r;
  r.level = level;
  r.tolerance = tolerance;
  std::size_t i = 0;
  while (i < f.size()) {
    if (std::abs(f[i] - level) > tolerance) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < f.size() && std::abs(f[j + 1] - level) <= tolerance) ++j;
    if (j > i) r.intervals.emplace_back(f.node(i), f.node(j));
    i = j + 1;
  }
  return r;
}

}  // namespace hopfsym
