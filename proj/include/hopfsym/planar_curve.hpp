#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hopfsym/error.hpp"

namespace hopfsym {

struct Point {
  double x = 0.0;  // x1
  double y = 0.0;  // x2
};

enum class Axis { x1, x2 };

inline double coord(const Point& p, Axis a) { return a == Axis::x1 ? p.x : p.y; }
inline Axis other(Axis a) { return a == Axis::x1 ? Axis::x2 : Axis::x1; }
inline const char* axis_name(Axis a) { return a == Axis::x1 ? "x1" : "x2"; }

inline Axis parse_axis(const std::string& s) {
  if (s == "x1") return Axis::x1;
  if (s == "x2") return Axis::x2;
  throw Error(ErrorKind::invalid_argument, "axis must be x1 or x2, got '" + s + "'");
}

inline double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline double point_segment_distance(const Point& p, const Point& a, const Point& b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double w = len2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  w = std::clamp(w, 0.0, 1.0);
  return std::hypot(p.x - (a.x + w * dx), p.y - (a.y + w * dy));
}

/// Open chain of points.
using Polyline = std::vector<Point>;

/// Closed polygonal curve; the last point connects back to the first.  An
/// optional per-vertex curvature (from a closed form) overrides the
/// discrete estimate.
class PlanarCurve {
 public:
  explicit PlanarCurve(std::vector<Point> points, std::vector<double> curvature = {})
      : points_(std::move(points)), curvature_(std::move(curvature)) {
    if (points_.size() > 3 && points_.front().x == points_.back().x && points_.front().y == points_.back().y) {
      points_.pop_back();
      if (curvature_.size() == points_.size() + 1) {
        curvature_.pop_back();
      }
    }
    validate();
  }

  std::size_t size() const { return points_.size(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  const Point& at_cyclic(std::ptrdiff_t i) const {
    const auto n = static_cast<std::ptrdiff_t>(points_.size());
    return points_[static_cast<std::size_t>(((i % n) + n) % n)];
  }
  std::span<const Point> points() const { return points_; }
  bool counterclockwise() const { return area_ > 0; }
  double signed_area() const { return area_; }
  bool has_curvature() const { return !curvature_.empty(); }
  std::span<const double> curvature_override() const { return curvature_; }

  std::pair<double, double> range(Axis a) const {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& p : points_) {
      lo = std::min(lo, coord(p, a));
      hi = std::max(hi, coord(p, a));
    }
    return {lo, hi};
  }

  double diameter() const {
    const auto [x0, x1] = range(Axis::x1);
    const auto [y0, y1] = range(Axis::x2);
    return std::hypot(x1 - x0, y1 - y0);
  }

  double max_segment_length() const {
    double m = 0;
    for (std::size_t i = 0; i < size(); ++i) {
      m = std::max(m, distance(points_[i], points_[(i + 1) % size()]));
    }
    return m;
  }

  PlanarCurve reversed() const {
    std::vector<Point> p(points_.rbegin(), points_.rend());
    std::vector<double> k(curvature_.rbegin(), curvature_.rend());
    for (auto& v : k) v = -v;
    return PlanarCurve(std::move(p), std::move(k));
  }

  PlanarCurve translated(double dx, double dy) const {
    std::vector<Point> p = points_;
    for (auto& q : p) {
      q.x += dx;
      q.y += dy;
    }
    return PlanarCurve(std::move(p), curvature_);
  }

  /// Mirror image across the line {coord(axis) = level}; vertex order is
  /// reversed so the orientation is preserved.
  PlanarCurve reflected(Axis axis, double level) const {
    std::vector<Point> p(points_.rbegin(), points_.rend());
    for (auto& q : p) {
      (axis == Axis::x1 ? q.x : q.y) = 2 * level - coord(q, axis);
    }
    std::vector<double> k(curvature_.rbegin(), curvature_.rend());
    return PlanarCurve(std::move(p), std::move(k));
  }

 private:
  void validate() {
    const std::size_t n = points_.size();
    if (n < 3) {
      throw Error(ErrorKind::degenerate_curve, "a closed curve needs at least three points");
    }
    if (!curvature_.empty() && curvature_.size() != n) {
      throw Error(ErrorKind::invalid_argument, "curvature override must have one value per vertex");
    }
    double a = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Point& p = points_[i];
      const Point& q = points_[(i + 1) % n];
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw Error(ErrorKind::non_finite, "vertex " + std::to_string(i) + " is not finite");
      }
      if (p.x == q.x && p.y == q.y) {
        throw Error(ErrorKind::degenerate_curve, "consecutive vertices " + std::to_string(i) + " coincide");
      }
      if (!curvature_.empty() && !std::isfinite(curvature_[i])) {
        throw Error(ErrorKind::non_finite, "curvature at vertex " + std::to_string(i) + " is not finite");
      }
      a += p.x * q.y - q.x * p.y;
    }
    area_ = 0.5 * a;
    if (!(std::abs(area_) > 0)) {
      throw Error(ErrorKind::degenerate_curve, "curve encloses no area");
    }
  }

  std::vector<Point> points_;
  std::vector<double> curvature_;
  double area_ = 0.0;
};

/// Signed curvature of the circle through a, b, c; positive for a left turn.
inline double circumcircle_curvature(const Point& a, const Point& b, const Point& c) {
  const double ab = distance(a, b), bc = distance(b, c), ca = distance(c, a);
  if (ab == 0 || bc == 0 || ca == 0) {
    throw Error(ErrorKind::degenerate_triple, "coincident points in curvature stencil");
  }
  const double cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
  return 2.0 * cross / (ab * bc * ca);
}

/// Per-vertex curvature with respect to the interior normal (a
/// counterclockwise circle is positive whatever the stored orientation).
inline std::vector<double> curvature_profile(const PlanarCurve& c) {
  const std::size_t n = c.size();
  if (c.has_curvature()) {
    auto k = c.curvature_override();
    return {k.begin(), k.end()};
  }
  const double sign = c.counterclockwise() ? 1.0 : -1.0;
  std::vector<double> k(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = static_cast<std::ptrdiff_t>(i);
    k[i] = sign * circumcircle_curvature(c.at_cyclic(j - 1), c[i], c.at_cyclic(j + 1));
  }
  return k;
}

/// Uniform bucket grid over a set of segments for nearest-distance and
/// even-odd inside queries.
class SegmentGrid {
 public:
  struct Segment {
    Point a;
    Point b;
  };

  explicit SegmentGrid(std::vector<Segment> segs) : segs_(std::move(segs)) {
    if (segs_.empty()) {
      throw Error(ErrorKind::invalid_argument, "segment grid needs at least one segment");
    }
    x0_ = y0_ = std::numeric_limits<double>::infinity();
    double x1 = -x0_, y1 = -y0_;
    for (const auto& s : segs_) {
      x0_ = std::min({x0_, s.a.x, s.b.x});
      y0_ = std::min({y0_, s.a.y, s.b.y});
      x1 = std::max({x1, s.a.x, s.b.x});
      y1 = std::max({y1, s.a.y, s.b.y});
    }
    const double span = std::max({x1 - x0_, y1 - y0_, 1e-12});
    x1 = std::max(x1, x0_ + 1e-9 * span);
    y1 = std::max(y1, y0_ + 1e-9 * span);
    const auto side = static_cast<std::size_t>(std::clamp(std::sqrt(static_cast<double>(segs_.size())), 1.0, 512.0));
    const double w = x1 - x0_, h = y1 - y0_;
    nx_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(side * w / std::max(w, h))));
    ny_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(side * h / std::max(w, h))));
    cw_ = w / static_cast<double>(nx_);
    ch_ = h / static_cast<double>(ny_);
    cells_.resize(nx_ * ny_);
    for (std::size_t k = 0; k < segs_.size(); ++k) {
      const auto& s = segs_[k];
      const std::size_t i0 = col(std::min(s.a.x, s.b.x)), i1 = col(std::max(s.a.x, s.b.x));
      const std::size_t j0 = row(std::min(s.a.y, s.b.y)), j1 = row(std::max(s.a.y, s.b.y));
      for (std::size_t j = j0; j <= j1; ++j) {
        for (std::size_t i = i0; i <= i1; ++i) {
          cells_[j * nx_ + i].push_back(k);
        }
      }
    }
  }

  static SegmentGrid closed(const PlanarCurve& c) {
    std::vector<Segment> s;
    s.reserve(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      s.push_back({c[i], c[(i + 1) % c.size()]});
    }
    return SegmentGrid(std::move(s));
  }

  static SegmentGrid open(std::span<const Point> chain) {
    std::vector<Segment> s;
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      s.push_back({chain[i], chain[i + 1]});
    }
    if (s.empty() && !chain.empty()) {
      s.push_back({chain[0], chain[0]});
    }
    return SegmentGrid(std::move(s));
  }

  /// Distance to the nearest segment.
  double distance(const Point& p) const {
    const std::size_t ci = col(p.x), cj = row(p.y);
    const double cell = std::min(cw_, ch_);
    double best = std::numeric_limits<double>::infinity();
    const std::size_t rmax = std::max(nx_, ny_);
    for (std::size_t r = 0; r <= rmax; ++r) {
      scan_ring(ci, cj, r, [&](std::size_t k) {
        best = std::min(best, point_segment_distance(p, segs_[k].a, segs_[k].b));
      });
      if (best <= static_cast<double>(r) * cell) {
        break;
      }
    }
    return best;
  }

  /// Even-odd test against a horizontal ray towards +x1.
  bool inside(const Point& p) const {
    if (p.y < y0_ || p.y > y0_ + ch_ * static_cast<double>(ny_)) {
      return false;
    }
    const std::size_t j = row(p.y);
    bool in = false;
    for (std::size_t i = col(p.x); i < nx_; ++i) {
      for (std::size_t k : cells_[j * nx_ + i]) {
        const auto& s = segs_[k];
        if ((s.a.y > p.y) == (s.b.y > p.y)) {
          continue;
        }
        const double xc = s.a.x + (p.y - s.a.y) * (s.b.x - s.a.x) / (s.b.y - s.a.y);
        if (xc > p.x && col(xc) == i) {
          in = !in;
        }
      }
    }
    return in;
  }

  /// Positive inside, negative outside.
  double signed_distance(const Point& p) const {
    const double d = distance(p);
    return inside(p) ? d : -d;
  }

 private:
  std::size_t col(double x) const {
    const double f = std::floor((x - x0_) / cw_);
    return static_cast<std::size_t>(std::clamp(f, 0.0, static_cast<double>(nx_ - 1)));
  }
  std::size_t row(double y) const {
    const double f = std::floor((y - y0_) / ch_);
    return static_cast<std::size_t>(std::clamp(f, 0.0, static_cast<double>(ny_ - 1)));
  }

  template <class F>
  void scan_ring(std::size_t ci, std::size_t cj, std::size_t r, F&& visit) const {
    const auto lo_i = static_cast<std::ptrdiff_t>(ci) - static_cast<std::ptrdiff_t>(r);
    const auto hi_i = static_cast<std::ptrdiff_t>(ci) + static_cast<std::ptrdiff_t>(r);
    const auto lo_j = static_cast<std::ptrdiff_t>(cj) - static_cast<std::ptrdiff_t>(r);
    const auto hi_j = static_cast<std::ptrdiff_t>(cj) + static_cast<std::ptrdiff_t>(r);
    auto cell = [&](std::ptrdiff_t i, std::ptrdiff_t j) {
      if (i < 0 || j < 0 || i >= static_cast<std::ptrdiff_t>(nx_) || j >= static_cast<std::ptrdiff_t>(ny_)) {
        return;
      }
      for (std::size_t k : cells_[static_cast<std::size_t>(j) * nx_ + static_cast<std::size_t>(i)]) {
        visit(k);
      }
    };
    if (r == 0) {
      cell(lo_i, lo_j);
      return;
    }
    for (auto i = lo_i; i <= hi_i; ++i) {
      cell(i, lo_j);
      cell(i, hi_j);
    }
    for (auto j = lo_j + 1; j < hi_j; ++j) {
      cell(lo_i, j);
      cell(hi_i, j);
    }
  }

  std::vector<Segment> segs_;
  std::vector<std::vector<std::size_t>> cells_;
  double x0_ = 0, y0_ = 0, cw_ = 1, ch_ = 1;
  std::size_t nx_ = 1, ny_ = 1;
};

struct EmbeddedReport {
  bool embedded = true;
  std::optional<std::pair<std::size_t, std::size_t>> witness;  // segment indices
  std::optional<Point> crossing;
};

namespace detail {

inline int orientation(const Point& a, const Point& b, const Point& c) {
  const long double v = (static_cast<long double>(b.x) - a.x) * (static_cast<long double>(c.y) - a.y) -
                        (static_cast<long double>(b.y) - a.y) * (static_cast<long double>(c.x) - a.x);
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

inline bool on_segment(const Point& a, const Point& b, const Point& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

inline bool segments_intersect(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
  const int o1 = orientation(p1, p2, q1), o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1), o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) {
    return true;
  }
  return (o1 == 0 && on_segment(p1, p2, q1)) || (o2 == 0 && on_segment(p1, p2, q2)) ||
         (o3 == 0 && on_segment(q1, q2, p1)) || (o4 == 0 && on_segment(q1, q2, p2));
}

inline Point crossing_point(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
  const double d = (p2.x - p1.x) * (q2.y - q1.y) - (p2.y - p1.y) * (q2.x - q1.x);
  if (d == 0) {
    return q1;
  }
  const double w = ((q1.x - p1.x) * (q2.y - q1.y) - (q1.y - p1.y) * (q2.x - q1.x)) / d;
  return {p1.x + w * (p2.x - p1.x), p1.y + w * (p2.y - p1.y)};
}

}  // namespace detail

/// True iff no two non-adjacent edges meet and no adjacent pair folds back
/// on itself.
inline EmbeddedReport check_embedded(const PlanarCurve& c) {
  const std::size_t n = c.size();
  EmbeddedReport rep;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = c.at_cyclic(static_cast<std::ptrdiff_t>(i) - 1);
    const Point& b = c[i];
    const Point& d = c[(i + 1) % n];
    const double cross = (b.x - a.x) * (d.y - b.y) - (b.y - a.y) * (d.x - b.x);
    const double dot = (b.x - a.x) * (d.x - b.x) + (b.y - a.y) * (d.y - b.y);
    if (cross == 0 && dot < 0) {
      rep.embedded = false;
      rep.witness = std::make_pair((i + n - 1) % n, i);
      rep.crossing = b;
      return rep;
    }
  }
  struct Box {
    double xlo, xhi, ylo, yhi;
    std::size_t k;
  };
  std::vector<Box> boxes(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Point& p = c[k];
    const Point& q = c[(k + 1) % n];
    boxes[k] = {std::min(p.x, q.x), std::max(p.x, q.x), std::min(p.y, q.y), std::max(p.y, q.y), k};
  }
  std::sort(boxes.begin(), boxes.end(), [](const Box& a, const Box& b) { return a.xlo < b.xlo; });
  for (std::size_t i = 0; i < n; ++i) {
    const Box& bi = boxes[i];
    for (std::size_t j = i + 1; j < n && boxes[j].xlo <= bi.xhi; ++j) {
      const Box& bj = boxes[j];
      if (bj.ylo > bi.yhi || bj.yhi < bi.ylo) {
        continue;
      }
      const std::size_t a = std::min(bi.k, bj.k), b = std::max(bi.k, bj.k);
      if (b - a == 1 || (a == 0 && b == n - 1)) {
        continue;
      }
      const Point &p1 = c[a], &p2 = c[(a + 1) % n], &q1 = c[b], &q2 = c[(b + 1) % n];
      if (detail::segments_intersect(p1, p2, q1, q2)) {
        rep.embedded = false;
        rep.witness = std::make_pair(a, b);
        rep.crossing = detail::crossing_point(p1, p2, q1, q2);
        return rep;
      }
    }
  }
  return rep;
}

}  // namespace hopfsym
