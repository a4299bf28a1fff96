#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "hopfsym/gallery.hpp"
#include "hopfsym/moving_plane.hpp"
#include "hopfsym/shapes.hpp"

using namespace hopfsym;
using Catch::Approx;

TEST_CASE("reflect_upper: unit circle about 0 gives the lower semicircle", "[moving_plane]") {
  const auto c = shapes::circle(4096);
  const auto arcs = reflect_upper(c, 0.0);
  REQUIRE(arcs.size() == 1);
  for (const auto& p : arcs[0]) {
    CHECK(p.y <= 1e-15);
    CHECK(std::hypot(p.x, p.y) == Approx(1.0).margin(1e-15));
  }
  CHECK(arcs[0].front().y == 0.0);
  CHECK(arcs[0].back().y == 0.0);
}

TEST_CASE("reflect_upper: top tangency gives a single point", "[moving_plane]") {
  const auto c = shapes::circle(4096);
  double top = -1;
  for (const auto& p : c.points()) top = std::max(top, p.y);
  const auto arcs = reflect_upper(c, top);
  REQUIRE(arcs.size() == 1);
  CHECK(arcs[0].size() == 1);
  CHECK(reflect_upper(c, 2.0).empty());
}

TEST_CASE("reflect_upper: ellipse about 0 gives the lower half", "[moving_plane]") {
  const auto c = shapes::ellipse(3.0, 1.0, 4096);
  const auto arcs = reflect_upper(c, 0.0);
  REQUIRE(arcs.size() == 1);
  for (const auto& p : arcs[0]) {
    CHECK(p.x * p.x / 9 + p.y * p.y == Approx(1.0).margin(1e-14));
    CHECK(p.y <= 1e-15);
  }
}

TEST_CASE("reflecting twice returns the original upper vertices", "[moving_plane]") {
  const auto c = shapes::ellipse(1.0, 2.0, 2048, 0.0, 0.0);
  const auto arcs = reflect_upper(c, 0.0);
  REQUIRE(arcs.size() == 1);
  const auto back = reflect_points(arcs[0], 0.0);
  std::size_t hits = 0;
  for (std::size_t i = 1; i + 1 < back.size(); ++i) {
    const auto& q = back[i];
    const bool found = std::any_of(c.points().begin(), c.points().end(),
                                   [&](const Point& p) { return p.x == q.x && p.y == q.y; });
    CHECK(found);
    hits += found;
  }
  CHECK(hits >= 1000);
}

TEST_CASE("reflect_upper along x1 mirrors the right part", "[moving_plane]") {
  const auto c = shapes::circle(2048, 1.0, 2.0, 0.0);
  const auto arcs = reflect_upper(c, 2.0, Axis::x1);
  REQUIRE(arcs.size() == 1);
  for (const auto& p : arcs[0]) CHECK(p.x <= 2.0 + 1e-15);
}

TEST_CASE("region_contains: unit circle", "[moving_plane]") {
  const auto c = shapes::circle(8192);
  const auto in = region_contains(c, {{Point{0, 0}}}, 1e-3);
  CHECK(in.contained);
  CHECK(in.margin == Approx(1.0).margin(1e-6));
  const auto out = region_contains(c, {{Point{2, 0}}}, 1e-3);
  CHECK_FALSE(out.contained);
  CHECK(out.margin == Approx(-1.0).margin(1e-6));
  const auto on = region_contains(c, {{Point{1, 0}}}, 1e-3);
  CHECK(on.contained);
  CHECK(on.margin == Approx(0.0).margin(1e-6));
}

TEST_CASE("sweep: circle, vertical ellipse and stadium find their axis", "[moving_plane]") {
  for (const auto& c : {shapes::circle(2048), shapes::ellipse(1.0, 2.0, 2048), shapes::stadium(1.0, 0.5, 2048)}) {
    const auto r = sweep(c);
    CHECK(std::abs(r.lambda0) <= 2 * r.grid_step);
    CHECK(r.touch == TouchCase::both);
    CHECK(r.condition_s);
    const auto s = symmetry_verdict(c);
    CHECK(s.verdict.pass);
    CHECK(std::abs(s.level) <= r.grid_step);
    CHECK(s.deviation <= 3 * r.grid_step);
  }
}

TEST_CASE("sweep: containment margin shrinks as lambda decreases", "[moving_plane]") {
  const auto r = sweep(shapes::circle(2048));
  auto trace = r.trace;
  REQUIRE(trace.size() > 5);
  std::sort(trace.begin(), trace.end());
  for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i - 1].second <= trace[i].second + 1e-12);
}

TEST_CASE("sweep: vertical translation shifts lambda0 by the same amount", "[moving_plane]") {
  const auto c = shapes::ellipse(1.0, 2.0, 2048);
  const double d = 0.75;
  const auto a = sweep(c);
  const auto b = sweep(c.translated(0, d));
  CHECK(b.lambda0 - a.lambda0 == Approx(d).margin(1e-8));
}

TEST_CASE("symmetry verdict: translated ellipse", "[moving_plane]") {
  const auto c = shapes::ellipse(2.0, 1.0, 4096, 0.3, -0.7);
  const auto s = symmetry_verdict(c);
  CHECK(s.verdict.pass);
  CHECK(s.level == Approx(-0.7).margin(1e-3));
  const auto sx = symmetry_verdict(c, Axis::x1);
  CHECK(sx.verdict.pass);
  CHECK(sx.level == Approx(0.3).margin(1e-3));
}

TEST_CASE("symmetry verdict rejects an egg across its long axis", "[moving_plane]") {
  std::vector<Point> pts;
  for (int i = 0; i < 2048; ++i) {
    const double t = 2 * std::numbers::pi * i / 2048;
    const double r = 1 + 0.2 * std::cos(t);
    pts.push_back({r * std::cos(t), r * std::sin(t)});
  }
  const PlanarCurve egg(pts);
  CHECK(symmetry_verdict(egg, Axis::x2).verdict.pass);
  const auto s = symmetry_verdict(egg, Axis::x1);
  CHECK_FALSE(s.verdict.pass);
}

TEST_CASE("fig13: sweep across x1 and symmetry failure", "[moving_plane]") {
  const double eps = 0.1;
  const auto g = gallery::assemble_fig13(eps, 2048, false);
  const auto& c = *g.curve;
  const auto r = sweep(c, Axis::x1);
  CHECK(r.lambda0 == Approx(2.0).margin(4 * r.grid_step));
  CHECK_FALSE(r.condition_s);
  const auto s = symmetry_verdict(c, Axis::x1, 2.0);
  CHECK_FALSE(s.verdict.pass);
  // bump heights differ by (eps^3 - eps^6) / 64
  const double gap = (std::pow(eps, 3) - std::pow(eps, 6)) / 64;
  CHECK(s.deviation == Approx(gap).epsilon(0.05));
}

TEST_CASE("plateau intervals", "[moving_plane]") {
  const auto f = SampledFunction::from_jet(0, 3, 3 * 4096 + 1, [](double t) {
    if (t < 1) return Jet{t, 1, 0};
    if (t <= 2) return Jet{1, 0, 0};
    return Jet{t - 1, 1, 0};
  });
  const auto r = plateau_intervals(f, 1.0);
  REQUIRE(r.intervals.size() == 1);
  CHECK(r.intervals[0].first == Approx(1.0).margin(1e-12));
  CHECK(r.intervals[0].second == Approx(2.0).margin(1e-12));
  const auto m = SampledFunction::from_jet(0, 1, 4097, [](double t) { return Jet{t, 1, 0}; });
  CHECK(plateau_intervals(m, 0.5).intervals.empty());
}

TEST_CASE("plateau intervals: example 1.1 v at level 1", "[moving_plane]") {
  const auto g = gallery::example_1_1();
  const auto r = plateau_intervals(g.function("v"), 1.0);
  REQUIRE(r.intervals.size() == 1);
  // 1 + (t - 1)^3 is within 1e-8 of 1 from t = 1 - 1e-8^(1/3)
  CHECK(r.intervals[0].first == Approx(1.0 - std::cbrt(1e-8)).margin(1.0 / 4096));
  CHECK(r.intervals[0].second == 2.0);
}
