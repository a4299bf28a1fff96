#include <catch_amalgamated.hpp>

#include <cmath>

#include "hopfsym/gallery.hpp"
#include "hopfsym/hopf_lemmas.hpp"

using namespace hopfsym;
using Catch::Approx;

TEST_CASE("example 1.1: nondecreasing, coincide on [0,1], differ after", "[gallery]") {
  const auto g = gallery::example_1_1();
  const auto& u = g.function("u");
  const auto& v = g.function("v");
  const auto du = derivative_profile(u, 1);
  const auto dv = derivative_profile(v, 1);
  for (std::size_t i = 0; i < u.size(); ++i) {
    CHECK(du[i] >= -1e-9);
    CHECK(dv[i] >= -1e-9);
  }
  CHECK(u.at(0.2) == Approx(0.008).margin(1e-14));
  CHECK(u.at(1.5) == Approx(1.125).margin(1e-14));
  CHECK(v.at(1.5) == 1.0);
  CHECK(u.at(0.7) == v.at(0.7));
  CHECK(u.at(2.0) == Approx(2.0).margin(1e-14));
}

TEST_CASE("example 1.2: w pieces and the shift relation", "[gallery]") {
  const auto g = gallery::example_1_2();
  const auto& u = g.function("u");
  const auto& v = g.function("v");
  const auto& w = g.function("w");
  CHECK(w.at(1.0) == 0.0);
  CHECK(w.at(2.5) == u.at(2.5));
  CHECK(w.at(4.5) == 2.0);
  CHECK(v.at(1.5) == w.at(2.5));
  CHECK(u.at(1.0) == 1.0);
  CHECK(u.at(2.2) == Approx(1.008).margin(1e-14));
  CHECK(u.at(3.5) == Approx(2.125).margin(1e-14));
  const auto dw = derivative_profile(w, 1);
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(dw[i] >= -1e-9);
}

TEST_CASE("example 1.2: sliding v touches u at the plateau end t=3", "[gallery]") {
  const auto g = gallery::example_1_2();
  // u(x) = u(x - (tau - 1)) needs both points on the plateau [8/3, 3]
  const auto r = slide_until_touch(g.function("u"), g.function("v"), 4.0);
  CHECK(r.shift >= 4.0 / 3 - 1e-9);
  CHECK(r.shift <= 4.0 / 3 + 2e-3);
  CHECK(r.touch_t == Approx(3.0).margin(2e-3));
}

TEST_CASE("bump pair values", "[gallery]") {
  const auto g = gallery::bump_pair(0.1);
  CHECK(g.function("u").at(0.5) == Approx(1e-6 / 64).epsilon(1e-12));
  CHECK(g.function("v").at(0.5) == Approx(1e-3 / 64).epsilon(1e-12));
}

TEST_CASE("bump claim: matched s agrees with q(s) = eps q(t)", "[gallery]") {
  const double eps = 0.1;
  const auto r = gallery::verify_bump_claim(eps);
  REQUIRE(r.hypothesis.tightest.has_value());
  const auto w = *r.hypothesis.tightest;
  const double qt = w.t - w.t * w.t;
  const double s = 0.5 - std::sqrt(0.25 - eps * qt);
  CHECK(w.s == Approx(s).epsilon(1e-9));
  CHECK(r.hypothesis.holds);
  CHECK(r.min_margin > 0);
  CHECK(r.fitted_C <= 6.0 + 1e-9);
  CHECK(r.fitted_C > 5.0);
  CHECK(r.rhs_bound_holds);
  CHECK(r.ratio_at_smallest_t >= 2.0);
  CHECK(r.validated_range);
}

TEST_CASE("bump claim: leading-order rhs bound fails at eps = 0.2", "[gallery]") {
  const auto r = gallery::verify_bump_claim(0.2);
  CHECK(r.hypothesis.holds);
  CHECK_FALSE(r.rhs_bound_holds);
}

TEST_CASE("epsilon scan: margins scale like eps^4", "[gallery]") {
  const auto s = gallery::scan_epsilon();
  REQUIRE(s.margin_ratios.size() == 3);
  CHECK(s.holds[1]);
  CHECK(s.holds[2]);
  CHECK(s.holds[3]);
  CHECK(s.margin_ratios[1] >= 10);
  CHECK(s.margin_ratios[1] <= 20);
  CHECK(s.margin_ratios[2] >= 10);
  CHECK(s.margin_ratios[2] <= 20);
  CHECK(s.largest_validated >= 0.2);
}

TEST_CASE("fig12 profile: junctions, reflection, bump heights", "[gallery]") {
  const double eps = 0.1;
  const auto g = gallery::assemble_fig12(eps);
  const auto& u = g.function("u");
  CHECK(u.at(0.0) == 0.0);
  CHECK(u.at(1.5) == Approx(1 + 1e-6 / 64).epsilon(1e-14));
  CHECK(u.at(2.5) == Approx(1 + 1e-3 / 64).epsilon(1e-14));
  CHECK(u.at(4.0) == Approx(0.0).margin(1e-14));
  CHECK(g.parameters.at("reflection_deviation") <= 1e-10);
  CHECK(g.parameters.at("bump1_symmetry_deviation") <= 1e-10);
  CHECK(g.parameters.at("bump2_symmetry_deviation") <= 1e-10);
}

TEST_CASE("fig12: the larger bump has larger curvature at matched levels", "[gallery]") {
  const double eps = 0.1;
  const auto g = gallery::assemble_fig12(eps);
  const JetFn jet = g.function("u").analytic();
  const std::size_t n = 2049;
  auto lower = [](const JetFn& f, double off) {
    return [f, off](double t) {
      const Jet j = f(off + t);
      return Jet{j.value - 1, j.d1, j.d2};
    };
  };
  const auto u = SampledFunction::from_jet(0, 0.5, n, lower(jet, 1.0));
  const auto v = SampledFunction::from_jet(0, 0.5, n, lower(jet, 2.0));
  HypothesisOptions opt;
  opt.order = PairOrder::any;
  opt.condition_tolerance = 0.0;
  opt.match.tolerance = 1e-18;
  // near the feet the bump height drops below one ulp of the plateau level
  opt.match.t_range = Interval{1.0 / 32, 0.5};
  const auto r = check_comparison_hypothesis(u, v, ComparisonForm::curvature(), opt);
  CHECK(r.matched_pairs > 100);
  CHECK(r.holds);
}

TEST_CASE("fig13 curve: embedded, curvature ordered along x1", "[gallery]") {
  const auto g = gallery::assemble_fig13(0.1, 1024);
  REQUIRE(g.curve.has_value());
  const auto& c = *g.curve;
  CHECK(c.counterclockwise());
  CHECK(check_embedded(c).embedded);
  CHECK(g.parameters.at("strict_gap") >= 1e-4);
  const auto rx = c.range(Axis::x1);
  // the cap's circle bulges past the profile ends
  CHECK(rx.first == Approx(2 - std::sqrt(5.0)).margin(1e-5));
  CHECK(rx.second == Approx(2 + std::sqrt(5.0)).margin(1e-5));
}

TEST_CASE("fig11: hypothesis holds and symmetry fails", "[gallery]") {
  const auto g = gallery::fig11_function();
  const auto& u = g.function("u");
  CHECK(u.at(4.8) == Approx(u.at(0.2)).margin(1e-12));
  const auto h = check_comparison_hypothesis(u, u, ComparisonForm::second_derivative());
  CHECK(h.holds);
  const auto s = assert_plateau_symmetry(u, 1e-8);
  CHECK_FALSE(s.verdict.pass);
  CHECK(s.a == Approx(2.1).margin(1e-3));
}

TEST_CASE("plateau positive case is symmetric and flat on [a, b - a]", "[gallery]") {
  const auto g = gallery::plateau_positive();
  const auto& u = g.function("u");
  const auto s = assert_plateau_symmetry(u, 1e-8);
  CHECK(s.verdict.pass);
  CHECK(s.a == Approx(0.8).margin(1e-3));
  CHECK(u.at(0.25) == Approx(1.0 / 64).epsilon(1e-6));
  const auto h = check_comparison_hypothesis(u, u, ComparisonForm::second_derivative());
  CHECK(h.holds);
}

TEST_CASE("gallery lookup by name", "[gallery]") {
  CHECK(gallery::by_name("example-1.1").name == "example-1.1");
  CHECK_THROWS_AS(gallery::by_name("nope"), Error);
}
