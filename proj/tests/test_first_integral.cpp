#include "catch_amalgamated.hpp"

#include <cmath>
#include <numbers>

#include "hopfsym/first_integral.hpp"
#include "hopfsym/ode.hpp"

using namespace hopfsym;
using Catch::Approx;

namespace {

double one(double) { return 1.0; }
double six_cbrt(double r) { return 6.0 * std::cbrt(r); }

template <class F>
double sup_on(const SampledFunction& u, F exact, double from = -INFINITY) {
  double e = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u.node(i) >= from) e = std::max(e, std::abs(u[i] - exact(u.node(i))));
  }
  return e;
}

}  // namespace

TEST_CASE("F from f") {
  const auto a = build_first_integral(one, 1.0, Convention::double_);
  const auto b = build_first_integral(six_cbrt, 1.0, Convention::double_);
  const auto c = build_first_integral(one, 1.0, Convention::single);
  for (std::size_t i = 0; i < a.size(); i += 97) {
    const double r = a.node(i);
    CHECK(a.F[i] == Approx(2 * r).margin(1e-12));
    CHECK(b.F[i] == Approx(9 * std::pow(r, 4.0 / 3.0)).margin(1e-10));
    CHECK(c.F[i] == Approx(r).margin(1e-12));
  }
  // off-grid evaluation uses the exact partial cell
  CHECK(b.F_at(0.123456) == Approx(9 * std::pow(0.123456, 4.0 / 3.0)).margin(1e-11));
  CHECK(b.F_at(1e-5) == Approx(9 * std::pow(1e-5, 4.0 / 3.0)).epsilon(1e-8));
}

TEST_CASE("non-finite f is rejected") {
  auto bad = [](double r) { return r > 0.5 ? NAN : 1.0; };
  try {
    build_first_integral(bad, 1.0, Convention::double_);
    FAIL("expected non-finite");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::non_finite);
  }
}

TEST_CASE("time maps") {
  const auto a = build_time_map(build_first_integral(one, 1.0, Convention::double_));
  const auto b = build_time_map(build_first_integral(six_cbrt, 1.0, Convention::double_));
  // oracle: int_0^rho ds / sqrt(2 s) = sqrt(2 rho)
  const auto c = build_time_map(build_first_integral(one, 1.0, Convention::single, FluxMap::identity()));
  for (double r : {1e-6, 1e-4, 0.01, 0.3, 0.77, 1.0}) {
    CHECK(a.time_at(r) == Approx(std::sqrt(2 * r)).margin(1e-10));
    CHECK(b.time_at(r) == Approx(std::cbrt(r)).margin(1e-9));
    CHECK(c.time_at(r) == Approx(std::sqrt(2 * r)).margin(1e-9));
  }
  for (std::size_t i = 1; i < a.size(); ++i) {
    REQUIRE(a.time_map[i] > a.time_map[i - 1]);
    REQUIRE(b.time_map[i] > b.time_map[i - 1]);
  }
  CHECK(a.time_map[0] == 0.0);
}

TEST_CASE("G_K of the cubic flux") {
  // G_K(p) = int_0^p q (1 + 3 a q^2) dq = p^2/2 + 3 a p^4 / 4
  const double a = 0.5;
  const FluxEnergy g(FluxMap::cubic(a), 10.0);
  for (double p : {0.1, 0.7, 1.3, 2.0}) {
    const double exact = p * p / 2 + 3 * a * std::pow(p, 4) / 4;
    CHECK(g(p) == Approx(exact).epsilon(1e-12));
    CHECK(g.inverse(exact) == Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("reconstruction") {
  SECTION("f = 1 gives t^2/2") {
    const auto fi = first_integral_for(one, Convention::double_, std::nullopt, 1.0);
    const auto u = reconstruct_solution(fi, 1.0);
    CHECK(sup_on(u, [](double t) { return t * t / 2; }) < 1e-8);
    CHECK(u[0] == 0.0);
  }
  SECTION("f = 6 rho^(1/3) gives t^3") {
    const auto fi = first_integral_for(six_cbrt, Convention::double_, std::nullopt, 1.0);
    const auto u = reconstruct_solution(fi, 1.0);
    CHECK(sup_on(u, [](double t) { return t * t * t; }) < 1e-7);
    // oracle: second differences of the samples against 6 u^(1/3)
    const auto dd = derivative_profile(u.samples_only(), 2);
    double worst = 0;
    for (std::size_t i = 1; i + 1 < u.size(); ++i) {
      worst = std::max(worst, std::abs(dd[i] - six_cbrt(u[i])));
    }
    CHECK(worst < 1e-4);
  }
  SECTION("identity flux, SINGLE") {
    const auto fi = first_integral_for(one, Convention::single, FluxMap::identity(), 1.0);
    const auto u = reconstruct_solution(fi, 1.0);
    CHECK(sup_on(u, [](double t) { return t * t / 2; }) < 1e-8);
    const auto o = integrate_ode_oracle(one, u.at(0.05), u.analytic()(0.05).d1, 0.05, 1.0, 1e-3, FluxMap::identity());
    CHECK(sup_on(o, [&](double t) { return u.at(t); }) < 1e-6);
  }
  SECTION("beyond the time map") {
    const auto fi = build_time_map(build_first_integral(one, 0.5, Convention::double_));
    try {
      reconstruct_solution(fi, 2.0);
      FAIL("expected time-map-range");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::time_map_range);
    }
  }
}

TEST_CASE("time map errors") {
  auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::io;
  };
  CHECK(kind_of([] { build_time_map(build_first_integral(one, 1.0, Convention::double_, FluxMap::identity())); }) ==
        ErrorKind::convention_mismatch);
  CHECK(kind_of([] { build_time_map(build_first_integral(one, 1.0, Convention::single)); }) ==
        ErrorKind::convention_mismatch);
  CHECK(kind_of([] { build_time_map(build_first_integral([](double) { return -1.0; }, 1.0, Convention::double_)); }) ==
        ErrorKind::nonpositive_F);
  // G_K of the curvature flux stays below 1, F reaches 2
  CHECK(kind_of([] {
          build_time_map(build_first_integral(one, 2.0, Convention::single, FluxMap::curvature()));
        }) == ErrorKind::non_invertible);
}

TEST_CASE("curvature flux reconstruction matches 1/(1-F)^2 - 1") {
  const auto fi = first_integral_for(one, Convention::single, FluxMap::curvature(), 0.5);
  const auto u = reconstruct_solution(fi, 0.5);
  for (std::size_t i = 100; i < u.size(); i += 500) {
    const double F = fi.F_at(u[i]);
    const double du = u.analytic()(u.node(i)).d1;
    CHECK(du * du == Approx(1 / ((1 - F) * (1 - F)) - 1).epsilon(1e-8));
  }
  const auto o = integrate_ode_oracle(one, u.at(0.05), u.analytic()(0.05).d1, 0.05, 0.5, 1e-3, FluxMap::curvature());
  CHECK(sup_on(o, [&](double t) { return u.at(t); }) < 1e-6);
}

TEST_CASE("RK4 oracle") {
  SECTION("u'' = 1") {
    const auto u = integrate_ode_oracle(one, 0, 0, 0, 1, 1e-2);
    CHECK(sup_on(u, [](double t) { return t * t / 2; }) < 1e-13);
  }
  SECTION("u'' = -u converges at fourth order") {
    double prev = 0;
    for (double h : {0.02, 0.01, 0.005}) {
      const auto u = integrate_ode_oracle([](double x) { return -x; }, 0, 1, 0, std::numbers::pi, h);
      const double e = sup_on(u, [](double t) { return std::sin(t); });
      CHECK(e < 0.1 * std::pow(h, 4));
      if (prev > 0) CHECK(prev / e == Approx(16).margin(1.5));
      prev = e;
    }
  }
  SECTION("t^3 trajectory away from the origin") {
    const auto u = integrate_ode_oracle(six_cbrt, 1e-3, 3e-2, 0.1, 1.0, 1e-3);
    CHECK(sup_on(u, [](double t) { return t * t * t; }) < 1e-6);
  }
  SECTION("blow-up guard") {
    try {
      integrate_ode_oracle([](double x) { return x * x; }, 1, 1, 0, 10, 1e-3);
      FAIL("expected blow-up");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::blow_up);
    }
  }
}

TEST_CASE("uniqueness pairs") {
  const auto fi1 = first_integral_for(one, Convention::double_, std::nullopt, 1.0);
  auto half_sq = [](double c) {
    return SampledFunction::from_jet(0, 1, 8192, [c](double t) { return Jet{t * t / 2 + c, t, 1}; });
  };
  SECTION("identical solutions") {
    const auto r = verify_uniqueness_pair(half_sq(0), half_sq(0), fi1);
    CHECK(r.verdict.pass);
    CHECK(r.verdict.max_deviation == 0.0);
    CHECK(r.ode_residual_u < 1e-12);
    CHECK(r.first_integral_residual_u < 1e-12);
    CHECK(r.boundary_match);
    CHECK(r.positive_derivative);
  }
  SECTION("t^3 against the reconstruction") {
    const auto fi = first_integral_for(six_cbrt, Convention::double_, std::nullopt, 1.0);
    const auto w = reconstruct_solution(fi, 1.0);
    const auto u = SampledFunction::from_jet(0, 1, 8192, [](double t) { return Jet{t * t * t, 3 * t * t, 6 * t}; });
    const auto r = verify_uniqueness_pair(u, w, fi);
    CHECK(r.verdict.pass);
    CHECK(r.verdict.max_deviation < 1e-6);
    CHECK(r.u_conserves);
    CHECK(r.w_conserves);
  }
  SECTION("shifted candidate is flagged") {
    const auto r = verify_uniqueness_pair(half_sq(0), half_sq(1e-3), fi1);
    CHECK_FALSE(r.verdict.pass);
    CHECK(r.verdict.max_deviation == Approx(1e-3).epsilon(1e-9));
    CHECK(r.u_conserves);
    CHECK_FALSE(r.w_conserves);
    CHECK(r.first_integral_residual_w == Approx(2e-3).epsilon(1e-6));
    CHECK_FALSE(r.boundary_match);
  }
  SECTION("non-solution input") {
    const auto w = SampledFunction::from_jet(0, 1, 8192, [](double t) { return Jet{t * t * t, 3 * t * t, 6 * t}; });
    try {
      verify_uniqueness_pair(half_sq(0), w, fi1);
      FAIL("expected residual-too-large");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::residual_too_large);
    }
  }
}

TEST_CASE("oracle equivalence, conservation and positivity over a battery") {
  struct Case {
    ScalarFn f;
    bool polynomial;
  };
  const std::vector<Case> battery = {
      {one, true},
      {six_cbrt, false},
      {[](double r) { return 1 + r; }, true},
      {[](double r) { return 2 + r * r; }, true},
      {[](double r) { return 0.5 + 3 * r * r * r; }, true},
  };
  for (const auto& c : battery) {
    const auto fi = first_integral_for(c.f, Convention::double_, std::nullopt, 1.0);
    const auto u = reconstruct_solution(fi, 1.0);
    const auto tr = integrate_ode_trajectory(c.f, u.at(0.05), u.analytic()(0.05).d1, 0.05, 1.0, 1e-3);
    CHECK(sup_on(tr.u, [&](double t) { return u.at(t); }) < 1e-6);
    const auto d = derivative_profile(u, 1);
    for (std::size_t i = 3; u.node(i) < 0.5; ++i) {
      REQUIRE(d[i] > 0);
    }
    if (c.polynomial) {
      // oracle from the exact start u = u' = 0
      const auto o = integrate_ode_trajectory(c.f, 0, 0, 0, 1, 1e-3);
      double worst = 0;
      for (std::size_t i = 0; i < o.u.size(); ++i) {
        worst = std::max(worst, std::abs(o.du[i] * o.du[i] - fi.F_at(o.u[i])));
      }
      CHECK(worst <= 1e-8);
    }
  }
}
