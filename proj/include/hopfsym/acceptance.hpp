#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "hopfsym/curve_conditions.hpp"
#include "hopfsym/first_integral.hpp"
#include "hopfsym/gallery.hpp"
#include "hopfsym/hopf_lemmas.hpp"
#include "hopfsym/io.hpp"
#include "hopfsym/moving_plane.hpp"
#include "hopfsym/ode.hpp"
#include "hopfsym/shapes.hpp"

namespace hopfsym::acceptance {

struct Check {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string summary;
  io::json detail;
};

namespace detail {

inline std::string g6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline double sup_diff(const SampledFunction& a, const std::function<double(double)>& b) {
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b(a.node(i))));
  return worst;
}

}  // namespace detail

inline Check counterexample_reproduction() {
  Check c{1, "bump counterexample", false, {}, {}};
  const auto r1 = gallery::verify_bump_claim(0.1, 4096);
  const auto r2 = gallery::verify_bump_claim(0.2, 4096);
  const double ratio = r2.min_margin / r1.min_margin;
  c.pass = r1.hypothesis.holds && r1.min_margin > 0 && r1.ratio_check && ratio >= 10 && ratio <= 20;
  c.summary = "min_margin=" + detail::g6(r1.min_margin) + " rhs/lhs@t_min=" + detail::g6(r1.ratio_at_smallest_t) +
              " margin_ratio(0.2/0.1)=" + detail::g6(ratio);
  c.detail = {{"claim", io::bump_claim_json(r1)}, {"margin_ratio", io::num(ratio)}};
  return c;
}

inline Check two_bump_curve() {
  Check c{2, "two-bump closed curve", false, {}, {}};
  const auto g = gallery::assemble_fig13(0.1, kSamplesPerUnit, false);
  const auto& curve = *g.curve;
  const auto emb = check_embedded(curve);
  const auto mono = check_monotone_curvature_condition(curve, Axis::x1);
  const auto sym = symmetry_verdict(curve, Axis::x1, 2.0);
  c.pass = emb.embedded && mono.holds && mono.max_gap >= 1e-4 && !sym.verdict.pass;
  c.summary = std::string("embedded=") + (emb.embedded ? "yes" : "no") + " condition=" + (mono.holds ? "holds" : "fails") +
              " strict_gap=" + detail::g6(mono.max_gap) + " symmetric=" + (sym.verdict.pass ? "yes" : "no") +
              " deviation=" + detail::g6(sym.deviation);
  io::json mj = io::condition_json(mono);
  mj.erase("violations");
  mj.erase("strict_pairs");
  c.detail = {{"embedded", io::embedded_json(emb)}, {"monotone_curvature", mj}, {"symmetry", io::symmetry_json(sym)}};
  return c;
}

inline Check first_integral_oracles() {
  Check c{3, "first-integral oracle equivalence", true, {}, io::json::array()};
  struct Case {
    std::string name;
    ScalarFn f;
    Convention conv;
    std::optional<FluxMap> K;
    std::function<double(double)> exact;
  };
  const std::vector<Case> cases = {
      {"f=1 DOUBLE", [](double) { return 1.0; }, Convention::double_, std::nullopt, [](double t) { return t * t / 2; }},
      {"f=6rho^(1/3) DOUBLE", [](double r) { return 6 * std::cbrt(r); }, Convention::double_, std::nullopt,
       [](double t) { return t * t * t; }},
      {"f=1 SINGLE K=p", [](double) { return 1.0; }, Convention::single, FluxMap::identity(),
       [](double t) { return t * t / 2; }},
  };
  double worst = 0;
  for (const auto& k : cases) {
    const auto fi = first_integral_for(k.f, k.conv, k.K, 1.0, k.name);
    const auto u = reconstruct_solution(fi, 1.0);
    const double e_exact = detail::sup_diff(u, k.exact);
    const Jet j0 = u.analytic()(0.05);
    const auto o = integrate_ode_oracle(k.f, j0.value, j0.d1, 0.05, 1.0, 1e-3, k.K);
    const double e_oracle = detail::sup_diff(o, [&](double t) { return u.at(t); });
    const bool ok = e_exact <= 1e-6 && e_oracle <= 1e-6;
    c.pass = c.pass && ok;
    worst = std::max({worst, e_exact, e_oracle});
    c.detail.push_back({{"case", k.name}, {"sup_exact", io::num(e_exact)}, {"sup_oracle", io::num(e_oracle)}, {"pass", ok}});
  }
  c.summary = "worst sup error=" + detail::g6(worst);
  return c;
}

inline Check conservation() {
  Check c{4, "conservation along oracle trajectories", true, {}, io::json::array()};
  const std::vector<std::pair<std::string, ScalarFn>> battery = {
      {"1", [](double) { return 1.0; }},
      {"1+rho", [](double r) { return 1 + r; }},
      {"2+rho^2", [](double r) { return 2 + r * r; }},
      {"0.5+3rho^3", [](double r) { return 0.5 + 3 * r * r * r; }},
  };
  double worst = 0;
  for (const auto& [name, f] : battery) {
    const auto fi = first_integral_for(f, Convention::double_, std::nullopt, 1.0, name);
    const auto o = integrate_ode_trajectory(f, 0, 0, 0, 1, 1e-3);
    double w = 0;
    for (std::size_t i = 0; i < o.u.size(); ++i) w = std::max(w, std::abs(o.du[i] * o.du[i] - fi.F_at(o.u[i])));
    c.pass = c.pass && w <= 1e-8;
    worst = std::max(worst, w);
    c.detail.push_back({{"f", name}, {"sup_residual", io::num(w)}});
  }
  c.summary = "worst sup|u'^2 - F(u)|=" + detail::g6(worst);
  return c;
}

inline Check symmetry_fixed_point() {
  Check c{5, "moving-plane symmetry fixed point", true, {}, io::json::array()};
  const std::vector<std::pair<std::string, PlanarCurve>> curves = {
      {"circle", shapes::circle(2048)},
      {"vertical ellipse", shapes::ellipse(1.0, 2.0, 2048)},
      {"stadium", shapes::stadium(1.0, 0.5, 2048)},
  };
  for (const auto& [name, curve] : curves) {
    const auto r = sweep(curve);
    const auto s = symmetry_verdict(curve);
    const double step = r.grid_step;
    const bool ok = std::abs(r.lambda0) <= 2 * step && s.verdict.pass && s.deviation <= 3 * step;
    c.pass = c.pass && ok;
    c.detail.push_back({{"curve", name},
                        {"vertices", curve.size()},
                        {"lambda0", io::num(r.lambda0)},
                        {"grid_step", io::num(step)},
                        {"axis", io::num(s.level)},
                        {"deviation", io::num(s.deviation)},
                        {"pass", ok}});
    c.summary += name + ": lambda0/step=" + detail::g6(r.lambda0 / step) + " ";
  }
  return c;
}

inline Check sharpness_pair() {
  Check c{6, "sharpness regression pair", false, {}, {}};
  const auto g = gallery::example_1_1();
  const auto h = check_comparison_hypothesis(g.function("u"), g.function("v"), ComparisonForm::second_derivative());
  const auto v = assert_coincidence(g.function("u"), g.function("v"), 1e-8);
  c.pass = h.holds && !v.pass && v.witness > 1 && v.witness <= 2;
  c.summary = std::string("hypothesis=") + (h.holds ? "holds" : "fails") + " coincidence=" + (v.pass ? "pass" : "fail") +
              " witness=" + detail::g6(v.witness);
  io::json hj = io::hypothesis_json(h);
  hj.erase("violations");
  c.detail = {{"hypothesis", hj}, {"coincidence", io::verdict_json(v)}};
  return c;
}

inline Check plateau_symmetry() {
  Check c{7, "plateau symmetry positive and negative case", false, {}, {}};
  const auto pos = gallery::plateau_positive();
  const auto ps = assert_plateau_symmetry(pos.function("u"), 1e-8);
  const auto ph = check_comparison_hypothesis(pos.function("u"), pos.function("u"), ComparisonForm::second_derivative());
  const auto neg = gallery::fig11_function(kSamplesPerUnit, false);
  const auto ns = assert_plateau_symmetry(neg.function("u"), 1e-8);
  const auto nh = check_comparison_hypothesis(neg.function("u"), neg.function("u"), ComparisonForm::second_derivative());
  c.pass = ps.verdict.pass && ph.holds && !ns.verdict.pass && nh.holds;
  c.summary = std::string("positive: symmetric=") + (ps.verdict.pass ? "yes" : "no") + " a=" + detail::g6(ps.a) +
              "; plateau counterexample: hypothesis=" + (nh.holds ? "holds" : "fails") +
              " symmetric=" + (ns.verdict.pass ? "yes" : "no") + " deviation=" + detail::g6(ns.symmetry_deviation);
  c.detail = {{"positive", {{"verdict", io::verdict_json(ps.verdict)}, {"a", io::num(ps.a)}, {"hypothesis", ph.holds}}},
              {"negative", {{"verdict", io::verdict_json(ns.verdict)}, {"a", io::num(ns.a)}, {"hypothesis", nh.holds}}}};
  return c;
}

inline Check reflection_pairs() {
  Check c{8, "reflection pairs", true, {}, io::json::array()};
  const double pi = std::numbers::pi;
  struct Pair {
    std::string name;
    SampledFunction u, v;
  };
  const std::vector<Pair> pairs = {
      {"t^2 on [0,1]", SampledFunction::sample(0, 1, 4097, [](double t) { return t * t; }),
       SampledFunction::sample(2, 3, 4097, [](double t) { return (3 - t) * (3 - t); })},
      {"sin on [0,pi/2]", SampledFunction::sample(0, pi / 2, 4097, [](double t) { return std::sin(t); }),
       SampledFunction::sample(1, 1 + pi / 2, 4097, [pi](double t) { return std::sin(pi / 2 + 1 - t); })},
  };
  for (const auto& p : pairs) {
    const auto r = assert_reflection(p.u, p.v, 1e-8);
    const bool ok = r.verdict.pass && r.verdict.max_deviation <= 1e-8 && r.endpoint_match;
    c.pass = c.pass && ok;
    c.detail.push_back({{"pair", p.name}, {"c", io::num(r.c)}, {"deviation", io::num(r.verdict.max_deviation)},
                        {"endpoint_gap", io::num(r.endpoint_gap)}, {"pass", ok}});
    c.summary += p.name + ": dev=" + detail::g6(r.verdict.max_deviation) + " ";
  }
  return c;
}

inline Check derivative_fidelity() {
  Check c{9, "finite-difference convergence on the bump pair", true, {}, io::json::array()};
  const double eps = 0.1;
  auto errors = [&](std::size_t n) {
    const auto g = gallery::bump_pair(eps, n);
    std::array<double, 4> e{};
    int k = 0;
    for (const char* name : {"u", "v"}) {
      const auto& f = g.function(name);
      const auto plain = f.samples_only();
      for (int order : {1, 2}) {
        const auto d = derivative_profile(plain, order);
        double w = 0;
        for (std::size_t i = 0; i < f.size(); ++i) {
          const Jet j = f.analytic()(f.node(i));
          w = std::max(w, std::abs(d[i] - (order == 1 ? j.d1 : j.d2)));
        }
        e[k++] = w;
      }
    }
    return e;
  };
  const auto coarse = errors(1025), fine = errors(2049);
  const char* labels[] = {"u'", "u''", "v'", "v''"};
  for (int k = 0; k < 4; ++k) {
    const double ratio = coarse[k] / fine[k];
    const bool ok = ratio >= 3.5 && ratio <= 4.5;
    c.pass = c.pass && ok;
    c.detail.push_back({{"profile", labels[k]}, {"error_coarse", io::num(coarse[k])}, {"error_fine", io::num(fine[k])},
                        {"ratio", io::num(ratio)}, {"pass", ok}});
    c.summary += std::string(labels[k]) + " ratio=" + detail::g6(ratio) + " ";
  }
  return c;
}

inline std::vector<std::function<Check()>> all_checks() {
  return {counterexample_reproduction, two_bump_curve, first_integral_oracles, conservation, symmetry_fixed_point,
          sharpness_pair, plateau_symmetry, reflection_pairs, derivative_fidelity};
}

inline std::string line(const Check& c) {
  return std::string(c.pass ? "PASS" : "FAIL") + " criterion " + std::to_string(c.id) + " (" + c.name + "): " + c.summary;
}

}  // namespace hopfsym::acceptance
