#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hopfsym/curve_conditions.hpp"
#include "hopfsym/error.hpp"
#include "hopfsym/first_integral.hpp"
#include "hopfsym/hopf_lemmas.hpp"
#include "hopfsym/numeric.hpp"
#include "hopfsym/planar_curve.hpp"
#include "hopfsym/sampled_function.hpp"

namespace hopfsym::gallery {

struct NamedFunction {
  std::string name;
  SampledFunction f;
};

struct GalleryInstance {
  std::string name;
  std::string description;
  std::vector<NamedFunction> functions;
  std::optional<PlanarCurve> curve;
  std::map<std::string, double> parameters;
  std::vector<std::string> checks;  // structural self-checks that passed

  const SampledFunction& function(const std::string& key) const {
    for (const auto& nf : functions) {
      if (nf.name == key) return nf.f;
    }
    throw Error(ErrorKind::invalid_argument, "instance " + name + " has no function '" + key + "'");
  }
};

/// Largest epsilon for which the bump claim held in the shipped scan.
inline constexpr double kValidatedEpsilon = 0.5;

namespace detail {

struct Piece {
  double end;
  JetFn jet;
};

inline JetFn piecewise(std::vector<Piece> pieces) {
  return [pieces = std::move(pieces)](double t) {
    for (const auto& p : pieces) {
      if (t <= p.end) return p.jet(t);
    }
    return pieces.back().jet(t);
  };
}

inline JetFn constant(double c) {
  return [c](double) { return Jet{c, 0.0, 0.0}; };
}

/// c + (t - t0)^3
inline JetFn shifted_cube(double c, double t0) {
  return [c, t0](double t) {
    const double x = t - t0;
    return Jet{c + x * x * x, 3 * x * x, 6 * x};
  };
}

/// t^3 (1 - t)^3 scaled.
inline Jet bump(double scale, double x) {
  const double q = x - x * x;
  return {scale * q * q * q, scale * 3 * (1 - 2 * x) * q * q, scale * 6 * q * (1 - 5 * x + 5 * x * x)};
}

/// Quintic smoothstep 6x^5 - 15x^4 + 10x^3 on [0, 1].
inline Jet smoothstep(double x) {
  const double y = std::clamp(x, 0.0, 1.0);
  return {y * y * y * (10 - 15 * y + 6 * y * y), 30 * y * y * (1 - y) * (1 - y), 60 * y * (1 - y) * (1 - 2 * y)};
}

/// a + (b - a) S((t - t0) / len)
inline JetFn ramp(double a, double b, double t0, double len) {
  return [=](double t) {
    const Jet s = smoothstep((t - t0) / len);
    return Jet{a + (b - a) * s.value, (b - a) * s.d1 / len, (b - a) * s.d2 / (len * len)};
  };
}

inline numeric::QuinticHermite monotone_bridge(double x0, double x1, const Jet& left, const Jet& right,
                                               const std::string& where) {
  numeric::QuinticHermite q(x0, x1, left, right);
  const double m = q.min_slope(4000);
  if (!(m > 0)) {
    throw Error(ErrorKind::construction_check,
                where + ": bridge is not strictly increasing (min slope " + std::to_string(m) + ")");
  }
  return q;
}

inline void require_junction(const JetFn& f, double t, const std::string& where, double tol = 1e-8) {
  const double h = 1e-12;
  const Jet a = f(t - h), b = f(t + h);
  const double worst = std::max({std::abs(a.value - b.value), std::abs(a.d1 - b.d1), std::abs(a.d2 - b.d2)});
  if (worst > tol) {
    throw Error(ErrorKind::construction_check,
                where + ": C2 junction at t=" + std::to_string(t) + " is off by " + std::to_string(worst));
  }
}

inline JetFn mirror(JetFn f, double about) {
  return [f = std::move(f), about](double t) {
    const Jet j = f(2 * about - t);
    return Jet{j.value, -j.d1, j.d2};
  };
}

}  // namespace detail

/// Example 1.1: u' >= 0 and v' >= 0 with the comparison hypothesis, yet
/// u and v differ on (1, 2].
inline GalleryInstance example_1_1(std::size_t samples_per_unit = kSamplesPerUnit) {
  const Jet left{1.0 / 27, 1.0 / 3, 2.0};
  const Jet right{26.0 / 27, 1.0 / 3, -2.0};
  const auto q = detail::monotone_bridge(1.0 / 3, 2.0 / 3, left, right, "example-1.1");
  const JetFn u = detail::piecewise({{1.0 / 3, detail::shifted_cube(0.0, 0.0)},
                                     {2.0 / 3, [q](double t) { return q(t); }},
                                     {2.0, detail::shifted_cube(1.0, 1.0)}});
  const JetFn v = detail::piecewise({{1.0, u}, {2.0, detail::constant(1.0)}});
  detail::require_junction(u, 1.0 / 3, "example-1.1 u");
  detail::require_junction(u, 2.0 / 3, "example-1.1 u");
  detail::require_junction(v, 1.0, "example-1.1 v");
  const std::size_t n = samples_per_unit * 2 + 1;
  GalleryInstance g;
  g.name = "example-1.1";
  g.description = "u, v >= 0 nondecreasing with the second-derivative hypothesis but u != v on (1, 2]";
  g.functions = {{"u", SampledFunction::from_jet(0, 2, n, u)}, {"v", SampledFunction::from_jet(0, 2, n, v)}};
  g.checks = {"C2 junctions", "bridge strictly increasing"};
  return g;
}

/// Example 1.2: w ramps up on [1, 2], follows u on [2, 3] and stays at 2;
/// v(t) = w(t + 1).
inline GalleryInstance example_1_2(std::size_t samples_per_unit = kSamplesPerUnit) {
  const Jet left{1.0 + 1.0 / 27, 1.0 / 3, 2.0};
  const Jet right{2.0, 0.0, 0.0};
  const auto q = detail::monotone_bridge(7.0 / 3, 8.0 / 3, left, right, "example-1.2");
  const JetFn u = detail::piecewise({{2.0, detail::constant(1.0)},
                                     {7.0 / 3, detail::shifted_cube(1.0, 2.0)},
                                     {8.0 / 3, [q](double t) { return q(t); }},
                                     {3.0, detail::constant(2.0)},
                                     {4.0, detail::shifted_cube(2.0, 3.0)}});
  const JetFn w = detail::piecewise({{2.0, detail::ramp(0.0, 1.0, 1.0, 1.0)}, {3.0, u}, {5.0, detail::constant(2.0)}});
  const JetFn v = [w](double t) { return w(t + 1.0); };
  for (double t : {2.0, 7.0 / 3, 8.0 / 3, 3.0}) detail::require_junction(u, t, "example-1.2 u");
  for (double t : {2.0, 3.0}) detail::require_junction(w, t, "example-1.2 w");
  const std::size_t n = samples_per_unit * 4 + 1;
  GalleryInstance g;
  g.name = "example-1.2";
  g.description = "nondecreasing u, v with a plateau; sliding v touches u at a plateau endpoint";
  g.functions = {{"u", SampledFunction::from_jet(0, 4, n, u)},
                 {"v", SampledFunction::from_jet(0, 4, n, v)},
                 {"w", SampledFunction::from_jet(1, 5, n, w)}};
  g.checks = {"C2 junctions", "bridge strictly increasing", "w nondecreasing"};
  return g;
}

/// u = eps^6 t^3 (1-t)^3 and v = eps^3 t^3 (1-t)^3 on [0, 1].
inline GalleryInstance bump_pair(double epsilon, std::size_t n = kSamplesPerUnit + 1) {
  if (!(epsilon > 0)) {
    throw Error(ErrorKind::invalid_argument, "epsilon must be positive");
  }
  const double e3 = epsilon * epsilon * epsilon, e6 = e3 * e3;
  GalleryInstance g;
  g.name = "bump-pair";
  g.description = "small and large cubic bumps";
  g.parameters["epsilon"] = epsilon;
  g.functions = {{"u", SampledFunction::from_jet(0, 1, n, [e6](double t) { return detail::bump(e6, t); })},
                 {"v", SampledFunction::from_jet(0, 1, n, [e3](double t) { return detail::bump(e3, t); })}};
  return g;
}

struct BumpClaimReport {
  HypothesisReport hypothesis;
  double epsilon = 0.0;
  std::size_t n_grid = 0;
  double min_margin = 0.0;
  double fitted_C = 0.0;            // max lhs / (eps^6 (t - t^2))
  double rhs_bound_min = 0.0;       // min rhs / (eps^4 (t - t^2))
  bool rhs_bound_holds = true;      // rhs_bound_min >= 5 - slack
  double smallest_t = 0.0;
  double ratio_at_smallest_t = 0.0;  // rhs / lhs
  bool ratio_check = true;           // ratio >= 2
  bool validated_range = true;       // epsilon <= kValidatedEpsilon
};

/// For every grid t in (0, 1/2) solves u(t) = v(s) on the left branch of v
/// and compares the graph curvatures of u at t and v at s.
inline BumpClaimReport verify_bump_claim(double epsilon, std::size_t n_grid = kSamplesPerUnit,
                                         double bound_slack = 1e-9) {
  if (!(epsilon > 0 && epsilon < 1)) {
    throw Error(ErrorKind::invalid_argument, "epsilon must lie in (0, 1)");
  }
  if (n_grid < 8) {
    throw Error(ErrorKind::too_few_samples, "claim grid needs at least 8 nodes");
  }
  const double e3 = epsilon * epsilon * epsilon, e6 = e3 * e3, e4 = e3 * epsilon;
  const auto form = ComparisonForm::curvature();
  BumpClaimReport r;
  r.epsilon = epsilon;
  r.n_grid = n_grid;
  r.validated_range = epsilon <= kValidatedEpsilon;
  r.hypothesis.form = FormKind::curvature;
  r.hypothesis.tolerance = 0.0;
  r.hypothesis.grid_n = n_grid;
  r.min_margin = INFINITY;
  r.rhs_bound_min = INFINITY;
  const double h = 1.0 / static_cast<double>(n_grid - 1);
  for (std::size_t i = 1; static_cast<double>(i) * h < 0.5; ++i) {
    const double t = static_cast<double>(i) * h;
    const Jet ut = detail::bump(e6, t);
    auto g = [&](double s) { return detail::bump(e3, s).value - ut.value; };
    const double s = numeric::bisect(g, 0.0, 0.5, 1e-16, 200).x;
    const double lhs = form.evaluate(ut);
    const double rhs = form.evaluate(detail::bump(e3, s));
    const double margin = rhs - lhs;
    ++r.hypothesis.matched_pairs;
    if (margin < r.min_margin) {
      r.min_margin = margin;
      r.hypothesis.tightest = HypothesisWitness{t, s, lhs, rhs};
    }
    if (!(margin > 0)) {
      ++r.hypothesis.violation_count;
      if (r.hypothesis.violations.size() < 32) r.hypothesis.violations.push_back({t, s, lhs, rhs});
    }
    const double q = t - t * t;
    r.fitted_C = std::max(r.fitted_C, lhs / (e6 * q));
    r.rhs_bound_min = std::min(r.rhs_bound_min, rhs / (e4 * q));
    if (i == 1) {
      r.smallest_t = t;
      r.ratio_at_smallest_t = rhs / lhs;
    }
  }
  r.hypothesis.margin = r.min_margin;
  r.hypothesis.holds = r.hypothesis.violation_count == 0;
  r.rhs_bound_holds = r.rhs_bound_min >= 5.0 - bound_slack;
  r.ratio_check = r.ratio_at_smallest_t >= 2.0;
  return r;
}

struct EpsilonScan {
  std::vector<double> epsilons;
  std::vector<double> min_margins;
  std::vector<bool> holds;
  double largest_validated = 0.0;
  std::vector<double> margin_ratios;  // margin(eps_k) / margin(eps_{k+1})
};

inline EpsilonScan scan_epsilon(std::vector<double> epsilons = {0.5, 0.2, 0.1, 0.05},
                                std::size_t n_grid = kSamplesPerUnit) {
  EpsilonScan s;
  s.epsilons = std::move(epsilons);
  for (double e : s.epsilons) {
    const auto r = verify_bump_claim(e, n_grid);
    s.min_margins.push_back(r.min_margin);
    s.holds.push_back(r.hypothesis.holds);
    if (r.hypothesis.holds) s.largest_validated = std::max(s.largest_validated, e);
  }
  for (std::size_t k = 0; k + 1 < s.epsilons.size(); ++k) {
    s.margin_ratios.push_back(s.min_margins[k] / s.min_margins[k + 1]);
  }
  return s;
}

namespace detail {

// 2t - 2t^3 + t^4: rises from 0 (slope 2) to 1 (slope 0, curvature 0)
inline Jet flank(double t) {
  return {2 * t - 2 * t * t * t + t * t * t * t, 2 - 6 * t * t + 4 * t * t * t, -12 * t + 12 * t * t};
}

inline JetFn fig12_jet(double epsilon) {
  const double e3 = epsilon * epsilon * epsilon, e6 = e3 * e3;
  auto lift = [](Jet j) { return Jet{1.0 + j.value, j.d1, j.d2}; };
  return piecewise({{1.0, [](double t) { return flank(t); }},
                    {2.0, [=](double t) { return lift(bump(e6, t - 1)); }},
                    {3.0, [=](double t) { return lift(bump(e3, t - 2)); }},
                    {4.0, mirror([](double t) { return flank(t); }, 2.0)}});
}

}  // namespace detail

/// Profile on [0, 4]: monotone flank, eps^6 bump about 3/2, eps^3 bump
/// about 5/2, mirrored flank.
inline GalleryInstance assemble_fig12(double epsilon, std::size_t samples_per_unit = kSamplesPerUnit) {
  if (!(epsilon > 0 && epsilon < 1)) {
    throw Error(ErrorKind::invalid_argument, "epsilon must lie in (0, 1)");
  }
  const JetFn u = detail::fig12_jet(epsilon);
  for (double t : {1.0, 2.0, 3.0}) detail::require_junction(u, t, "fig12");
  const std::size_t n = samples_per_unit * 4 + 1;
  const auto f = SampledFunction::from_jet(0, 4, n, u);
  double refl = 0, sym1 = 0, sym2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = f.node(i);
    const std::size_t j = n - 1 - i;
    if (t < 1) refl = std::max(refl, std::abs(f[i] - f[j]));
  }
  for (std::size_t k = 0; k <= samples_per_unit / 2; ++k) {
    const double d = static_cast<double>(k) / static_cast<double>(samples_per_unit);
    sym1 = std::max(sym1, std::abs(u(1.5 + d).value - u(1.5 - d).value));
    sym2 = std::max(sym2, std::abs(u(2.5 + d).value - u(2.5 - d).value));
  }
  if (refl > 1e-10 || sym1 > 1e-10 || sym2 > 1e-10) {
    throw Error(ErrorKind::construction_check, "fig12 symmetry self-check failed");
  }
  GalleryInstance g;
  g.name = "fig12";
  g.description = "two-bump profile with mirrored flanks";
  g.parameters["epsilon"] = epsilon;
  g.parameters["reflection_deviation"] = refl;
  g.parameters["bump1_symmetry_deviation"] = sym1;
  g.parameters["bump2_symmetry_deviation"] = sym2;
  g.functions = {{"u", f}};
  g.checks = {"C2 junctions", "flank reflection", "bump symmetry"};
  if (epsilon > kValidatedEpsilon) {
    g.checks.push_back("warning: epsilon above the validated range");
  }
  return g;
}

/// Closed curve: the two-bump profile on top, a circular cap through
/// (0, 0) and (4, 0) centred at (2, -1) below (C1 junctions, slope +-2).
inline GalleryInstance assemble_fig13(double epsilon, std::size_t samples_per_unit = kSamplesPerUnit,
                                      bool self_check = true) {
  GalleryInstance g = assemble_fig12(epsilon, samples_per_unit);
  const JetFn u = detail::fig12_jet(epsilon);
  const double r = std::sqrt(5.0);
  const std::size_t n = samples_per_unit * 4;
  std::vector<Point> pts;
  std::vector<double> kappa;
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = 4.0 - 4.0 * static_cast<double>(k) / static_cast<double>(n);
    const Jet j = u(t);
    pts.push_back({t, j.value});
    kappa.push_back(-j.d2 / std::pow(1 + j.d1 * j.d1, 1.5));
  }
  kappa.front() = kappa.back() = 0.5 * (kappa.front() + 1.0 / r);
  const double a0 = std::atan2(1.0, -2.0);
  const double a1 = std::atan2(1.0, 2.0) + 2 * std::numbers::pi;
  const std::size_t m = 2 * samples_per_unit;
  for (std::size_t k = 1; k <= m; ++k) {
    const double a = a0 + (a1 - a0) * static_cast<double>(k) / static_cast<double>(m + 1);
    pts.push_back({2 + r * std::cos(a), -1 + r * std::sin(a)});
    kappa.push_back(1.0 / r);
  }
  PlanarCurve curve(std::move(pts), std::move(kappa));
  g.name = "fig13";
  g.description = "closed curve: two-bump profile rounded off by a symmetric circular cap";
  g.parameters["cap_radius"] = r;
  g.parameters["curvature_jump"] = 1.0 / r;
  if (self_check) {
    const auto emb = check_embedded(curve);
    if (!emb.embedded) {
      throw Error(ErrorKind::construction_check, "fig13 curve is not embedded");
    }
    const auto mc = check_monotone_curvature_condition(curve, Axis::x1);
    if (!mc.holds || mc.strict_count == 0) {
      throw Error(ErrorKind::construction_check, "fig13 curvature ordering self-check failed");
    }
    g.parameters["strict_gap"] = mc.max_gap;
    g.checks.push_back("embedded");
    g.checks.push_back("monotone curvature along x1 with a strict pair");
  }
  g.curve = std::move(curve);
  return g;
}

namespace detail {

inline JetFn fig11_jet() {
  return piecewise({{1.0, ramp(0.0, 1.0, 0.0, 1.0)},
                    {1.5, constant(1.0)},
                    {2.1, ramp(1.0, 2.0, 1.5, 0.6)},
                    {2.4, constant(2.0)},
                    {3.0, ramp(2.0, 1.0, 2.4, 0.6)},
                    {4.0, constant(1.0)},
                    {5.0, mirror(ramp(0.0, 1.0, 0.0, 1.0), 2.5)}});
}

}  // namespace detail

/// Function on [0, 5] with u' >= 0 before its first maximum, matched-level
/// second derivatives ordered, and no symmetry.
inline GalleryInstance fig11_function(std::size_t samples_per_unit = kSamplesPerUnit, bool self_check = true) {
  const JetFn u = detail::fig11_jet();
  for (double t : {1.0, 1.5, 2.1, 2.4, 3.0, 4.0}) detail::require_junction(u, t, "fig11");
  const std::size_t n = samples_per_unit * 5 + 1;
  GalleryInstance g;
  g.name = "fig11";
  g.description = "plateau function: comparison hypothesis holds, symmetry fails";
  g.functions = {{"u", SampledFunction::from_jet(0, 5, n, u)}};
  const auto& f = g.functions.front().f;
  if (std::abs(u(4.8).value - u(0.2).value) > 1e-12) {
    throw Error(ErrorKind::construction_check, "fig11 end arcs are not mirror images");
  }
  g.checks = {"C2 junctions", "end arcs mirrored"};
  if (self_check) {
    const auto hyp = check_comparison_hypothesis(f, f, ComparisonForm::second_derivative());
    const auto sym = assert_plateau_symmetry(f, 1e-8);
    if (!hyp.holds || sym.verdict.pass) {
      throw Error(ErrorKind::construction_check, "fig11 self-check failed");
    }
    g.checks.push_back("comparison hypothesis holds");
    g.checks.push_back("not symmetric");
  }
  return g;
}

/// Symmetric function on [0, 2] with u' > 0 up to its first maximum: the
/// reconstructed solution t^3 of u'' = 6 u^(1/3) on [0, 1/2], a monotone
/// bridge to a flat top on [0.8, 1.2], then the mirror image.
inline GalleryInstance plateau_positive(std::size_t samples_per_unit = kSamplesPerUnit) {
  const auto fi = first_integral_for([](double r) { return 6.0 * std::cbrt(r); }, Convention::double_,
                                     std::nullopt, 0.5);
  const auto rise = reconstruct_solution(fi, 0.5);
  const JetFn rise_jet = rise.analytic();
  const Jet edge = rise_jet(0.5);
  const double top = 0.3;
  const auto q = detail::monotone_bridge(0.5, 0.8, edge, Jet{top, 0.0, 0.0}, "plateau-positive");
  const JetFn half = detail::piecewise({{0.5, rise_jet}, {0.8, [q](double t) { return q(t); }},
                                        {1.0, detail::constant(top)}});
  const JetFn u = [half](double t) { return t <= 1.0 ? half(t) : detail::mirror(half, 1.0)(t); };
  const std::size_t n = samples_per_unit * 2 + 1;
  GalleryInstance g;
  g.name = "plateau-positive";
  g.description = "reconstructed rise, flat top, mirrored fall";
  g.parameters["a"] = 0.8;
  g.parameters["top"] = top;
  g.functions = {{"u", SampledFunction::from_jet(0, 2, n, u)}};
  g.checks = {"bridge strictly increasing"};
  return g;
}

inline std::vector<std::string> instance_names() {
  return {"example-1.1", "example-1.2", "bump-pair", "fig11", "fig12", "fig13", "plateau-positive"};
}

inline GalleryInstance by_name(const std::string& name, double epsilon = 0.1) {
  if (name == "example-1.1") return example_1_1();
  if (name == "example-1.2") return example_1_2();
  if (name == "bump-pair") return bump_pair(epsilon);
  if (name == "fig11") return fig11_function();
  if (name == "fig12") return assemble_fig12(epsilon);
  if (name == "fig13") return assemble_fig13(epsilon);
  if (name == "plateau-positive") return plateau_positive();
  throw Error(ErrorKind::invalid_argument, "unknown gallery instance '" + name + "'");
}

}  // namespace hopfsym::gallery
