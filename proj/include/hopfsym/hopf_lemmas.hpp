#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hopfsym/error.hpp"
#include "hopfsym/matching.hpp"
#include "hopfsym/sampled_function.hpp"

namespace hopfsym {

enum class FormKind { second_derivative, curvature, k_flux, k_general };

inline const char* form_name(FormKind k) {
  switch (k) {
    case FormKind::second_derivative: return "SECOND_DERIV";
    case FormKind::curvature: return "CURVATURE";
    case FormKind::k_flux: return "K_FLUX";
    case FormKind::k_general: return "K_GENERAL";
  }
  return "?";
}

inline FormKind parse_form(const std::string& s) {
  if (s == "SECOND_DERIV" || s == "second-deriv") return FormKind::second_derivative;
  if (s == "CURVATURE" || s == "curvature") return FormKind::curvature;
  if (s == "K_FLUX" || s == "k-flux") return FormKind::k_flux;
  if (s == "K_GENERAL" || s == "k-general") return FormKind::k_general;
  throw Error(ErrorKind::invalid_argument, "unknown comparison form '" + s + "'");
}

/// The differential expression compared at matched levels.
struct ComparisonForm {
  FormKind kind = FormKind::second_derivative;
  std::function<double(double)> K;        // flux map, K_FLUX
  std::function<double(double)> K_prime;  // its derivative, must be > 0
  bool K_prime_even = false;
  std::function<double(double, double, double)> K3;    // K(s, p, q), K_GENERAL
  std::function<double(double, double, double)> K3_q;  // dK/dq, must be > 0

  static ComparisonForm second_derivative() { return {}; }
  static ComparisonForm curvature() {
    ComparisonForm f;
    f.kind = FormKind::curvature;
    return f;
  }
  static ComparisonForm k_flux(std::function<double(double)> K, std::function<double(double)> Kp, bool even = false) {
    ComparisonForm f;
    f.kind = FormKind::k_flux;
    f.K = std::move(K);
    f.K_prime = std::move(Kp);
    f.K_prime_even = even;
    return f;
  }
  static ComparisonForm k_general(std::function<double(double, double, double)> K,
                                  std::function<double(double, double, double)> Kq) {
    ComparisonForm f;
    f.kind = FormKind::k_general;
    f.K3 = std::move(K);
    f.K3_q = std::move(Kq);
    return f;
  }

  /// Value of the compared expression at a point with jet j.
  double evaluate(const Jet& j) const {
    switch (kind) {
      case FormKind::second_derivative:
        return j.d2;
      case FormKind::curvature:
        return j.d2 / std::pow(1.0 + j.d1 * j.d1, 1.5);
      case FormKind::k_flux: {
        const double kp = K_prime(j.d1);
        if (!(kp > 0)) {
          throw Error(ErrorKind::positivity_contract,
                      "K'(" + std::to_string(j.d1) + ") = " + std::to_string(kp) + " is not positive");
        }
        return kp * j.d2;
      }
      case FormKind::k_general: {
        const double kq = K3_q(j.value, j.d1, j.d2);
        if (!(kq > 0)) {
          throw Error(ErrorKind::positivity_contract,
                      "K_q at (" + std::to_string(j.value) + ", " + std::to_string(j.d1) + ", " +
                          std::to_string(j.d2) + ") = " + std::to_string(kq) + " is not positive");
        }
        return K3(j.value, j.d1, j.d2);
      }
    }
    return 0.0;
  }
};

struct HypothesisWitness {
  double t = 0.0;
  double s = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Which matched pairs enter the comparison.
enum class PairOrder { after_only, any };

struct HypothesisOptions {
  MatchOptions match;
  double condition_tolerance = 1e-6;
  PairOrder order = PairOrder::after_only;
  std::size_t max_witnesses = 32;
};

struct HypothesisReport {
  FormKind form = FormKind::second_derivative;
  bool holds = true;
  double margin = 0.0;  // min over pairs of rhs - lhs
  std::size_t matched_pairs = 0;
  std::vector<HypothesisWitness> violations;
  std::size_t violation_count = 0;
  std::optional<HypothesisWitness> tightest;
  double tolerance = 0.0;
  std::size_t grid_n = 0;
};

/// Compares lhs(u at t) <= rhs(v at s) over every matched level pair.
inline HypothesisReport check_comparison_hypothesis(const SampledFunction& u, const SampledFunction& v,
                                                    const ComparisonForm& form, const HypothesisOptions& opt = {}) {
  const MatchingMap map = build_matching_map(u, v, opt.match);
  const JetSampler ju(u), jv(v);
  HypothesisReport rep;
  rep.form = form.kind;
  rep.tolerance = opt.condition_tolerance;
  rep.grid_n = u.size();
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& p : map.pairs) {
    if (opt.order == PairOrder::after_only && p.s < p.t - 1e-9) {
      continue;
    }
    const double lhs = form.evaluate(ju(p.t));
    const double rhs = form.evaluate(jv(p.s));
    ++rep.matched_pairs;
    const double slack = rhs - lhs;
    if (slack < margin) {
      margin = slack;
      rep.tightest = HypothesisWitness{p.t, p.s, lhs, rhs};
    }
    if (slack < -opt.condition_tolerance) {
      ++rep.violation_count;
      if (rep.violations.size() < opt.max_witnesses) {
        rep.violations.push_back({p.t, p.s, lhs, rhs});
      }
    }
  }
  rep.margin = rep.matched_pairs > 0 ? margin : 0.0;
  rep.holds = rep.violation_count == 0;
  return rep;
}

struct Verdict {
  bool pass = true;
  double max_deviation = 0.0;
  double witness = 0.0;
  double tolerance = 0.0;
};

inline Verdict make_verdict(double deviation, double witness, double tolerance) {
  return {deviation <= tolerance, deviation, witness, tolerance};
}

namespace detail {

inline bool same_domain(const SampledFunction& u, const SampledFunction& v) {
  const double eps = 1e-12 * std::max({1.0, std::abs(u.start()), std::abs(u.end())});
  return std::abs(u.start() - v.start()) <= eps && std::abs(u.end() - v.end()) <= eps;
}

}  // namespace detail

/// sup |u - v| over the grid of u.
inline Verdict assert_coincidence(const SampledFunction& u, const SampledFunction& v, double tolerance) {
  if (!detail::same_domain(u, v)) {
    throw Error(ErrorKind::domain_mismatch, "coincidence needs a common domain");
  }
  double dev = 0, where = u.start();
  const bool same_grid = u.size() == v.size();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = std::abs(u[i] - (same_grid ? v[i] : v.at(u.node(i))));
    if (d > dev) {
      dev = d;
      where = u.node(i);
    }
  }
  return make_verdict(dev, where, tolerance);
}

struct SlideOptions {
  double touch_tolerance = 1e-9;
  double width = 1e-10;
  int max_iterations = 200;
};

struct SlideResult {
  double shift = 0.0;
  double touch_t = 0.0;
  double min_gap = 0.0;
};

namespace detail {

// min over the overlap of u(x) - v(x - shift), with its location
inline std::pair<double, double> slide_gap(const SampledFunction& u, const SampledFunction& v, double shift) {
  const double lo = std::max(u.start(), v.start() + shift);
  const double hi = std::min(u.end(), v.end() + shift);
  if (lo > hi) {
    return {std::numeric_limits<double>::infinity(), lo};
  }
  double best = std::numeric_limits<double>::infinity(), where = lo;
  auto consider = [&](double x) {
    const double g = u.at(x) - v.at(std::clamp(x - shift, v.start(), v.end()));
    if (g < best) {
      best = g;
      where = x;
    }
  };
  consider(lo);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = u.node(i);
    if (x > lo && x < hi) consider(x);
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = v.node(i) + shift;
    if (x > lo && x < hi) consider(x);
  }
  consider(hi);
  return {best, where};
}

}  // namespace detail

/// Slides v (shifted right by `max_shift`) back to the left until its graph
/// first touches that of u; returns that shift and the contact abscissa.
inline SlideResult slide_until_touch(const SampledFunction& u, const SampledFunction& v, double max_shift,
                                     const SlideOptions& opt = {}) {
  if (!(max_shift >= 0)) {
    throw Error(ErrorKind::invalid_argument, "max_shift must be nonnegative");
  }
  const auto at_far = detail::slide_gap(u, v, max_shift);
  if (at_far.first <= opt.touch_tolerance) {
    throw Error(ErrorKind::no_touch, "graphs already touch or cross at the largest shift");
  }
  const auto at_zero = detail::slide_gap(u, v, 0.0);
  if (at_zero.first > opt.touch_tolerance) {
    throw Error(ErrorKind::no_touch, "no contact for shifts in [0, " + std::to_string(max_shift) + "]");
  }
  double lo = 0.0, hi = max_shift;  // gap(lo) <= tol < gap(hi)
  for (int it = 0; it < opt.max_iterations && hi - lo > opt.width; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (detail::slide_gap(u, v, mid).first <= opt.touch_tolerance) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const auto g = detail::slide_gap(u, v, lo);
  return {lo, g.second, g.first};
}

struct ReflectionVerdict {
  Verdict verdict;
  double c = 0.0;
  double endpoint_gap = 0.0;  // |v(alpha) - u(b)|
  bool endpoint_match = true;
};

/// Checks v(t) = u(c - t) with c = b + alpha, for u on (a, b) and v on
/// (alpha, beta).
inline ReflectionVerdict assert_reflection(const SampledFunction& u, const SampledFunction& v, double tolerance) {
  const double cell = std::max(u.step(), v.step());
  if (std::abs(v.length() - u.length()) > cell) {
    throw Error(ErrorKind::domain_mismatch, "reflection needs domains of equal length");
  }
  ReflectionVerdict r;
  r.c = u.end() + v.start();
  double dev = 0, where = v.start();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double t = v.node(i);
    const double d = std::abs(v[i] - u.at(std::clamp(r.c - t, u.start(), u.end())));
    if (d > dev) {
      dev = d;
      where = t;
    }
  }
  r.verdict = make_verdict(dev, where, tolerance);
  r.endpoint_gap = std::abs(v[0] - u[u.size() - 1]);
  r.endpoint_match = r.endpoint_gap <= tolerance;
  r.verdict.pass = r.verdict.pass && r.endpoint_match;
  return r;
}

struct PlateauSymmetryVerdict {
  Verdict verdict;
  double a = 0.0;  // first maximum
  double symmetry_deviation = 0.0;
  double plateau_deviation = 0.0;
};

struct PlateauOptions {
  double boundary_tolerance = 1e-6;
  double argmax_tolerance = 1e-9;
};

/// Symmetry about b/2 together with flatness on [a, b - a], where a is the
/// first maximum.
inline PlateauSymmetryVerdict assert_plateau_symmetry(const SampledFunction& u, double tolerance,
                                                      const PlateauOptions& opt = {}) {
  const std::size_t n = u.size();
  const double du0 = derivative_profile(u, 1)[0];
  if (std::abs(u[0]) > opt.boundary_tolerance || std::abs(u[n - 1]) > opt.boundary_tolerance ||
      std::abs(du0) > opt.boundary_tolerance) {
    throw Error(ErrorKind::boundary_data, "expected u(0) = u'(0) = u(b) = 0, got " + std::to_string(u[0]) + ", " +
                                              std::to_string(du0) + ", " + std::to_string(u[n - 1]));
  }
  const double top = *std::max_element(u.values().begin(), u.values().end());
  std::size_t ia = 0;
  while (u[ia] < top - opt.argmax_tolerance) {
    ++ia;
  }
  PlateauSymmetryVerdict r;
  r.a = u.node(ia) - u.start();
  double where_sym = 0, where_flat = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::abs(u[i] - u[n - 1 - i]);
    if (d > r.symmetry_deviation) {
      r.symmetry_deviation = d;
      where_sym = u.node(i);
    }
  }
  for (std::size_t i = ia; i + ia < n; ++i) {
    const double d = std::abs(u[i] - u[ia]);
    if (d > r.plateau_deviation) {
      r.plateau_deviation = d;
      where_flat = u.node(i);
    }
  }
  const bool sym_worse = r.symmetry_deviation >= r.plateau_deviation;
  r.verdict = make_verdict(std::max(r.symmetry_deviation, r.plateau_deviation), sym_worse ? where_sym : where_flat,
                           tolerance);
  return r;
}

struct EitherIncreasingReport {
  bool holds = true;
  double min_slope = 0.0;  // min over t of max(u'(t), v'(t))
  double witness = 0.0;
};

/// max(u', v') > margin on the common open interval, away from the endpoint
/// buffer.
inline EitherIncreasingReport check_either_increasing(const SampledFunction& u, const SampledFunction& v,
                                                      const MatchOptions& opt = {}) {
  if (!detail::same_domain(u, v)) {
    throw Error(ErrorKind::domain_mismatch, "either-or check needs a common domain");
  }
  const JetSampler ju(u), jv(v);
  const double buffer = static_cast<double>(opt.buffer_cells) * u.step();
  EitherIncreasingReport r;
  r.min_slope = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double t = u.node(i);
    if (t <= u.start() + buffer || t >= u.end() - buffer) continue;
    const double m = std::max(ju.at_node(i).d1, jv(t).d1);
    if (m < r.min_slope) {
      r.min_slope = m;
      r.witness = t;
    }
  }
  r.holds = r.min_slope > opt.slope_margin;
  return r;
}

}  // namespace hopfsym
