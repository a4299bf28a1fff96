#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hopfsym/error.hpp"
#include "hopfsym/hopf_lemmas.hpp"
#include "hopfsym/numeric.hpp"
#include "hopfsym/ode.hpp"
#include "hopfsym/sampled_function.hpp"

namespace hopfsym {

/// DOUBLE: F' = 2f with u'^2 = F(u).  SINGLE: F' = f with G_K(u') = F(u).
enum class Convention { double_, single };

inline const char* convention_name(Convention c) { return c == Convention::double_ ? "DOUBLE" : "SINGLE"; }

inline Convention parse_convention(const std::string& s) {
  if (s == "double" || s == "DOUBLE") return Convention::double_;
  if (s == "single" || s == "SINGLE") return Convention::single;
  throw Error(ErrorKind::invalid_argument, "convention must be double or single, got '" + s + "'");
}

inline constexpr std::size_t kFirstIntegralNodes = 8192;

namespace detail {

inline int panels_for_cell(std::size_t i) { return i < 64 ? 8 : 1; }

// Integral over the first cell [0, h] of a positive integrand that may be
// singular at 0, from a power-law fit on nodes 1..8.
inline double first_cell_integral(const std::function<double(double)>& g, double h, numeric::PowerLaw* law) {
  std::vector<double> xs, ys;
  for (int k = 1; k <= 8; ++k) {
    xs.push_back(h * k);
    ys.push_back(g(h * k));
  }
  const auto fit = numeric::fit_power_law(xs, ys);
  if (!(fit.exponent > -1.0)) {
    throw Error(ErrorKind::non_invertible, "integrand is not integrable at the origin (fitted exponent " +
                                               std::to_string(fit.exponent) + ")");
  }
  if (law) *law = fit;
  return fit.integral_from_zero(h);
}

}  // namespace detail

/// G_K(p) = int_0^p q K'(q) dq for p >= 0, tabulated for inversion.
class FluxEnergy {
 public:
  FluxEnergy(FluxMap K, double target) : K_(std::move(K)) {
    double pmax = 1.0;
    for (int i = 0; i < 60; ++i) {
      if (integrate(0.0, pmax, 64) >= target) break;
      pmax *= 2;
    }
    const std::size_t n = 4096;
    h_ = pmax / static_cast<double>(n);
    table_.assign(n + 1, 0.0);
    for (std::size_t i = 1; i <= n; ++i) {
      table_[i] = table_[i - 1] + integrate(h_ * static_cast<double>(i - 1), h_ * static_cast<double>(i), 1);
    }
  }

  double operator()(double p) const {
    if (p <= 0) return 0.0;
    const auto i = std::min(table_.size() - 1, static_cast<std::size_t>(p / h_));
    if (i + 1 >= table_.size()) {
      return table_.back() + integrate(h_ * static_cast<double>(table_.size() - 1), p, 8);
    }
    return table_[i] + integrate(h_ * static_cast<double>(i), p, 1);
  }

  double sup() const { return table_.back(); }

  /// p >= 0 with G_K(p) = y.
  double inverse(double y) const {
    if (y <= 0) return 0.0;
    if (y > table_.back()) {
      throw Error(ErrorKind::non_invertible, "G_K does not reach " + std::to_string(y) + " (sup of table " +
                                                 std::to_string(table_.back()) + ")");
    }
    const auto it = std::lower_bound(table_.begin(), table_.end(), y);
    const auto i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - table_.begin()));
    double lo = h_ * static_cast<double>(i - 1), hi = h_ * static_cast<double>(i);
    double p = 0.5 * (lo + hi);
    for (int k = 0; k < 100; ++k) {
      const double r = (*this)(p) - y;
      if (r == 0) return p;
      (r < 0 ? lo : hi) = p;
      const double d = p * K_.K_prime(p);
      double next = d > 0 ? p - r / d : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - p) <= 1e-16 * std::max(1.0, p) || hi - lo <= 1e-16 * std::max(1.0, hi)) {
        return next;
      }
      p = next;
    }
    return p;
  }

  const FluxMap& flux() const { return K_; }

 private:
  double integrate(double a, double b, int panels) const {
    return numeric::gauss_legendre([this](double q) { return q * K_.K_prime(q); }, a, b, panels);
  }

  FluxMap K_;
  double h_ = 1.0;
  std::vector<double> table_;
};

/// The pair (F, time map) for u'' = f(u) (DOUBLE) or d/dt K(u') = f(u)
/// (SINGLE).
struct FirstIntegral {
  ScalarFn f;
  std::string f_name;
  Convention convention = Convention::double_;
  std::optional<FluxMap> K;
  double rho_max = 1.0;
  std::vector<double> F;         // on the rho grid
  std::vector<double> time_map;  // empty until built
  std::shared_ptr<const FluxEnergy> energy;
  // first-cell model f ~ f_base + f_sign * f_law(rho); f_sign = 0 means
  // plain quadrature
  double f_base = 0.0;
  double f_sign = 0.0;
  numeric::PowerLaw f_law;
  numeric::PowerLaw iota_law;  // first-cell model of the time-map integrand

  std::size_t size() const { return F.size(); }
  double step() const { return rho_max / static_cast<double>(F.size() - 1); }
  double node(std::size_t i) const { return i + 1 == F.size() ? rho_max : step() * static_cast<double>(i); }
  double factor() const { return convention == Convention::double_ ? 2.0 : 1.0; }
  bool has_time_map() const { return !time_map.empty(); }

  std::size_t cell_of(double rho) const {
    const auto i = static_cast<std::size_t>(std::max(0.0, rho / step()));
    return std::min(i, F.size() - 2);
  }

  /// F at any rho in [0, rho_max], with an exact partial-cell integral.
  double F_at(double rho) const {
    if (rho < 0 || rho > rho_max * (1 + 1e-12)) {
      throw Error(ErrorKind::domain_mismatch, "rho=" + std::to_string(rho) + " outside [0, rho_max]");
    }
    if (rho == 0) return 0.0;
    const std::size_t i = cell_of(rho);
    if (i == 0 && f_sign != 0) {
      return factor() * (f_base * rho + f_sign * f_law.integral_from_zero(rho));
    }
    const double a = node(i);
    return F[i] + factor() * numeric::gauss_legendre(f, a, rho, detail::panels_for_cell(i));
  }

  /// Time-map integrand 1/sqrt(F) or 1/G_K^{-1}(F).
  double iota(double rho) const {
    const double Fv = F_at(rho);
    if (!(Fv > 0)) {
      throw Error(ErrorKind::nonpositive_F, "F(" + std::to_string(rho) + ") = " + std::to_string(Fv));
    }
    if (convention == Convention::double_) return 1.0 / std::sqrt(Fv);
    return 1.0 / energy->inverse(Fv);
  }

  double time_at(double rho) const {
    if (!has_time_map()) {
      throw Error(ErrorKind::invalid_argument, "time map not built");
    }
    if (rho <= 0) return 0.0;
    const std::size_t i = cell_of(rho);
    if (i == 0) return iota_law.integral_from_zero(rho);
    return time_map[i] + numeric::gauss_legendre([this](double r) { return iota(r); }, node(i), rho,
                                                 detail::panels_for_cell(i));
  }

  /// u' as a function of u along the reconstructed solution.
  double velocity_at(double rho) const {
    const double Fv = F_at(rho);
    if (Fv <= 0) return 0.0;
    return convention == Convention::double_ ? std::sqrt(Fv) : energy->inverse(Fv);
  }
};

/// Tabulates F(rho) = factor * int_0^rho f on a uniform grid.
inline FirstIntegral build_first_integral(ScalarFn f, double rho_max, Convention convention,
                                          std::optional<FluxMap> K = std::nullopt,
                                          std::size_t n = kFirstIntegralNodes, std::string f_name = "") {
  if (!(rho_max > 0) || n < 10) {
    throw Error(ErrorKind::invalid_argument, "need rho_max > 0 and at least 10 nodes");
  }
  FirstIntegral fi;
  fi.f = std::move(f);
  fi.f_name = std::move(f_name);
  fi.convention = convention;
  fi.K = std::move(K);
  fi.rho_max = rho_max;
  fi.F.assign(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const double v = fi.f(fi.node(i));
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::non_finite, "f(" + std::to_string(fi.node(i)) + ") is not finite");
    }
  }
  const double h = fi.step();
  const double f0 = fi.f(0.0);
  fi.f_base = std::isfinite(f0) ? f0 : 0.0;
  std::vector<double> xs, ds;
  for (int k = 1; k <= 8; ++k) {
    xs.push_back(h * k);
    ds.push_back(fi.f(h * k) - fi.f_base);
  }
  const bool flat = std::all_of(ds.begin(), ds.end(), [](double d) { return d == 0.0; });
  const bool up = std::all_of(ds.begin(), ds.end(), [](double d) { return d > 0.0; });
  const bool down = std::all_of(ds.begin(), ds.end(), [](double d) { return d < 0.0; });
  if (flat) {
    fi.f_sign = 1.0;
    fi.f_law = {0.0, 1.0};
  } else if (up || down) {
    for (double& d : ds) d = std::abs(d);
    fi.f_sign = up ? 1.0 : -1.0;
    fi.f_law = numeric::fit_power_law(xs, ds);
    if (!(fi.f_law.exponent > -1.0)) {
      throw Error(ErrorKind::non_finite, "f is not integrable at the origin");
    }
  }
  if (fi.f_sign != 0) {
    fi.F[1] = fi.factor() * (fi.f_base * h + fi.f_sign * fi.f_law.integral_from_zero(h));
  } else {
    fi.F[1] = fi.factor() * numeric::gauss_legendre(fi.f, 0.0, h, 8);
  }
  for (std::size_t i = 2; i < n; ++i) {
    fi.F[i] = fi.F[i - 1] + fi.factor() * numeric::gauss_legendre(fi.f, fi.node(i - 1), fi.node(i),
                                                                   detail::panels_for_cell(i - 1));
  }
  return fi;
}

/// Adds the time map G (DOUBLE) or H (SINGLE with K).
inline FirstIntegral build_time_map(FirstIntegral fi) {
  if (fi.convention == Convention::double_ && fi.K) {
    throw Error(ErrorKind::convention_mismatch, "a flux map belongs to the SINGLE convention");
  }
  if (fi.convention == Convention::single && !fi.K) {
    throw Error(ErrorKind::convention_mismatch, "the SINGLE convention needs a flux map K");
  }
  const std::size_t n = fi.size();
  for (std::size_t i = 1; i < n; ++i) {
    if (!(fi.F[i] > 0)) {
      throw Error(ErrorKind::nonpositive_F, "F(" + std::to_string(fi.node(i)) + ") = " + std::to_string(fi.F[i]));
    }
  }
  if (fi.convention == Convention::single) {
    fi.energy = std::make_shared<FluxEnergy>(*fi.K, fi.F.back());
    if (fi.energy->sup() < fi.F.back()) {
      throw Error(ErrorKind::non_invertible,
                  "G_K is bounded by " + std::to_string(fi.energy->sup()) + " below max F = " +
                      std::to_string(fi.F.back()));
    }
  }
  fi.time_map.assign(n, 0.0);
  const auto iota = [&fi](double r) { return fi.iota(r); };
  fi.time_map[1] = detail::first_cell_integral(iota, fi.step(), &fi.iota_law);
  for (std::size_t i = 2; i < n; ++i) {
    fi.time_map[i] =
        fi.time_map[i - 1] + numeric::gauss_legendre(iota, fi.node(i - 1), fi.node(i), detail::panels_for_cell(i - 1));
    if (!(fi.time_map[i] > fi.time_map[i - 1])) {
      throw Error(ErrorKind::non_invertible, "time map is not increasing at rho=" + std::to_string(fi.node(i)));
    }
  }
  return fi;
}

/// u(t) = T^{-1}(t) for the time map T, sampled on [0, t_max].
inline SampledFunction reconstruct_solution(const FirstIntegral& fi, double t_max,
                                            std::size_t n = kFirstIntegralNodes) {
  if (!fi.has_time_map()) {
    throw Error(ErrorKind::invalid_argument, "time map not built");
  }
  if (!(t_max > 0) || t_max > fi.time_map.back()) {
    throw Error(ErrorKind::time_map_range, "t_max=" + std::to_string(t_max) + " beyond the time map range [0, " +
                                               std::to_string(fi.time_map.back()) + "]");
  }
  auto shared = std::make_shared<const FirstIntegral>(fi);
  auto invert = [shared](double t) {
    const FirstIntegral& g = *shared;
    if (t <= 0) return 0.0;
    const auto it = std::lower_bound(g.time_map.begin(), g.time_map.end(), t);
    const auto i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - g.time_map.begin()));
    if (i == 1) {
      // first cell: T = C r^(p+1) / (p+1) inverts in closed form
      const auto& law = g.iota_law;
      return std::pow(t * (law.exponent + 1) / law.coefficient, 1.0 / (law.exponent + 1));
    }
    double lo = g.node(i - 1), hi = g.node(std::min(i, g.size() - 1));
    // linear guess inside the cell, then safeguarded Newton
    const double t0 = g.time_map[i - 1], t1 = g.time_map[std::min(i, g.size() - 1)];
    double r = t1 > t0 ? lo + (hi - lo) * (t - t0) / (t1 - t0) : 0.5 * (lo + hi);
    for (int k = 0; k < 60; ++k) {
      const double res = g.time_at(r) - t;
      if (res == 0) break;
      (res < 0 ? lo : hi) = r;
      double next = r - res / g.iota(r);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - r) <= 4e-16 * std::max(1.0, r)) {
        r = next;
        break;
      }
      r = next;
    }
    return r;
  };
  auto jet = [shared, invert](double t) {
    const double u = invert(t);
    const FirstIntegral& g = *shared;
    const double du = g.velocity_at(u);
    double ddu = g.f(u);
    if (g.convention == Convention::single) {
      ddu /= g.K->K_prime(du);
    }
    return Jet{u, du, ddu};
  };
  return SampledFunction::from_jet(0.0, t_max, n, jet);
}

/// Builds F and the time map on a rho range large enough to reach t_max.
inline FirstIntegral first_integral_for(ScalarFn f, Convention convention, std::optional<FluxMap> K, double t_max,
                                        std::string f_name = "", std::size_t n = kFirstIntegralNodes) {
  double rho_max = 1.0 / 64;
  for (int i = 0; i < 70; ++i) {
    FirstIntegral fi = build_time_map(build_first_integral(f, rho_max, convention, K, n, f_name));
    if (fi.time_map.back() >= t_max) {
      return fi;
    }
    rho_max *= 2;
  }
  throw Error(ErrorKind::time_map_range, "time map stays below t_max=" + std::to_string(t_max));
}

struct UniquenessOptions {
  double tolerance = 1e-6;
  double residual_tolerance = 1e-4;
  double first_integral_tolerance = 1e-6;
  double boundary_tolerance = 1e-8;
};

struct UniquenessReport {
  Verdict verdict;
  double ode_residual_u = 0.0;
  double ode_residual_w = 0.0;
  double first_integral_residual_u = 0.0;
  double first_integral_residual_w = 0.0;
  bool u_conserves = true;
  bool w_conserves = true;
  bool boundary_match = true;
  bool positive_derivative = true;  // on (0, T/2), beyond two cells
};

namespace detail {

// sup |u'(t) - u'(0) - int_0^t f(u)| (or with K(u') in place of u')
inline double ode_residual(const SampledFunction& u, const FirstIntegral& fi) {
  const JetSampler j(u);
  auto flux = [&](double p) { return fi.K ? fi.K->K(p) : p; };
  const double m0 = flux(j.at_node(0).d1);
  double integral = 0.0, worst = 0.0, prev = fi.f(u[0]);
  for (std::size_t i = 1; i < u.size(); ++i) {
    const double cur = fi.f(u[i]);
    integral += 0.5 * u.step() * (prev + cur);
    prev = cur;
    worst = std::max(worst, std::abs(flux(j.at_node(i).d1) - m0 - integral));
  }
  return worst;
}

inline double first_integral_residual(const SampledFunction& u, const FirstIntegral& fi) {
  const JetSampler j(u);
  std::optional<FluxEnergy> local;
  const FluxEnergy* energy = fi.energy.get();
  if (fi.convention == Convention::single && !energy) {
    local.emplace(*fi.K, fi.F.back());
    energy = &*local;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double rho = u[i];
    if (rho < 0 || rho > fi.rho_max) {
      return std::numeric_limits<double>::infinity();
    }
    const double p = j.at_node(i).d1;
    const double lhs = fi.convention == Convention::double_ ? p * p : (*energy)(std::abs(p));
    worst = std::max(worst, std::abs(lhs - fi.F_at(rho)));
  }
  return worst;
}

}  // namespace detail

/// Compares two candidate solutions of the same initial-value problem.
inline UniquenessReport verify_uniqueness_pair(const SampledFunction& u, const SampledFunction& w,
                                               const FirstIntegral& fi, const UniquenessOptions& opt = {}) {
  if (fi.convention == Convention::single && !fi.K) {
    throw Error(ErrorKind::convention_mismatch, "the SINGLE convention needs a flux map K");
  }
  UniquenessReport r;
  r.ode_residual_u = detail::ode_residual(u, fi);
  r.ode_residual_w = detail::ode_residual(w, fi);
  for (auto [name, res] : {std::pair{"u", r.ode_residual_u}, std::pair{"w", r.ode_residual_w}}) {
    if (res > opt.residual_tolerance) {
      throw Error(ErrorKind::residual_too_large, std::string(name) + " misses the equation by " +
                                                     std::to_string(res));
    }
  }
  r.verdict = assert_coincidence(u, w, opt.tolerance);
  r.first_integral_residual_u = detail::first_integral_residual(u, fi);
  r.first_integral_residual_w = detail::first_integral_residual(w, fi);
  r.u_conserves = r.first_integral_residual_u <= opt.first_integral_tolerance;
  r.w_conserves = r.first_integral_residual_w <= opt.first_integral_tolerance;
  const JetSampler ju(u), jw(w);
  r.boundary_match = std::abs(u[0]) <= opt.boundary_tolerance && std::abs(w[0]) <= opt.boundary_tolerance &&
                     std::abs(ju.at_node(0).d1 - jw.at_node(0).d1) <= opt.boundary_tolerance;
  for (std::size_t i = 3; u.node(i) < u.start() + 0.5 * u.length(); ++i) {
    r.positive_derivative = r.positive_derivative && ju.at_node(i).d1 > 0;
  }
  return r;
}

}  // namespace hopfsym
