#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hopfsym/error.hpp"
#include "hopfsym/sampled_function.hpp"

namespace hopfsym {

using ScalarFn = std::function<double(double)>;

/// Monotone flux K with K' > 0, as used in d/dt K(u') = f(u).
struct FluxMap {
  std::string name = "identity";
  ScalarFn K = [](double p) { return p; };
  ScalarFn K_prime = [](double) { return 1.0; };
  bool K_prime_even = true;

  static FluxMap identity() { return {}; }
  static FluxMap cubic(double a) {
    FluxMap m;
    m.name = "cubic:" + std::to_string(a);
    m.K = [a](double p) { return p + a * p * p * p; };
    m.K_prime = [a](double p) { return 1.0 + 3.0 * a * p * p; };
    return m;
  }
  /// p / sqrt(1 + p^2), the graph curvature flux.
  static FluxMap curvature() {
    FluxMap m;
    m.name = "curvature";
    m.K = [](double p) { return p / std::sqrt(1.0 + p * p); };
    m.K_prime = [](double p) { return std::pow(1.0 + p * p, -1.5); };
    return m;
  }

  /// Solves K(p) = m by bracketing and bisection.
  double inverse(double m) const {
    double lo = -1.0, hi = 1.0;
    for (int i = 0; i < 200 && K(lo) > m; ++i) lo *= 2;
    for (int i = 0; i < 200 && K(hi) < m; ++i) hi *= 2;
    if (K(lo) > m || K(hi) < m) {
      throw Error(ErrorKind::non_invertible, "flux value " + std::to_string(m) + " outside the range of K");
    }
    for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++i) {
      const double mid = 0.5 * (lo + hi);
      (K(mid) < m ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }
};

struct OdeTrajectory {
  SampledFunction u;
  SampledFunction du;
};

/// Classic RK4 for u'' = f(u), or d/dt K(u') = f(u) when a flux is given
/// (state (u, K(u')) in that case).  The step is shrunk so that it divides
/// the span exactly.
inline OdeTrajectory integrate_ode_trajectory(const ScalarFn& f, double u0, double du0, double t0, double t1,
                                              double step, const std::optional<FluxMap>& K = std::nullopt) {
  if (!(step > 0) || !(t1 > t0)) {
    throw Error(ErrorKind::invalid_argument, "integration needs step > 0 and t1 > t0");
  }
  const auto n = static_cast<std::size_t>(std::ceil((t1 - t0) / step - 1e-9));
  const double h = (t1 - t0) / static_cast<double>(n);
  auto velocity = [&](double y) { return K ? K->inverse(y) : y; };
  auto rhs = [&](const std::array<double, 2>& s) { return std::array<double, 2>{velocity(s[1]), f(s[0])}; };
  std::array<double, 2> s{u0, K ? K->K(du0) : du0};
  std::vector<double> us(n + 1), dus(n + 1);
  us[0] = u0;
  dus[0] = du0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto k1 = rhs(s);
    const auto k2 = rhs({s[0] + 0.5 * h * k1[0], s[1] + 0.5 * h * k1[1]});
    const auto k3 = rhs({s[0] + 0.5 * h * k2[0], s[1] + 0.5 * h * k2[1]});
    const auto k4 = rhs({s[0] + h * k3[0], s[1] + h * k3[1]});
    for (std::size_t j = 0; j < 2; ++j) {
      s[j] += h / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    }
    us[i + 1] = s[0];
    dus[i + 1] = velocity(s[1]);
    if (!std::isfinite(s[0]) || !std::isfinite(dus[i + 1]) || std::abs(s[0]) > 1e12 || std::abs(dus[i + 1]) > 1e12) {
      throw Error(ErrorKind::blow_up, "trajectory left |u|, |u'| <= 1e12 near t=" +
                                          std::to_string(t0 + h * static_cast<double>(i + 1)));
    }
  }
  return {SampledFunction(t0, t1, std::move(us)), SampledFunction(t0, t1, std::move(dus))};
}

inline SampledFunction integrate_ode_oracle(const ScalarFn& f, double u0, double du0, double t0, double t1,
                                            double step, const std::optional<FluxMap>& K = std::nullopt) {
  return integrate_ode_trajectory(f, u0, du0, t0, t1, step, K).u;
}

}  // namespace hopfsym
