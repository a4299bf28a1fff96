#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hopfsym/error.hpp"
#include "hopfsym/numeric.hpp"

namespace hopfsym {

using JetFn = std::function<Jet(double)>;

/// Default grid density for generated functions.
inline constexpr std::size_t kSamplesPerUnit = 4096;

inline std::size_t default_samples(double length) {
  return static_cast<std::size_t>(std::llround(kSamplesPerUnit * length)) + 1;
}

/// A scalar function of one variable sampled on a uniform grid, optionally
/// backed by a closed form that produced the samples.
class SampledFunction {
 public:
  SampledFunction(double start, double end, std::vector<double> values)
      : start_(start), end_(end), values_(std::move(values)) {
    validate();
  }

  static SampledFunction from_jet(double start, double end, std::size_t n, JetFn jet) {
    std::vector<double> v(n);
    const double h = (end - start) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = jet(i + 1 == n ? end : start + h * static_cast<double>(i)).value;
    }
    SampledFunction f(start, end, std::move(v));
    f.analytic_ = std::move(jet);
    return f;
  }

  template <class F>
  static SampledFunction sample(double start, double end, std::size_t n, F&& fn) {
    std::vector<double> v(n);
    const double h = (end - start) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = fn(i + 1 == n ? end : start + h * static_cast<double>(i));
    }
    return SampledFunction(start, end, std::move(v));
  }

  double start() const { return start_; }
  double end() const { return end_; }
  double length() const { return end_ - start_; }
  std::size_t size() const { return values_.size(); }
  double step() const { return (end_ - start_) / static_cast<double>(values_.size() - 1); }
  double node(std::size_t i) const {
    return i + 1 == values_.size() ? end_ : start_ + step() * static_cast<double>(i);
  }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

  bool has_analytic() const { return static_cast<bool>(analytic_); }
  const JetFn& analytic() const { return analytic_; }

  /// Drops the closed form, keeping only the samples.
  SampledFunction samples_only() const { return SampledFunction(start_, end_, values_); }

  bool contains(double t, double slack = 0.0) const {
    const double pad = slack + 1e-12 * std::max(1.0, std::abs(length()));
    return t >= start_ - pad && t <= end_ + pad;
  }

  /// Value at an arbitrary point of the domain: closed form when present,
  /// linear interpolation otherwise.
  double at(double t) const {
    if (!contains(t)) {
      throw Error(ErrorKind::domain_mismatch,
                  "evaluation at " + std::to_string(t) + " outside [" + std::to_string(start_) + ", " +
                      std::to_string(end_) + "]");
    }
    if (analytic_) {
      return analytic_(std::clamp(t, start_, end_)).value;
    }
    return interpolate(t);
  }

  double interpolate(double t) const {
    const double x = (std::clamp(t, start_, end_) - start_) / step();
    const auto last = values_.size() - 1;
    auto i = static_cast<std::size_t>(std::floor(x));
    if (i >= last) {
      return values_[last];
    }
    const double w = x - static_cast<double>(i);
    return (1.0 - w) * values_[i] + w * values_[i + 1];
  }

  /// Index of the grid node nearest to t.
  std::size_t nearest_index(double t) const {
    const double x = std::round((std::clamp(t, start_, end_) - start_) / step());
    return std::min(values_.size() - 1, static_cast<std::size_t>(x));
  }

 private:
  void validate() const {
    if (!(start_ < end_)) {
      throw Error(ErrorKind::invalid_argument, "domain_start must be below domain_end");
    }
    if (values_.size() < 2) {
      throw Error(ErrorKind::too_few_samples, "a sampled function needs at least two samples");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i])) {
        throw Error(ErrorKind::non_finite, "sample " + std::to_string(i) + " is not finite");
      }
    }
  }

  double start_;
  double end_;
  std::vector<double> values_;
  JetFn analytic_;
};

enum class DerivativeMethod { automatic, finite_difference };

/// First or second derivative on the same grid.  Interior nodes use central
/// differences; endpoints use one-sided second-order stencils (three points
/// for the first derivative, four for the second).  With a closed form the
/// closed-form derivatives are sampled instead, unless finite differences are
/// requested explicitly.
inline SampledFunction derivative_profile(const SampledFunction& f, int order,
                                          DerivativeMethod method = DerivativeMethod::automatic) {
  if (order != 1 && order != 2) {
    throw Error(ErrorKind::invalid_argument, "derivative order must be 1 or 2");
  }
  const std::size_t n = f.size();
  if (f.has_analytic() && method == DerivativeMethod::automatic) {
    const JetFn& jet = f.analytic();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Jet j = jet(f.node(i));
      d[i] = order == 1 ? j.d1 : j.d2;
    }
    SampledFunction out(f.start(), f.end(), std::move(d));
    return out;
  }
  if ((order == 1 && n < 3) || (order == 2 && n < 5)) {
    throw Error(ErrorKind::too_few_samples,
                "order-" + std::to_string(order) + " profile needs more samples, got " + std::to_string(n));
  }
  const auto v = f.values();
  const double h = f.step();
  std::vector<double> d(n);
  if (order == 1) {
    for (std::size_t i = 1; i + 1 < n; ++i) {
      d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    }
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
  } else {
    const double h2 = h * h;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      d[i] = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / h2;
    }
    d[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / h2;
    d[n - 1] = (2.0 * v[n - 1] - 5.0 * v[n - 2] + 4.0 * v[n - 3] - v[n - 4]) / h2;
  }
  return SampledFunction(f.start(), f.end(), std::move(d));
}

/// Evaluates value, first and second derivative anywhere on the domain,
/// using the closed form if present and interpolated profiles otherwise.
class JetSampler {
 public:
  explicit JetSampler(const SampledFunction& f)
      : f_(&f), d1_(derivative_profile(f, 1)), d2_(derivative_profile(f, 2)) {}

  Jet operator()(double t) const {
    if (f_->has_analytic()) {
      return f_->analytic()(std::clamp(t, f_->start(), f_->end()));
    }
    return {f_->at(t), d1_.interpolate(t), d2_.interpolate(t)};
  }

  Jet at_node(std::size_t i) const {
    if (f_->has_analytic()) {
      return f_->analytic()(f_->node(i));
    }
    return {(*f_)[i], d1_[i], d2_[i]};
  }

  const SampledFunction& function() const { return *f_; }
  const SampledFunction& first() const { return d1_; }
  const SampledFunction& second() const { return d2_; }

 private:
  const SampledFunction* f_;
  SampledFunction d1_;
  SampledFunction d2_;
};

}  // namespace hopfsym
