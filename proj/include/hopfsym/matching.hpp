#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hopfsym/error.hpp"
#include "hopfsym/numeric.hpp"
#include "hopfsym/sampled_function.hpp"

namespace hopfsym {

using Interval = std::pair<double, double>;

struct MatchOptions {
  double tolerance = 1e-10;      // |u(t) - v(s)| bound, value units
  double width = 1e-12;          // bisection bracket width
  int max_iterations = 200;
  double slope_margin = 1e-9;    // minimum |v'| for a strictly monotone node
  std::size_t buffer_cells = 2;  // endpoint cells exempt from the slope test
  std::optional<Interval> t_range;
  std::optional<Interval> s_range;
};

/// A maximal monotone piece of a sampled function.
struct Branch {
  double start = 0.0;
  double end = 0.0;
  int direction = 0;  // +1 increasing, -1 decreasing
};

struct MatchPair {
  double t = 0.0;
  double s = 0.0;
  double gap = 0.0;  // s - t
};

struct MatchingMap {
  SampledFunction source;
  SampledFunction target;
  std::vector<MatchPair> pairs;
  double tolerance = 1e-10;
};

namespace detail {

inline double solve_on_branch(const SampledFunction& v, const Branch& b, double level, const MatchOptions& opt) {
  const double vlo = v.at(b.start);
  const double vhi = v.at(b.end);
  const double lo_val = std::min(vlo, vhi);
  const double hi_val = std::max(vlo, vhi);
  if (level < lo_val - opt.tolerance || level > hi_val + opt.tolerance) {
    throw Error(ErrorKind::level_out_of_range, "level " + std::to_string(level) + " outside [" +
                                                   std::to_string(lo_val) + ", " + std::to_string(hi_val) + "]");
  }
  if (level <= lo_val) {
    return b.direction > 0 ? b.start : b.end;
  }
  if (level >= hi_val) {
    return b.direction > 0 ? b.end : b.start;
  }
  auto g = [&](double s) { return b.direction * (v.at(s) - level); };
  const auto r = numeric::bisect(g, b.start, b.end, opt.width, opt.max_iterations);
  return r.x;
}

inline Interval clip_domain(const SampledFunction& f, const std::optional<Interval>& range) {
  if (!range) {
    return {f.start(), f.end()};
  }
  const double lo = std::max(f.start(), range->first);
  const double hi = std::min(f.end(), range->second);
  if (!(lo < hi)) {
    throw Error(ErrorKind::domain_mismatch, "requested range does not meet the function domain");
  }
  return {lo, hi};
}

}  // namespace detail

/// Splits `v` (restricted to `range`) into maximal monotone branches.  Nodes
/// whose slope is within the margin of zero join the neighbouring branch;
/// a branch ends at the extreme value between two opposite slopes.
inline std::vector<Branch> monotone_branches(const SampledFunction& v, const MatchOptions& opt = {},
                                             std::optional<Interval> range = std::nullopt) {
  const auto [lo, hi] = detail::clip_domain(v, range);
  const SampledFunction d = derivative_profile(v, 1);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double t = v.node(i);
    if (t > lo && t < hi) {
      idx.push_back(i);
    }
  }
  auto sign_at = [&](std::size_t i) {
    return d[i] > opt.slope_margin ? 1 : (d[i] < -opt.slope_margin ? -1 : 0);
  };

  std::vector<Branch> out;
  double branch_start = lo;
  int dir = 0;
  std::size_t last_signed = 0;
  bool have_signed = false;
  for (std::size_t i : idx) {
    const int s = sign_at(i);
    if (s == 0) {
      continue;
    }
    if (dir == 0) {
      dir = s;
    } else if (s != dir) {
      // extreme value between the last node of the old direction and i
      std::size_t best = have_signed ? last_signed : i;
      for (std::size_t k = best; k <= i; ++k) {
        if ((dir > 0 && v[k] > v[best]) || (dir < 0 && v[k] < v[best])) {
          best = k;
        }
      }
      out.push_back({branch_start, v.node(best), dir});
      branch_start = v.node(best);
      dir = s;
    }
    last_signed = i;
    have_signed = true;
  }
  if (dir != 0) {
    out.push_back({branch_start, hi, dir});
  }
  return out;
}

/// Finds s in `search` with v(s) = u(t) on a strictly monotone branch of v.
inline double match_level(const SampledFunction& u, const SampledFunction& v, double t, Interval search,
                          const MatchOptions& opt = {}) {
  const auto [lo, hi] = detail::clip_domain(v, search);
  const double level = u.at(t);
  const double vlo = v.at(lo);
  const double vhi = v.at(hi);
  const int direction = vhi > vlo ? 1 : (vhi < vlo ? -1 : 0);
  if (direction == 0) {
    throw Error(ErrorKind::non_monotone_branch, "target is constant on the search interval");
  }
  const SampledFunction d = derivative_profile(v, 1);
  const double buffer = static_cast<double>(opt.buffer_cells) * v.step();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double s = v.node(i);
    if (s <= lo + buffer || s >= hi - buffer) {
      continue;
    }
    if (direction * d[i] < opt.slope_margin) {
      throw Error(ErrorKind::non_monotone_branch,
                  "slope " + std::to_string(d[i]) + " at s=" + std::to_string(s) + " breaks monotonicity");
    }
  }
  const double s = detail::solve_on_branch(v, Branch{lo, hi, direction}, level, opt);
  if (std::abs(v.at(s) - level) > opt.tolerance) {
    throw Error(ErrorKind::level_out_of_range, "no match for level " + std::to_string(level));
  }
  return s;
}

/// Samples the level matching u(t) = v(s) at every grid node of u (within
/// the optional t range) whose level is attained by some monotone branch of v.
inline MatchingMap build_matching_map(const SampledFunction& u, const SampledFunction& v, const MatchOptions& opt = {}) {
  const auto [tlo, thi] = detail::clip_domain(u, opt.t_range);
  const auto branches = monotone_branches(v, opt, opt.s_range);
  MatchingMap map{u, v, {}, opt.tolerance};
  std::vector<std::pair<double, double>> ranges;
  for (const auto& b : branches) {
    const double a = v.at(b.start);
    const double c = v.at(b.end);
    ranges.emplace_back(std::min(a, c), std::max(a, c));
  }
  const double pad = 1e-12 * std::max(1.0, u.length());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double t = u.node(i);
    if (t < tlo - pad || t > thi + pad) {
      continue;
    }
    const double level = u[i];
    const std::size_t first = map.pairs.size();
    for (std::size_t b = 0; b < branches.size(); ++b) {
      // levels outside the attained range stay unmatched even if within tolerance
      if (level < ranges[b].first || level > ranges[b].second) {
        continue;
      }
      double s = 0.0;
      try {
        s = detail::solve_on_branch(v, branches[b], level, opt);
      } catch (const Error& e) {
        throw Error(e.kind(), std::string(e.what()) + " (at t=" + std::to_string(t) + ")");
      }
      if (std::abs(v.at(s) - level) > opt.tolerance) {
        throw Error(ErrorKind::level_out_of_range,
                    "unmatched level " + std::to_string(level) + " at t=" + std::to_string(t));
      }
      bool duplicate = false;
      for (std::size_t k = first; k < map.pairs.size(); ++k) {
        duplicate = duplicate || std::abs(map.pairs[k].s - s) < 1e-9;
      }
      if (!duplicate) {
        map.pairs.push_back({t, s, s - t});
      }
    }
  }
  return map;
}

}  // namespace hopfsym
