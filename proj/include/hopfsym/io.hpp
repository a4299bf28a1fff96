#pragma once

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hopfsym/curve_conditions.hpp"
#include "hopfsym/error.hpp"
#include "hopfsym/first_integral.hpp"
#include "hopfsym/gallery.hpp"
#include "hopfsym/hopf_lemmas.hpp"
#include "hopfsym/moving_plane.hpp"
#include "hopfsym/planar_curve.hpp"
#include "hopfsym/sampled_function.hpp"

namespace hopfsym::io {

using json = nlohmann::ordered_json;

/// Finite numbers as-is, infinities and NaN as null.
inline json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::io, "cannot open " + path.string() + ": " + std::strerror(errno));
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes through a temporary file in the same directory and renames it.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorKind::io, "cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot write " + tmp.string() + ": " + std::strerror(errno));
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::io, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::io, "cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

namespace detail {

inline std::vector<std::vector<double>> parse_csv_rows(const std::string& text, const std::string& what) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(cells, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (rows.empty()) continue;  // header
      throw Error(ErrorKind::io, what + ": line " + std::to_string(lineno) + " is not numeric");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

// ---- sampled functions -------------------------------------------------

/// Columns t, value, d1, d2 with 17 significant digits.
inline std::string function_csv(const SampledFunction& f) {
  const auto d1 = derivative_profile(f, 1);
  const auto d2 = derivative_profile(f, 2);
  std::string out = "t,value,d1,d2\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    out += fmt17(f.node(i)) + "," + fmt17(f[i]) + "," + fmt17(d1[i]) + "," + fmt17(d2[i]) + "\n";
  }
  return out;
}

inline SampledFunction function_from_csv(const std::string& text, const std::string& what = "function csv") {
  const auto rows = detail::parse_csv_rows(text, what);
  if (rows.size() < 2) throw Error(ErrorKind::too_few_samples, what + ": needs at least two rows");
  std::vector<double> values;
  values.reserve(rows.size());
  for (const auto& r : rows) {
    if (r.size() < 2) throw Error(ErrorKind::io, what + ": each row needs t and value");
    values.push_back(r[1]);
  }
  const double a = rows.front()[0], b = rows.back()[0];
  const double h = (b - a) / static_cast<double>(rows.size() - 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (std::abs(rows[i][0] - (a + h * static_cast<double>(i))) > 1e-9 * std::max(1.0, std::abs(b - a))) {
      throw Error(ErrorKind::invalid_argument, what + ": grid is not uniform at row " + std::to_string(i));
    }
  }
  return SampledFunction(a, b, std::move(values));
}

inline json function_json(const SampledFunction& f) {
  json values = json::array();
  for (double v : f.values()) values.push_back(v);
  return json{{"domain", {f.start(), f.end()}}, {"n", f.size()}, {"values", std::move(values)}};
}

inline SampledFunction function_from_json(const json& j) {
  try {
    const auto& d = j.at("domain");
    auto values = j.at("values").get<std::vector<double>>();
    if (j.contains("n") && j.at("n").get<std::size_t>() != values.size()) {
      throw Error(ErrorKind::invalid_argument, "function json: n does not match the number of values");
    }
    return SampledFunction(d.at(0).get<double>(), d.at(1).get<double>(), std::move(values));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::io, std::string("function json: ") + e.what());
  }
}

inline SampledFunction load_function(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  if (path.extension() == ".json") {
    try {
      return function_from_json(json::parse(text));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::io, path.string() + ": " + e.what());
    }
  }
  return function_from_csv(text, path.string());
}

// ---- curves -------------------------------------------------------------

inline std::string curve_csv(const PlanarCurve& c) {
  std::string out = "x1,x2\n";
  for (const auto& p : c.points()) out += fmt17(p.x) + "," + fmt17(p.y) + "\n";
  return out;
}

/// Columns x1, x2 and an optional curvature column; closed implicitly.
inline PlanarCurve curve_from_csv(const std::string& text, const std::string& what = "curve csv") {
  const auto rows = detail::parse_csv_rows(text, what);
  std::vector<Point> pts;
  std::vector<double> kappa;
  for (const auto& r : rows) {
    if (r.size() < 2) throw Error(ErrorKind::io, what + ": each row needs x1 and x2");
    pts.push_back({r[0], r[1]});
    if (r.size() >= 3) kappa.push_back(r[2]);
  }
  if (!kappa.empty() && kappa.size() != pts.size()) {
    throw Error(ErrorKind::io, what + ": curvature column is incomplete");
  }
  return PlanarCurve(std::move(pts), std::move(kappa));
}

inline json curve_json(const PlanarCurve& c) {
  json pts = json::array();
  for (const auto& p : c.points()) pts.push_back({p.x, p.y});
  return json{{"points", std::move(pts)}, {"orientation", c.counterclockwise() ? "CCW" : "CW"}};
}

inline PlanarCurve curve_from_json(const json& j) {
  try {
    std::vector<Point> pts;
    for (const auto& p : j.at("points")) pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    return PlanarCurve(std::move(pts));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::io, std::string("curve json: ") + e.what());
  }
}

inline PlanarCurve load_curve(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  if (path.extension() == ".json") {
    try {
      return curve_from_json(json::parse(text));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::io, path.string() + ": " + e.what());
    }
  }
  return curve_from_csv(text, path.string());
}

// ---- reports ------------------------------------------------------------

inline json point_json(const Point& p) { return json::array({num(p.x), num(p.y)}); }

inline json verdict_json(const Verdict& v) {
  return json{{"pass", v.pass}, {"max_deviation", num(v.max_deviation)}, {"witness", num(v.witness)},
              {"tolerance", num(v.tolerance)}};
}

inline json witness_json(const HypothesisWitness& w) {
  return json{{"t", num(w.t)}, {"s", num(w.s)}, {"lhs", num(w.lhs)}, {"rhs", num(w.rhs)}};
}

inline json hypothesis_json(const HypothesisReport& r) {
  json v = json::array();
  for (const auto& w : r.violations) v.push_back(witness_json(w));
  return json{{"form", form_name(r.form)},
              {"holds", r.holds},
              {"margin", num(r.margin)},
              {"matched_pairs", r.matched_pairs},
              {"violation_count", r.violation_count},
              {"violations", std::move(v)},
              {"tightest", r.tightest ? witness_json(*r.tightest) : json(nullptr)},
              {"tolerance", num(r.tolerance)},
              {"grid_n", r.grid_n}};
}

inline json pair_witness_json(const PairWitness& w) {
  return json{{"a", point_json(w.a)},
              {"b", point_json(w.b)},
              {"value_a", num(w.value_a)},
              {"value_b", num(w.value_b)},
              {"slack", num(w.slack)}};
}

inline json condition_json(const ConditionReport& r) {
  json v = json::array();
  for (const auto& w : r.violations) v.push_back(pair_witness_json(w));
  json s = json::array();
  for (const auto& w : r.strict_pairs) s.push_back(pair_witness_json(w));
  return json{{"holds", r.holds},
              {"margin", num(r.margin)},
              {"violation_count", r.violation_count},
              {"violations", std::move(v)},
              {"pairs_tested", r.pairs_tested},
              {"strict_count", r.strict_count},
              {"strict_pairs", std::move(s)},
              {"max_gap", num(r.max_gap)},
              {"lines_tested", r.lines_tested},
              {"lines_skipped", r.lines_skipped},
              {"tolerance", num(r.tolerance)},
              {"strict_threshold", num(r.strict_threshold)}};
}

inline json embedded_json(const EmbeddedReport& r) {
  json j{{"embedded", r.embedded}};
  if (r.witness) j["segments"] = {r.witness->first, r.witness->second};
  if (r.crossing) j["crossing"] = point_json(*r.crossing);
  return j;
}

inline json polylines_json(const std::vector<Polyline>& arcs) {
  json out = json::array();
  for (const auto& a : arcs) {
    json pts = json::array();
    for (const auto& p : a) pts.push_back(point_json(p));
    out.push_back(std::move(pts));
  }
  return out;
}

inline json sweep_json(const SweepResult& r, bool include_arc = false) {
  json tp = json::array();
  for (const auto& p : r.touch_points) tp.push_back(point_json(p));
  json j{{"axis", axis_name(r.axis)},
         {"lambda0", num(r.lambda0)},
         {"case", touch_case_name(r.touch)},
         {"touch_count", r.touch_count},
         {"touch_points", std::move(tp)},
         {"containment_margin", num(r.containment_margin)},
         {"tolerance", num(r.tolerance)},
         {"grid_step", num(r.grid_step)},
         {"angle_tolerance", num(r.angle_tolerance)},
         {"condition_s", r.condition_s}};
  std::size_t n = 0;
  for (const auto& a : r.reflected_arc) n += a.size();
  j["reflected_arc_vertices"] = n;
  if (include_arc) j["reflected_arc"] = polylines_json(r.reflected_arc);
  return j;
}

inline json symmetry_json(const SymmetryVerdict& s) {
  return json{{"axis", axis_name(s.axis)}, {"level", num(s.level)}, {"deviation", num(s.deviation)},
              {"verdict", verdict_json(s.verdict)}};
}

inline json plateau_json(const PlateauRecord& r) {
  json iv = json::array();
  for (const auto& [a, b] : r.intervals) iv.push_back({num(a), num(b)});
  return json{{"side", r.side}, {"level", num(r.level)}, {"tolerance", num(r.tolerance)}, {"intervals", iv}};
}

inline json bump_claim_json(const gallery::BumpClaimReport& r) {
  return json{{"epsilon", num(r.epsilon)},
              {"n_grid", r.n_grid},
              {"holds", r.hypothesis.holds},
              {"min_margin", num(r.min_margin)},
              {"fitted_C", num(r.fitted_C)},
              {"rhs_bound_min", num(r.rhs_bound_min)},
              {"rhs_bound_holds", r.rhs_bound_holds},
              {"smallest_t", num(r.smallest_t)},
              {"ratio_at_smallest_t", num(r.ratio_at_smallest_t)},
              {"ratio_check", r.ratio_check},
              {"validated_range", r.validated_range},
              {"hypothesis", hypothesis_json(r.hypothesis)}};
}

inline json scan_json(const gallery::EpsilonScan& s) {
  json rows = json::array();
  for (std::size_t i = 0; i < s.epsilons.size(); ++i) {
    rows.push_back({{"epsilon", num(s.epsilons[i])}, {"holds", static_cast<bool>(s.holds[i])},
                    {"min_margin", num(s.min_margins[i])}});
  }
  json ratios = json::array();
  for (double r : s.margin_ratios) ratios.push_back(num(r));
  return json{{"rows", std::move(rows)}, {"margin_ratios", std::move(ratios)},
              {"largest_validated", num(s.largest_validated)}};
}

inline json first_integral_json(const FirstIntegral& fi, std::size_t stride = 1) {
  json rho = json::array(), F = json::array(), T = json::array();
  for (std::size_t i = 0; i < fi.size(); i += stride) {
    rho.push_back(num(fi.node(i)));
    F.push_back(num(fi.F[i]));
    if (fi.has_time_map()) T.push_back(num(fi.time_map[i]));
  }
  return json{{"f", fi.f_name},
              {"convention", convention_name(fi.convention)},
              {"K", fi.K ? json(fi.K->name) : json(nullptr)},
              {"rho_max", num(fi.rho_max)},
              {"n", fi.size()},
              {"stride", stride},
              {"rho", std::move(rho)},
              {"F", std::move(F)},
              {"time_map", std::move(T)}};
}

inline json uniqueness_json(const UniquenessReport& r) {
  return json{{"verdict", verdict_json(r.verdict)},
              {"ode_residual_u", num(r.ode_residual_u)},
              {"ode_residual_w", num(r.ode_residual_w)},
              {"first_integral_residual_u", num(r.first_integral_residual_u)},
              {"first_integral_residual_w", num(r.first_integral_residual_w)},
              {"u_conserves", r.u_conserves},
              {"w_conserves", r.w_conserves},
              {"boundary_match", r.boundary_match},
              {"positive_derivative", r.positive_derivative}};
}

inline json instance_json(const gallery::GalleryInstance& g) {
  json fns = json::array();
  for (const auto& nf : g.functions) {
    fns.push_back({{"name", nf.name}, {"domain", {nf.f.start(), nf.f.end()}}, {"n", nf.f.size()}});
  }
  json params = json::object();
  for (const auto& [k, v] : g.parameters) params[k] = num(v);
  json j{{"name", g.name}, {"description", g.description}, {"functions", std::move(fns)},
         {"parameters", std::move(params)}, {"checks", g.checks}};
  if (g.curve) j["curve"] = {{"vertices", g.curve->size()}, {"orientation", g.curve->counterclockwise() ? "CCW" : "CW"}};
  return j;
}

// ---- SVG ------------------------------------------------------------------

struct SvgLayer {
  std::vector<Polyline> lines;
  std::string stroke = "#1f4e9c";
  double width = 1.5;
  bool closed = false;
  std::vector<Point> markers;
};

/// Static figure with y pointing up; at most `max_points` vertices per line.
inline std::string svg(const std::vector<SvgLayer>& layers, double size = 640, std::size_t max_points = 4000) {
  double x0 = INFINITY, y0 = INFINITY, x1 = -INFINITY, y1 = -INFINITY;
  auto grow = [&](const Point& p) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  };
  for (const auto& l : layers) {
    for (const auto& pl : l.lines) for (const auto& p : pl) grow(p);
    for (const auto& p : l.markers) grow(p);
  }
  if (!(x1 >= x0)) {
    x0 = y0 = 0;
    x1 = y1 = 1;
  }
  const double span = std::max({x1 - x0, y1 - y0, 1e-12});
  const double pad = 0.05 * span;
  const double scale = size / (span + 2 * pad);
  const double w = (x1 - x0 + 2 * pad) * scale, h = (y1 - y0 + 2 * pad) * scale;
  auto X = [&](double x) { return (x - x0 + pad) * scale; };
  auto Y = [&](double y) { return (y1 + pad - y) * scale; };
  char buf[128];
  std::string out;
  std::snprintf(buf, sizeof buf, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.1f\" height=\"%.1f\">\n", w, h);
  out += buf;
  for (const auto& l : layers) {
    for (const auto& pl : l.lines) {
      if (pl.empty()) continue;
      const std::size_t stride = std::max<std::size_t>(1, pl.size() / max_points);
      out += "<path fill=\"none\" stroke=\"" + l.stroke + "\" stroke-width=\"" + fmt17(l.width) + "\" d=\"";
      for (std::size_t i = 0; i < pl.size(); i += stride) {
        std::snprintf(buf, sizeof buf, "%s%.3f %.3f ", i == 0 ? "M" : "L", X(pl[i].x), Y(pl[i].y));
        out += buf;
      }
      std::snprintf(buf, sizeof buf, "L%.3f %.3f", X(pl.back().x), Y(pl.back().y));
      out += buf;
      if (l.closed) out += " Z";
      out += "\"/>\n";
    }
    for (const auto& p : l.markers) {
      std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"3\" fill=\"", X(p.x), Y(p.y));
      out += buf + l.stroke + "\"/>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

inline Polyline graph_polyline(const SampledFunction& f) {
  Polyline p;
  p.reserve(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) p.push_back({f.node(i), f[i]});
  return p;
}

inline std::string curve_svg(const PlanarCurve& c) {
  Polyline p(c.points().begin(), c.points().end());
  return svg({SvgLayer{{p}, "#1f4e9c", 1.5, true, {}}});
}

/// Curve, reflected arc at lambda0 and touch markers.
inline std::string sweep_svg(const PlanarCurve& c, const SweepResult& r) {
  Polyline p(c.points().begin(), c.points().end());
  return svg({SvgLayer{{p}, "#1f4e9c", 1.5, true, {}}, SvgLayer{r.reflected_arc, "#c0392b", 1.0, false, {}},
              SvgLayer{{}, "#27ae60", 1.0, false, r.touch_points}});
}

inline std::string functions_svg(const std::vector<gallery::NamedFunction>& fns) {
  static const char* colors[] = {"#1f4e9c", "#c0392b", "#27ae60", "#8e44ad"};
  std::vector<SvgLayer> layers;
  for (std::size_t i = 0; i < fns.size(); ++i) {
    layers.push_back(SvgLayer{{graph_polyline(fns[i].f)}, colors[i % 4], 1.5, false, {}});
  }
  return svg(layers);
}

}  // namespace hopfsym::io
