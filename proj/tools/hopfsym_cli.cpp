#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hopfsym/acceptance.hpp"
#include "hopfsym/hopfsym.hpp"

namespace fs = std::filesystem;
using namespace hopfsym;
using io::json;

namespace {

constexpr const char* kVersion = "1.0.0";

struct RunConfig {
  std::string command;
  std::string out = "hopfsym-out";
  bool deterministic = false;
  bool csv = false;
  bool svg = false;
  // verify-lemma
  std::string lemma;
  std::string u, v;
  std::string form = "SECOND_DERIV";
  std::string order = "after";
  std::string expect = "pass";
  double tolerance = 1e-8;
  double max_shift = 1.0;
  // reconstruct
  std::string f;
  std::string convention = "double";
  std::string K;
  double t_max = 1.0;
  std::size_t n = kFirstIntegralNodes;
  // sweep
  std::string input;
  std::string axis = "x2";
  // gallery / counterexample
  std::string name;
  double epsilon = 0.1;
  std::size_t grid = kSamplesPerUnit;
  bool scan = false;
  // suite
  bool all = false;
  std::vector<int> criteria;
};

struct Outcome {
  bool pass = false;
  std::string summary;
  json result;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double parse_number(const std::string& s) {
  const auto slash = s.find('/');
  std::size_t used = 0;
  try {
    if (slash != std::string::npos) {
      const double a = std::stod(s.substr(0, slash), &used);
      const double b = std::stod(s.substr(slash + 1));
      return a / b;
    }
    const double x = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  return parts;
}

/// const:c, power:c:p (c rho^p) or poly:a0,a1,... (sum a_k rho^k).
ScalarFn parse_f(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "const" && !rest.empty()) {
    const double c = parse_number(rest);
    return [c](double) { return c; };
  }
  if (kind == "power") {
    const auto p = split(rest, ':');
    if (p.size() != 2) throw UsageError("power spec is power:<c>:<p>");
    const double c = parse_number(p[0]), e = parse_number(p[1]);
    return [c, e](double r) { return c * std::pow(r, e); };
  }
  if (kind == "poly") {
    std::vector<double> a;
    for (const auto& x : split(rest, ',')) a.push_back(parse_number(x));
    if (a.empty()) throw UsageError("poly spec needs coefficients");
    return [a](double r) {
      double s = 0;
      for (auto it = a.rbegin(); it != a.rend(); ++it) s = s * r + *it;
      return s;
    };
  }
  throw UsageError("unknown f spec '" + spec + "' (const:c, power:c:p, poly:a0,a1,...)");
}

FluxMap parse_K(const std::string& spec) {
  if (spec == "identity") return FluxMap::identity();
  if (spec == "curvature") return FluxMap::curvature();
  if (spec.rfind("cubic:", 0) == 0) {
    const double a = parse_number(spec.substr(6));
    if (!(a >= 0)) throw UsageError("cubic flux needs a >= 0");
    return FluxMap::cubic(a);
  }
  throw UsageError("unknown K spec '" + spec + "' (identity, cubic:a, curvature)");
}

Axis axis_of(const std::string& s) {
  try {
    return parse_axis(s);
  } catch (const Error&) {
    throw UsageError("axis must be x1 or x2");
  }
}

ComparisonForm form_of(const RunConfig& c) {
  FormKind k;
  try {
    k = parse_form(c.form);
  } catch (const Error&) {
    throw UsageError("unknown form '" + c.form + "'");
  }
  switch (k) {
    case FormKind::second_derivative: return ComparisonForm::second_derivative();
    case FormKind::curvature: return ComparisonForm::curvature();
    case FormKind::k_flux: {
      if (c.K.empty()) throw UsageError("form K_FLUX needs --K");
      const auto K = parse_K(c.K);
      return ComparisonForm::k_flux(K.K, K.K_prime, K.K_prime_even);
    }
    case FormKind::k_general: throw UsageError("form K_GENERAL is only available through the library");
  }
  throw UsageError("unknown form");
}

SampledFunction need_function(const std::string& path, const char* flag) {
  if (path.empty()) throw UsageError(std::string("missing ") + flag);
  return io::load_function(path);
}

void write_view(const RunConfig& c, const std::string& file, const std::string& content) {
  io::write_atomic(fs::path(c.out) / file, content);
}

Outcome run_verify_lemma(const RunConfig& c) {
  Outcome o;
  const auto u = need_function(c.u, "--u");
  if (c.lemma == "plateau") {
    const auto r = assert_plateau_symmetry(u, c.tolerance);
    o.pass = r.verdict.pass;
    o.result = {{"verdict", io::verdict_json(r.verdict)}, {"a", io::num(r.a)},
                {"symmetry_deviation", io::num(r.symmetry_deviation)}, {"plateau_deviation", io::num(r.plateau_deviation)}};
    o.summary = "plateau symmetry " + std::string(o.pass ? "holds" : "fails");
    return o;
  }
  const auto v = need_function(c.v, "--v");
  if (c.lemma == "comparison" || c.lemma == "hypothesis") {
    HypothesisOptions opt;
    if (c.order == "any") {
      opt.order = PairOrder::any;
    } else if (c.order != "after") {
      throw UsageError("order must be after or any");
    }
    const auto h = check_comparison_hypothesis(u, v, form_of(c), opt);
    o.result["hypothesis"] = io::hypothesis_json(h);
    o.pass = h.holds;
    o.summary = std::string("hypothesis ") + (h.holds ? "holds" : "fails") + " margin=" + io::fmt17(h.margin);
    if (c.lemma == "comparison") {
      const auto cv = assert_coincidence(u, v, c.tolerance);
      o.result["coincidence"] = io::verdict_json(cv);
      o.pass = o.pass && cv.pass;
      o.summary += std::string(", coincidence ") + (cv.pass ? "holds" : "fails");
    }
    return o;
  }
  if (c.lemma == "slide") {
    try {
      const auto r = slide_until_touch(u, v, c.max_shift);
      o.pass = true;
      o.result = {{"shift", io::num(r.shift)}, {"touch_t", io::num(r.touch_t)}, {"min_gap", io::num(r.min_gap)}};
      o.summary = "touch at shift " + io::fmt17(r.shift) + ", t=" + io::fmt17(r.touch_t);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::no_touch) throw;
      o.result = {{"error", e.what()}};
      o.summary = e.what();
    }
    return o;
  }
  if (c.lemma == "reflection") {
    const auto r = assert_reflection(u, v, c.tolerance);
    o.pass = r.verdict.pass;
    o.result = {{"verdict", io::verdict_json(r.verdict)}, {"c", io::num(r.c)}, {"endpoint_gap", io::num(r.endpoint_gap)},
                {"endpoint_match", r.endpoint_match}};
    o.summary = "reflection " + std::string(o.pass ? "holds" : "fails") + " c=" + io::fmt17(r.c);
    return o;
  }
  if (c.lemma == "either-increasing") {
    const auto r = check_either_increasing(u, v);
    o.pass = r.holds;
    o.result = {{"holds", r.holds}, {"min_slope", io::num(r.min_slope)}, {"witness", io::num(r.witness)}};
    o.summary = "max(u', v') min " + io::fmt17(r.min_slope);
    return o;
  }
  throw UsageError("unknown lemma '" + c.lemma + "' (comparison, hypothesis, slide, reflection, plateau, either-increasing)");
}

Outcome run_reconstruct(const RunConfig& c) {
  if (c.f.empty()) throw UsageError("missing --f");
  Convention conv;
  try {
    conv = parse_convention(c.convention);
  } catch (const Error&) {
    throw UsageError("convention must be double or single");
  }
  std::optional<FluxMap> K;
  if (!c.K.empty()) K = parse_K(c.K);
  if (conv == Convention::single && !K) K = FluxMap::identity();
  const auto fi = first_integral_for(parse_f(c.f), conv, K, c.t_max, c.f);
  const auto u = reconstruct_solution(fi, c.t_max, c.n);
  Outcome o;
  o.pass = true;
  const std::size_t stride = std::max<std::size_t>(1, fi.size() / 256);
  o.result = {{"first_integral", io::first_integral_json(fi, stride)},
              {"solution", {{"domain", {u.start(), u.end()}}, {"n", u.size()}, {"u_end", io::num(u[u.size() - 1])}}}};
  o.summary = "u(" + io::fmt17(c.t_max) + ") = " + io::fmt17(u[u.size() - 1]);
  if (c.csv) {
    write_view(c, "reconstruct-solution.csv", io::function_csv(u));
    std::string rows = "rho,F\n";
    for (std::size_t i = 0; i < fi.size(); ++i) rows += io::fmt17(fi.node(i)) + "," + io::fmt17(fi.F[i]) + "\n";
    write_view(c, "reconstruct-F.csv", rows);
  }
  if (c.svg) write_view(c, "reconstruct.svg", io::functions_svg({{"u", u}}));
  return o;
}

Outcome run_sweep(const RunConfig& c) {
  if (c.input.empty()) throw UsageError("missing --input");
  const auto curve = io::load_curve(c.input);
  const Axis axis = axis_of(c.axis);
  const auto emb = check_embedded(curve);
  if (!emb.embedded) {
    throw Error(ErrorKind::degenerate_curve, "curve is not embedded");
  }
  const auto r = sweep(curve, axis);
  const auto s = symmetry_verdict(curve, axis, r.lambda0);
  Outcome o;
  o.pass = s.verdict.pass;
  o.result = {{"sweep", io::sweep_json(r)}, {"symmetry", io::symmetry_json(s)}, {"embedded", true}};
  o.summary = "lambda0=" + io::fmt17(r.lambda0) + " case=" + touch_case_name(r.touch) +
              " symmetric=" + (s.verdict.pass ? "yes" : "no");
  if (c.svg) write_view(c, "sweep.svg", io::sweep_svg(curve, r));
  return o;
}

Outcome run_gallery(const RunConfig& c) {
  if (c.name.empty()) throw UsageError("missing --name (" + [] {
    std::string s;
    for (const auto& n : gallery::instance_names()) s += (s.empty() ? "" : ", ") + n;
    return s;
  }() + ")");
  gallery::GalleryInstance g;
  try {
    g = gallery::by_name(c.name, c.epsilon);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::invalid_argument) throw UsageError(e.what());
    throw;
  }
  Outcome o;
  o.pass = true;
  o.result = io::instance_json(g);
  json fns = json::object();
  for (const auto& nf : g.functions) fns[nf.name] = io::function_json(nf.f);
  o.result["samples"] = std::move(fns);
  if (g.curve) o.result["curve_points"] = io::curve_json(*g.curve);
  o.summary = g.name + ": " + std::to_string(g.checks.size()) + " self-checks passed";
  if (c.csv) {
    for (const auto& nf : g.functions) write_view(c, "gallery-" + g.name + "-" + nf.name + ".csv", io::function_csv(nf.f));
    if (g.curve) write_view(c, "gallery-" + g.name + "-curve.csv", io::curve_csv(*g.curve));
  }
  if (c.svg) {
    write_view(c, "gallery-" + g.name + ".svg", g.curve ? io::curve_svg(*g.curve) : io::functions_svg(g.functions));
  }
  return o;
}

Outcome run_counterexample(const RunConfig& c) {
  if (!(c.epsilon > 0 && c.epsilon < 1)) throw UsageError("epsilon must lie in (0, 1)");
  const auto r = gallery::verify_bump_claim(c.epsilon, c.grid);
  Outcome o;
  o.pass = r.hypothesis.holds && r.ratio_check;
  o.result = io::bump_claim_json(r);
  if (c.scan) o.result["scan"] = io::scan_json(gallery::scan_epsilon({0.5, 0.2, 0.1, 0.05}, c.grid));
  o.summary = std::string("claim ") + (r.hypothesis.holds ? "holds" : "fails") + " min_margin=" + io::fmt17(r.min_margin) +
              (r.validated_range ? "" : " (epsilon above the validated range)");
  return o;
}

Outcome run_suite(const RunConfig& c) {
  if (!c.all && c.criteria.empty()) throw UsageError("suite needs --all or --criteria");
  const auto checks = acceptance::all_checks();
  std::set<int> pick(c.criteria.begin(), c.criteria.end());
  Outcome o;
  o.pass = true;
  json rows = json::array();
  int failed = 0, ran = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!c.all && !pick.count(id)) continue;
    acceptance::Check k;
    try {
      k = checks[i]();
    } catch (const std::exception& e) {
      k.id = id;
      k.summary = std::string("error: ") + e.what();
    }
    ++ran;
    failed += k.pass ? 0 : 1;
    std::cout << acceptance::line(k) << "\n";
    rows.push_back({{"id", k.id}, {"name", k.name}, {"pass", k.pass}, {"summary", k.summary}, {"detail", k.detail}});
  }
  for (int id : pick) {
    if (id < 1 || id > static_cast<int>(checks.size())) throw UsageError("no criterion " + std::to_string(id));
  }
  o.pass = failed == 0;
  o.result = {{"checks", std::move(rows)}, {"ran", ran}, {"failed", failed}};
  o.summary = std::to_string(ran - failed) + "/" + std::to_string(ran) + " checks passed";
  return o;
}

std::string report_name(const RunConfig& c) {
  if (c.command == "verify-lemma") return "lemma-" + c.lemma + ".json";
  if (c.command == "gallery") return "gallery-" + c.name + ".json";
  return c.command + ".json";
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

const std::set<std::string> kConfigKeys = {
    "command", "out",  "deterministic", "csv",      "svg",   "lemma",   "u",    "v",    "form",
    "order",   "expect", "tolerance",   "max_shift", "f",    "convention", "K", "t_max", "n",
    "input",   "axis", "name",          "epsilon",  "grid",  "scan",    "all",  "criteria"};

/// Expands a JSON config into command-line tokens placed before the user's
/// own flags, so explicit flags win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::string config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a path");
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config.empty()) return rest;
  json j;
  try {
    j = json::parse(io::read_file(config));
  } catch (const json::exception& e) {
    throw UsageError(config + ": " + e.what());
  }
  if (!j.is_object()) throw UsageError(config + ": config must be a JSON object");
  std::string command;
  std::vector<std::string> flags;
  for (const auto& [key, value] : j.items()) {
    if (!kConfigKeys.count(key)) throw UsageError(config + ": unknown key '" + key + "'");
    if (key == "command") {
      command = value.get<std::string>();
      continue;
    }
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (key == "K") flag = "--K";
    if (value.is_boolean()) {
      if (value.get<bool>()) flags.push_back(flag);
    } else if (value.is_array()) {
      for (const auto& x : value) {
        flags.push_back(flag);
        flags.push_back(x.is_string() ? x.get<std::string>() : x.dump());
      }
    } else {
      flags.push_back(flag);
      flags.push_back(value.is_string() ? value.get<std::string>() : value.dump());
    }
  }
  const std::set<std::string> commands = {"verify-lemma", "reconstruct", "sweep", "gallery", "counterexample", "suite"};
  std::vector<std::string> out;
  auto it = std::find_if(rest.begin(), rest.end(), [&](const std::string& s) { return commands.count(s) > 0; });
  if (it == rest.end()) {
    if (command.empty()) throw UsageError(config + ": no command given");
    out.push_back(command);
    out.insert(out.end(), flags.begin(), flags.end());
    out.insert(out.end(), rest.begin(), rest.end());
  } else {
    out.insert(out.end(), rest.begin(), it + 1);
    out.insert(out.end(), flags.begin(), flags.end());
    out.insert(out.end(), it + 1, rest.end());
  }
  return out;
}

bool is_input_error(ErrorKind k) {
  switch (k) {
    case ErrorKind::io:
    case ErrorKind::invalid_argument:
    case ErrorKind::too_few_samples:
    case ErrorKind::non_finite:
    case ErrorKind::degenerate_curve:
    case ErrorKind::domain_mismatch:
    case ErrorKind::convention_mismatch:
      return true;
    default:
      return false;
  }
}

int run(int argc, char** argv) {
  RunConfig c;
  CLI::App app{"Numerical checks for comparison lemmas, first integrals and moving-plane symmetry"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);
  std::string out_flag;
  app.add_option("--out", out_flag, "output directory (default $HOPFSYM_OUT or hopfsym-out)");
  app.add_flag("--deterministic", c.deterministic, "omit the metadata block");
  app.add_flag("--csv", c.csv, "also write CSV views");
  app.add_flag("--svg", c.svg, "also write SVG figures");
  app.add_option("--config", "JSON file with RunConfig keys");

  auto* lemma = app.add_subcommand("verify-lemma", "check a lemma on sampled functions");
  lemma->add_option("--lemma", c.lemma, "comparison, hypothesis, slide, reflection, plateau, either-increasing")->required();
  lemma->add_option("--u", c.u, "CSV or JSON function file")->required();
  lemma->add_option("--v", c.v, "CSV or JSON function file");
  lemma->add_option("--form", c.form, "SECOND_DERIV, CURVATURE or K_FLUX");
  lemma->add_option("--K", c.K, "flux for K_FLUX: identity, cubic:a, curvature");
  lemma->add_option("--order", c.order, "matched pairs with s >= t (after) or all (any)");
  lemma->add_option("--tolerance", c.tolerance)->check(CLI::PositiveNumber);
  lemma->add_option("--max-shift", c.max_shift)->check(CLI::NonNegativeNumber);
  lemma->add_option("--expect", c.expect, "pass or fail")->check(CLI::IsMember({"pass", "fail"}));

  auto* rec = app.add_subcommand("reconstruct", "solve u'' = f(u) (or (K(u'))' = f(u)) from u(0) = u'(0) = 0");
  rec->add_option("--f", c.f, "const:c, power:c:p or poly:a0,a1,...")->required();
  rec->add_option("--convention", c.convention, "double or single");
  rec->add_option("--K", c.K, "identity, cubic:a or curvature");
  rec->add_option("--t-max", c.t_max)->check(CLI::PositiveNumber);
  rec->add_option("--n", c.n, "solution samples")->check(CLI::Range(3, 100000000));

  auto* sw = app.add_subcommand("sweep", "moving-plane sweep and symmetry verdict of a closed curve");
  sw->add_option("--input", c.input, "CSV (x1,x2) or JSON curve")->required();
  sw->add_option("--axis", c.axis, "x1 or x2");

  auto* gal = app.add_subcommand("gallery", "generate a gallery instance");
  gal->add_option("--name", c.name)->required();
  gal->add_option("--epsilon", c.epsilon)->check(CLI::PositiveNumber);

  auto* ce = app.add_subcommand("counterexample", "verify the bump curvature claim");
  ce->add_option("--epsilon", c.epsilon)->check(CLI::PositiveNumber);
  ce->add_option("--grid", c.grid)->check(CLI::Range(8, 10000000));
  ce->add_flag("--scan", c.scan, "also run the epsilon scan");

  auto* su = app.add_subcommand("suite", "run the acceptance checks");
  su->add_flag("--all", c.all);
  su->add_option("--criteria", c.criteria, "subset of criteria ids")->delimiter(',');

  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  args = expand_config(args);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  c.command = app.get_subcommands().front()->get_name();
  if (!out_flag.empty()) {
    c.out = out_flag;
  } else if (const char* env = std::getenv("HOPFSYM_OUT"); env && *env) {
    c.out = env;
  }

  Outcome o;
  if (c.command == "verify-lemma") o = run_verify_lemma(c);
  else if (c.command == "reconstruct") o = run_reconstruct(c);
  else if (c.command == "sweep") o = run_sweep(c);
  else if (c.command == "gallery") o = run_gallery(c);
  else if (c.command == "counterexample") o = run_counterexample(c);
  else o = run_suite(c);

  const bool expected_fail = c.command == "verify-lemma" && c.expect == "fail";
  const bool pass = expected_fail ? !o.pass : o.pass;
  json report{{"command", c.command}, {"pass", pass}, {"result", o.result}};
  if (expected_fail) report["expected"] = "fail";
  if (!c.deterministic) {
    json a = json::array();
    for (int i = 0; i < argc; ++i) a.push_back(argv[i]);
    report["metadata"] = {{"version", kVersion}, {"timestamp", utc_now()}, {"argv", a}};
  }
  const fs::path path = fs::path(c.out) / report_name(c);
  io::write_atomic(path, report.dump(2) + "\n");
  std::cout << (pass ? "PASS" : "FAIL") << " " << c.command << ": " << o.summary << "\n";
  std::cout << "report: " << path.string() << "\n";
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_input_error(e.kind()) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
