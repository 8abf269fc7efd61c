#include "hjet/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hjet/invop.hpp"
#include "hjet/linalg.hpp"
#include "hjet/poly_parse.hpp"
#include "hjet/regmat.hpp"
#include "hjet/schedule.hpp"

namespace hjet {

using nlohmann::json;

namespace {

constexpr const char* kProblemSchema = "hjet-problem/1";
constexpr const char* kReportSchema = "hjet-report/1";

std::pair<size_t, size_t> line_column(const std::string& text, size_t byte) {
  size_t line = 1, column = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

const json& member(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw ProblemError("missing field \"" + key + "\"", path);
  return obj.at(key);
}

std::string as_string(const json& v, const std::string& path) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return v.dump();
  throw ProblemError("expected a string", path);
}

Rational as_rational(const json& v, const std::string& path) {
  try {
    return parse_rational(as_string(v, path));
  } catch (const ProblemError&) {
    throw;
  } catch (const std::exception& e) {
    throw ProblemError(std::string("bad rational: ") + e.what(), path);
  }
}

const json& as_array(const json& v, const std::string& path, size_t expected = static_cast<size_t>(-1)) {
  if (!v.is_array()) throw ProblemError("expected an array", path);
  if (expected != static_cast<size_t>(-1) && v.size() != expected) {
    throw ProblemError("expected " + std::to_string(expected) + " entries, got " + std::to_string(v.size()), path);
  }
  return v;
}

std::vector<MultiPoly> poly_row(const json& v, const std::string& path, const VarNames& names) {
  std::vector<MultiPoly> out;
  const json& arr = as_array(v, path, names.size());
  for (size_t i = 0; i < arr.size(); ++i) {
    const std::string p = path + "/" + std::to_string(i);
    const std::string text = as_string(arr[i], p);
    try {
      out.push_back(parse_poly(text, names));
    } catch (const PolyParseError& e) {
      throw ProblemError(e.what(), p, 0, e.column());
    }
  }
  return out;
}

QVector rational_row(const json& v, const std::string& path, size_t n) {
  QVector out;
  const json& arr = as_array(v, path, n);
  for (size_t i = 0; i < arr.size(); ++i) out.push_back(as_rational(arr[i], path + "/" + std::to_string(i)));
  return out;
}

json rationals(const std::vector<Rational>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

json matrix_json(const QMatrix& m) {
  json out = json::array();
  for (size_t i = 0; i < m.rows(); ++i) out.push_back(rationals(m.row(i)));
  return out;
}

json schedule_json(const SubframeSchedule& s) {
  json out;
  out["growth"] = s.growth().to_string();
  out["q_start"] = s.q_start();
  out["q_values"] = s.q_values();
  out["q"] = s.q_values().empty() ? s.q_final() : s.q_values().back();
  out["table"] = s.table();
  out["tau_table"] = s.tau_table();
  json widths = json::array();
  for (int k = 1; k <= static_cast<int>(s.q_values().size()); ++k) {
    const SubframeSchedule v = s.level_view(k);
    widths.push_back({{"level", k},
                      {"q", v.q_final()},
                      {"width_sum", v.width_sum()},
                      {"square", v.width_sum() == static_cast<size_t>(v.p() * (v.q_final() + 2))}});
  }
  out["levels"] = widths;
  return out;
}

const std::vector<std::string>& schedule_errata() {
  static const std::vector<std::string> notes = {
      "sub-frame recursion zeroes tau^{q+b} for the skipped blocks b, keeping the tau^q set before the recursion",
      "toy type (0,10,12,14): tau^3 = tau^{2,1}, a vector of D",
      "toy type (0,10,12,14): B has size p(q+2) = 192",
      "designated coefficients c are kept exactly and may exceed q(m,1)",
      "K >= 2: P_k uses zeta^bullet on blocks up to q(m,k-1), followed by round k",
  };
  return notes;
}

// Error raised by a command with its exit code and pipeline stage.
struct CommandError {
  int code;
  std::string stage;
  std::string message;
};

struct Options {
  std::string problem_path;
  std::optional<int> q, alpha;
  int K = 1;
  std::optional<uint64_t> seed;
  std::optional<int> max_step;
  int trials = 32;
  uint64_t bound = 1u << 10;
  std::optional<int> degree;
  std::string growth;
  std::string out_path;
  std::string format = "json";
};

uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("HJET_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw CommandError{kExitParse, "args", std::string("HJET_SEED is not an unsigned integer: ") + env};
    }
  }
  return 0;
}

Problem load(const Options& o) {
  try {
    return load_problem(o.problem_path);
  } catch (const ProblemError& e) {
    std::string where = o.problem_path;
    if (e.line() > 0) where += ":" + std::to_string(e.line()) + ":" + std::to_string(e.column());
    if (!e.path().empty()) where += " at " + e.path();
    if (e.line() == 0 && e.column() > 0) where += ", column " + std::to_string(e.column());
    throw CommandError{kExitParse, "parse", where + ": " + e.what()};
  }
}

Distribution make_distribution(const Problem& p) {
  try {
    return p.distribution();
  } catch (const GeometryError& e) {
    throw CommandError{kExitPrecondition, "distribution", e.what()};
  }
}

json cmd_flag(const Options& o) {
  const Problem p = load(o);
  const Distribution d = make_distribution(p);
  const int max_step = o.max_step.value_or(default_max_step(d));
  FlagResult f;
  try {
    f = flag_at_point(d, max_step);
  } catch (const std::invalid_argument& e) {
    throw CommandError{kExitPrecondition, "flag", e.what()};
  }
  json r;
  r["ranks"] = f.ranks;
  r["max_step"] = max_step;
  r["bracket_generating"] = f.bracket_generating;
  if (f.bracket_generating) {
    const GrowthVector gv = f.growth_vector();
    r["growth"] = gv.to_string();
    r["step"] = gv.step();
    if (p.growth) r["growth_override_matches"] = p.growth->compressed() == gv;
  } else {
    r["verdict"] = "not bracket-generating within max_step";
  }
  return r;
}

QJet jet_for(const Problem& p, const Distribution& d, size_t order) {
  if (p.curve) return p.curve->jet(p.t0, order);
  if (p.first_jet) {
    try {
      return tangency_solve<Rational>(d, *p.first_jet, order - 1);
    } catch (const JetError& e) {
      throw CommandError{kExitPrecondition, "jet", e.what()};
    }
  }
  throw CommandError{kExitPrecondition, "jet", "problem has neither a curve nor a first_jet"};
}

json cmd_wcheck(const Options& o) {
  const Problem p = load(o);
  const Distribution d = make_distribution(p);
  const size_t mq = min_q(static_cast<long>(d.rank()), static_cast<long>(d.corank()));
  const int q = o.q.value_or(static_cast<int>(mq));
  if (q < 0) throw CommandError{kExitPrecondition, "args", "q must be non-negative"};
  if (o.alpha && *o.alpha < 2 * q) throw CommandError{kExitPrecondition, "args", "alpha must be at least 2q"};
  const size_t order = o.alpha ? *o.alpha + 1 : q + 1;
  const QJet jet = jet_for(p, d, order);
  WVerdict v;
  try {
    v = o.alpha ? is_in_W_alpha(d, jet, *o.alpha, q) : is_W_regular(d, jet, q);
  } catch (const RegmatError& e) {
    throw CommandError{kExitPrecondition, "regmat", e.what()};
  }
  json r;
  r["q"] = q;
  r["min_q"] = mq;
  if (o.alpha) r["alpha"] = *o.alpha;
  r["regular"] = v.regular;
  r["injective"] = v.injective;
  r["rank"] = v.rank;
  r["rows"] = v.rows;
  r["cols"] = v.cols;
  r["underdetermined"] = underdetermined(d.rank(), d.corank(), q);
  if (!v.reason.empty()) r["reason"] = v.reason;
  return r;
}

json cmd_invert(const Options& o) {
  const Problem p = load(o);
  const Distribution d = make_distribution(p);
  if (!p.curve) throw CommandError{kExitPrecondition, "curve", "invert needs a curve"};
  const size_t mq = d.corank() == 0 ? 0 : min_q(static_cast<long>(d.rank()), static_cast<long>(d.corank()));
  const int q = o.q.value_or(static_cast<int>(mq));
  if (q < 0) throw CommandError{kExitPrecondition, "args", "q must be non-negative"};
  const int degree = o.degree.value_or(2 * q + 3);
  InverseResult m;
  try {
    m = build_M(d, *p.curve, p.t0, q);
  } catch (const InvopError& e) {
    throw CommandError{kExitVerdict, "invop", std::string("not W-regular: ") + e.what()};
  }
  const DiffOp l = linearization(d, *p.curve);
  json residuals = json::array();
  bool all_zero = true;
  for (size_t s = 0; s < d.corank(); ++s) {
    for (int k = 0; k <= degree; ++k) {
      RVector x(d.corank());
      x[s] = RatFunc(UniPoly::monomial(k));
      const RVector y = l.apply(m.op.apply(x));
      json res = json::array();
      for (size_t i = 0; i < y.size(); ++i) {
        const RatFunc diff = y[i] - x[i];
        if (!diff.is_zero()) all_zero = false;
        res.push_back(diff.to_string());
      }
      residuals.push_back({{"slot", s}, {"degree", k}, {"residual", res}});
    }
  }
  json r;
  r["q"] = q;
  r["t0"] = to_string(p.t0);
  r["order"] = m.op.order();
  r["effective_order"] = m.op.effective_order();
  r["pivot_columns"] = m.pivot_columns;
  r["pivot_minor"] = m.pivot_minor.to_string();
  if (m.whole_line) {
    r["interval"] = "whole line";
  } else {
    r["interval"] = {to_string(m.lo), to_string(m.hi)};
  }
  json coeffs = json::array();
  for (const auto& c : m.op.coeffs) {
    json rows = json::array();
    for (size_t i = 0; i < c.rows(); ++i) {
      json row = json::array();
      for (size_t k = 0; k < c.cols(); ++k) row.push_back(c(i, k).to_string());
      rows.push_back(row);
    }
    coeffs.push_back(rows);
  }
  r["M"] = coeffs;
  r["test_degree"] = degree;
  r["residuals"] = residuals;
  r["identity_verified"] = all_zero;
  if (d.corank() == 0) r["note"] = "corank 0: empty operator, identity holds vacuously";
  return r;
}

json cmd_schedule(const Options& o) {
  if (o.growth.empty()) throw CommandError{kExitParse, "args", "--growth is required"};
  GrowthVector gv;
  try {
    gv = GrowthVector::parse(o.growth);
  } catch (const std::exception& e) {
    throw CommandError{kExitParse, "growth", std::string("malformed growth vector: ") + e.what()};
  }
  if (o.K < 1) throw CommandError{kExitPrecondition, "args", "K must be at least 1"};
  try {
    return schedule_json(make_schedule(gv, o.K));
  } catch (const ScheduleError& e) {
    throw CommandError{kExitPrecondition, "schedule", e.what()};
  }
}

json cmd_certify(const Options& o, uint64_t seed) {
  const Problem p = load(o);
  const Distribution d = make_distribution(p);
  if (o.K < 1) throw CommandError{kExitPrecondition, "args", "K must be at least 1"};
  const FlagResult f = flag_at_point(d, o.max_step.value_or(default_max_step(d)));
  if (!f.bracket_generating) throw CommandError{kExitPrecondition, "flag", "not bracket-generating within max_step"};
  AdaptedFrameData frame;
  try {
    frame = adapted_frame(d, f, PairOrder::kForward, p.growth);
  } catch (const std::exception& e) {
    throw CommandError{kExitPrecondition, "frame", e.what()};
  }
  if (frame.type.has_zero_jump()) frame = adapted_frame(d, f, PairOrder::kForward);
  const QVector first = p.first_jet.value_or(frame.tau[0][0]);
  CodimWitness w;
  try {
    w = codim_witness(d, frame, first, o.K, {.seed = seed, .attempts = o.trials, .bound = o.bound});
  } catch (const JetError& e) {
    throw CommandError{kExitPrecondition, "fiber", e.what()};
  } catch (const ScheduleError& e) {
    throw CommandError{kExitInternal, "structure", e.what()};
  }
  json r;
  r["growth"] = frame.type.to_string();
  r["first_jet"] = rationals(first);
  r["frame"] = {{"duality_ok", frame.duality_ok}, {"triangular_ok", frame.triangular_ok}};
  r["schedule"] = schedule_json(w.schedule);
  const VarNames names = x_names(w.q_values.back());
  json levels = json::array();
  for (size_t i = 0; i < w.polys.size(); ++i) {
    const CStructure& cs = w.structure[i];
    json vars = json::array();
    for (uint32_t v : w.variables[i]) vars.push_back(names[v]);
    MultiPoly poly = w.polys[i];
    poly.extend_nvars(static_cast<uint32_t>(names.size()));
    levels.push_back({{"K", i + 1},
                      {"q", w.q_values[i]},
                      {"B_size", w.b_size[i]},
                      {"C_size", w.c_size[i]},
                      {"C_tilde_ok", cs.ok},
                      {"designated_levels", cs.level},
                      {"designated_coefficients", rationals(cs.coefficient)},
                      {"permutation", cs.permutation},
                      {"C_tilde", matrix_json(cs.c_tilde)},
                      {"P", poly.to_string(names)},
                      {"variables", vars}});
  }
  r["levels"] = levels;
  r["fresh_variables"] = w.fresh;
  r["witness_found"] = w.nonzero;
  r["attempts"] = w.attempts_used;
  r["point"] = rationals(w.point);
  r["regular_at_witness"] = w.regular;
  if (!w.nonzero) throw CommandError{kExitVerdict, "witness", "no nonvanishing assignment found"};
  if (!w.regular) throw CommandError{kExitInternal, "witness", "witness point is not W-regular"};
  return r;
}

void render_text(const json& v, const std::string& prefix, std::ostream& out) {
  if (v.is_object()) {
    for (const auto& [k, x] : v.items()) render_text(x, prefix.empty() ? k : prefix + "." + k, out);
    return;
  }
  if (v.is_array() && !v.empty() && (v.front().is_object() || v.front().is_array() ||
                                     (v.front().is_string() && v.front().get<std::string>().find(' ') != std::string::npos))) {
    out << prefix << ":\n";
    for (size_t i = 0; i < v.size(); ++i) {
      if (v[i].is_string()) {
        out << "  " << v[i].get<std::string>() << "\n";
      } else {
        render_text(v[i], prefix + "[" + std::to_string(i) + "]", out);
      }
    }
    return;
  }
  out << prefix << ": ";
  if (v.is_array()) {
    for (size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << (v[i].is_string() ? v[i].get<std::string>() : v[i].dump());
  } else if (v.is_string()) {
    out << v.get<std::string>();
  } else {
    out << v.dump();
  }
  out << "\n";
}

void emit(const json& report, const Options& o, std::ostream& out) {
  std::ostringstream text;
  if (o.format == "text") {
    render_text(report, "", text);
  } else {
    text << report.dump(2) << "\n";
  }
  if (o.out_path.empty()) {
    out << text.str();
    return;
  }
  std::ofstream f(o.out_path);
  if (!f) throw CommandError{kExitPrecondition, "output", "cannot write " + o.out_path};
  f << text.str();
}

}  // namespace

Distribution Problem::distribution() const {
  if (generators.empty()) return Distribution::from_coframe(coframe, base_point, dim);
  return Distribution::with_generators(coframe, generators, base_point, dim);
}

Problem parse_problem(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ProblemError(e.what(), "", line, column);
  }
  if (!doc.is_object()) throw ProblemError("top level must be an object", "");
  const std::string schema = as_string(member(doc, "schema", ""), "/schema");
  if (schema != kProblemSchema) throw ProblemError("unsupported schema \"" + schema + "\"", "/schema");
  Problem p;
  if (doc.contains("name")) p.name = as_string(doc["name"], "/name");
  const json& dim = member(doc, "dim", "");
  if (!dim.is_number_integer() || dim.get<long>() < 1) throw ProblemError("dim must be a positive integer", "/dim");
  p.dim = dim.get<size_t>();
  const VarNames names = indexed_names("y", static_cast<uint32_t>(p.dim));
  const json& cf = as_array(member(doc, "coframe", ""), "/coframe");
  for (size_t s = 0; s < cf.size(); ++s) p.coframe.emplace_back(poly_row(cf[s], "/coframe/" + std::to_string(s), names));
  if (p.coframe.size() > p.dim) throw ProblemError("more coframe entries than dimensions", "/coframe");
  if (doc.contains("generators")) {
    const json& g = as_array(doc["generators"], "/generators");
    for (size_t i = 0; i < g.size(); ++i)
      p.generators.emplace_back(poly_row(g[i], "/generators/" + std::to_string(i), names));
  }
  p.base_point = rational_row(member(doc, "base_point", ""), "/base_point", p.dim);
  if (doc.contains("curve")) {
    const json& c = doc["curve"];
    if (!c.is_object()) throw ProblemError("curve must be an object", "/curve");
    if (c.contains("t0")) p.t0 = as_rational(c["t0"], "/curve/t0");
    const json& comps = as_array(member(c, "components", "/curve"), "/curve/components", p.dim);
    std::vector<UniPoly> polys;
    for (size_t i = 0; i < comps.size(); ++i) {
      const std::string path = "/curve/components/" + std::to_string(i);
      polys.emplace_back(rational_row(comps[i], path, as_array(comps[i], path).size()));
    }
    p.curve = PolyCurve(polys);
  }
  if (doc.contains("first_jet")) p.first_jet = rational_row(doc["first_jet"], "/first_jet", p.dim);
  if (doc.contains("growth")) {
    try {
      p.growth = GrowthVector::parse(as_string(doc["growth"], "/growth"));
    } catch (const ProblemError&) {
      throw;
    } catch (const std::exception& e) {
      throw ProblemError(std::string("malformed growth vector: ") + e.what(), "/growth");
    }
  }
  return p;
}

Problem load_problem(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ProblemError("cannot open " + path, "");
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_problem(buf.str());
}

std::string validate_report(const json& r) {
  if (!r.is_object()) return "report is not an object";
  if (!r.contains("schema") || r["schema"] != kReportSchema) return "schema must be " + std::string(kReportSchema);
  for (const char* key : {"command", "ok", "exit_code", "seed", "args", "timing_ms", "errata"}) {
    if (!r.contains(key)) return std::string("missing ") + key;
  }
  if (!r["command"].is_string()) return "command must be a string";
  if (!r["ok"].is_boolean()) return "ok must be a boolean";
  if (!r["exit_code"].is_number_integer()) return "exit_code must be an integer";
  if (!r["seed"].is_number_unsigned()) return "seed must be an unsigned integer";
  if (!r["errata"].is_array()) return "errata must be an array";
  if (r["ok"].get<bool>() != (r["exit_code"].get<int>() == 0)) return "ok disagrees with exit_code";
  if (r["ok"].get<bool>()) {
    if (!r.contains("result") || !r["result"].is_object()) return "missing result";
  } else {
    if (!r.contains("error") || !r["error"].contains("stage") || !r["error"].contains("message")) return "missing error";
  }
  return "";
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact tools for horizontal curves of bracket-generating distributions", "hjet"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub, bool problem) {
    if (problem) sub->add_option("problem", o.problem_path, "problem file (JSON)")->required();
    sub->add_option("--seed", o.seed, "random seed (default: HJET_SEED or 0)");
    sub->add_option("--out", o.out_path, "write the report to this path");
    sub->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  };
  CLI::App* flag = app.add_subcommand("flag", "growth vector and bracket generation");
  common(flag, true);
  flag->add_option("--max-step", o.max_step, "maximal number of bracket steps");

  CLI::App* wcheck = app.add_subcommand("wcheck", "W-regularity of the curve jet");
  common(wcheck, true);
  wcheck->add_option("--q", o.q, "level q (default: minimal q)");
  wcheck->add_option("--alpha", o.alpha, "check membership in W_alpha (alpha >= 2q)");

  CLI::App* invert = app.add_subcommand("invert", "right inverse of the linearized operator");
  common(invert, true);
  invert->add_option("--q", o.q, "level q (default: minimal q)");
  invert->add_option("--degree", o.degree, "test monomials up to this degree (default 2q+3)");

  CLI::App* schedule = app.add_subcommand("schedule", "sub-frame schedule for a growth vector");
  common(schedule, false);
  schedule->add_option("--growth", o.growth, "growth vector, e.g. 0,10,12,14")->required();
  schedule->add_option("--K", o.K, "number of rounds");

  CLI::App* certify = app.add_subcommand("certify", "codimension witness");
  common(certify, true);
  certify->add_option("--K", o.K, "codimension to certify");
  certify->add_option("--max-step", o.max_step, "maximal number of bracket steps");
  certify->add_option("--trials", o.trials, "witness attempts");
  certify->add_option("--bound", o.bound, "initial range for witness values");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  CLI::App* sub = app.get_subcommands().front();
  json report;
  report["schema"] = kReportSchema;
  report["command"] = sub->get_name();
  json echo = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->count() == 0 || opt->get_name() == "--help") continue;
    echo[opt->get_name(false, true)] = opt->as<std::string>();
  }
  report["args"] = echo;
  const auto start = std::chrono::steady_clock::now();
  int code = kExitOk;
  try {
    const uint64_t seed = resolve_seed(o);
    report["seed"] = seed;
    json result;
    const std::string name = sub->get_name();
    if (name == "flag") {
      result = cmd_flag(o);
      if (!result["bracket_generating"].get<bool>()) code = kExitVerdict;
    } else if (name == "wcheck") {
      result = cmd_wcheck(o);
      if (!result["regular"].get<bool>()) code = kExitVerdict;
    } else if (name == "invert") {
      result = cmd_invert(o);
      if (!result["identity_verified"].get<bool>()) code = kExitInternal;
    } else if (name == "schedule") {
      result = cmd_schedule(o);
    } else {
      result = cmd_certify(o, seed);
    }
    report["result"] = result;
  } catch (const CommandError& e) {
    code = e.code;
    report["error"] = {{"stage", e.stage}, {"message", e.message}};
    err << "hjet " << sub->get_name() << ": " << e.stage << ": " << e.message << "\n";
  } catch (const std::exception& e) {
    code = kExitInternal;
    report["error"] = {{"stage", "internal"}, {"message", e.what()}};
    err << "hjet " << sub->get_name() << ": internal: " << e.what() << "\n";
  }
  if (!report.contains("seed")) report["seed"] = uint64_t{0};
  if (code == kExitVerdict && !report.contains("error")) {
    report["error"] = {{"stage", "verdict"}, {"message", "verdict is false"}};
  }
  report["ok"] = code == kExitOk;
  report["exit_code"] = code;
  report["errata"] = (sub->get_name() == "schedule" || sub->get_name() == "certify") ? json(schedule_errata())
                                                                                     : json::array();
  report["timing_ms"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  try {
    emit(report, o, out);
  } catch (const CommandError& e) {
    err << "hjet: " << e.message << "\n";
    return e.code;
  }
  return code;
}

}  // namespace hjet
