#ifndef CROSSCAP_CLI_HPP
#define CROSSCAP_CLI_HPP

// Command implementations behind the crosscap executable. Each command returns an
// Outcome holding the exit code, the JSON report and its text rendering, so the
// commands can be driven in-process.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "crosscap/crosscap.hpp"
#include "crosscap/parser.hpp"

namespace crosscap::cli {

using nlohmann::json;

enum class ProblemKind { crosscap, immersion };

struct ProblemFile {
  ProblemKind kind = ProblemKind::crosscap;
  PolynomialMap map;

  /// The map whose cross-caps are studied: f itself, or (omega, g) for an immersion.
  PolynomialMap crosscap_map() const { return kind == ProblemKind::crosscap ? map : augmented_map(map); }
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& msg) : Error(ErrorCode::usage, msg) {}
};

inline int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::usage: return 1;
    case ErrorCode::not_generic: return 2;
    case ErrorCode::not_immersion: return 3;
    case ErrorCode::hypothesis_failure:
    case ErrorCode::infinite_dimension: return 4;
    case ErrorCode::degenerate_form:
    case ErrorCode::boundary_hit: return 5;
    case ErrorCode::numeric_failure: return 1;
  }
  return 1;
}

inline ProblemFile parse_problem(const json& doc) {
  if (!doc.is_object()) throw UsageError("problem file must be a JSON object");
  for (const char* key : {"variables", "map"})
    if (!doc.contains(key) || !doc[key].is_array()) throw UsageError(std::string("problem file needs an array \"") + key + "\"");
  std::vector<std::string> names;
  for (const auto& v : doc["variables"]) {
    if (!v.is_string()) throw UsageError("variable names must be strings");
    names.push_back(v.get<std::string>());
  }
  std::vector<std::string> comps;
  for (const auto& c : doc["map"]) {
    if (!c.is_string()) throw UsageError("map components must be polynomial strings");
    comps.push_back(c.get<std::string>());
  }
  ProblemFile pf;
  std::string kind = doc.value("kind", std::string("crosscap"));
  if (kind == "crosscap") pf.kind = ProblemKind::crosscap;
  else if (kind == "immersion") pf.kind = ProblemKind::immersion;
  else throw UsageError("unknown kind \"" + kind + "\"");

  VariableList vars = make_variables(names);
  pf.map.variables = vars;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    try {
      pf.map.components.push_back(parse_polynomial(comps[i], vars));
    } catch (const ParseError& e) {
      std::string msg = e.what();
      msg = msg.substr(0, msg.rfind(" at position "));
      throw ParseError("map[" + std::to_string(i) + "]: " + msg, e.position());
    }
  }
  const std::size_t m = names.size();
  if (m < 3 || m % 2 == 0) throw DimensionError("the number of variables must be odd and at least 3");
  const std::size_t expected = pf.kind == ProblemKind::crosscap ? 2 * m - 1 : 2 * m - 2;
  if (comps.size() != expected)
    throw DimensionError("kind " + kind + " with " + std::to_string(m) + " variables needs " +
                         std::to_string(expected) + " components, got " + std::to_string(comps.size()));
  return pf;
}

inline ProblemFile parse_problem_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte > 0 ? e.byte - 1 : 0);
  }
  return parse_problem(doc);
}

inline ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem_text(ss.str());
}

inline Rational parse_rational(const std::string& text) {
  std::string s = text;
  if (!s.empty() && s[0] == '+') s.erase(0, 1);
  auto slash = s.find('/');
  auto digits = [](const std::string& t, bool allow_sign) {
    std::size_t i = allow_sign && !t.empty() && t[0] == '-' ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  bool ok = slash == std::string::npos ? digits(s, true) : digits(s.substr(0, slash), true) && digits(s.substr(slash + 1), false);
  if (!ok) throw UsageError("not a rational number: \"" + text + "\"");
  Rational q(s);
  if (q.get_den() == 0) throw UsageError("zero denominator in \"" + text + "\"");
  q.canonicalize();
  return q;
}

struct Options {
  std::optional<std::string> radius_squared;
  std::optional<std::pair<std::string, std::string>> annulus;
  std::optional<std::string> region;
  bool auto_large_radius = false;
  std::uint64_t seed = 0;
  int max_retries = 8;
  OracleTolerances tol{};

  ZetaOptions zeta_options() const {
    ZetaOptions z;
    z.seed = seed;
    z.max_retries = max_retries;
    z.tol = tol;
    return z;
  }
};

struct Outcome {
  int exit_code = 0;
  json report;
  std::string text;
};

inline json point_json(const std::vector<double>& x) { return json(x); }

inline json hypotheses_json(const ZetaHypotheses& h) {
  json j{{"finite_dimension", h.finite_dimension},
         {"unit_pivot", h.unit_pivot},
         {"theta_delta_nondegenerate", h.theta_delta_nondegenerate},
         {"theta_u_delta_nondegenerate", h.theta_u_delta_nondegenerate}};
  j["boundary_regular"] = h.boundary_regular ? json(*h.boundary_regular) : json(nullptr);
  return j;
}

inline Region make_region(const VariableList& vars, const Options& opt) {
  int given = (opt.radius_squared ? 1 : 0) + (opt.annulus ? 1 : 0) + (opt.region ? 1 : 0);
  if (given != 1) throw UsageError("give exactly one of --radius-squared, --annulus, --region");
  if (opt.radius_squared) {
    Rational r = parse_rational(*opt.radius_squared);
    if (r <= 0) throw UsageError("--radius-squared must be positive");
    return Region::ball(vars, r);
  }
  if (opt.annulus) {
    Rational a = parse_rational(opt.annulus->first), b = parse_rational(opt.annulus->second);
    if (!(a > 0 && a < b)) throw UsageError("--annulus needs 0 < q1 < q2");
    return Region::annulus(vars, a, b);
  }
  return Region::custom(parse_polynomial(*opt.region, vars));
}

inline std::string region_description(const Options& opt) {
  if (opt.radius_squared) return "ball radius^2 " + parse_rational(*opt.radius_squared).get_str();
  if (opt.annulus)
    return "annulus radius^2 " + parse_rational(opt.annulus->first).get_str() + " .. " +
           parse_rational(opt.annulus->second).get_str();
  return "u >= 0, u = " + opt.region.value_or("");
}

inline Outcome cmd_generic(const ProblemFile& pf, const Options& opt) {
  CrossCapProblem p = build_problem(pf.crosscap_map());
  GenericityReport g = check_generic(p, opt.seed, opt.tol);
  Outcome out;
  out.exit_code = g.generic ? 0 : 2;
  json pts = json::array();
  for (const auto& v : g.points)
    pts.push_back({{"coords", point_json(v.coordinates)},
                   {"residual", v.residual},
                   {"rank_df", v.rank_df},
                   {"rank_dmu", v.rank_dmu},
                   {"crosscap", v.crosscap}});
  out.report = {{"command", "generic"},
                {"generic", g.generic},
                {"dim_A", p.dim_a()},
                {"hypotheses",
                 {{"rank_drop_empty", g.rank_drop_empty},
                  {"transversal", g.transversal},
                  {"transversality_method", g.transversality_method},
                  {"numeric_used", g.numeric_used}}},
                {"points", pts}};
  out.report["witness"] = g.witness ? point_json(*g.witness) : json(nullptr);
  std::ostringstream os;
  os << "generic: " << (g.generic ? "true" : "false") << "\n";
  os << "dim A: " << p.dim_a() << "\n";
  os << "rank drop locus empty: " << (g.rank_drop_empty ? "yes" : "no") << "\n";
  os << "transversal (" << g.transversality_method << "): " << (g.transversal ? "yes" : "no") << "\n";
  if (g.witness) os << "witness: " << format_point(*g.witness) << "\n";
  out.text = os.str();
  return out;
}

inline Outcome cmd_zeta(const ProblemFile& pf, const Options& opt) {
  CrossCapProblem p = build_problem(pf.crosscap_map());
  Region region = make_region(p.f.variables, opt);
  ZetaResult z = zeta(p, region, opt.zeta_options());
  Outcome out;
  out.report = {{"command", "zeta"},
                {"region", region_description(opt)},
                {"zeta", z.zeta},
                {"signatures", {{"delta", z.sig_delta}, {"u_delta", z.sig_u_delta}}},
                {"dim_A", z.dim_a},
                {"hypotheses", hypotheses_json(z.hypotheses)},
                {"retries", z.retries_used}};
  std::ostringstream os;
  os << "zeta: " << z.zeta << "\n";
  os << "region: " << region_description(opt) << "\n";
  os << "signature Theta_delta: " << z.sig_delta << "\n";
  os << "signature Theta_u_delta: " << z.sig_u_delta << "\n";
  os << "dim A: " << z.dim_a << "\n";
  os << "retries: " << z.retries_used << "\n";
  os << "boundary regular: "
     << (z.hypotheses.boundary_regular ? (*z.hypotheses.boundary_regular ? "yes" : "no") : "unchecked") << "\n";
  out.text = os.str();
  return out;
}

inline Outcome cmd_crosscaps(const ProblemFile& pf, const Options& opt) {
  CrossCapProblem p = build_problem(pf.crosscap_map());
  Classification c;
  if (p.dim_a() > 0) c = classify_all(p.f, p.qa, p.mu, opt.seed, opt.tol);
  const long exact = count_real(p);
  Outcome out;
  json pts = json::array();
  for (const auto& cc : c.crosscaps)
    pts.push_back({{"coords", point_json(cc.point.coordinates)}, {"sign", cc.sign}, {"residual", cc.point.residual}});
  out.report = {{"command", "crosscaps"},
                {"dim_A", p.dim_a()},
                {"points", pts},
                {"totals",
                 {{"count", c.totals.count},
                  {"positives", c.totals.positives},
                  {"negatives", c.totals.negatives},
                  {"zeta", c.totals.sum},
                  {"count_real", exact}}}};
  std::ostringstream os;
  os << "dim A: " << p.dim_a() << "\n";
  os << "real singular points (exact): " << exact << "\n";
  for (const auto& cc : c.crosscaps) {
    os << (cc.sign > 0 ? "+1 " : "-1 ") << format_point(cc.point.coordinates) << "  residual " << cc.point.residual
       << "\n";
  }
  os << "totals: count " << c.totals.count << ", positive " << c.totals.positives << ", negative "
     << c.totals.negatives << ", zeta " << c.totals.sum << "\n";
  out.text = os.str();
  return out;
}

inline Outcome cmd_inumber(const ProblemFile& pf, const Options& opt) {
  if (pf.kind != ProblemKind::immersion) throw UsageError("inumber needs a problem of kind \"immersion\"");
  Rational radius_sq;
  if (opt.auto_large_radius) {
    if (opt.radius_squared) throw UsageError("give either --radius-squared or --auto-large-radius");
    radius_sq = large_radius_squared(build_problem(pf.crosscap_map()), opt.seed, opt.tol);
  } else if (opt.radius_squared) {
    radius_sq = parse_rational(*opt.radius_squared);
    if (radius_sq <= 0) throw UsageError("--radius-squared must be positive");
  } else {
    throw UsageError("give --radius-squared or --auto-large-radius");
  }
  IntersectionResult r = intersection_number_detail(pf.map, radius_sq, opt.zeta_options());
  Outcome out;
  out.report = {{"command", "inumber"},
                {"radius_squared", radius_sq.get_str()},
                {"intersection_number", r.value},
                {"zeta", r.zeta.zeta},
                {"signatures", {{"delta", r.zeta.sig_delta}, {"u_delta", r.zeta.sig_u_delta}}},
                {"dim_A", r.zeta.dim_a},
                {"hypotheses", hypotheses_json(r.zeta.hypotheses)},
                {"immersion", {{"immersion", r.immersion.immersion}, {"exact", r.immersion.exact}}},
                {"retries", r.zeta.retries_used}};
  std::ostringstream os;
  os << "intersection number: " << r.value << "\n";
  os << "radius^2: " << radius_sq.get_str() << "\n";
  os << "immersion check: " << (r.immersion.exact ? "exact" : "numeric") << "\n";
  os << "signatures: " << r.zeta.sig_delta << ", " << r.zeta.sig_u_delta << "\n";
  os << "dim A: " << r.zeta.dim_a << "\n";
  out.text = os.str();
  return out;
}

inline Outcome error_outcome(const std::string& command, const Error& e) {
  Outcome out;
  out.exit_code = exit_code(e.code());
  json err{{"code", error_code_name(e.code())}, {"message", e.what()}};
  if (const auto* ni = dynamic_cast<const NotImmersion*>(&e)) err["witness"] = point_json(ni->witness());
  if (const auto* pe = dynamic_cast<const ParseError*>(&e)) err["position"] = pe->position();
  if (const auto* hf = dynamic_cast<const HypothesisFailure*>(&e)) err["hypothesis"] = hf->hypothesis();
  out.report = {{"command", command}, {"error", err}};
  std::ostringstream os;
  os << "error (" << error_code_name(e.code()) << "): " << e.what() << "\n";
  if (const auto* ni = dynamic_cast<const NotImmersion*>(&e)) os << "witness: " << format_point(ni->witness()) << "\n";
  out.text = os.str();
  return out;
}

/// Loads the problem and runs one command, turning library errors into reports.
inline Outcome run(const std::string& command, const std::string& input, const Options& opt) {
  try {
    ProblemFile pf = load_problem(input);
    if (command == "generic") return cmd_generic(pf, opt);
    if (command == "zeta") return cmd_zeta(pf, opt);
    if (command == "crosscaps") return cmd_crosscaps(pf, opt);
    if (command == "inumber") return cmd_inumber(pf, opt);
    throw UsageError("unknown command " + command);
  } catch (const Error& e) {
    return error_outcome(command, e);
  }
}

}  // namespace crosscap::cli

#endif  // CROSSCAP_CLI_HPP
