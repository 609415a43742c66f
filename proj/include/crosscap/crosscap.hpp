#ifndef CROSSCAP_CROSSCAP_HPP
#define CROSSCAP_CROSSCAP_HPP

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "crosscap/errors.hpp"
#include "crosscap/groebner.hpp"
#include "crosscap/numeric_oracle.hpp"
#include "crosscap/polynomial.hpp"
#include "crosscap/trace_form.hpp"

namespace crosscap {

using IntMatrix = std::vector<std::vector<long long>>;

inline IntMatrix identity_int_matrix(std::size_t n) {
  IntMatrix a(n, std::vector<long long>(n, 0));
  for (std::size_t i = 0; i < n; ++i) a[i][i] = 1;
  return a;
}

/// Random integer matrix of determinant +1 (a product of elementary row additions).
inline IntMatrix random_unimodular(std::size_t n, std::mt19937_64& rng) {
  IntMatrix a = identity_int_matrix(n);
  if (n < 2) return a;
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_int_distribution<int> mult(1, 2);
  std::bernoulli_distribution neg(0.5);
  for (std::size_t step = 0; step < 3 * n; ++step) {
    std::size_t i = pick(rng), j = pick(rng);
    if (i == j) continue;
    long long c = mult(rng) * (neg(rng) ? -1 : 1);
    for (std::size_t k = 0; k < n; ++k) a[i][k] += c * a[j][k];
  }
  return a;
}

inline PolyMatrix transform_rows(const IntMatrix& a, const PolyMatrix& m) {
  if (a.size() != m.rows()) throw DimensionError("row transform has the wrong size");
  PolyMatrix out(m.rows(), m.cols(), m.variable_list());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      Polynomial s(m.variable_list());
      for (std::size_t k = 0; k < m.rows(); ++k)
        if (a[i][k] != 0) s += Rational(static_cast<long>(a[i][k])) * m(k, j);
      out(i, j) = std::move(s);
    }
  return out;
}

/// The map x -> A f(x) for an integer target transformation A.
inline PolynomialMap transform_map(const IntMatrix& a, const PolynomialMap& f) {
  if (a.size() != f.size()) throw DimensionError("target transform has the wrong size");
  PolynomialMap out{f.variables, {}};
  for (std::size_t i = 0; i < f.size(); ++i) {
    Polynomial s(f.variables);
    for (std::size_t k = 0; k < f.size(); ++k)
      if (a[i][k] != 0) s += Rational(static_cast<long>(a[i][k])) * f[k];
    out.components.push_back(std::move(s));
  }
  return out;
}

/// A map f: R^m -> R^(2m-1) together with its singular-set ideal and quotient algebra.
struct CrossCapProblem {
  PolynomialMap f;
  PolyMatrix df;
  PolynomialMap mu;  // all maximal minors of df
  GroebnerBasis singular_gb;
  QuotientAlgebra qa;
  std::shared_ptr<const TraceContext> trace;  // null when the algebra is trivial

  std::size_t m() const { return f.num_variables(); }
  std::size_t dim_a() const { return qa.dimension(); }
};

inline void check_crosscap_shape(std::size_t m, std::size_t components) {
  if (m < 3 || m % 2 == 0)
    throw DimensionError("the number of variables must be odd and at least 3 (got " + std::to_string(m) + ")");
  if (components != 2 * m - 1)
    throw DimensionError("expected " + std::to_string(2 * m - 1) + " components, got " +
                         std::to_string(components));
}

inline CrossCapProblem build_problem(const PolynomialMap& f) {
  check_crosscap_shape(f.num_variables(), f.size());
  CrossCapProblem p;
  p.f = f;
  p.df = jacobian(f);
  p.mu = PolynomialMap{f.variables, minors(p.df, f.num_variables())};
  p.singular_gb = reduced_groebner(p.mu.components, f.variables);
  p.qa = quotient_basis(p.singular_gb);
  if (p.qa.dimension() > 0) p.trace = std::make_shared<const TraceContext>(p.qa);
  return p;
}

// ---------------------------------------------------------------------------
// Genericity

struct PointVerdict {
  std::vector<double> coordinates;
  std::size_t rank_df = 0;
  std::size_t rank_dmu = 0;
  double residual = 0.0;
  bool crosscap = false;
};

struct GenericityReport {
  bool rank_drop_empty = false;       // no point with rank Df <= m-2, over C
  bool transversal = false;           // rank Dmu = m at every point of V(I), over C
  std::string transversality_method;  // "minors" or "trace-form"
  bool numeric_used = false;
  std::vector<PointVerdict> points;
  bool generic = false;
  std::optional<std::vector<double>> witness;
};

inline std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Whether I + <extra> is the unit ideal, where I is the ideal of `gb`.
inline bool ideal_plus_is_unit(const GroebnerBasis& gb, const std::vector<Polynomial>& extra) {
  if (is_unit_ideal(gb)) return true;
  std::vector<Polynomial> gens = gb.generators;
  for (const auto& e : extra) {
    Polynomial r = normal_form(e, gb);
    if (!r.is_zero()) gens.push_back(std::move(r));
  }
  if (gens.size() == gb.generators.size()) return false;
  return is_unit_ideal(reduced_groebner(gens, gb.variables));
}

/// Exact checks that every singular point is a cross-cap (over C), with a numeric
/// per-point fallback over the real singular points when an exact check fails.
inline GenericityReport check_generic(const CrossCapProblem& p, std::uint64_t seed = 0,
                                      const OracleTolerances& tol = {}) {
  GenericityReport rep;
  const std::size_t m = p.m();
  if (p.dim_a() == 0) {
    rep.rank_drop_empty = rep.transversal = rep.generic = true;
    rep.transversality_method = "minors";
    return rep;
  }
  rep.rank_drop_empty = p.trace->generates_unit_ideal(minors(p.df, m - 1));
  const PolyMatrix dmu = jacobian(p.mu);
  if (binomial(dmu.rows(), m) <= 2000) {
    rep.transversality_method = "minors";
    rep.transversal = p.trace->generates_unit_ideal(minors(dmu, m));
  } else {
    // rank Dmu(q) = m at q in V(I) iff the local algebra at q is reduced; over C this
    // holds at every point iff the trace form of 1 is non-degenerate.
    rep.transversality_method = "trace-form";
    rep.transversal = signature(p.trace->trace_form_one()).nondegenerate();
  }
  if (rep.rank_drop_empty && rep.transversal) {
    rep.generic = true;
    return rep;
  }
  rep.numeric_used = true;
  rep.generic = true;
  for (const auto& pt : solve_singular_points(p.qa, p.mu, seed, tol, &p.df)) {
    PointVerdict v;
    v.coordinates = pt.coordinates;
    v.residual = pt.residual;
    v.rank_df = numerical_rank(evaluate(p.df, pt.coordinates), tol.rank);
    v.rank_dmu = numerical_rank(evaluate(dmu, pt.coordinates), tol.rank);
    v.crosscap = v.rank_df == m - 1 && v.rank_dmu == m;
    if (!v.crosscap && rep.generic) {
      rep.generic = false;
      rep.witness = v.coordinates;
    }
    rep.points.push_back(std::move(v));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Signature formula

/// Pivot minor, bordered minors and their Jacobian for one choice of target rows.
struct DeltaData {
  Polynomial pivot_minor;          // rows 1..m-1, columns 2..m of (A Df)
  std::vector<Polynomial> deltas;  // rows 1..m-1 plus row i, for i = m..2m-1
  PolyMatrix delta_jacobian;       // d(deltas)/dx, m x m
  Polynomial delta;                // det(delta_jacobian) reduced modulo I
  IntMatrix row_transform;
};

inline DeltaData build_delta(const CrossCapProblem& p, const std::optional<IntMatrix>& row_transform = std::nullopt) {
  const std::size_t m = p.m(), n = 2 * m - 1;
  DeltaData d;
  d.row_transform = row_transform ? *row_transform : identity_int_matrix(n);
  const PolyMatrix a = row_transform ? transform_rows(*row_transform, p.df) : p.df;
  detail::MinorCache cache(a, detail::IdentityReduce{});
  const std::uint64_t head = (std::uint64_t{1} << (m - 1)) - 1;
  const std::uint64_t all_cols = (std::uint64_t{1} << m) - 1;
  d.pivot_minor = cache.minor(head, all_cols & ~std::uint64_t{1});
  for (std::size_t i = m - 1; i < n; ++i) d.deltas.push_back(cache.minor(head | (std::uint64_t{1} << i), all_cols));
  d.delta_jacobian = jacobian(PolynomialMap{p.f.variables, d.deltas});
  if (p.dim_a() == 0) {
    d.delta = Polynomial(p.f.variables);
  } else {
    PolyMatrix reduced(m, m, p.f.variables);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) reduced(i, j) = normal_form(d.delta_jacobian(i, j), p.singular_gb);
    const GroebnerBasis& gb = p.singular_gb;
    d.delta = determinant(reduced, [&gb](Polynomial q) { return normal_form(q, gb); });
  }
  return d;
}

/// The full (unreduced) Jacobian determinant of the bordered minors.
inline Polynomial delta_polynomial(const DeltaData& d) { return determinant(d.delta_jacobian); }

struct Region {
  enum class Kind { ball, annulus, custom };
  Kind kind = Kind::custom;
  Polynomial u;
  Rational inner_sq = 0;
  Rational outer_sq = 0;

  static Polynomial omega(const VariableList& vars) {
    Polynomial w(vars);
    for (std::size_t i = 0; i < vars->size(); ++i) {
      Polynomial x = Polynomial::variable(vars, i);
      w += x * x;
    }
    return w;
  }

  /// {x : |x|^2 <= radius_sq}, u = radius_sq - |x|^2.
  static Region ball(const VariableList& vars, const Rational& radius_sq) {
    if (radius_sq <= 0) throw DimensionError("ball radius squared must be positive");
    return {Kind::ball, Polynomial::constant(vars, radius_sq) - omega(vars), 0, radius_sq};
  }

  /// {x : r1^2 <= |x|^2 <= r2^2}, u = (|x|^2 - r1^2)(r2^2 - |x|^2).
  static Region annulus(const VariableList& vars, const Rational& inner_sq, const Rational& outer_sq) {
    if (!(inner_sq > 0 && inner_sq < outer_sq)) throw DimensionError("annulus requires 0 < r1^2 < r2^2");
    Polynomial w = omega(vars);
    Polynomial u = (w - Polynomial::constant(vars, inner_sq)) * (Polynomial::constant(vars, outer_sq) - w);
    return {Kind::annulus, std::move(u), inner_sq, outer_sq};
  }

  /// {x : u(x) >= 0}; the caller is responsible for boundedness.
  static Region custom(Polynomial u) { return {Kind::custom, std::move(u), 0, 0}; }
};

struct ZetaHypotheses {
  bool finite_dimension = true;
  bool unit_pivot = false;
  bool theta_delta_nondegenerate = false;
  bool theta_u_delta_nondegenerate = false;
  std::optional<bool> boundary_regular;  // unset when the numeric check could not run
};

struct ZetaResult {
  long zeta = 0;
  long sig_delta = 0;
  long sig_u_delta = 0;
  std::size_t dim_a = 0;
  int retries_used = 0;
  ZetaHypotheses hypotheses;
};

struct ZetaOptions {
  std::uint64_t seed = 0;
  int max_retries = 8;
  OracleTolerances tol{};
  double boundary_tol = 1e-8;
  bool boundary_check = true;
};

/// Signed count of cross-caps of p.f in {u >= 0}:
///   zeta = -(signature T_delta + signature T_{u delta}) / 2,
/// with T_h(a) = trace(h a^2) on the quotient algebra.
inline ZetaResult zeta(const CrossCapProblem& p, const Region& region, const ZetaOptions& opt = {}) {
  if (!same_variables(region.u.variable_list(), p.f.variables))
    throw DimensionError("region polynomial uses different variables");
  ZetaResult res;
  res.dim_a = p.dim_a();
  if (p.dim_a() == 0) {
    res.hypotheses.unit_pivot = true;
    res.hypotheses.theta_delta_nondegenerate = true;
    res.hypotheses.theta_u_delta_nondegenerate = true;
    res.hypotheses.boundary_regular = true;
    return res;
  }
  const std::size_t n = 2 * p.m() - 1;
  std::mt19937_64 rng(opt.seed);
  std::optional<IntMatrix> transform;
  DeltaData d;
  for (int attempt = 0;; ++attempt) {
    d = build_delta(p, transform);
    if (p.trace->generates_unit_ideal({d.pivot_minor})) {
      res.retries_used = attempt;
      break;
    }
    if (attempt >= opt.max_retries) throw HypothesisFailure("1 in I + <m(x)>", attempt);
    transform = random_unimodular(n, rng);
  }
  res.hypotheses.unit_pivot = true;

  const TraceContext& ctx = *p.trace;
  TraceForm theta_delta = ctx.trace_form(d.delta);
  res.hypotheses.theta_delta_nondegenerate = theta_delta.inertia.nondegenerate();
  if (!res.hypotheses.theta_delta_nondegenerate) throw DegenerateForm("Theta_delta");
  Polynomial u_delta = normal_form(normal_form(region.u, p.singular_gb) * d.delta, p.singular_gb);
  TraceForm theta_u_delta = ctx.trace_form(u_delta);
  res.hypotheses.theta_u_delta_nondegenerate = theta_u_delta.inertia.nondegenerate();
  if (!res.hypotheses.theta_u_delta_nondegenerate) throw DegenerateForm("Theta_u_delta");

  res.sig_delta = theta_delta.inertia.signature();
  res.sig_u_delta = theta_u_delta.inertia.signature();
  const long total = res.sig_delta + res.sig_u_delta;
  if (total % 2 != 0) throw HypothesisFailure("even signature sum", res.retries_used);
  res.zeta = -total / 2;

  if (opt.boundary_check) {
    try {
      bool regular = true;
      double worst = 0.0;
      for (const auto& pt : solve_singular_points(p.qa, p.mu, opt.seed, opt.tol)) {
        double val = evaluate(region.u, pt.coordinates);
        if (std::abs(val) < opt.boundary_tol) {
          regular = false;
          worst = val;
        }
      }
      res.hypotheses.boundary_regular = regular;
      if (!regular) throw BoundaryHit("a singular point lies on the region boundary", worst);
    } catch (const BoundaryHit&) {
      throw;
    } catch (const NumericFailure&) {
      res.hypotheses.boundary_regular.reset();
    }
  }
  return res;
}

inline ZetaResult zeta(const CrossCapProblem& p, const Region& region, std::uint64_t seed, int max_retries) {
  ZetaOptions opt;
  opt.seed = seed;
  opt.max_retries = max_retries;
  return zeta(p, region, opt);
}

/// Number of distinct real points of V(I): the signature of the trace form of 1.
inline long count_real(const CrossCapProblem& p) {
  if (p.dim_a() == 0) return 0;
  return signature(p.trace->trace_form_one()).signature();
}

/// Squared radius (ceil(max |point|) + 1)^2 over the approximate real singular points.
inline Rational large_radius_squared(const CrossCapProblem& p, std::uint64_t seed = 0,
                                     const OracleTolerances& tol = {}) {
  double maxnorm = 0.0;
  for (const auto& pt : solve_singular_points(p.qa, p.mu, seed, tol)) maxnorm = std::max(maxnorm, linalg::norm(pt.coordinates));
  long r = static_cast<long>(std::ceil(maxnorm)) + 1;
  return Rational(r * r);
}

struct TotalZeta {
  long zeta = 0;
  long positives = 0;
  long negatives = 0;
  long count = 0;
  Rational radius_sq = 0;
  ZetaResult detail;
};

inline TotalZeta total_zeta(const CrossCapProblem& p, const ZetaOptions& opt = {}) {
  TotalZeta t;
  t.radius_sq = large_radius_squared(p, opt.seed, opt.tol);
  t.detail = zeta(p, Region::ball(p.f.variables, t.radius_sq), opt);
  t.zeta = t.detail.zeta;
  t.count = count_real(p);
  if ((t.count + t.zeta) % 2 != 0) {
    std::ostringstream os;
    os << "parity mismatch: " << t.count << " real points but total zeta " << t.zeta;
    throw HypothesisFailure(os.str(), t.detail.retries_used);
  }
  t.positives = (t.count + t.zeta) / 2;
  t.negatives = t.count - t.positives;
  return t;
}

// ---------------------------------------------------------------------------
// Immersions of spheres

class NotImmersion : public Error {
 public:
  NotImmersion(const std::string& msg, std::vector<double> witness)
      : Error(ErrorCode::not_immersion, msg), witness_(std::move(witness)) {}
  const std::vector<double>& witness() const noexcept { return witness_; }

 private:
  std::vector<double> witness_;
};

/// (omega, g) with omega = x_1^2 + ... + x_m^2.
inline PolynomialMap augmented_map(const PolynomialMap& g) {
  const std::size_t m = g.num_variables();
  if (m < 3 || m % 2 == 0) throw DimensionError("the number of variables must be odd and at least 3");
  if (g.size() != 2 * m - 2)
    throw DimensionError("expected " + std::to_string(2 * m - 2) + " components, got " + std::to_string(g.size()));
  PolynomialMap out{g.variables, {Region::omega(g.variables)}};
  for (const auto& c : g.components) out.components.push_back(c);
  return out;
}

struct ImmersionReport {
  bool immersion = false;
  bool exact = false;  // decided by the ideal-membership test alone
  std::optional<std::vector<double>> witness;
};

/// Whether g restricted to the sphere |x|^2 = radius_sq is an immersion, i.e. D(omega, g)
/// has rank m along the sphere.
inline ImmersionReport immersion_check(const PolynomialMap& g, const Rational& radius_sq, std::uint64_t seed = 0,
                                       const OracleTolerances& tol = {}) {
  const PolynomialMap h = augmented_map(g);
  const std::size_t m = g.num_variables();
  const PolyMatrix dh = jacobian(h);
  std::vector<Polynomial> gens = minors(dh, m);
  gens.push_back(h[0] - Polynomial::constant(g.variables, radius_sq));
  GroebnerBasis gb = reduced_groebner(gens, g.variables);
  ImmersionReport rep;
  if (is_unit_ideal(gb)) {
    rep.immersion = rep.exact = true;
    return rep;
  }
  QuotientAlgebra qa = quotient_basis(gb);
  auto pts = solve_singular_points(qa, PolynomialMap{g.variables, gens}, seed, tol);
  if (pts.empty()) {
    rep.immersion = true;
    return rep;
  }
  rep.immersion = false;
  rep.witness = pts.front().coordinates;
  return rep;
}

struct IntersectionResult {
  long value = 0;
  ImmersionReport immersion;
  ZetaResult zeta;
};

inline std::string format_point(const std::vector<double>& x) {
  std::ostringstream os;
  os.precision(12);
  os << "(";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

inline ImmersionReport require_immersion(const PolynomialMap& g, const Rational& radius_sq, const ZetaOptions& opt) {
  ImmersionReport rep = immersion_check(g, radius_sq, opt.seed, opt.tol);
  if (!rep.immersion)
    throw NotImmersion("g is not an immersion on the sphere of radius^2 " + radius_sq.get_str() + "; rank drops at " +
                           format_point(*rep.witness),
                       *rep.witness);
  return rep;
}

/// Intersection number of the immersed sphere g(S(r)) as zeta of (omega, g) over the ball.
inline IntersectionResult intersection_number_detail(const PolynomialMap& g, const Rational& radius_sq,
                                                     const ZetaOptions& opt = {}) {
  IntersectionResult out;
  out.immersion = require_immersion(g, radius_sq, opt);
  CrossCapProblem p = build_problem(augmented_map(g));
  // Singular points of (omega, g) on the sphere are exactly the points where g fails
  // to immerse it; one within tolerance of the sphere is reported the same way.
  if (opt.boundary_check && p.dim_a() > 0) {
    const double r2 = to_double(radius_sq);
    try {
      for (const auto& pt : solve_singular_points(p.qa, p.mu, opt.seed, opt.tol)) {
        double gap = std::abs(evaluate(p.f[0], pt.coordinates) - r2);
        if (gap < opt.boundary_tol * std::max(1.0, r2))
          throw NotImmersion("rank of D(omega, g) drops within tolerance of the sphere of radius^2 " +
                                 radius_sq.get_str() + " at " + format_point(pt.coordinates),
                             pt.coordinates);
      }
    } catch (const NumericFailure&) {
    }
  }
  out.zeta = zeta(p, Region::ball(g.variables, radius_sq), opt);
  out.value = out.zeta.zeta;
  return out;
}

inline long intersection_number(const PolynomialMap& g, const Rational& radius_sq, const ZetaOptions& opt = {}) {
  return intersection_number_detail(g, radius_sq, opt).value;
}

/// I(g|S(r2)) - I(g|S(r1)) as zeta of (omega, g) over the closed annulus.
inline long intersection_difference(const PolynomialMap& g, const Rational& inner_sq, const Rational& outer_sq,
                                    const ZetaOptions& opt = {}) {
  if (!(inner_sq < outer_sq)) throw DimensionError("intersection_difference requires r1^2 < r2^2");
  require_immersion(g, inner_sq, opt);
  require_immersion(g, outer_sq, opt);
  CrossCapProblem p = build_problem(augmented_map(g));
  return zeta(p, Region::annulus(g.variables, inner_sq, outer_sq), opt).zeta;
}

}  // namespace crosscap

#endif  // CROSSCAP_CROSSCAP_HPP
