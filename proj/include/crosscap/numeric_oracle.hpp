#ifndef CROSSCAP_NUMERIC_ORACLE_HPP
#define CROSSCAP_NUMERIC_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "crosscap/dense_linalg.hpp"
#include "crosscap/errors.hpp"
#include "crosscap/groebner.hpp"
#include "crosscap/polynomial.hpp"
#include "crosscap/trace_form.hpp"

namespace crosscap {

/// Tolerances of the floating-point layer.
struct OracleTolerances {
  double residual = 1e-8;     // accept a refined point when max |mu_i|, absolute or relative, is below this
  double dedup = 1e-6;        // points closer than this are the same point
  double determinant = 1e-8;  // smallest singular value of A1 relative to its largest column
  double rank = 1e-6;         // singular values below rank * largest count as zero
  double imaginary = 1e-6;    // eigenvalues with |Im| below imaginary * (1 + |Re|) count as real
};

struct ApproxPoint {
  std::vector<double> coordinates;
  double residual = 0.0;           // max |mu_i| at the point
  double relative_residual = 0.0;  // the same, relative to the size of the terms
  double condition = std::numeric_limits<double>::quiet_NaN();
};

struct SignedCrossCap {
  ApproxPoint point;
  int sign = 0;
  double det_value = 0.0;
};

struct CrossCapTotals {
  std::size_t count = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  long sum = 0;
  bool operator==(const CrossCapTotals&) const = default;
};

struct Classification {
  std::vector<SignedCrossCap> crosscaps;
  CrossCapTotals totals;
};

inline linalg::Matrix evaluate(const PolyMatrix& m, std::span<const double> x) {
  linalg::Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = evaluate(m(i, j), x);
  return out;
}

inline std::vector<double> evaluate(const PolynomialMap& f, std::span<const double> x) {
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = evaluate(f[i], x);
  return out;
}

inline linalg::Matrix to_double(const RationalMatrix& m) {
  linalg::Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).get_d();
  return out;
}

/// Singular values of a tall or square matrix, descending.
inline std::vector<double> singular_values(const linalg::Matrix& a) {
  auto eig = linalg::symmetric_eigen(a.transpose() * a);
  std::vector<double> s;
  for (std::size_t k = eig.values.size(); k-- > 0;) s.push_back(std::sqrt(std::max(0.0, eig.values[k])));
  return s;
}

inline std::size_t numerical_rank(const linalg::Matrix& a, double rel_tol) {
  auto s = singular_values(a.rows() >= a.cols() ? a : a.transpose());
  if (s.empty() || s.front() == 0.0) return 0;
  std::size_t r = 0;
  for (double v : s)
    if (v > rel_tol * s.front()) ++r;
  return r;
}

inline std::vector<long double> evaluate_extended(const PolynomialMap& f, std::span<const long double> x) {
  std::vector<long double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = evaluate(f[i], x);
  return out;
}

/// Backward error of x as a common zero of eqs: max_i |eqs_i(x)| / max(1, sum |c||x^a|)
/// over the terms of eqs_i.
inline double relative_residual(const PolynomialMap& eqs, std::span<const double> x) {
  std::vector<long double> ax(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) ax[i] = std::abs(static_cast<long double>(x[i]));
  std::vector<long double> xe(x.begin(), x.end());
  long double worst = 0;
  for (const auto& e : eqs.components) {
    long double scale = 0;
    for (const auto& t : e.terms()) {
      long double v = std::abs(static_cast<long double>(t.coeff.get_d()));
      for (std::size_t i = 0; i < x.size(); ++i) v *= std::pow(ax[i], static_cast<long double>(t.monomial[i]));
      scale += v;
    }
    worst = std::max(worst, std::abs(evaluate(e, std::span<const long double>(xe))) / std::max<long double>(1, scale));
  }
  return static_cast<double>(worst);
}

struct RefinedPoint {
  std::vector<double> x;
  double residual = 0.0;  // max |eqs(x)|
};

/// Damped Gauss-Newton on the overdetermined system eqs = 0. Residuals and iterates
/// are kept in extended precision; the Euclidean residual never increases, and
/// `history` (if given) receives max |eqs| after every accepted step.
inline RefinedPoint refine_point(const PolynomialMap& eqs, const PolyMatrix& jac, const std::vector<double>& start,
                                 std::vector<double>* history = nullptr, int max_iterations = 50) {
  using Ext = long double;
  std::vector<Ext> x(start.begin(), start.end());
  auto sq_norm = [](const std::vector<Ext>& v) {
    Ext s = 0;
    for (Ext t : v) s += t * t;
    return s;
  };
  auto max_abs = [](const std::vector<Ext>& v) {
    Ext m = 0;
    for (Ext t : v) m = std::max(m, std::abs(t));
    return static_cast<double>(m);
  };
  auto r = evaluate_extended(eqs, x);
  Ext rn = sq_norm(r);
  if (history) history->push_back(max_abs(r));
  for (int it = 0; it < max_iterations && rn > 0; ++it) {
    std::vector<double> xd(x.begin(), x.end()), neg(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) neg[i] = -static_cast<double>(r[i]);
    const auto step = linalg::least_squares(evaluate(jac, xd), neg);
    bool accepted = false;
    double lambda = 1.0;
    for (int h = 0; h < 30; ++h, lambda *= 0.5) {
      std::vector<Ext> y = x;
      for (std::size_t i = 0; i < y.size(); ++i) y[i] += static_cast<Ext>(lambda) * step[i];
      auto ry = evaluate_extended(eqs, y);
      const Ext ryn = sq_norm(ry);
      if (std::isfinite(static_cast<double>(ryn)) && ryn < rn) {
        x = std::move(y);
        r = std::move(ry);
        rn = ryn;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    if (history) history->push_back(max_abs(r));
    if (linalg::norm(step) * lambda <= 1e-18 * (1.0 + linalg::norm(xd))) break;
  }
  return {std::vector<double>(x.begin(), x.end()), max_abs(r)};
}

/// Approximate real points of V(I) for a zero-dimensional ideal I with quotient `qa`,
/// where `mu` lists polynomials generating I (used for refinement and residuals).
///
/// Eigenvectors of the transposed multiplication matrix of a random linear form are
/// evaluation vectors of the points; each coordinate is the Rayleigh quotient of the
/// corresponding transposed coordinate multiplication matrix.
inline std::vector<ApproxPoint> solve_singular_points(const QuotientAlgebra& qa, const PolynomialMap& mu,
                                                      std::uint64_t seed, const OracleTolerances& tol = {},
                                                      const PolyMatrix* df = nullptr) {
  const std::size_t d = qa.dimension();
  const std::size_t n = qa.variables()->size();
  if (d == 0) return {};
  std::vector<linalg::Matrix> mx_t;
  for (const auto& mx : variable_multiplication_matrices(qa)) mx_t.push_back(to_double(mx).transpose());

  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + 12345);
  std::uniform_int_distribution<int> coef(-97, 97);
  std::vector<double> c(n);
  do {
    for (auto& ci : c) ci = coef(rng) / 97.0;
  } while (linalg::max_abs(c) == 0.0);
  linalg::Matrix combo(d, d);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) combo(i, j) += c[v] * mx_t[v](i, j);

  const auto lambdas = linalg::eigenvalues(combo);
  const PolyMatrix jmu = jacobian(mu);
  std::vector<ApproxPoint> points;
  for (const auto& lam : lambdas) {
    if (std::abs(lam.imag()) > tol.imaginary * (1.0 + std::abs(lam.real()))) continue;
    auto w = linalg::eigenvector(combo, lam.real());
    const double ww = linalg::dot(w, w);
    if (!(ww > 0.0)) continue;
    std::vector<double> x(n);
    for (std::size_t v = 0; v < n; ++v) x[v] = linalg::dot(w, mx_t[v] * w) / ww;
    auto refined = refine_point(mu, jmu, x);
    x = std::move(refined.x);
    const double res = refined.residual;
    const double rel = relative_residual(mu, x);
    if (!(res < tol.residual || rel < tol.residual)) continue;
    bool duplicate = false;
    for (const auto& p : points) {
      double dist = 0.0;
      for (std::size_t v = 0; v < n; ++v) dist = std::hypot(dist, p.coordinates[v] - x[v]);
      if (dist < tol.dedup) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) continue;
    ApproxPoint p{x, res, rel, std::numeric_limits<double>::quiet_NaN()};
    if (df) {
      auto s = singular_values(evaluate(*df, x));
      if (s.size() >= 2) p.condition = s[s.size() - 2];
    }
    points.push_back(std::move(p));
  }
  std::sort(points.begin(), points.end(),
            [](const ApproxPoint& a, const ApproxPoint& b) { return a.coordinates < b.coordinates; });
  return points;
}

namespace detail {

/// Orthonormal basis of R^m whose first column is the unit vector `v`, completed by
/// Gram-Schmidt over the standard basis with pivoting on the largest residual, and
/// oriented so that its determinant is positive.
inline linalg::Matrix oriented_frame(const std::vector<double>& v) {
  const std::size_t m = v.size();
  linalg::Matrix phi(m, m);
  phi.set_column(0, v);
  std::vector<bool> used(m, false);
  for (std::size_t col = 1; col < m; ++col) {
    std::vector<double> best;
    double best_norm = -1.0;
    std::size_t best_k = 0;
    for (std::size_t k = 0; k < m; ++k) {
      if (used[k]) continue;
      std::vector<double> e(m, 0.0);
      e[k] = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t c = 0; c < col; ++c) {
          auto q = phi.column(c);
          double proj = linalg::dot(q, e);
          for (std::size_t i = 0; i < m; ++i) e[i] -= proj * q[i];
        }
      double nr = linalg::norm(e);
      if (nr > best_norm) {
        best_norm = nr;
        best = std::move(e);
        best_k = k;
      }
    }
    used[best_k] = true;
    for (auto& x : best) x /= best_norm;
    phi.set_column(col, best);
  }
  if (linalg::determinant(phi) < 0.0) {
    for (std::size_t i = 0; i < m; ++i) phi(i, m - 1) = -phi(i, m - 1);
  }
  return phi;
}

}  // namespace detail

/// Second-derivative tensor of a map: hessians[i](a, b) = d^2 f_i / dx_a dx_b.
struct MapDerivatives {
  PolyMatrix first;
  std::vector<PolyMatrix> second;

  explicit MapDerivatives(const PolynomialMap& f) : first(jacobian(f)) {
    const std::size_t m = f.num_variables();
    for (std::size_t i = 0; i < f.size(); ++i) {
      PolyMatrix h(m, m, f.variables);
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) h(a, b) = differentiate(first(i, a), b);
      second.push_back(std::move(h));
    }
  }
};

/// Sign of a cross-cap at an approximate singular point.
///
/// In linear coordinates x = p + Phi y with Phi's first column spanning ker Df(p) and
/// det Phi > 0, let w_j be the columns of D(f o Phi). The matrix
///   A1 = [w_2(0) .. w_m(0), dw_1/dy_1(0) .. dw_1/dy_m(0)]
/// is invertible at a cross-cap, and the cross-cap is positive iff det A1 < 0.
inline SignedCrossCap crosscap_sign_at(const MapDerivatives& d, const ApproxPoint& point,
                                       const OracleTolerances& tol = {},
                                       const std::vector<double>* kernel_override = nullptr) {
  const auto& x = point.coordinates;
  const std::size_t m = x.size();
  const std::size_t n = d.first.rows();
  const linalg::Matrix df = evaluate(d.first, x);
  auto eig = linalg::symmetric_eigen(df.transpose() * df);
  const double smax = std::sqrt(std::max(0.0, eig.values.back()));
  const double s0 = std::sqrt(std::max(0.0, eig.values[0]));
  const double s1 = m >= 2 ? std::sqrt(std::max(0.0, eig.values[1])) : smax;
  if (!(smax > 0.0) || s0 > tol.rank * smax || s1 <= tol.rank * smax)
    throw RankTestFailure("Jacobian does not have corank exactly one at the point");
  std::vector<double> v = kernel_override ? *kernel_override : eig.vectors.column(0);
  const double vn = linalg::norm(v);
  for (auto& t : v) t /= vn;
  const linalg::Matrix phi = detail::oriented_frame(v);

  std::vector<linalg::Matrix> hess;
  for (const auto& h : d.second) hess.push_back(evaluate(h, x));

  linalg::Matrix a1(n, n);
  std::size_t col = 0;
  for (std::size_t j = 1; j < m; ++j) a1.set_column(col++, df * phi.column(j));
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> w(n, 0.0);
    const auto pj = phi.column(j);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) s += hess[i](a, b) * v[a] * pj[b];
      w[i] = s;
    }
    a1.set_column(col++, w);
  }
  const double det = linalg::determinant(a1);
  // Degenerate when A1 is numerically singular: smallest singular value against
  // the largest column norm.
  double colmax = 0.0;
  for (std::size_t j = 0; j < n; ++j) colmax = std::max(colmax, linalg::norm(a1.column(j)));
  const double smin = singular_values(a1).back();
  if (!(smin > tol.determinant * colmax))
    throw DegenerateDeterminant("cross-cap determinant vanishes: not a cross-cap", det);
  SignedCrossCap out{point, det > 0.0 ? -1 : 1, det};
  out.point.condition = s1;
  return out;
}

inline SignedCrossCap crosscap_sign_at(const PolynomialMap& f, const ApproxPoint& point,
                                       const OracleTolerances& tol = {}) {
  return crosscap_sign_at(MapDerivatives(f), point, tol);
}

inline CrossCapTotals totals_of(const std::vector<SignedCrossCap>& caps) {
  CrossCapTotals t;
  t.count = caps.size();
  for (const auto& c : caps) {
    if (c.sign > 0) ++t.positives;
    else ++t.negatives;
    t.sum += c.sign;
  }
  return t;
}

/// Locates every real singular point of f and classifies each cross-cap.
inline Classification classify_all(const PolynomialMap& f, const QuotientAlgebra& qa, const PolynomialMap& mu,
                                   std::uint64_t seed, const OracleTolerances& tol = {}) {
  MapDerivatives d(f);
  Classification out;
  for (const auto& p : solve_singular_points(qa, mu, seed, tol, &d.first))
    out.crosscaps.push_back(crosscap_sign_at(d, p, tol));
  out.totals = totals_of(out.crosscaps);
  return out;
}

}  // namespace crosscap

#endif  // CROSSCAP_NUMERIC_ORACLE_HPP
