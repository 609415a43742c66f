#ifndef CROSSCAP_TESTS_ORACLES_HPP
#define CROSSCAP_TESTS_ORACLES_HPP

// Brute-force reference implementations used only by the tests. They share no
// code paths with the library beyond the Polynomial container.

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "crosscap/crosscap.hpp"

namespace oracle {

using crosscap::Monomial;
using crosscap::Polynomial;
using crosscap::PolyMatrix;
using crosscap::Rational;
using crosscap::RationalMatrix;

/// Leibniz expansion over all permutations.
inline Polynomial leibniz_determinant(const PolyMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Polynomial total(m.variable_list());
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    Polynomial term = Polynomial::constant(m.variable_list(), inversions % 2 ? -1 : 1);
    for (std::size_t i = 0; i < n; ++i) term = term * m(i, perm[i]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

inline Rational leibniz_determinant(const std::vector<std::vector<Rational>>& a) {
  const std::size_t n = a.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rational total = 0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    Rational term = inversions % 2 ? -1 : 1;
    for (std::size_t i = 0; i < n; ++i) term *= a[i][perm[i]];
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// Determinant by Gaussian elimination over Q.
inline Rational gauss_determinant(std::vector<std::vector<Rational>> a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (a[r][c] == 0) continue;
      Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

inline std::size_t gauss_rank(std::vector<std::vector<Rational>> a) {
  if (a.empty()) return 0;
  const std::size_t rows = a.size(), cols = a[0].size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][c] == 0) continue;
      Rational f = a[r][c] / a[rank][c];
      for (std::size_t k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return rank;
}

// ---------------------------------------------------------------------------
// Univariate polynomials over Q, coefficients lowest degree first.

using UPoly = std::vector<Rational>;

inline void trim(UPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Rational eval(const UPoly& p, const Rational& t) {
  Rational acc = 0;
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * t + p[i];
  return acc;
}

inline UPoly derivative(const UPoly& p) {
  UPoly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rational(static_cast<long>(i)));
  trim(d);
  return d;
}

/// Remainder of a by b (b nonzero).
inline UPoly remainder(UPoly a, const UPoly& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    Rational f = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    trim(a);
  }
  return a;
}

inline UPoly quotient(UPoly a, const UPoly& b) {
  trim(a);
  UPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
  while (a.size() >= b.size() && !a.empty()) {
    Rational f = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    q[shift] = f;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    trim(a);
  }
  return q;
}

inline UPoly gcd(UPoly a, UPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    UPoly r = remainder(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Rational lc = a.back();
    for (auto& c : a) c /= lc;
  }
  return a;
}

/// Sturm sequence of a square-free polynomial.
inline std::vector<UPoly> sturm_sequence(const UPoly& p) {
  std::vector<UPoly> seq{p, derivative(p)};
  while (!seq.back().empty()) {
    UPoly r = remainder(seq[seq.size() - 2], seq.back());
    for (auto& c : r) c = -c;
    if (r.empty()) break;
    seq.push_back(std::move(r));
  }
  return seq;
}

inline int sign_changes_at(const std::vector<UPoly>& seq, const Rational& t) {
  int changes = 0, last = 0;
  for (const auto& q : seq) {
    int s = sgn(eval(q, t));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

/// Distinct roots of a square-free p in (lo, hi], p(hi) != 0.
inline int roots_in(const std::vector<UPoly>& seq, const Rational& lo, const Rational& hi) {
  return sign_changes_at(seq, lo) - sign_changes_at(seq, hi);
}

/// Isolates every real root of the square-free p by bisection and returns the
/// number of negative and positive roots. p(0) must be nonzero.
inline std::pair<int, int> bisect_root_signs(const UPoly& p) {
  const auto seq = sturm_sequence(p);
  Rational bound = 1;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) bound += abs(p[i] / p.back());
  int neg = 0, pos = 0;
  std::vector<std::pair<Rational, Rational>> work{{-bound, bound}};
  while (!work.empty()) {
    auto [lo, hi] = work.back();
    work.pop_back();
    int k = roots_in(seq, lo, hi);
    if (k == 0) continue;
    if (k == 1 && (lo >= 0 || hi <= 0)) {
      (hi <= 0 ? neg : pos) += 1;
      continue;
    }
    Rational mid = (lo + hi) / 2;
    if (eval(p, mid) == 0) {
      // Nudge the split point off a root.
      mid = (lo + 3 * hi) / 4;
      if (eval(p, mid) == 0) mid = (3 * lo + hi) / 4;
    }
    if (lo < 0 && hi > 0 && eval(p, 0) != 0) mid = 0;
    work.push_back({lo, mid});
    work.push_back({mid, hi});
  }
  return {neg, pos};
}

/// det(tI - A) by evaluation at n+1 integer points and Lagrange interpolation.
inline UPoly interpolated_charpoly(const RationalMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<Rational> xs, ys;
  for (std::size_t k = 0; k <= n; ++k) {
    Rational t = static_cast<long>(k) - static_cast<long>(n / 2);
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m[i][j] = (i == j ? t : Rational(0)) - a(i, j);
    xs.push_back(t);
    ys.push_back(gauss_determinant(m));
  }
  UPoly result(n + 1, 0);
  for (std::size_t k = 0; k <= n; ++k) {
    UPoly basis{1};
    Rational denom = 1;
    for (std::size_t j = 0; j <= n; ++j) {
      if (j == k) continue;
      UPoly next(basis.size() + 1, 0);
      for (std::size_t i = 0; i < basis.size(); ++i) {
        next[i + 1] += basis[i];
        next[i] -= xs[j] * basis[i];
      }
      basis = std::move(next);
      denom *= xs[k] - xs[j];
    }
    for (std::size_t i = 0; i < basis.size(); ++i) result[i] += ys[k] * basis[i] / denom;
  }
  trim(result);
  return result;
}

/// Inertia of a symmetric rational matrix from its eigenvalue signs, located by
/// bisection on each square-free factor of the characteristic polynomial.
inline crosscap::Inertia bisection_inertia(const RationalMatrix& a) {
  UPoly p = interpolated_charpoly(a);
  crosscap::Inertia in;
  while (!p.empty() && p.front() == 0) {
    ++in.n_zero;
    p.erase(p.begin());
  }
  // Yun-style square-free decomposition: p = prod q_i^i.
  std::size_t multiplicity = 1;
  UPoly current = p;
  while (current.size() > 1) {
    UPoly g = gcd(current, derivative(current));
    UPoly squarefree = quotient(current, g);
    // Factor of exact multiplicity `multiplicity`: squarefree / gcd(squarefree, g).
    UPoly next_sf = gcd(squarefree, g);
    UPoly exact = quotient(squarefree, next_sf);
    if (exact.size() > 1) {
      auto [neg, pos] = bisect_root_signs(exact);
      in.n_minus += multiplicity * neg;
      in.n_plus += multiplicity * pos;
    }
    current = g;
    ++multiplicity;
  }
  return in;
}

// ---------------------------------------------------------------------------
// Groebner basis certificate

/// Multivariate division by a list of polynomials over Q, returning the remainder.
inline Polynomial divide_remainder(Polynomial p, const std::vector<Polynomial>& divisors) {
  Polynomial rem(p.variable_list());
  while (!p.is_zero()) {
    const Monomial lead = p.leading_monomial();
    const Rational lc = p.leading_coeff();
    bool divided = false;
    for (const auto& g : divisors) {
      if (lead.divisible_by(g.leading_monomial())) {
        p -= g.mul_term(lead.divided_by(g.leading_monomial()), lc / g.leading_coeff());
        divided = true;
        break;
      }
    }
    if (!divided) {
      rem += Polynomial::monomial(p.variable_list(), lead, lc);
      p -= Polynomial::monomial(p.variable_list(), lead, lc);
    }
  }
  return rem;
}

/// Buchberger's criterion: every S-polynomial reduces to zero.
inline bool s_pairs_reduce_to_zero(const std::vector<Polynomial>& g) {
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      const Monomial l = lcm(g[i].leading_monomial(), g[j].leading_monomial());
      Polynomial s = g[i].mul_term(l.divided_by(g[i].leading_monomial()), 1 / g[i].leading_coeff()) -
                     g[j].mul_term(l.divided_by(g[j].leading_monomial()), 1 / g[j].leading_coeff());
      if (!divide_remainder(s, g).is_zero()) return false;
    }
  return true;
}

/// Reducedness: monic, and no term of any element divisible by another leading monomial.
inline bool is_reduced(const std::vector<Polynomial>& g) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i].leading_coeff() != 1) return false;
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (i == j) continue;
      for (const auto& t : g[i].terms())
        if (t.monomial.divisible_by(g[j].leading_monomial())) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Random generators

inline Polynomial random_polynomial(const crosscap::VariableList& v, std::mt19937_64& rng, unsigned max_degree,
                                    int coeff_range, double density = 1.0) {
  std::uniform_int_distribution<int> coeff(-coeff_range, coeff_range);
  std::uniform_real_distribution<double> keep(0.0, 1.0);
  Polynomial p(v);
  const std::size_t n = v->size();
  Monomial m(n);
  std::function<void(std::size_t, unsigned)> walk = [&](std::size_t var, unsigned budget) {
    if (var == n) {
      if (keep(rng) <= density) p += Polynomial::monomial(v, m, coeff(rng));
      return;
    }
    for (unsigned e = 0; e <= budget; ++e) {
      m.set(var, e);
      walk(var + 1, budget - e);
    }
    m.set(var, 0);
  };
  walk(0, max_degree);
  return p;
}

inline RationalMatrix random_symmetric(std::size_t n, std::mt19937_64& rng, int range = 6) {
  std::uniform_int_distribution<int> num(-range, range), den(1, 4);
  RationalMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      Rational q(num(rng), den(rng));
      q.canonicalize();
      a(i, j) = q;
      a(j, i) = q;
    }
  return a;
}

/// Random symmetric matrix with a prescribed number of zero eigenvalues: B^T D B.
inline RationalMatrix random_symmetric_with_kernel(std::size_t n, std::size_t zeros, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-3, 3);
  RationalMatrix b(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b(i, j) = num(rng);
  RationalMatrix d(n, n);
  for (std::size_t i = zeros; i < n; ++i) d(i, i) = num(rng) >= 0 ? 1 : -1;
  return b.transpose() * d * b;
}

}  // namespace oracle

#endif  // CROSSCAP_TESTS_ORACLES_HPP
