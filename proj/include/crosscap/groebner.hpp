#ifndef CROSSCAP_GROEBNER_HPP
#define CROSSCAP_GROEBNER_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "crosscap/errors.hpp"
#include "crosscap/polynomial.hpp"

namespace crosscap {

/// Reduced, monic Groebner basis under degrevlex, sorted by increasing leading monomial.
/// Canonical for the ideal, so two bases compare equal iff the ideals are equal.
struct GroebnerBasis {
  VariableList variables;
  std::vector<Polynomial> generators;

  bool operator==(const GroebnerBasis& o) const {
    return same_variables(variables, o.variables) && generators == o.generators;
  }
};

namespace detail {

struct ITerm {
  Monomial m;
  mpz_class c;
};
using IPoly = std::vector<ITerm>;

/// Bitmask of variables occurring in a monomial, for fast divisibility rejection.
inline std::uint32_t support_mask(const Monomial& m) {
  std::uint32_t s = 0;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i] != 0) s |= 1u << i;
  return s;
}

inline IPoly to_integer_poly(const Polynomial& p) {
  Polynomial q = primitive_part(p);
  IPoly out;
  out.reserve(q.size());
  for (const auto& t : q.terms()) out.push_back({t.monomial, t.coeff.get_num()});
  return out;
}

inline void make_primitive(IPoly& p) {
  if (p.empty()) return;
  mpz_class g = 0;
  for (const auto& t : p) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.c.get_mpz_t());
    if (g == 1) break;
  }
  if (p.front().c < 0) g = -g;
  if (g != 1)
    for (auto& t : p) mpz_divexact(t.c.get_mpz_t(), t.c.get_mpz_t(), g.get_mpz_t());
}

struct Reducer {
  IPoly poly;
  Monomial lead;
  std::uint32_t mask;
  unsigned sugar;
};

/// Integer-coefficient polynomial reduction against a list of reducers.
class IntegerReduction {
 public:
  explicit IntegerReduction(const std::vector<Reducer>& reducers, const std::vector<bool>* active)
      : reducers_(reducers), active_(active) {}

  /// Full reduction; if `skip_self` is given, that reducer is never used.
  IPoly reduce(IPoly p, unsigned& sugar, const Reducer* skip_self = nullptr) const {
    IPoly rest;
    std::size_t steps = 0;
    IPoly scratch;
    while (!p.empty()) {
      const Monomial lead = p.front().m;
      const Reducer* r = nullptr;
      {
        const std::uint32_t mm = support_mask(lead);
        for (std::size_t i = 0; i < reducers_.size(); ++i) {
          if (active_ && !(*active_)[i]) continue;
          const Reducer& cand = reducers_[i];
          if (&cand == skip_self) continue;
          if ((cand.mask & ~mm) != 0) continue;
          if (lead.divisible_by(cand.lead)) {
            r = &cand;
            break;
          }
        }
      }
      if (r == nullptr) {
        rest.push_back(std::move(p.front()));
        p.erase(p.begin());
        continue;
      }
      const Monomial shift = lead.divided_by(r->lead);
      sugar = std::max(sugar, r->sugar + shift.degree());
      mpz_class g, a, b;
      mpz_gcd(g.get_mpz_t(), r->poly.front().c.get_mpz_t(), p.front().c.get_mpz_t());
      mpz_divexact(a.get_mpz_t(), r->poly.front().c.get_mpz_t(), g.get_mpz_t());
      mpz_divexact(b.get_mpz_t(), p.front().c.get_mpz_t(), g.get_mpz_t());
      // p <- a*p - b*shift*r  (leading terms cancel)
      scratch.clear();
      scratch.reserve(p.size() + r->poly.size());
      std::size_t i = 1, j = 1;
      const IPoly& q = r->poly;
      const bool scale = a != 1;
      while (i < p.size() || j < q.size()) {
        int c;
        Monomial qm;
        if (j < q.size()) qm = q[j].m * shift;
        if (i == p.size()) c = -1;
        else if (j == q.size()) c = 1;
        else c = compare(p[i].m, qm);
        if (c > 0) {
          if (scale) p[i].c *= a;
          scratch.push_back(std::move(p[i]));
          ++i;
        } else if (c < 0) {
          ITerm t{qm, 0};
          mpz_mul(t.c.get_mpz_t(), b.get_mpz_t(), q[j].c.get_mpz_t());
          t.c = -t.c;
          scratch.push_back(std::move(t));
          ++j;
        } else {
          ITerm t{qm, 0};
          mpz_mul(t.c.get_mpz_t(), p[i].c.get_mpz_t(), a.get_mpz_t());
          mpz_submul(t.c.get_mpz_t(), b.get_mpz_t(), q[j].c.get_mpz_t());
          if (t.c != 0) scratch.push_back(std::move(t));
          ++i;
          ++j;
        }
      }
      std::swap(p, scratch);
      if (scale)
        for (auto& t : rest) t.c *= a;
      if (++steps % 16 == 0) remove_joint_content(rest, p);
    }
    make_primitive(rest);
    return rest;
  }

 private:
  static void remove_joint_content(IPoly& a, IPoly& b) {
    mpz_class g = 0;
    for (const auto* v : {&a, &b})
      for (const auto& t : *v) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.c.get_mpz_t());
        if (g == 1) return;
      }
    if (g == 0 || g == 1) return;
    for (auto* v : {&a, &b})
      for (auto& t : *v) mpz_divexact(t.c.get_mpz_t(), t.c.get_mpz_t(), g.get_mpz_t());
  }

  const std::vector<Reducer>& reducers_;
  const std::vector<bool>* active_;
};

struct CriticalPair {
  std::size_t i, j;
  Monomial lcm;
  unsigned sugar;
};

inline IPoly s_polynomial(const Reducer& f, const Reducer& g, const Monomial& l) {
  const Monomial sf = l.divided_by(f.lead), sg = l.divided_by(g.lead);
  mpz_class gc, a, b;
  mpz_gcd(gc.get_mpz_t(), f.poly.front().c.get_mpz_t(), g.poly.front().c.get_mpz_t());
  mpz_divexact(a.get_mpz_t(), g.poly.front().c.get_mpz_t(), gc.get_mpz_t());
  mpz_divexact(b.get_mpz_t(), f.poly.front().c.get_mpz_t(), gc.get_mpz_t());
  // a*sf*f - b*sg*g
  IPoly out;
  std::size_t i = 1, j = 1;
  while (i < f.poly.size() || j < g.poly.size()) {
    int c;
    Monomial fm, gm;
    if (i < f.poly.size()) fm = f.poly[i].m * sf;
    if (j < g.poly.size()) gm = g.poly[j].m * sg;
    if (i == f.poly.size()) c = -1;
    else if (j == g.poly.size()) c = 1;
    else c = compare(fm, gm);
    if (c > 0) {
      out.push_back({fm, a * f.poly[i].c});
      ++i;
    } else if (c < 0) {
      out.push_back({gm, -(b * g.poly[j].c)});
      ++j;
    } else {
      mpz_class v = a * f.poly[i].c - b * g.poly[j].c;
      if (v != 0) out.push_back({fm, std::move(v)});
      ++i;
      ++j;
    }
  }
  make_primitive(out);
  return out;
}

/// Buchberger's algorithm with the Gebauer-Moeller criteria and normal selection.
class Buchberger {
 public:
  explicit Buchberger(VariableList vars) : vars_(std::move(vars)) {}

  GroebnerBasis run(const std::vector<Polynomial>& input) {
    std::vector<IPoly> gens;
    for (const auto& p : input) {
      if (!same_variables(p.variable_list(), vars_))
        throw DimensionError("generators over different variable lists");
      if (!p.is_zero()) gens.push_back(to_integer_poly(p));
    }
    std::sort(gens.begin(), gens.end(),
              [](const IPoly& a, const IPoly& b) { return compare(a.front().m, b.front().m) < 0; });
    for (auto& g : gens) {
      unsigned sugar = 0;
      for (const auto& t : g) sugar = std::max(sugar, t.m.degree());
      IntegerReduction red(basis_, &active_);
      IPoly h = red.reduce(std::move(g), sugar);
      if (h.empty()) continue;
      if (h.front().m.is_one()) return unit();
      update(std::move(h), sugar);
    }
    while (!pairs_.empty()) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < pairs_.size(); ++k) {
        int c = compare(pairs_[k].lcm, pairs_[best].lcm);
        if (c < 0 || (c == 0 && pairs_[k].sugar < pairs_[best].sugar)) best = k;
      }
      CriticalPair pair = pairs_[best];
      pairs_[best] = pairs_.back();
      pairs_.pop_back();
      IPoly s = s_polynomial(basis_[pair.i], basis_[pair.j], pair.lcm);
      unsigned sugar = pair.sugar;
      IntegerReduction red(basis_, &active_);
      IPoly h = red.reduce(std::move(s), sugar);
      if (h.empty()) continue;
      if (h.front().m.is_one()) return unit();
      update(std::move(h), sugar);
    }
    return finish();
  }

 private:
  GroebnerBasis unit() const {
    return GroebnerBasis{vars_, {Polynomial::constant(vars_, 1)}};
  }

  void update(IPoly h, unsigned sugar) {
    const Monomial lh = h.front().m;
    const std::size_t hi = basis_.size();
    basis_.push_back(Reducer{std::move(h), lh, support_mask(lh), sugar});
    active_.push_back(true);

    struct Cand {
      std::size_t g;
      Monomial lcm;
      bool coprime;
      bool keep = true;
    };
    std::vector<Cand> cands;
    for (std::size_t g = 0; g < hi; ++g) {
      if (!active_[g]) continue;
      cands.push_back({g, lcm(lh, basis_[g].lead), coprime(lh, basis_[g].lead)});
    }
    // Chain criterion among the new pairs: drop (h,g1) if some other new pair's lcm
    // properly divides it (ties broken by index so exactly one survivor remains).
    for (std::size_t a = 0; a < cands.size(); ++a) {
      if (cands[a].coprime) continue;
      for (std::size_t b = 0; b < cands.size(); ++b) {
        if (a == b || !cands[b].keep) continue;
        if (cands[a].lcm.divisible_by(cands[b].lcm)) {
          if (!(cands[a].lcm == cands[b].lcm) || b < a) {
            cands[a].keep = false;
            break;
          }
        }
      }
    }
    // Product criterion: pairs whose lcm equals the lcm of a coprime pair are dropped.
    std::vector<CriticalPair> fresh;
    for (std::size_t a = 0; a < cands.size(); ++a) {
      if (!cands[a].keep || cands[a].coprime) continue;
      bool dominated = false;
      for (const auto& c : cands)
        if (c.coprime && c.lcm == cands[a].lcm) {
          dominated = true;
          break;
        }
      if (dominated) continue;
      const Reducer& g = basis_[cands[a].g];
      unsigned s1 = sugar + (cands[a].lcm.degree() - lh.degree());
      unsigned s2 = g.sugar + (cands[a].lcm.degree() - g.lead.degree());
      fresh.push_back({cands[a].g, hi, cands[a].lcm, std::max(s1, s2)});
    }
    // Old pairs made redundant by the new element.
    std::vector<CriticalPair> kept;
    kept.reserve(pairs_.size() + fresh.size());
    for (auto& p : pairs_) {
      if (p.lcm.divisible_by(lh) && !(lcm(basis_[p.i].lead, lh) == p.lcm) &&
          !(lcm(basis_[p.j].lead, lh) == p.lcm))
        continue;
      kept.push_back(std::move(p));
    }
    for (auto& p : fresh) kept.push_back(std::move(p));
    pairs_ = std::move(kept);
    for (std::size_t g = 0; g < hi; ++g)
      if (active_[g] && basis_[g].lead.divisible_by(lh)) active_[g] = false;
  }

  GroebnerBasis finish() {
    std::vector<Reducer> minimal;
    for (std::size_t g = 0; g < basis_.size(); ++g)
      if (active_[g]) minimal.push_back(basis_[g]);
    std::sort(minimal.begin(), minimal.end(),
              [](const Reducer& a, const Reducer& b) { return compare(a.lead, b.lead) < 0; });
    // Inter-reduce: leading monomials are minimal, so reducing each element by the
    // others only rewrites its tail.
    for (std::size_t k = 0; k < minimal.size(); ++k) {
      IntegerReduction red(minimal, nullptr);
      unsigned sugar = 0;
      minimal[k].poly = red.reduce(minimal[k].poly, sugar, &minimal[k]);
    }
    GroebnerBasis gb{vars_, {}};
    for (const auto& r : minimal) {
      std::vector<Term> terms;
      terms.reserve(r.poly.size());
      for (const auto& t : r.poly) terms.push_back({t.m, Rational(t.c)});
      gb.generators.push_back(
          Polynomial::from_sorted_terms(vars_, std::move(terms)).monic());
    }
    return gb;
  }

  VariableList vars_;
  std::vector<Reducer> basis_;
  std::vector<bool> active_;
  std::vector<CriticalPair> pairs_;
};

}  // namespace detail

/// Reduced Groebner basis of the ideal generated by `generators` (degrevlex).
inline GroebnerBasis reduced_groebner(const std::vector<Polynomial>& generators,
                                      VariableList variables = nullptr) {
  if (!variables) {
    if (generators.empty()) throw DimensionError("variables required for an empty generator list");
    variables = generators.front().variable_list();
  }
  return detail::Buchberger(variables).run(generators);
}

inline bool is_unit_ideal(const GroebnerBasis& gb) {
  return gb.generators.size() == 1 && gb.generators.front().is_constant() &&
         !gb.generators.front().is_zero();
}

/// Complete reduction of `p` modulo `gb`: no term of the result is divisible by a
/// leading monomial of `gb`.
inline Polynomial normal_form(const Polynomial& p, const GroebnerBasis& gb) {
  if (!same_variables(p.variable_list(), gb.variables))
    throw DimensionError("normal_form: variable lists differ");
  if (is_unit_ideal(gb)) return Polynomial(p.variable_list());
  if (gb.generators.empty() || p.is_zero()) return p;
  std::vector<std::uint32_t> masks;
  masks.reserve(gb.generators.size());
  for (const auto& g : gb.generators) masks.push_back(detail::support_mask(g.leading_monomial()));

  std::vector<Term> work = p.terms();
  std::vector<Term> rest;
  std::vector<Term> scratch;
  std::size_t head = 0;
  while (head < work.size()) {
    const Monomial lead = work[head].monomial;
    const std::uint32_t mm = detail::support_mask(lead);
    const Polynomial* red = nullptr;
    for (std::size_t k = 0; k < gb.generators.size(); ++k) {
      if ((masks[k] & ~mm) != 0) continue;
      if (lead.divisible_by(gb.generators[k].leading_monomial())) {
        red = &gb.generators[k];
        break;
      }
    }
    if (!red) {
      rest.push_back(std::move(work[head]));
      ++head;
      continue;
    }
    const Monomial shift = lead.divided_by(red->leading_monomial());
    const Rational c = work[head].coeff;
    scratch.clear();
    std::size_t i = head + 1, j = 1;
    const auto& q = red->terms();
    while (i < work.size() || j < q.size()) {
      int cmp;
      Monomial qm;
      if (j < q.size()) qm = q[j].monomial * shift;
      if (i == work.size()) cmp = -1;
      else if (j == q.size()) cmp = 1;
      else cmp = compare(work[i].monomial, qm);
      if (cmp > 0) {
        scratch.push_back(std::move(work[i++]));
      } else if (cmp < 0) {
        scratch.push_back({qm, -(c * q[j].coeff)});
        ++j;
      } else {
        Rational v = work[i].coeff - c * q[j].coeff;
        if (v != 0) scratch.push_back({qm, std::move(v)});
        ++i;
        ++j;
      }
    }
    std::swap(work, scratch);
    head = 0;
  }
  return Polynomial::from_sorted_terms(p.variable_list(), std::move(rest));
}

/// The staircase of a zero-dimensional ideal: standard monomials of `gb`, a vector
/// space basis of the quotient ring, sorted by increasing degrevlex order.
struct QuotientAlgebra {
  GroebnerBasis gb;
  std::vector<Monomial> basis;

  std::size_t dimension() const noexcept { return basis.size(); }
  const VariableList& variables() const noexcept { return gb.variables; }

  std::optional<std::size_t> index_of(const Monomial& m) const {
    auto it = std::lower_bound(basis.begin(), basis.end(), m,
                               [](const Monomial& a, const Monomial& b) { return a < b; });
    if (it != basis.end() && *it == m) return static_cast<std::size_t>(it - basis.begin());
    return std::nullopt;
  }

  /// Coordinates of an already reduced polynomial in the staircase basis.
  std::vector<Rational> coordinates(const Polynomial& reduced) const {
    std::vector<Rational> v(basis.size());
    for (const auto& t : reduced.terms()) {
      auto idx = index_of(t.monomial);
      if (!idx) throw DimensionError("polynomial is not in normal form");
      v[*idx] = t.coeff;
    }
    return v;
  }

  Polynomial from_coordinates(const std::vector<Rational>& v) const {
    std::vector<Term> terms;
    for (std::size_t i = v.size(); i-- > 0;)
      if (v[i] != 0) terms.push_back({basis[i], v[i]});
    return Polynomial::from_sorted_terms(gb.variables, std::move(terms));
  }
};

inline QuotientAlgebra quotient_basis(const GroebnerBasis& gb) {
  QuotientAlgebra qa{gb, {}};
  if (is_unit_ideal(gb)) return qa;
  const std::size_t n = gb.variables->size();
  // Every variable needs a pure power among the leading monomials.
  std::vector<unsigned> bound(n, 0);
  for (const auto& g : gb.generators) {
    const Monomial& lm = g.leading_monomial();
    std::size_t nonzero = 0, which = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (lm[i] != 0) {
        ++nonzero;
        which = i;
      }
    if (nonzero == 1 && (bound[which] == 0 || lm[which] < bound[which])) bound[which] = lm[which];
  }
  for (std::size_t i = 0; i < n; ++i)
    if (bound[i] == 0)
      throw InfiniteDimension("quotient algebra is infinite dimensional: no pure power of " +
                              (*gb.variables)[i] + " among the leading monomials");
  auto standard = [&](const Monomial& m) {
    for (const auto& g : gb.generators)
      if (m.divisible_by(g.leading_monomial())) return false;
    return true;
  };
  // Depth-first walk over the box bounded by the pure powers.
  Monomial m(n);
  std::vector<Monomial> found;
  std::function<void(std::size_t)> walk = [&](std::size_t var) {
    if (var == n) {
      if (standard(m)) found.push_back(m);
      return;
    }
    for (unsigned e = 0; e < bound[var]; ++e) {
      m.set(var, e);
      // Order ideal: once a monomial is non-standard, raising this exponent stays so.
      Monomial probe = m;
      for (std::size_t k = var + 1; k < n; ++k) probe.set(k, 0);
      if (!standard(probe)) break;
      walk(var + 1);
    }
    m.set(var, 0);
  };
  walk(0);
  std::sort(found.begin(), found.end());
  qa.basis = std::move(found);
  return qa;
}

}  // namespace crosscap

#endif  // CROSSCAP_GROEBNER_HPP
