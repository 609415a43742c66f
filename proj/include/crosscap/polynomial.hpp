#ifndef CROSSCAP_POLYNOMIAL_HPP
#define CROSSCAP_POLYNOMIAL_HPP

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <utility>
#include <vector>

#include "crosscap/errors.hpp"
#include "crosscap/monomial.hpp"

namespace crosscap {

/// Exact rational scalar. GMP keeps it canonical (reduced, positive denominator).
using Rational = mpq_class;

using VariableList = std::shared_ptr<const std::vector<std::string>>;

inline VariableList make_variables(std::vector<std::string> names) {
  return std::make_shared<const std::vector<std::string>>(std::move(names));
}

inline bool same_variables(const VariableList& a, const VariableList& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

inline std::string rational_to_string(const Rational& q) { return q.get_str(); }

inline double to_double(const Rational& q) { return q.get_d(); }

struct Term {
  Monomial monomial;
  Rational coeff;
};

/// Sparse multivariate polynomial over the rationals.
///
/// Terms are kept sorted by strictly decreasing degrevlex order with no zero
/// coefficients, so two polynomials over the same variables are equal exactly
/// when their term vectors are equal.
class Polynomial {
 public:
  Polynomial() : vars_(make_variables({})) {}
  explicit Polynomial(VariableList vars) : vars_(std::move(vars)) {}

  static Polynomial constant(VariableList vars, const Rational& c) {
    Polynomial p(std::move(vars));
    if (c != 0) p.terms_.push_back({Monomial(p.num_variables()), c});
    return p;
  }

  static Polynomial variable(VariableList vars, std::size_t index) {
    Polynomial p(std::move(vars));
    if (index >= p.num_variables()) throw DimensionError("variable index out of range");
    p.terms_.push_back({Monomial::variable(p.num_variables(), index), Rational(1)});
    return p;
  }

  static Polynomial monomial(VariableList vars, const Monomial& m, const Rational& c = 1) {
    Polynomial p(std::move(vars));
    if (c != 0) p.terms_.push_back({m, c});
    return p;
  }

  /// Builds the canonical form from an arbitrary list of terms (merging duplicates).
  static Polynomial from_terms(VariableList vars, std::vector<Term> terms) {
    Polynomial p(std::move(vars));
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.monomial > b.monomial; });
    for (auto& t : terms) {
      if (t.monomial.size() != p.num_variables())
        throw DimensionError("monomial length does not match variable count");
      if (!p.terms_.empty() && p.terms_.back().monomial == t.monomial) {
        p.terms_.back().coeff += t.coeff;
        if (p.terms_.back().coeff == 0) p.terms_.pop_back();
      } else if (t.coeff != 0) {
        p.terms_.push_back(std::move(t));
      }
    }
    return p;
  }

  /// Trusts that `terms` is already canonical.
  static Polynomial from_sorted_terms(VariableList vars, std::vector<Term> terms) {
    Polynomial p(std::move(vars));
    p.terms_ = std::move(terms);
    return p;
  }

  const VariableList& variable_list() const noexcept { return vars_; }
  const std::vector<std::string>& variables() const noexcept { return *vars_; }
  std::size_t num_variables() const noexcept { return vars_->size(); }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].monomial.is_one());
  }
  const Term& leading_term() const { return terms_.front(); }
  const Monomial& leading_monomial() const { return terms_.front().monomial; }
  const Rational& leading_coeff() const { return terms_.front().coeff; }

  unsigned total_degree() const noexcept {
    unsigned d = 0;
    for (const auto& t : terms_) d = std::max(d, t.monomial.degree());
    return d;
  }

  /// Coefficient of `m` (zero when absent).
  Rational coeff(const Monomial& m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, const Monomial& key) { return t.monomial > key; });
    if (it != terms_.end() && it->monomial == m) return it->coeff;
    return 0;
  }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    return merge(a, b, Rational(1));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    return merge(a, b, Rational(-1));
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    check_compatible(a, b);
    if (a.is_zero() || b.is_zero()) return Polynomial(a.vars_);
    if (b.terms_.size() == 1) return a.mul_term(b.terms_[0].monomial, b.terms_[0].coeff);
    if (a.terms_.size() == 1) return b.mul_term(a.terms_[0].monomial, a.terms_[0].coeff);
    std::unordered_map<Monomial, Rational, MonomialHash> acc;
    acc.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& s : a.terms_)
      for (const auto& t : b.terms_) acc[s.monomial * t.monomial] += s.coeff * t.coeff;
    std::vector<Term> out;
    out.reserve(acc.size());
    for (auto& [m, c] : acc)
      if (c != 0) out.push_back({m, std::move(c)});
    std::sort(out.begin(), out.end(),
              [](const Term& x, const Term& y) { return x.monomial > y.monomial; });
    return from_sorted_terms(a.vars_, std::move(out));
  }

  friend Polynomial operator*(const Rational& c, const Polynomial& p) {
    if (c == 0) return Polynomial(p.vars_);
    Polynomial r = p;
    for (auto& t : r.terms_) t.coeff *= c;
    return r;
  }

  Polynomial mul_term(const Monomial& m, const Rational& c) const {
    if (c == 0) return Polynomial(vars_);
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back({t.monomial * m, t.coeff * c});
    return from_sorted_terms(vars_, std::move(out));
  }

  Polynomial pow(unsigned e) const {
    Polynomial result = constant(vars_, 1);
    Polynomial base = *this;
    while (e > 0) {
      if (e & 1u) result = result * base;
      e >>= 1u;
      if (e > 0) base = base * base;
    }
    return result;
  }

  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (!same_variables(a.vars_, b.vars_)) return false;
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      if (!(a.terms_[i].monomial == b.terms_[i].monomial)) return false;
      if (a.terms_[i].coeff != b.terms_[i].coeff) return false;
    }
    return true;
  }

  /// Divides by the leading coefficient (no-op on zero).
  Polynomial monic() const {
    if (is_zero()) return *this;
    Rational inv = 1 / leading_coeff();
    return inv * (*this);
  }

  /// Canonical text form, parseable back by parse_polynomial.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : terms_) {
      Rational c = t.coeff;
      if (c < 0) {
        out += "-";
        c = -c;
      } else if (!first) {
        out += "+";
      }
      first = false;
      std::string mono = monomial_string(t.monomial);
      if (mono.empty()) {
        out += c.get_str();
      } else if (c == 1) {
        out += mono;
      } else {
        out += c.get_str() + "*" + mono;
      }
    }
    return out;
  }

  std::string monomial_string(const Monomial& m) const {
    std::string s;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (!s.empty()) s += "*";
      s += (*vars_)[i];
      if (m[i] > 1) s += "^" + std::to_string(m[i]);
    }
    return s;
  }

 private:
  static void check_compatible(const Polynomial& a, const Polynomial& b) {
    if (!same_variables(a.vars_, b.vars_))
      throw DimensionError("polynomials over different variable lists");
  }

  static Polynomial merge(const Polynomial& a, const Polynomial& b, const Rational& sign) {
    check_compatible(a, b);
    std::vector<Term> out;
    out.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      int c;
      if (i == a.terms_.size()) c = -1;
      else if (j == b.terms_.size()) c = 1;
      else c = compare(a.terms_[i].monomial, b.terms_[j].monomial);
      if (c > 0) {
        out.push_back(a.terms_[i++]);
      } else if (c < 0) {
        out.push_back({b.terms_[j].monomial, sign * b.terms_[j].coeff});
        ++j;
      } else {
        Rational s = a.terms_[i].coeff + sign * b.terms_[j].coeff;
        if (s != 0) out.push_back({a.terms_[i].monomial, std::move(s)});
        ++i;
        ++j;
      }
    }
    return from_sorted_terms(a.vars_, std::move(out));
  }

  VariableList vars_;
  std::vector<Term> terms_;
};

/// Ordered list of polynomials over one shared variable list.
struct PolynomialMap {
  VariableList variables;
  std::vector<Polynomial> components;

  std::size_t num_variables() const { return variables->size(); }
  std::size_t size() const { return components.size(); }
  const Polynomial& operator[](std::size_t i) const { return components[i]; }
};

/// Dense matrix of polynomials, row-major.
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(std::size_t rows, std::size_t cols, VariableList vars)
      : rows_(rows), cols_(cols), entries_(rows * cols, Polynomial(vars)), vars_(std::move(vars)) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const VariableList& variable_list() const noexcept { return vars_; }

  Polynomial& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Polynomial& operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }
  std::span<const Polynomial> entries() const noexcept { return entries_; }

  PolyMatrix select(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const {
    PolyMatrix out(rows.size(), cols.size(), vars_);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = (*this)(rows[i], cols[j]);
    return out;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Polynomial> entries_;
  VariableList vars_;
};

/// Exact partial derivative with respect to variable `var_index`.
inline Polynomial differentiate(const Polynomial& p, std::size_t var_index) {
  if (var_index >= p.num_variables()) throw DimensionError("variable index out of range");
  std::vector<Term> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) {
    unsigned e = t.monomial[var_index];
    if (e == 0) continue;
    Monomial m = t.monomial;
    m.set(var_index, e - 1);
    out.push_back({m, t.coeff * e});
  }
  // Lowering one exponent by one keeps degrevlex order among the surviving terms.
  return Polynomial::from_sorted_terms(p.variable_list(), std::move(out));
}

/// (components x variables) matrix of first partial derivatives.
inline PolyMatrix jacobian(const PolynomialMap& f) {
  PolyMatrix j(f.size(), f.num_variables(), f.variables);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t v = 0; v < f.num_variables(); ++v) j(i, v) = differentiate(f[i], v);
  return j;
}

namespace detail {

inline bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

struct MaskPairHash {
  std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& k) const noexcept {
    return std::hash<std::uint64_t>{}(k.first * 0x9E3779B97F4A7C15ull ^ k.second);
  }
};

/// Laplace expansion along the first row with memoization of sub-minors, so that
/// computing many minors of one matrix shares all smaller determinants.
/// `reduce` is applied to every product (identity for plain determinants, a normal
/// form when working in a quotient ring).
template <class Reduce>
class MinorCache {
 public:
  MinorCache(const PolyMatrix& m, Reduce reduce) : m_(m), reduce_(std::move(reduce)) {
    if (m.rows() > 64 || m.cols() > 64) throw DimensionError("matrix too large for minors");
  }

  Polynomial minor(std::uint64_t rows, std::uint64_t cols) {
    auto key = std::make_pair(rows, cols);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Polynomial result(m_.variable_list());
    if (rows == 0) {
      result = Polynomial::constant(m_.variable_list(), 1);
    } else {
      const std::size_t r0 = static_cast<std::size_t>(__builtin_ctzll(rows));
      const std::uint64_t rest = rows & (rows - 1);
      int sign = 1;
      for (std::uint64_t cm = cols; cm != 0; cm &= cm - 1) {
        const std::size_t c = static_cast<std::size_t>(__builtin_ctzll(cm));
        const Polynomial& a = m_(r0, c);
        if (!a.is_zero()) {
          Polynomial sub = minor(rest, cols & ~(std::uint64_t{1} << c));
          if (!sub.is_zero()) {
            Polynomial prod = reduce_(a * sub);
            result = sign > 0 ? result + prod : result - prod;
          }
        }
        sign = -sign;
      }
    }
    memo_.emplace(key, result);
    return result;
  }

 private:
  const PolyMatrix& m_;
  Reduce reduce_;
  std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, Polynomial, MaskPairHash> memo_;
};

inline std::uint64_t to_mask(std::span<const std::size_t> idx) {
  std::uint64_t m = 0;
  for (auto i : idx) m |= std::uint64_t{1} << i;
  return m;
}

struct IdentityReduce {
  Polynomial operator()(Polynomial p) const { return p; }
};

}  // namespace detail

/// All size x size minors in lexicographic order of (row set, column set).
template <class Reduce = detail::IdentityReduce>
std::vector<Polynomial> minors(const PolyMatrix& mx, std::size_t size, Reduce reduce = {}) {
  if (size == 0 || size > std::min(mx.rows(), mx.cols()))
    throw DimensionError("minor size out of range");
  detail::MinorCache<Reduce> cache(mx, std::move(reduce));
  std::vector<Polynomial> out;
  std::vector<std::size_t> rows(size);
  for (std::size_t i = 0; i < size; ++i) rows[i] = i;
  do {
    std::vector<std::size_t> cols(size);
    for (std::size_t i = 0; i < size; ++i) cols[i] = i;
    do {
      out.push_back(cache.minor(detail::to_mask(rows), detail::to_mask(cols)));
    } while (detail::next_combination(cols, mx.cols()));
  } while (detail::next_combination(rows, mx.rows()));
  return out;
}

template <class Reduce = detail::IdentityReduce>
Polynomial determinant(const PolyMatrix& mx, Reduce reduce = {}) {
  if (mx.rows() != mx.cols()) throw DimensionError("determinant of a non-square matrix");
  if (mx.rows() == 0) return Polynomial::constant(mx.variable_list(), 1);
  detail::MinorCache<Reduce> cache(mx, std::move(reduce));
  const std::uint64_t all = mx.rows() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << mx.rows()) - 1;
  return cache.minor(all, all);
}

namespace detail {

template <class Scalar>
Scalar evaluate_impl(const Polynomial& p, std::span<const Scalar> point) {
  if (point.size() != p.num_variables()) throw DimensionError("point length mismatch");
  const std::size_t n = point.size();
  unsigned maxdeg = 0;
  for (const auto& t : p.terms())
    for (std::size_t i = 0; i < n; ++i) maxdeg = std::max(maxdeg, t.monomial[i]);
  // powers[i][e] = point[i]^e
  std::vector<std::vector<Scalar>> powers(n);
  for (std::size_t i = 0; i < n; ++i) {
    powers[i].resize(maxdeg + 1);
    powers[i][0] = Scalar(1);
    for (unsigned e = 1; e <= maxdeg; ++e) powers[i][e] = powers[i][e - 1] * point[i];
  }
  Scalar acc(0);
  for (const auto& t : p.terms()) {
    Scalar v;
    if constexpr (std::is_floating_point_v<Scalar>)
      v = static_cast<Scalar>(t.coeff.get_num().get_d()) / static_cast<Scalar>(t.coeff.get_den().get_d());
    else
      v = t.coeff;
    for (std::size_t i = 0; i < n; ++i)
      if (t.monomial[i] != 0) v *= powers[i][t.monomial[i]];
    acc += v;
  }
  return acc;
}

}  // namespace detail

inline Rational evaluate(const Polynomial& p, std::span<const Rational> point) {
  return detail::evaluate_impl<Rational>(p, point);
}

inline double evaluate(const Polynomial& p, std::span<const double> point) {
  return detail::evaluate_impl<double>(p, point);
}

inline long double evaluate(const Polynomial& p, std::span<const long double> point) {
  return detail::evaluate_impl<long double>(p, point);
}

/// Multiplies by the lcm of the coefficient denominators and divides by the gcd of
/// the numerators; the result has coprime integer coefficients and the same sign
/// of leading coefficient.
inline Polynomial primitive_part(const Polynomial& p) {
  if (p.is_zero()) return p;
  mpz_class den = 1, num = 0;
  for (const auto& t : p.terms()) {
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coeff.get_den_mpz_t());
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.coeff.get_num_mpz_t());
  }
  Rational scale(den, num);
  scale.canonicalize();
  return scale * p;
}

}  // namespace crosscap

#endif  // CROSSCAP_POLYNOMIAL_HPP
