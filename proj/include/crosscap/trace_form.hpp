#ifndef CROSSCAP_TRACE_FORM_HPP
#define CROSSCAP_TRACE_FORM_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <string>
#include <vector>

#include "crosscap/errors.hpp"
#include "crosscap/groebner.hpp"
#include "crosscap/polynomial.hpp"

namespace crosscap {

/// Dense exact-rational matrix, row-major.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static RationalMatrix identity(std::size_t n) {
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  bool is_symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  RationalMatrix transpose() const {
    RationalMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("matrix product shape mismatch");
    RationalMatrix c(a.rows_, b.cols_);
    Rational tmp;
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Rational& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          if (b(k, j) == 0) continue;
          tmp = aik * b(k, j);
          c(i, j) += tmp;
        }
      }
    return c;
  }

  friend RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionError("matrix sum shape mismatch");
    RationalMatrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
    return c;
  }

  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  Rational trace() const {
    Rational t = 0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> data_;
};

struct Inertia {
  std::size_t n_plus = 0;
  std::size_t n_minus = 0;
  std::size_t n_zero = 0;

  long signature() const { return static_cast<long>(n_plus) - static_cast<long>(n_minus); }
  bool nondegenerate() const { return n_zero == 0; }
  bool operator==(const Inertia&) const = default;
};

struct MultiplicationMatrix {
  Polynomial element;
  RationalMatrix matrix;
};

struct TraceForm {
  Polynomial weight;
  RationalMatrix gram;
  Inertia inertia;
};

/// Characteristic polynomial det(t*I - A) of an integer matrix by Berkowitz's
/// division-free algorithm. Coefficients are returned from highest degree down.
inline std::vector<mpz_class> characteristic_polynomial(const std::vector<std::vector<mpz_class>>& a) {
  const std::size_t n = a.size();
  std::vector<mpz_class> p{1};
  if (n == 0) return p;
  p.push_back(-a[0][0]);
  for (std::size_t r = 1; r < n; ++r) {
    // Border of the leading (r+1)x(r+1) block: row R = a[r][0..r), column S = a[0..r)[r].
    std::vector<mpz_class> col(r + 2);
    col[0] = 1;
    col[1] = -a[r][r];
    std::vector<mpz_class> s(r), next(r);
    for (std::size_t i = 0; i < r; ++i) s[i] = a[i][r];
    for (std::size_t k = 0; k < r; ++k) {
      mpz_class dot = 0;
      for (std::size_t i = 0; i < r; ++i) mpz_addmul(dot.get_mpz_t(), a[r][i].get_mpz_t(), s[i].get_mpz_t());
      col[k + 2] = -dot;
      if (k + 1 < r) {
        for (std::size_t i = 0; i < r; ++i) {
          next[i] = 0;
          for (std::size_t j = 0; j < r; ++j)
            mpz_addmul(next[i].get_mpz_t(), a[i][j].get_mpz_t(), s[j].get_mpz_t());
        }
        std::swap(s, next);
      }
    }
    // Lower-triangular Toeplitz product: (r+2) x (r+1) times p.
    std::vector<mpz_class> q(r + 2);
    for (std::size_t i = 0; i < r + 2; ++i)
      for (std::size_t j = 0; j <= std::min(i, r); ++j)
        mpz_addmul(q[i].get_mpz_t(), col[i - j].get_mpz_t(), p[j].get_mpz_t());
    p = std::move(q);
  }
  return p;
}

namespace detail {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }

inline u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1;
  for (; e; e >>= 1, a = mulmod(a, a, p))
    if (e & 1) r = mulmod(r, a, p);
  return r;
}

/// Deterministic Miller-Rabin for 64-bit integers.
inline bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r && composite; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) composite = false;
    }
    if (composite) return false;
  }
  return true;
}

/// The k-th largest prime below 2^62 (computed lazily, cached).
inline u64 nth_large_prime(std::size_t k) {
  static std::vector<u64> primes;
  static u64 next = (u64{1} << 62) - 1;
  while (primes.size() <= k) {
    while (!is_prime_u64(next)) next -= 2;
    primes.push_back(next);
    next -= 2;
  }
  return primes[k];
}

/// det(t*I - A) mod p via reduction to upper Hessenberg form; coefficients from
/// the highest degree down.
inline std::vector<u64> charpoly_mod(std::vector<std::vector<u64>> h, u64 p) {
  const std::size_t n = h.size();
  auto sub = [p](u64 a, u64 b) { return a >= b ? a - b : a + p - b; };
  for (std::size_t j = 0; j + 2 < n; ++j) {
    std::size_t piv = j + 1;
    while (piv < n && h[piv][j] == 0) ++piv;
    if (piv == n) continue;
    if (piv != j + 1) {
      std::swap(h[piv], h[j + 1]);
      for (auto& row : h) std::swap(row[piv], row[j + 1]);
    }
    const u64 inv = powmod(h[j + 1][j], p - 2, p);
    for (std::size_t i = j + 2; i < n; ++i) {
      if (h[i][j] == 0) continue;
      const u64 u = mulmod(h[i][j], inv, p);
      for (std::size_t k = 0; k < n; ++k) h[i][k] = sub(h[i][k], mulmod(u, h[j + 1][k], p));
      for (std::size_t k = 0; k < n; ++k) h[k][j + 1] = (h[k][j + 1] + mulmod(u, h[k][i], p)) % p;
    }
  }
  // polys[m] is the characteristic polynomial of the leading m x m block, lowest degree first.
  std::vector<std::vector<u64>> polys(n + 1);
  polys[0] = {1};
  for (std::size_t m = 1; m <= n; ++m) {
    std::vector<u64> q(m + 1, 0);
    const auto& prev = polys[m - 1];
    const u64 hmm = h[m - 1][m - 1];
    for (std::size_t k = 0; k < prev.size(); ++k) {
      q[k + 1] = (q[k + 1] + prev[k]) % p;
      q[k] = sub(q[k], mulmod(hmm, prev[k], p));
    }
    u64 chain = 1;
    for (std::size_t i = m - 1; i-- > 0;) {
      chain = mulmod(chain, h[i + 1][i], p);
      if (chain == 0) break;
      const u64 coef = mulmod(h[i][m - 1], chain, p);
      if (coef == 0) continue;
      for (std::size_t k = 0; k < polys[i].size(); ++k) q[k] = sub(q[k], mulmod(coef, polys[i][k], p));
    }
    polys[m] = std::move(q);
  }
  std::vector<u64> out(polys[n].rbegin(), polys[n].rend());
  return out;
}

}  // namespace detail

/// Characteristic polynomial det(t*I - A) of an integer matrix by Chinese
/// remaindering of images modulo 62-bit primes, with enough primes to cover a
/// Hadamard-type bound on the coefficients. Same output convention as
/// characteristic_polynomial.
inline std::vector<mpz_class> characteristic_polynomial_multimodular(const std::vector<std::vector<mpz_class>>& a) {
  const std::size_t n = a.size();
  if (n == 0) return {mpz_class(1)};
  // |c_k| <= C(n,k) (sqrt(k) B)^k, B the largest entry.
  std::size_t max_bits = 0;
  for (const auto& row : a)
    for (const auto& x : row) max_bits = std::max(max_bits, mpz_sizeinbase(x.get_mpz_t(), 2));
  double bound_bits = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    double log_binom = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    double b = log_binom / std::log(2.0) + k * (static_cast<double>(max_bits) + 0.5 * std::log2(static_cast<double>(k)));
    bound_bits = std::max(bound_bits, b);
  }
  const double needed = bound_bits + 2;

  std::vector<mpz_class> x(n + 1, 0);
  mpz_class modulus = 1;
  double have = 0;
  std::vector<std::vector<detail::u64>> am(n, std::vector<detail::u64>(n));
  for (std::size_t k = 0; have < needed; ++k) {
    const detail::u64 p = detail::nth_large_prime(k);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) am[i][j] = mpz_fdiv_ui(a[i][j].get_mpz_t(), p);
    const auto r = detail::charpoly_mod(am, p);
    const detail::u64 minv = detail::powmod(mpz_fdiv_ui(modulus.get_mpz_t(), p), p - 2, p);
    mpz_class t;
    for (std::size_t i = 0; i <= n; ++i) {
      // x += modulus * ((r - x) * modulus^-1 mod p)
      const detail::u64 xm = mpz_fdiv_ui(x[i].get_mpz_t(), p);
      const detail::u64 diff = r[i] >= xm ? r[i] - xm : r[i] + p - xm;
      const detail::u64 step = detail::mulmod(diff, minv, p);
      mpz_mul_ui(t.get_mpz_t(), modulus.get_mpz_t(), step);
      x[i] += t;
    }
    modulus *= static_cast<unsigned long>(p);
    have += std::log2(static_cast<double>(p));
  }
  const mpz_class half = modulus / 2;
  for (auto& c : x)
    if (c > half) c -= modulus;
  return x;
}

/// Exact inertia of a symmetric rational matrix.
///
/// The matrix is scaled by a positive integer to clear denominators, its
/// characteristic polynomial is computed division-free, and since every root is
/// real, Descartes' rule of signs counts the positive roots exactly (and the
/// negative roots after t -> -t).
inline Inertia signature(const RationalMatrix& gram) {
  if (!gram.is_symmetric()) throw DimensionError("signature requires a symmetric matrix");
  const std::size_t n = gram.rows();
  Inertia in;
  if (n == 0) return in;
  mpz_class den = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), gram(i, j).get_den_mpz_t());
  std::vector<std::vector<mpz_class>> a(n, std::vector<mpz_class>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rational v = gram(i, j) * den;
      a[i][j] = v.get_num();
    }
  // cp[k] is the coefficient of t^(n-k)
  std::vector<mpz_class> cp = n <= 12 ? characteristic_polynomial(a) : characteristic_polynomial_multimodular(a);
  std::size_t zero = 0;
  while (zero < n && cp[n - zero] == 0) ++zero;
  auto variations = [&](bool negate_odd) {
    std::size_t v = 0;
    int last = 0;
    for (std::size_t k = 0; k <= n - zero; ++k) {
      int s = sgn(cp[k]);
      if (s == 0) continue;
      const std::size_t power = n - k;
      if (negate_odd && (power % 2 == 1)) s = -s;
      if (last != 0 && s != last) ++v;
      last = s;
    }
    return v;
  };
  in.n_zero = zero;
  in.n_plus = variations(false);
  in.n_minus = variations(true);
  return in;
}

/// Matrices of multiplication by each variable; column j holds the coordinates of
/// NF(x_v * basis[j]).
inline std::vector<RationalMatrix> variable_multiplication_matrices(const QuotientAlgebra& qa) {
  const std::size_t d = qa.dimension();
  const std::size_t n = qa.variables()->size();
  std::vector<RationalMatrix> out(n, RationalMatrix(d, d));
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t j = 0; j < d; ++j) {
      const Monomial m = qa.basis[j] * Monomial::variable(n, v);
      if (auto idx = qa.index_of(m)) {
        out[v](*idx, j) = 1;
        continue;
      }
      const auto c = qa.coordinates(normal_form(Polynomial::monomial(qa.variables(), m), qa.gb));
      for (std::size_t i = 0; i < d; ++i) out[v](i, j) = c[i];
    }
  return out;
}

/// Arithmetic in a finite-dimensional quotient algebra: multiplication matrices,
/// the trace functional and trace forms. The table of products of basis monomials
/// is computed once and shared by every query.
class TraceContext {
 public:
  explicit TraceContext(const QuotientAlgebra& qa) : qa_(qa) {
    const std::size_t d = qa_.dimension();
    const auto by_variable = variable_multiplication_matrices(qa_);
    std::unordered_map<Monomial, std::vector<Rational>, MonomialHash> memo;
    // NF(x_v * m') = M_{x_v} NF(m'), so every product reduces to matrix-vector steps.
    std::function<const std::vector<Rational>&(const Monomial&)> coords_of = [&](const Monomial& m) -> const std::vector<Rational>& {
      if (auto it = memo.find(m); it != memo.end()) return it->second;
      std::vector<Rational> c(d);
      if (auto idx = qa_.index_of(m)) {
        c[*idx] = 1;
      } else {
        std::size_t v = 0;
        while (m[v] == 0) ++v;
        const std::vector<Rational> prev = coords_of(m.divided_by(Monomial::variable(m.size(), v)));
        const RationalMatrix& mx = by_variable[v];
        for (std::size_t l = 0; l < d; ++l) {
          if (prev[l] == 0) continue;
          for (std::size_t i = 0; i < d; ++i)
            if (mx(i, l) != 0) c[i] += prev[l] * mx(i, l);
        }
      }
      return memo.emplace(m, std::move(c)).first->second;
    };
    products_.assign(d * d, {});
    scaled_products_.assign(d * d, {});
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) {
        products_[i * d + j] = coords_of(qa_.basis[i] * qa_.basis[j]);
        scaled_products_[i * d + j] = ScaledVector::from(products_[i * d + j]);
        if (i != j) {
          products_[j * d + i] = products_[i * d + j];
          scaled_products_[j * d + i] = scaled_products_[i * d + j];
        }
      }
    basis_trace_.assign(d, 0);
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t i = 0; i < d; ++i) basis_trace_[k] += product(k, i)[i];
    trace_form_one_ = RationalMatrix(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) {
        Rational s = 0;
        const auto& v = product(i, j);
        for (std::size_t k = 0; k < d; ++k)
          if (v[k] != 0) s += v[k] * basis_trace_[k];
        trace_form_one_(i, j) = s;
        trace_form_one_(j, i) = s;
      }
  }

  const QuotientAlgebra& algebra() const noexcept { return qa_; }
  std::size_t dimension() const noexcept { return qa_.dimension(); }

  /// Coordinates of NF(basis[i] * basis[j]).
  const std::vector<Rational>& product(std::size_t i, std::size_t j) const {
    return products_[i * qa_.dimension() + j];
  }

  std::vector<Rational> coordinates(const Polynomial& h) const {
    return qa_.coordinates(normal_form(h, qa_.gb));
  }

  MultiplicationMatrix multiplication_matrix(const Polynomial& h) const {
    const std::size_t d = dimension();
    if (d == 0) throw DimensionError("multiplication matrix of the trivial algebra");
    return {h, multiplication_from_coordinates(coordinates(h))};
  }

  Rational trace(const Polynomial& h) const {
    if (dimension() == 0) return 0;
    const auto c = coordinates(h);
    Rational t = 0;
    for (std::size_t k = 0; k < c.size(); ++k)
      if (c[k] != 0) t += c[k] * basis_trace_[k];
    return t;
  }

  /// Gram matrix of a -> T(h a^2) in the staircase basis, with exact inertia.
  TraceForm trace_form(const Polynomial& h) const {
    const std::size_t d = dimension();
    if (d == 0) return {h, RationalMatrix(), Inertia{}};
    // T(h b_i b_j) = sum_l [b_i b_j]_l T(h b_l), and T(h b_l) = (Theta_1 c)_l.
    const auto c = coordinates(h);
    std::vector<Rational> w(d);
    for (std::size_t l = 0; l < d; ++l)
      for (std::size_t k = 0; k < d; ++k)
        if (c[k] != 0) w[l] += trace_form_one_(l, k) * c[k];
    const ScaledVector ws = ScaledVector::from(w);
    RationalMatrix gram(d, d);
    mpz_class acc;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) {
        const ScaledVector& v = scaled_products_[i * d + j];
        acc = 0;
        for (std::size_t l = 0; l < d; ++l)
          if (sgn(v.num[l]) != 0 && sgn(ws.num[l]) != 0)
            mpz_addmul(acc.get_mpz_t(), v.num[l].get_mpz_t(), ws.num[l].get_mpz_t());
        Rational sum(acc, v.den * ws.den);
        sum.canonicalize();
        gram(i, j) = sum;
        gram(j, i) = sum;
      }
    Inertia in = signature(gram);
    return {h, std::move(gram), in};
  }

  const RationalMatrix& trace_form_one() const noexcept { return trace_form_one_; }

  /// True when the images of `elements` generate the whole algebra as an ideal,
  /// i.e. the vectors h * basis[j] span it. Exact rank over the rationals.
  bool generates_unit_ideal(const std::vector<Polynomial>& elements) const {
    const std::size_t d = dimension();
    if (d == 0) return true;
    std::vector<std::vector<Rational>> echelon;  // echelon[k] has its pivot at pivots[k]
    std::vector<std::size_t> pivots;
    for (const auto& h : elements) {
      const auto c = coordinates(h);
      bool nonzero = false;
      for (const auto& x : c) nonzero = nonzero || x != 0;
      if (!nonzero) continue;
      for (std::size_t j = 0; j < d; ++j) {
        std::vector<Rational> v(d);
        for (std::size_t l = 0; l < d; ++l) {
          if (c[l] == 0) continue;
          const auto& pr = product(l, j);
          for (std::size_t i = 0; i < d; ++i)
            if (pr[i] != 0) v[i] += c[l] * pr[i];
        }
        for (std::size_t k = 0; k < echelon.size(); ++k) {
          if (v[pivots[k]] == 0) continue;
          const Rational f = v[pivots[k]];
          for (std::size_t i = 0; i < d; ++i)
            if (echelon[k][i] != 0) v[i] -= f * echelon[k][i];
        }
        std::size_t piv = d;
        for (std::size_t i = 0; i < d; ++i)
          if (v[i] != 0) {
            piv = i;
            break;
          }
        if (piv == d) continue;
        const Rational inv = 1 / v[piv];
        for (auto& x : v) x *= inv;
        for (auto& row : echelon) {
          if (row[piv] == 0) continue;
          const Rational f = row[piv];
          for (std::size_t i = 0; i < d; ++i)
            if (v[i] != 0) row[i] -= f * v[i];
        }
        echelon.push_back(std::move(v));
        pivots.push_back(piv);
        if (echelon.size() == d) return true;
      }
    }
    return false;
  }

 private:
  /// A rational vector as integers over one common denominator.
  struct ScaledVector {
    std::vector<mpz_class> num;
    mpz_class den = 1;

    static ScaledVector from(const std::vector<Rational>& v) {
      ScaledVector out;
      for (const auto& x : v) mpz_lcm(out.den.get_mpz_t(), out.den.get_mpz_t(), x.get_den_mpz_t());
      out.num.resize(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) continue;
        mpz_divexact(out.num[i].get_mpz_t(), out.den.get_mpz_t(), v[i].get_den_mpz_t());
        out.num[i] *= v[i].get_num();
      }
      return out;
    }
  };

  RationalMatrix multiplication_from_coordinates(const std::vector<Rational>& c) const {
    const std::size_t d = dimension();
    RationalMatrix m(d, d);
    for (std::size_t l = 0; l < d; ++l) {
      if (c[l] == 0) continue;
      for (std::size_t j = 0; j < d; ++j) {
        const auto& v = product(l, j);
        for (std::size_t i = 0; i < d; ++i)
          if (v[i] != 0) m(i, j) += c[l] * v[i];
      }
    }
    return m;
  }

  QuotientAlgebra qa_;
  std::vector<std::vector<Rational>> products_;
  std::vector<ScaledVector> scaled_products_;
  std::vector<Rational> basis_trace_;
  RationalMatrix trace_form_one_;
};

inline MultiplicationMatrix multiplication_matrix(const Polynomial& h, const QuotientAlgebra& qa) {
  if (qa.dimension() == 0) throw DimensionError("multiplication matrix of the trivial algebra");
  return TraceContext(qa).multiplication_matrix(h);
}

inline Rational trace(const Polynomial& h, const QuotientAlgebra& qa) {
  return TraceContext(qa).trace(h);
}

inline TraceForm trace_quadratic_form(const Polynomial& h, const QuotientAlgebra& qa) {
  return TraceContext(qa).trace_form(h);
}

}  // namespace crosscap

#endif  // CROSSCAP_TRACE_FORM_HPP
