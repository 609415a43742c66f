#ifndef CROSSCAP_DENSE_LINALG_HPP
#define CROSSCAP_DENSE_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "crosscap/errors.hpp"

namespace crosscap::linalg {

/// Small dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("matrix product shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const double aik = a(i, k);
        if (aik == 0.0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  std::vector<double> operator*(std::span<const double> x) const {
    std::vector<double> y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
  }

  std::vector<double> column(std::size_t c) const {
    std::vector<double> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
    return v;
  }

  void set_column(std::size_t c, std::span<const double> v) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, c) = v[i];
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

/// LU factorisation with partial pivoting (square matrices).
class LU {
 public:
  explicit LU(Matrix a) : lu_(std::move(a)), perm_(lu_.rows()) {
    if (lu_.rows() != lu_.cols()) throw DimensionError("LU of a non-square matrix");
    const std::size_t n = lu_.rows();
    std::iota(perm_.begin(), perm_.end(), 0);
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      for (std::size_t i = k + 1; i < n; ++i)
        if (std::abs(lu_(i, k)) > std::abs(lu_(p, k))) p = i;
      if (p != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
        std::swap(perm_[k], perm_[p]);
        sign_ = -sign_;
      }
      const double piv = lu_(k, k);
      if (piv == 0.0) {
        singular_ = true;
        continue;
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        const double f = lu_(i, k) / piv;
        lu_(i, k) = f;
        if (f == 0.0) continue;
        for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
      }
    }
  }

  double determinant() const {
    double d = sign_;
    for (std::size_t i = 0; i < lu_.rows(); ++i) d *= lu_(i, i);
    return d;
  }

  bool singular() const noexcept { return singular_; }

  std::vector<double> solve(std::span<const double> b) const {
    const std::size_t n = lu_.rows();
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
      x[i] /= lu_(i, i);
    }
    return x;
  }

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
  double sign_ = 1.0;
  bool singular_ = false;
};

inline double determinant(const Matrix& a) { return LU(a).determinant(); }

/// Least-squares solution of min |A x - b| via Householder QR (rows >= cols).
inline std::vector<double> least_squares(Matrix a, std::vector<double> b) {
  const std::size_t m = a.rows(), n = a.cols();
  if (m < n) throw DimensionError("least_squares needs rows >= cols");
  for (std::size_t k = 0; k < n; ++k) {
    double nrm = 0.0;
    for (std::size_t i = k; i < m; ++i) nrm = std::hypot(nrm, a(i, k));
    if (nrm == 0.0) continue;
    if (a(k, k) > 0) nrm = -nrm;
    for (std::size_t i = k; i < m; ++i) a(i, k) /= -nrm;
    a(k, k) += 1.0;
    for (std::size_t j = k + 1; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += a(i, k) * a(i, j);
      s = -s / a(k, k);
      for (std::size_t i = k; i < m; ++i) a(i, j) += s * a(i, k);
    }
    double s = 0.0;
    for (std::size_t i = k; i < m; ++i) s += a(i, k) * b[i];
    s = -s / a(k, k);
    for (std::size_t i = k; i < m; ++i) b[i] += s * a(i, k);
    a(k, k) = nrm;  // R diagonal (sign folded in)
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = a(i, i) == 0.0 ? 0.0 : s / a(i, i);
  }
  return x;
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Eigenvalues are ascending; column k of `vectors` pairs with values[k].
struct SymmetricEigen {
  std::vector<double> values;
  Matrix vectors;
};

inline SymmetricEigen symmetric_eigen(Matrix a) {
  const std::size_t n = a.rows();
  Matrix v = Matrix::identity(n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        total += a(i, j) * a(i, j);
        if (i != j) off += a(i, j) * a(i, j);
      }
    if (off <= 1e-30 * total || off == 0.0) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
  SymmetricEigen out{std::vector<double>(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

namespace detail {

// 1-based working storage for the Hessenberg/QR routines below.
struct OneBased {
  std::size_t n;
  std::vector<double> d;
  explicit OneBased(const Matrix& m) : n(m.rows()), d((n + 1) * (n + 1), 0.0) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) (*this)(i + 1, j + 1) = m(i, j);
  }
  double& operator()(std::size_t i, std::size_t j) { return d[i * (n + 1) + j]; }
};

inline void balance(OneBased& a) {
  constexpr double radix = 2.0;
  const double sqrdx = radix * radix;
  const std::size_t n = a.n;
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 1; i <= n; ++i) {
      double r = 0.0, c = 0.0;
      for (std::size_t j = 1; j <= n; ++j)
        if (j != i) {
          c += std::abs(a(j, i));
          r += std::abs(a(i, j));
        }
      if (c != 0.0 && r != 0.0) {
        double g = r / radix, f = 1.0;
        const double s = c + r;
        while (c < g) {
          f *= radix;
          c *= sqrdx;
        }
        g = r * radix;
        while (c > g) {
          f /= radix;
          c /= sqrdx;
        }
        if ((c + r) / f < 0.95 * s) {
          done = false;
          g = 1.0 / f;
          for (std::size_t j = 1; j <= n; ++j) a(i, j) *= g;
          for (std::size_t j = 1; j <= n; ++j) a(j, i) *= f;
        }
      }
    }
  }
}

// Reduction to upper Hessenberg form by stabilised elementary similarity transforms.
inline void hessenberg(OneBased& a) {
  const std::size_t n = a.n;
  for (std::size_t m = 2; m < n; ++m) {
    double x = 0.0;
    std::size_t i = m;
    for (std::size_t j = m; j <= n; ++j)
      if (std::abs(a(j, m - 1)) > std::abs(x)) {
        x = a(j, m - 1);
        i = j;
      }
    if (i != m) {
      for (std::size_t j = m - 1; j <= n; ++j) std::swap(a(i, j), a(m, j));
      for (std::size_t j = 1; j <= n; ++j) std::swap(a(j, i), a(j, m));
    }
    if (x != 0.0) {
      for (i = m + 1; i <= n; ++i) {
        double y = a(i, m - 1);
        if (y != 0.0) {
          y /= x;
          a(i, m - 1) = y;
          for (std::size_t j = m; j <= n; ++j) a(i, j) -= y * a(m, j);
          for (std::size_t j = 1; j <= n; ++j) a(j, m) += y * a(j, i);
        }
      }
    }
  }
  for (std::size_t i = 3; i <= n; ++i)
    for (std::size_t j = 1; j + 1 < i; ++j) a(i, j) = 0.0;
}

inline double sign_of(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

// Francis double-shift QR on an upper Hessenberg matrix.
inline std::vector<std::complex<double>> hessenberg_qr(OneBased& a, int max_iterations) {
  const int n = static_cast<int>(a.n);
  std::vector<double> wr(n + 1, 0.0), wi(n + 1, 0.0);
  double anorm = 0.0;
  for (int i = 1; i <= n; ++i)
    for (int j = std::max(i - 1, 1); j <= n; ++j) anorm += std::abs(a(i, j));
  int nn = n;
  double t = 0.0;
  while (nn >= 1) {
    int its = 0, l;
    do {
      for (l = nn; l >= 2; --l) {
        double s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(a(l, l - 1)) + s == s) {
          a(l, l - 1) = 0.0;
          break;
        }
      }
      double x = a(nn, nn);
      if (l == nn) {
        wr[nn] = x + t;
        wi[nn--] = 0.0;
      } else {
        double y = a(nn - 1, nn - 1);
        double w = a(nn, nn - 1) * a(nn - 1, nn);
        if (l == nn - 1) {
          double p = 0.5 * (y - x);
          double q = p * p + w;
          double z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + sign_of(z, p);
            wr[nn - 1] = wr[nn] = x + z;
            if (z != 0.0) wr[nn] = x - w / z;
            wi[nn - 1] = wi[nn] = 0.0;
          } else {
            wr[nn - 1] = wr[nn] = x + p;
            wi[nn - 1] = -(wi[nn] = z);
          }
          nn -= 2;
        } else {
          if (its == max_iterations)
            throw NumericFailure("QR iteration did not converge; try another seed");
          if (its > 0 && its % 10 == 0) {
            // Exceptional shift.
            t += x;
            for (int i = 1; i <= nn; ++i) a(i, i) -= x;
            double s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m;
          double p = 0, q = 0, r = 0, z;
          for (m = nn - 2; m >= l; --m) {
            z = a(m, m);
            r = x - z;
            double s = y - z;
            p = (r * s - w) / a(m + 1, m) + a(m, m + 1);
            q = a(m + 1, m + 1) - z - r - s;
            r = a(m + 2, m + 1);
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
            double v = std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) + std::abs(a(m + 1, m + 1)));
            if (u + v == v) break;
          }
          for (int i = m + 2; i <= nn; ++i) {
            a(i, i - 2) = 0.0;
            if (i != m + 2) a(i, i - 3) = 0.0;
          }
          for (int k = m; k <= nn - 1; ++k) {
            if (k != m) {
              p = a(k, k - 1);
              q = a(k + 1, k - 1);
              r = 0.0;
              if (k != nn - 1) r = a(k + 2, k - 1);
              if ((x = std::abs(p) + std::abs(q) + std::abs(r)) != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            double s = sign_of(std::sqrt(p * p + q * q + r * r), p);
            if (s != 0.0) {
              if (k == m) {
                if (l != m) a(k, k - 1) = -a(k, k - 1);
              } else {
                a(k, k - 1) = -s * x;
              }
              p += s;
              x = p / s;
              y = q / s;
              z = r / s;
              q /= p;
              r /= p;
              for (int j = k; j <= nn; ++j) {
                p = a(k, j) + q * a(k + 1, j);
                if (k != nn - 1) {
                  p += r * a(k + 2, j);
                  a(k + 2, j) -= p * z;
                }
                a(k + 1, j) -= p * y;
                a(k, j) -= p * x;
              }
              const int mmin = nn < k + 3 ? nn : k + 3;
              for (int i = l; i <= mmin; ++i) {
                p = x * a(i, k) + y * a(i, k + 1);
                if (k != nn - 1) {
                  p += z * a(i, k + 2);
                  a(i, k + 2) -= p * r;
                }
                a(i, k + 1) -= p * q;
                a(i, k) -= p;
              }
            }
          }
        }
      }
    } while (l < nn - 1);
  }
  std::vector<std::complex<double>> out;
  out.reserve(n);
  for (int i = 1; i <= n; ++i) out.emplace_back(wr[i], wi[i]);
  return out;
}

}  // namespace detail

/// All eigenvalues of a general real square matrix: balancing, Hessenberg
/// reduction, then shifted QR iteration.
inline std::vector<std::complex<double>> eigenvalues(const Matrix& m, int max_iterations = 60) {
  if (m.rows() != m.cols()) throw DimensionError("eigenvalues of a non-square matrix");
  if (m.rows() == 0) return {};
  detail::OneBased a(m);
  detail::balance(a);
  detail::hessenberg(a);
  return detail::hessenberg_qr(a, max_iterations);
}

/// Eigenvector for a (numerically) real eigenvalue by inverse iteration.
inline std::vector<double> eigenvector(const Matrix& m, double lambda) {
  const std::size_t n = m.rows();
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(m(i, j)));
  if (scale == 0.0) scale = 1.0;
  Matrix shifted = m;
  const double shift = lambda + 1e-10 * scale * (1.0 + std::abs(lambda) / scale);
  for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= shift;
  LU lu(shifted);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 / std::sqrt(static_cast<double>(n)) * (1.0 + 0.01 * i);
  for (int it = 0; it < 4; ++it) {
    std::vector<double> y = lu.solve(x);
    const double nr = norm(y);
    if (!std::isfinite(nr) || nr == 0.0) break;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / nr;
  }
  return x;
}

}  // namespace crosscap::linalg

#endif  // CROSSCAP_DENSE_LINALG_HPP
