#ifndef CROSSCAP_MONOMIAL_HPP
#define CROSSCAP_MONOMIAL_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>

#include "crosscap/errors.hpp"

namespace crosscap {

inline constexpr std::size_t kMaxVariables = 15;

/// Exponent vector of fixed length with a cached total degree.
/// Ordered by graded reverse lexicographic order on the declared variable order.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t nvars) : nvars_(static_cast<std::uint8_t>(check_size(nvars))) {}
  Monomial(std::initializer_list<unsigned> exps) : Monomial(exps.size()) {
    std::size_t i = 0;
    for (unsigned e : exps) set(i++, e);
  }

  static Monomial variable(std::size_t nvars, std::size_t index, unsigned power = 1) {
    Monomial m(nvars);
    m.set(index, power);
    return m;
  }

  std::size_t size() const noexcept { return nvars_; }
  unsigned degree() const noexcept { return degree_; }
  unsigned operator[](std::size_t i) const noexcept { return exp_[i]; }
  bool is_one() const noexcept { return degree_ == 0; }

  void set(std::size_t i, unsigned e) {
    degree_ = degree_ - exp_[i] + e;
    exp_[i] = static_cast<std::uint16_t>(e);
  }

  std::span<const std::uint16_t> exponents() const noexcept { return {exp_.data(), nvars_}; }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r(a.nvars_);
    for (std::size_t i = 0; i < a.nvars_; ++i) r.exp_[i] = a.exp_[i] + b.exp_[i];
    r.degree_ = a.degree_ + b.degree_;
    return r;
  }

  /// True when `d` divides this monomial.
  bool divisible_by(const Monomial& d) const noexcept {
    if (d.degree_ > degree_) return false;
    for (std::size_t i = 0; i < nvars_; ++i)
      if (d.exp_[i] > exp_[i]) return false;
    return true;
  }

  /// Quotient this / d; caller guarantees divisibility.
  Monomial divided_by(const Monomial& d) const noexcept {
    Monomial r(nvars_);
    for (std::size_t i = 0; i < nvars_; ++i) r.exp_[i] = exp_[i] - d.exp_[i];
    r.degree_ = degree_ - d.degree_;
    return r;
  }

  friend Monomial lcm(const Monomial& a, const Monomial& b) {
    Monomial r(a.nvars_);
    unsigned deg = 0;
    for (std::size_t i = 0; i < a.nvars_; ++i) {
      r.exp_[i] = std::max(a.exp_[i], b.exp_[i]);
      deg += r.exp_[i];
    }
    r.degree_ = deg;
    return r;
  }

  friend bool coprime(const Monomial& a, const Monomial& b) noexcept {
    for (std::size_t i = 0; i < a.nvars_; ++i)
      if (a.exp_[i] != 0 && b.exp_[i] != 0) return false;
    return true;
  }

  /// Degrevlex comparison: negative if a < b, zero if equal, positive if a > b.
  friend int compare(const Monomial& a, const Monomial& b) noexcept {
    if (a.degree_ != b.degree_) return a.degree_ < b.degree_ ? -1 : 1;
    for (std::size_t i = a.nvars_; i-- > 0;) {
      if (a.exp_[i] != b.exp_[i]) return a.exp_[i] > b.exp_[i] ? -1 : 1;
    }
    return 0;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) noexcept {
    return a.nvars_ == b.nvars_ && a.exp_ == b.exp_;
  }
  friend bool operator<(const Monomial& a, const Monomial& b) noexcept {
    return compare(a, b) < 0;
  }
  friend bool operator>(const Monomial& a, const Monomial& b) noexcept {
    return compare(a, b) > 0;
  }

  std::size_t hash() const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (std::size_t i = 0; i < nvars_; ++i) h = (h ^ exp_[i]) * 1099511628211ull;
    return h;
  }

 private:
  static std::size_t check_size(std::size_t n) {
    if (n > kMaxVariables) throw DimensionError("at most 15 variables are supported");
    return n;
  }

  std::array<std::uint16_t, kMaxVariables> exp_{};
  std::uint8_t nvars_ = 0;
  std::uint32_t degree_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept { return m.hash(); }
};

}  // namespace crosscap

#endif  // CROSSCAP_MONOMIAL_HPP
