#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "error.hpp"

namespace sublyap {

/// Univariate polynomial with integer coefficients, constant term first.
/// Trailing zero coefficients are always trimmed; the zero polynomial has
/// no coefficients.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  IntPolynomial(std::initializer_list<std::int64_t> c) : c_(c) { trim(); }
  explicit IntPolynomial(std::vector<std::int64_t> c) : c_(std::move(c)) { trim(); }

  static IntPolynomial monomial(std::size_t power, std::int64_t coeff = 1) {
    std::vector<std::int64_t> c(power + 1, 0);
    c[power] = coeff;
    return IntPolynomial(std::move(c));
  }

  /// 1 + u + ... + u^{L-1}
  static IntPolynomial geometric(std::size_t L) { return IntPolynomial(std::vector<std::int64_t>(L, 1)); }

  /// Sum of u^z over the given exponents.
  template <class Range>
  static IntPolynomial indicator(const Range& exponents) {
    std::vector<std::int64_t> c;
    for (auto z : exponents) {
      if (c.size() <= static_cast<std::size_t>(z)) c.resize(static_cast<std::size_t>(z) + 1, 0);
      c[static_cast<std::size_t>(z)] += 1;
    }
    return IntPolynomial(std::move(c));
  }

  bool is_zero() const noexcept { return c_.empty(); }
  /// Degree; -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  const std::vector<std::int64_t>& coefficients() const noexcept { return c_; }
  std::int64_t operator[](std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }
  std::int64_t leading() const noexcept { return c_.empty() ? 0 : c_.back(); }

  /// Index of the lowest nonzero coefficient (multiplicity of the root 0).
  std::size_t low_order() const noexcept {
    std::size_t j = 0;
    while (j < c_.size() && c_[j] == 0) ++j;
    return j;
  }

  std::size_t nonzero_terms() const noexcept {
    return static_cast<std::size_t>(std::count_if(c_.begin(), c_.end(), [](auto v) { return v != 0; }));
  }
  bool is_monomial() const noexcept { return nonzero_terms() == 1; }

  /// f / u^j where u^j is the largest monomial factor.
  IntPolynomial strip_monomial() const {
    return IntPolynomial(std::vector<std::int64_t>(c_.begin() + static_cast<std::ptrdiff_t>(low_order()), c_.end()));
  }

  IntPolynomial derivative() const {
    std::vector<std::int64_t> d;
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(static_cast<std::int64_t>(i) * c_[i]);
    return IntPolynomial(std::move(d));
  }

  template <class T>
  std::complex<T> operator()(std::complex<T> u) const {
    std::complex<T> acc{0};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * u + static_cast<T>(*it);
    return acc;
  }

  /// Value at u = exp(2 pi i k).
  std::complex<double> on_circle(double k) const {
    const double t = 2.0 * 3.14159265358979323846 * k;
    return (*this)(std::complex<double>(std::cos(t), std::sin(t)));
  }

  double norm1() const noexcept {
    double s = 0;
    for (auto v : c_) s += std::abs(static_cast<double>(v));
    return s;
  }
  std::int64_t norm2_squared() const noexcept {
    std::int64_t s = 0;
    for (auto v : c_) s += v * v;
    return s;
  }

  IntPolynomial& operator+=(const IntPolynomial& o) {
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), 0);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  IntPolynomial& operator-=(const IntPolynomial& o) {
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), 0);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  friend IntPolynomial operator+(IntPolynomial a, const IntPolynomial& b) { return a += b; }
  friend IntPolynomial operator-(IntPolynomial a, const IntPolynomial& b) { return a -= b; }
  friend IntPolynomial operator-(IntPolynomial a) {
    for (auto& v : a.c_) v = -v;
    return a;
  }
  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<std::int64_t> c(a.c_.size() + b.c_.size() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return IntPolynomial(std::move(c));
  }
  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

  /// Exact division by a monic (leading coefficient +-1) divisor.
  /// Returns nullopt when the remainder is nonzero.
  std::optional<IntPolynomial> divide_exact(const IntPolynomial& divisor) const {
    if (divisor.is_zero()) throw error(error_kind::zero_polynomial, "division by zero polynomial");
    const auto lc = divisor.leading();
    if (lc != 1 && lc != -1) throw error(error_kind::invalid_argument, "divisor must be monic up to sign");
    if (degree() < divisor.degree()) {
      if (is_zero()) return IntPolynomial{};
      return std::nullopt;
    }
    std::vector<std::int64_t> rem = c_;
    std::vector<std::int64_t> quot(c_.size() - divisor.c_.size() + 1, 0);
    for (std::size_t i = quot.size(); i-- > 0;) {
      const std::int64_t q = rem[i + divisor.c_.size() - 1] * lc;
      quot[i] = q;
      for (std::size_t j = 0; j < divisor.c_.size(); ++j) rem[i + j] -= q * divisor.c_[j];
    }
    for (auto v : rem)
      if (v != 0) return std::nullopt;
    return IntPolynomial(std::move(quot));
  }

  /// "1 - u + u^3"
  std::string to_string(const std::string& var = "u") const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      const auto v = c_[i];
      if (v == 0) continue;
      const auto mag = v < 0 ? -v : v;
      if (out.empty()) out += v < 0 ? "-" : "";
      else out += v < 0 ? " - " : " + ";
      if (mag != 1 || i == 0) out += std::to_string(mag);
      if (i >= 1) out += var;
      if (i >= 2) out += "^" + std::to_string(i);
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<std::int64_t> c_;
};

/// p_L = 1 + u + ... + u^{L-1}
inline IntPolynomial p_L(std::size_t L) { return IntPolynomial::geometric(L); }

/// n-th cyclotomic polynomial, by exact division of u^n - 1.
inline IntPolynomial cyclotomic(std::size_t n) {
  IntPolynomial f = IntPolynomial::monomial(n) - IntPolynomial{1};
  for (std::size_t d = 1; d < n; ++d)
    if (n % d == 0) f = *f.divide_exact(cyclotomic(d));
  return f;
}

namespace detail {

using rational = boost::multiprecision::cpp_rational;
using rational_poly = std::vector<rational>;  // constant term first, trimmed

inline void trim(rational_poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline rational_poly to_rational(const IntPolynomial& f) {
  rational_poly p;
  for (auto v : f.coefficients()) p.emplace_back(v);
  return p;
}

inline rational_poly derivative(const rational_poly& p) {
  rational_poly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long long>(i));
  trim(d);
  return d;
}

inline rational_poly sub(rational_poly a, const rational_poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), rational(0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

// Quotient and remainder in Q[x].
inline std::pair<rational_poly, rational_poly> divmod(rational_poly a, const rational_poly& b) {
  if (b.empty()) throw error(error_kind::zero_polynomial, "division by zero polynomial");
  if (a.size() < b.size()) return {{}, a};
  rational_poly q(a.size() - b.size() + 1, rational(0));
  for (std::size_t i = q.size(); i-- > 0;) {
    const rational t = a[i + b.size() - 1] / b.back();
    q[i] = t;
    for (std::size_t j = 0; j < b.size(); ++j) a[i + j] -= t * b[j];
  }
  trim(a);
  trim(q);
  return {q, a};
}

inline rational_poly monic(rational_poly p) {
  if (p.empty()) return p;
  const rational lc = p.back();
  for (auto& v : p) v /= lc;
  return p;
}

inline rational_poly gcd(rational_poly a, rational_poly b) {
  while (!b.empty()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

}  // namespace detail

/// Square-free factorization f = c * prod_i a_i^i (Yun), factors monic over Q,
/// returned as (multiplicity, coefficients as doubles) pairs.
inline std::vector<std::pair<std::size_t, std::vector<double>>> squarefree_factors(const IntPolynomial& f) {
  if (f.is_zero()) throw error(error_kind::zero_polynomial, "square-free factorization of 0");
  std::vector<std::pair<std::size_t, std::vector<double>>> out;
  if (f.degree() == 0) return out;
  using namespace detail;
  const rational_poly p = monic(to_rational(f));
  rational_poly a0 = gcd(p, derivative(p));
  rational_poly b = divmod(p, a0).first;
  rational_poly c = divmod(derivative(p), a0).first;
  rational_poly d = sub(c, derivative(b));
  for (std::size_t i = 1; b.size() > 1; ++i) {
    rational_poly a = gcd(b, d);
    if (a.size() > 1) {
      std::vector<double> coeffs;
      for (const auto& v : a) coeffs.push_back(static_cast<double>(v));
      out.emplace_back(i, std::move(coeffs));
    }
    b = divmod(b, a).first;
    c = divmod(d, a).first;
    d = sub(c, derivative(b));
  }
  return out;
}

}  // namespace sublyap
