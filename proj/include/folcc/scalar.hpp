#pragma once

// Scalar types shared by the jet and expression code: exact rationals,
// IEEE doubles, high-precision binary floats and first-order dual numbers.

#include <gmpxx.h>

#include <cmath>
#include <string>
#include <type_traits>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "folcc/error.hpp"

namespace folcc {

using Rational = mpq_class;
using BigFloat = boost::multiprecision::cpp_bin_float_50;

/// "p/q" (or "p" when the denominator is 1).
std::string to_string(const Rational& q);
Rational parse_rational(const std::string& text);

/// Forward-mode dual number a + b·ε with ε² = 0.
template <class T>
struct Dual {
  T re{};
  T eps{};

  Dual() = default;
  Dual(T r) : re(r) {}  // NOLINT(google-explicit-constructor)
  Dual(int r) : re(static_cast<T>(r)) {}  // NOLINT(google-explicit-constructor)
  Dual(T r, T e) : re(r), eps(e) {}

  Dual& operator+=(const Dual& o) { re += o.re; eps += o.eps; return *this; }
  Dual& operator-=(const Dual& o) { re -= o.re; eps -= o.eps; return *this; }
  Dual& operator*=(const Dual& o) {
    eps = eps * o.re + re * o.eps;
    re *= o.re;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    eps = (eps * o.re - re * o.eps) / (o.re * o.re);
    re /= o.re;
    return *this;
  }
  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend Dual operator/(Dual a, const Dual& b) { return a /= b; }
  friend Dual operator-(const Dual& a) { return {-a.re, -a.eps}; }
  friend bool operator==(const Dual& a, const Dual& b) { return a.re == b.re && a.eps == b.eps; }

  friend Dual exp(const Dual& a) {
    const T e = std::exp(a.re);
    return {e, e * a.eps};
  }
  friend Dual log(const Dual& a) { return {std::log(a.re), a.eps / a.re}; }
  friend Dual sin(const Dual& a) { return {std::sin(a.re), std::cos(a.re) * a.eps}; }
  friend Dual cos(const Dual& a) { return {std::cos(a.re), -std::sin(a.re) * a.eps}; }
  friend Dual sqrt(const Dual& a) {
    const T s = std::sqrt(a.re);
    return {s, a.eps / (2 * s)};
  }
  friend Dual abs(const Dual& a) { return a.re < 0 ? -a : a; }
  friend Dual pow(const Dual& a, const Dual& b) { return exp(b * log(a)); }
};

template <class T>
struct is_dual : std::false_type {};
template <class T>
struct is_dual<Dual<T>> : std::true_type {};

/// Per-type numeric hooks. Exact rationals refuse transcendental functions.
template <class T>
struct Ops {
  static constexpr bool exact = false;

  static T from_rational(const Rational& q) {
    if constexpr (std::is_same_v<T, BigFloat>) {
      return BigFloat(q.get_num().get_str()) / BigFloat(q.get_den().get_str());
    } else if constexpr (is_dual<T>::value) {
      return T(q.get_d());
    } else {
      return static_cast<T>(q.get_d());
    }
  }
  /// Magnitude used for zero/sign tests; the primal part for duals.
  static double magnitude(const T& a) {
    if constexpr (is_dual<T>::value) {
      return std::fabs(static_cast<double>(a.re));
    } else {
      using std::abs;
      return static_cast<double>(abs(a));
    }
  }
  static double to_double(const T& a) {
    if constexpr (is_dual<T>::value) {
      return static_cast<double>(a.re);
    } else {
      return static_cast<double>(a);
    }
  }
  static bool negative(const T& a) { return to_double(a) < 0.0; }
  static bool near_zero(const T& a, double tol) { return magnitude(a) <= tol; }

  static T exp(const T& a) { using std::exp; return exp(a); }
  static T log(const T& a) { using std::log; return log(a); }
  static T sin(const T& a) { using std::sin; return sin(a); }
  static T cos(const T& a) { using std::cos; return cos(a); }
  static T sqrt(const T& a) { using std::sqrt; return sqrt(a); }
};

template <>
struct Ops<Rational> {
  static constexpr bool exact = true;

  static Rational from_rational(const Rational& q) { return q; }
  static double magnitude(const Rational& a) { return std::fabs(a.get_d()); }
  static double to_double(const Rational& a) { return a.get_d(); }
  static bool negative(const Rational& a) { return sgn(a) < 0; }
  static bool near_zero(const Rational& a, double /*tol*/) { return sgn(a) == 0; }

  [[noreturn]] static void refuse(const char* fn) {
    throw DomainError(std::string(fn) + " is not available in exact rational arithmetic");
  }
  static Rational exp(const Rational&) { refuse("exp"); }
  static Rational log(const Rational&) { refuse("ln"); }
  static Rational sin(const Rational&) { refuse("sin"); }
  static Rational cos(const Rational&) { refuse("cos"); }
  static Rational sqrt(const Rational&) { refuse("sqrt"); }
};

}  // namespace folcc
