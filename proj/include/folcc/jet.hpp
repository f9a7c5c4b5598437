#pragma once

// Truncated one-variable jets and the frame-bundle coordinate calculus.
//
// A Jet stores the Taylor coefficients a_0..a_q of a function at a source point
// `base`; the p-th derivative is p!·a_p. All arithmetic is truncated at the
// jet's order, so the same code serves exact rationals, doubles and duals.

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "folcc/error.hpp"
#include "folcc/scalar.hpp"

namespace folcc {

inline constexpr int kDefaultJetOrder = 8;
inline constexpr int kMaxJetOrder = 16;

template <class T>
class Jet {
 public:
  Jet() : coeffs_(1, T(0)) {}
  Jet(T base, std::vector<T> coeffs) : base_(std::move(base)), coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw ArgumentError("jet needs at least one coefficient");
  }

  static Jet from_derivatives(T base, std::span<const T> derivs) {
    std::vector<T> c(derivs.begin(), derivs.end());
    T fact(1);
    for (std::size_t p = 1; p < c.size(); ++p) {
      fact *= T(static_cast<int>(p));
      c[p] = c[p] / fact;
    }
    return Jet(std::move(base), std::move(c));
  }
  static Jet from_derivatives(T base, std::initializer_list<T> derivs) {
    return from_derivatives(std::move(base), std::span<const T>(derivs.begin(), derivs.size()));
  }
  /// The jet of t ↦ t at `base`.
  static Jet identity(T base, int order) {
    std::vector<T> c(static_cast<std::size_t>(order) + 1, T(0));
    c[0] = base;
    if (order >= 1) c[1] = T(1);
    return Jet(std::move(base), std::move(c));
  }
  static Jet constant(T base, T value, int order) {
    std::vector<T> c(static_cast<std::size_t>(order) + 1, T(0));
    c[0] = std::move(value);
    return Jet(std::move(base), std::move(c));
  }

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  const T& base() const { return base_; }
  const T& value() const { return coeffs_[0]; }
  std::span<const T> coeffs() const { return coeffs_; }
  const T& coeff(int p) const { return coeffs_.at(static_cast<std::size_t>(p)); }
  T& coeff(int p) { return coeffs_.at(static_cast<std::size_t>(p)); }

  T derivative(int p) const {
    T fact(1);
    for (int i = 2; i <= p; ++i) fact *= T(i);
    return coeff(p) * fact;
  }
  std::vector<T> derivatives() const {
    std::vector<T> d(coeffs_.size());
    T fact(1);
    for (std::size_t p = 0; p < coeffs_.size(); ++p) {
      if (p > 1) fact *= T(static_cast<int>(p));
      d[p] = coeffs_[p] * fact;
    }
    return d;
  }

  /// d₁ ≠ 0 (exactly for rationals, beyond `tol` otherwise).
  bool regular(double tol = 0.0) const { return order() >= 1 && !Ops<T>::near_zero(coeffs_[1], tol); }

  Jet truncated(int q) const {
    if (q > order()) throw ArgumentError("cannot raise jet order by truncation");
    return Jet(base_, std::vector<T>(coeffs_.begin(), coeffs_.begin() + q + 1));
  }
  Jet with_base(T b) const { return Jet(std::move(b), coeffs_); }

  Jet& operator+=(const Jet& o) {
    check_same_order(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    check_same_order(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  Jet& operator*=(const T& s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }
  Jet operator-() const {
    Jet r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const T& s) { return a *= s; }
  friend Jet operator*(const T& s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, const T& s) {
    a.coeffs_[0] += s;
    return a;
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    a.check_same_order(b);
    const std::size_t n = a.coeffs_.size();
    std::vector<T> c(n, T(0));
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j <= k; ++j) c[k] += a.coeffs_[j] * b.coeffs_[k - j];
    return Jet(a.base_, std::move(c));
  }

  // Series division; `tol` guards the leading coefficient of the divisor.
  static Jet divide(const Jet& a, const Jet& b, double tol) {
    a.check_same_order(b);
    if (Ops<T>::near_zero(b.coeffs_[0], tol)) throw DomainError("division by a value near zero");
    const std::size_t n = a.coeffs_.size();
    std::vector<T> c(n, T(0));
    for (std::size_t k = 0; k < n; ++k) {
      T acc = a.coeffs_[k];
      for (std::size_t j = 1; j <= k; ++j) acc -= b.coeffs_[j] * c[k - j];
      c[k] = acc / b.coeffs_[0];
    }
    return Jet(a.base_, std::move(c));
  }
  friend Jet operator/(const Jet& a, const Jet& b) { return divide(a, b, 0.0); }

  friend bool operator==(const Jet& a, const Jet& b) { return a.base_ == b.base_ && a.coeffs_ == b.coeffs_; }

 private:
  void check_same_order(const Jet& o) const {
    if (o.coeffs_.size() != coeffs_.size()) throw ArgumentError("jet order mismatch");
  }

  T base_{};
  std::vector<T> coeffs_;
};

template <class U, class T>
Jet<U> jet_cast(const Jet<T>& j) {
  std::vector<U> c;
  c.reserve(j.coeffs().size());
  const auto conv = [](const T& v) {
    if constexpr (std::is_same_v<T, Rational>) return Ops<U>::from_rational(v);
    else return U(v);
  };
  for (const auto& v : j.coeffs()) c.push_back(conv(v));
  return Jet<U>(conv(j.base()), std::move(c));
}

// ---------------------------------------------------------------------------
// Elementary functions on series (Taylor-mode recurrences).

template <class T>
Jet<T> exp(const Jet<T>& a) {
  const int q = a.order();
  std::vector<T> e(static_cast<std::size_t>(q) + 1, T(0));
  e[0] = Ops<T>::exp(a.coeff(0));
  for (int k = 1; k <= q; ++k) {
    T acc(0);
    for (int j = 1; j <= k; ++j) acc += T(j) * a.coeff(j) * e[static_cast<std::size_t>(k - j)];
    e[static_cast<std::size_t>(k)] = acc / T(k);
  }
  return Jet<T>(a.base(), std::move(e));
}

template <class T>
Jet<T> log(const Jet<T>& a) {
  if (Ops<T>::negative(a.coeff(0)) || Ops<T>::near_zero(a.coeff(0), 0.0))
    throw DomainError("ln of a non-positive value");
  const int q = a.order();
  std::vector<T> l(static_cast<std::size_t>(q) + 1, T(0));
  l[0] = Ops<T>::log(a.coeff(0));
  for (int k = 1; k <= q; ++k) {
    T acc(0);
    for (int j = 1; j < k; ++j) acc += T(j) * l[static_cast<std::size_t>(j)] * a.coeff(k - j);
    l[static_cast<std::size_t>(k)] = (a.coeff(k) - acc / T(k)) / a.coeff(0);
  }
  return Jet<T>(a.base(), std::move(l));
}

template <class T>
std::pair<Jet<T>, Jet<T>> sincos(const Jet<T>& a) {
  const int q = a.order();
  std::vector<T> s(static_cast<std::size_t>(q) + 1, T(0)), c(s);
  s[0] = Ops<T>::sin(a.coeff(0));
  c[0] = Ops<T>::cos(a.coeff(0));
  for (int k = 1; k <= q; ++k) {
    T as(0), ac(0);
    for (int j = 1; j <= k; ++j) {
      as += T(j) * a.coeff(j) * c[static_cast<std::size_t>(k - j)];
      ac += T(j) * a.coeff(j) * s[static_cast<std::size_t>(k - j)];
    }
    s[static_cast<std::size_t>(k)] = as / T(k);
    c[static_cast<std::size_t>(k)] = -ac / T(k);
  }
  return {Jet<T>(a.base(), std::move(s)), Jet<T>(a.base(), std::move(c))};
}

template <class T>
Jet<T> sqrt(const Jet<T>& a, double tol = 0.0) {
  if (Ops<T>::negative(a.coeff(0))) throw DomainError("sqrt of a negative value");
  if (a.order() >= 1 && Ops<T>::near_zero(a.coeff(0), tol))
    throw DomainError("sqrt is not differentiable at 0");
  const int q = a.order();
  std::vector<T> r(static_cast<std::size_t>(q) + 1, T(0));
  r[0] = Ops<T>::sqrt(a.coeff(0));
  for (int k = 1; k <= q; ++k) {
    T acc = a.coeff(k);
    for (int j = 1; j < k; ++j) acc -= r[static_cast<std::size_t>(j)] * r[static_cast<std::size_t>(k - j)];
    r[static_cast<std::size_t>(k)] = acc / (T(2) * r[0]);
  }
  return Jet<T>(a.base(), std::move(r));
}

template <class T>
Jet<T> abs(const Jet<T>& a, double tol) {
  if (a.order() >= 1 && Ops<T>::near_zero(a.coeff(0), tol))
    throw DomainError("abs is not differentiable at 0");
  return Ops<T>::negative(a.coeff(0)) ? -a : a;
}

/// Integer power by repeated squaring; negative exponents divide.
template <class T>
Jet<T> pow_int(const Jet<T>& a, long n, double tol) {
  Jet<T> result = Jet<T>::constant(a.base(), T(1), a.order());
  Jet<T> b = a;
  unsigned long e = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  while (e != 0) {
    if (e & 1UL) result = result * b;
    e >>= 1;
    if (e != 0) b = b * b;
  }
  if (n < 0) return Jet<T>::divide(Jet<T>::constant(a.base(), T(1), a.order()), result, tol);
  return result;
}

// ---------------------------------------------------------------------------
// Composition and reversion.

/// Taylor expansion of outer∘inner at inner.base(). `outer.base()` must match
/// inner's value to within `tol` (exactly for rationals); for duals only the
/// primal parts are compared and the ε-offset is carried through the expansion.
template <class T>
Jet<T> compose(const Jet<T>& outer, const Jet<T>& inner, double tol = 1e-9) {
  if (outer.order() < inner.order()) throw ArgumentError("jet order mismatch in compose");
  const T offset = inner.value() - outer.base();
  if (!Ops<T>::near_zero(offset, tol * std::max(1.0, Ops<T>::magnitude(outer.base()))))
    throw ArgumentError("compose: outer base does not match inner value");
  const int q = inner.order();
  const int qo = outer.order();
  std::vector<T> dc(inner.coeffs().begin(), inner.coeffs().end());
  dc[0] = Ops<T>::exact ? T(0) : offset;
  const Jet<T> delta(inner.base(), std::move(dc));
  // Horner in δ = inner − outer.base; higher outer terms matter when δ has an
  // ε-part, which is why the outer order may exceed the inner one.
  Jet<T> acc = Jet<T>::constant(inner.base(), outer.coeff(qo), q);
  for (int k = qo - 1; k >= 0; --k) acc = acc * delta + outer.coeff(k);
  return acc;
}

/// Compositional inverse by Newton iteration on truncated series: the result
/// is a jet at j.value() whose value is j.base().
template <class T>
Jet<T> revert(const Jet<T>& j) {
  if (!j.regular()) throw RegularityError("revert: jet is not regular (d1 = 0)");
  const int q = j.order();
  // δj(s) = j(base + s) − j.value(), as a series without constant term.
  std::vector<T> dj(j.coeffs().begin(), j.coeffs().end());
  dj[0] = T(0);
  const Jet<T> delta_j(T(0), dj);
  std::vector<T> dprime(static_cast<std::size_t>(q) + 1, T(0));
  for (int k = 1; k <= q; ++k) dprime[static_cast<std::size_t>(k - 1)] = T(k) * j.coeff(k);
  const Jet<T> delta_j_prime(T(0), dprime);

  const Jet<T> s = Jet<T>::identity(T(0), q);
  std::vector<T> h0(static_cast<std::size_t>(q) + 1, T(0));
  if (q >= 1) h0[1] = T(1) / j.coeff(1);
  Jet<T> h(T(0), h0);
  int correct = 2;  // coefficients 0 and 1 are exact after the initial guess
  while (correct <= q) {
    const Jet<T> residual = compose(delta_j, h, 0.0) - s;
    const Jet<T> slope = compose(delta_j_prime, h, 0.0);
    h = h - residual / slope;
    correct *= 2;
  }
  std::vector<T> c(h.coeffs().begin(), h.coeffs().end());
  c[0] = j.base();
  return Jet<T>(j.value(), std::move(c));
}

/// Image of the frame `frame` under the prolonged map h̃: S(U) → S(V).
/// `h` is the derivative stack of h at the frame's value z₀.
template <class T>
Jet<T> prolong(const Jet<T>& h, const Jet<T>& frame, double tol = 1e-9) {
  if (h.order() < frame.order()) throw ArgumentError("prolong: order mismatch");
  if (!frame.regular()) throw RegularityError("prolong: frame is not regular");
  if (!h.regular()) throw RegularityError("prolong: h is not regular at z0");
  return compose(h, frame, tol);
}

// ---------------------------------------------------------------------------
// Frame-bundle charts.

/// y₀ = z₀, y₁ = z₁, y_p = z_p / z₁^p (p ≥ 2).
template <class T>
struct FrameCoordsY {
  std::vector<T> y;

  int order() const { return static_cast<int>(y.size()) - 1; }

  static FrameCoordsY from_jet(const Jet<T>& frame) {
    if (!frame.regular()) throw RegularityError("frame coordinates need a regular jet");
    std::vector<T> z = frame.derivatives();
    std::vector<T> y(z.size());
    y[0] = z[0];
    y[1] = z[1];
    T pw = z[1];
    for (std::size_t p = 2; p < z.size(); ++p) {
      pw *= z[1];
      y[p] = z[p] / pw;
    }
    return {std::move(y)};
  }

  Jet<T> to_jet(T base = T(0)) const {
    if (y.size() < 2 || Ops<T>::near_zero(y[1], 0.0)) throw RegularityError("y1 must be nonzero");
    std::vector<T> z(y.size());
    z[0] = y[0];
    z[1] = y[1];
    T pw = y[1];
    for (std::size_t p = 2; p < y.size(); ++p) {
      pw *= y[1];
      z[p] = y[p] * pw;
    }
    return Jet<T>::from_derivatives(std::move(base), std::span<const T>(z));
  }

  /// GL(1) action: y₁ ↦ λ y₁, other coordinates fixed.
  FrameCoordsY scaled(const T& lambda) const {
    FrameCoordsY r = *this;
    r.y[1] *= lambda;
    return r;
  }
};

/// GL(1) action on the z-chart: z_p ↦ λ^p z_p.
template <class T>
Jet<T> scale_frame(const Jet<T>& frame, const T& lambda) {
  std::vector<T> c(frame.coeffs().begin(), frame.coeffs().end());
  T pw(1);
  for (std::size_t p = 1; p < c.size(); ++p) {
    pw *= lambda;
    c[p] *= pw;
  }
  return Jet<T>(frame.base(), std::move(c));
}

/// x₀ = y₀, x₁ = ln|y₁|, x_p = y_p. Forgets the sign of y₁.
struct FrameCoordsX {
  std::vector<double> x;

  int order() const { return static_cast<int>(x.size()) - 1; }
  static FrameCoordsX from_y(const FrameCoordsY<double>& y);
  /// The representative with y₁ > 0.
  FrameCoordsY<double> to_y() const;
};

/// Lifted action of h on S″ coordinates. `h` is the derivative stack of h at x₀.
FrameCoordsX lift_s2(const Jet<double>& h, const FrameCoordsX& coords);

/// lift_s2 computed entirely by conjugating prolong through the chart maps.
FrameCoordsX lift_s2_by_conjugation(const Jet<double>& h, const FrameCoordsX& coords);

/// [base, d0, ..., dq] as decimal strings (exact rationals as "p/q").
template <class T>
std::vector<std::string> jet_to_strings(const Jet<T>& j);

}  // namespace folcc
