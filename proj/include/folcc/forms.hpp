#pragma once

// Differential forms on finite-order frame bundles, in either the y-chart
// (y₀, y₁, y₂, …) or the x-chart (x₀, x₁ = ln|y₁|, x₂, …). Coefficients are
// Laurent polynomials over ℚ in the chart symbols; the x-chart additionally
// carries the symbol E = e^{x₁} with ∂E/∂x₁ = E, which is what the y→x
// substitution y₁ = E produces.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "folcc/scalar.hpp"

namespace folcc::forms {

enum class Chart { y, x };

class Poly {
 public:
  /// Exponents of [v₀, …, v_q, E]; E stays at 0 in the y-chart.
  using Exponents = std::vector<int>;

  Poly() = default;
  explicit Poly(int order) : order_(order) {}

  static Poly constant(int order, const Rational& c);
  static Poly coordinate(int order, int index, int power = 1);
  static Poly exp_x1(int order, int power = 1);

  int order() const { return order_; }
  int nvars() const { return order_ + 2; }
  const std::map<Exponents, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exponents& e, const Rational& c);

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Rational& s);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Rational& s, Poly a) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly operator-() const { return Rational(-1) * *this; }
  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

  /// Integer power; negative powers require a single-term polynomial.
  Poly pow(int n) const;

  /// ∂/∂(coordinate i) in the given chart.
  Poly partial(int index, Chart chart) const;

  /// Substitute each coordinate symbol by a polynomial (E is left untouched).
  Poly substitute(std::span<const Poly> images) const;

  /// `point` holds the chart coordinates; E is evaluated as exp(point[1]).
  double evaluate(std::span<const double> point, Chart chart) const;

  std::string to_string(Chart chart) const;

 private:
  int order_ = 0;
  std::map<Exponents, Rational> terms_;
};

class CoordForm {
 public:
  /// Sorted coordinate indices of dv_{i₁}∧…∧dv_{i_d}.
  using Basis = std::vector<int>;

  CoordForm() = default;
  CoordForm(Chart chart, int order) : chart_(chart), order_(order) {}

  static CoordForm function(Chart chart, const Poly& f);
  /// f · dv_{i₁}∧…∧dv_{i_d} for indices in any order (sign from sorting).
  static CoordForm monomial(Chart chart, const Poly& f, std::vector<int> indices);
  static CoordForm differential_of(Chart chart, int order, int index);

  Chart chart() const { return chart_; }
  int order() const { return order_; }
  const std::map<Basis, Poly>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Degree of the first term; −1 for the zero form.
  int degree() const;

  void add_term(const Basis& b, const Poly& p);

  CoordForm& operator+=(const CoordForm& o);
  CoordForm& operator-=(const CoordForm& o);
  friend CoordForm operator+(CoordForm a, const CoordForm& b) { return a += b; }
  friend CoordForm operator-(CoordForm a, const CoordForm& b) { return a -= b; }
  friend CoordForm operator*(const Poly& f, const CoordForm& a);
  friend CoordForm operator*(const Rational& s, const CoordForm& a);
  CoordForm operator-() const { return Rational(-1) * *this; }
  friend bool operator==(const CoordForm& a, const CoordForm& b) {
    return a.chart_ == b.chart_ && a.terms_ == b.terms_;
  }

  /// Value of a 1-form at `point` on the tangent vector `tangent` (chart components).
  double evaluate(std::span<const double> point, std::span<const double> tangent) const;

  std::string to_string() const;

 private:
  Chart chart_ = Chart::y;
  int order_ = 0;
  std::map<Basis, Poly> terms_;
};

CoordForm wedge(const CoordForm& a, const CoordForm& b);
CoordForm exterior_derivative(const CoordForm& a);

/// Pull a y-chart form back to the x-chart along y₀ = x₀, y₁ = e^{x₁}, y_p = x_p.
CoordForm y_to_x(const CoordForm& a);

/// Fiber integration over x₁ ∈ [0, 1]: forms without dx₁ map to 0 and
/// dx₁∧ω ↦ −(∫₀¹ ω dx₁). Coefficients must be polynomial in x₁ and free of E.
CoordForm gysin(const CoordForm& a);


}  // namespace folcc::forms
