#pragma once

// The Gelfand-Fuchs cochain complex of formal vector fields on the line:
// the exterior algebra on 1-forms c0, c1, c2, ... with
//
//   d c_r = Σ_{k=0}^{r} C(r,k) c_{r−k+1} ∧ c_k,
//
// extended to all cochains by the graded Leibniz rule. The weight
// Σ (i_j − 1) of a monomial is preserved by d, so each (degree, weight)
// slice is finite and cohomology is computed slice by slice.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "folcc/linalg.hpp"
#include "folcc/scalar.hpp"

namespace folcc::gf {

/// Strictly increasing generator indices (i₁ < … < i_d).
using Monomial = std::vector<int>;

int weight(const Monomial& m);

class ExteriorCochain {
 public:
  ExteriorCochain() = default;

  static ExteriorCochain one();
  static ExteriorCochain generator(int r);
  /// c_{i₁}∧…∧c_{i_d} for indices in any order; sorted with the permutation
  /// sign, zero if an index repeats.
  static ExteriorCochain wedge_of(std::vector<int> indices, const Rational& coeff = Rational(1));

  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Rational coefficient(const Monomial& m) const;

  /// Adds c·m for an already-canonical monomial; drops zero results.
  void add_term(const Monomial& m, const Rational& c);

  ExteriorCochain& operator+=(const ExteriorCochain& o);
  ExteriorCochain& operator-=(const ExteriorCochain& o);
  ExteriorCochain& operator*=(const Rational& s);
  friend ExteriorCochain operator+(ExteriorCochain a, const ExteriorCochain& b) { return a += b; }
  friend ExteriorCochain operator-(ExteriorCochain a, const ExteriorCochain& b) { return a -= b; }
  friend ExteriorCochain operator*(const Rational& s, ExteriorCochain a) { return a *= s; }
  friend bool operator==(const ExteriorCochain& a, const ExteriorCochain& b) { return a.terms_ == b.terms_; }

  /// e.g. "c0^c1^c2 - 2*c0^c3"; "0" for the zero cochain.
  std::string to_string() const;

 private:
  std::map<Monomial, Rational> terms_;
};

ExteriorCochain wedge(const ExteriorCochain& a, const ExteriorCochain& b);
ExteriorCochain differential(const ExteriorCochain& a);
/// d c_r straight from the defining sum.
ExteriorCochain differential_of_generator(int r);

struct Flavor {
  enum class Kind { full, relative_o1, relative_gl1, duminy };
  Kind kind = Kind::full;
  int max_index = 0;  // duminy only: ω ranges over wedges of c1..c_k

  static Flavor full() { return {Kind::full, 0}; }
  static Flavor o1() { return {Kind::relative_o1, 0}; }
  static Flavor gl1() { return {Kind::relative_gl1, 0}; }
  static Flavor duminy(int k) { return {Kind::duminy, k}; }

  std::string name() const;
  bool contains(const Monomial& m) const;
};

struct ComplexSlice {
  Flavor flavor;
  int degree = 0;
  int weight = 0;
  std::vector<Monomial> basis;
  std::vector<Monomial> basis_below;  // degree − 1, same weight
  std::vector<Monomial> basis_above;  // degree + 1, same weight
  linalg::RatMatrix boundary_in;      // C^{d−1} → C^d
  linalg::RatMatrix boundary_out;     // C^d → C^{d+1}
};

/// Monomials of the flavor's complex in the given degree and weight.
std::vector<Monomial> enumerate_basis(const Flavor& flavor, int degree, int weight);

/// Assembles both boundary matrices and checks boundary_out·boundary_in = 0.
ComplexSlice slice(const Flavor& flavor, int degree, int weight);

struct CohomologyGroup {
  int degree = 0;
  int weight = 0;
  std::size_t dim = 0;
  std::size_t cochains = 0;  // dim C^d in this weight
  std::size_t rank_in = 0;
  std::size_t rank_out = 0;
  std::vector<ExteriorCochain> representatives;
};

CohomologyGroup cohomology_at(const Flavor& flavor, int degree, int weight, bool with_representatives = true);

/// One entry per weight in [weight_min, weight_max]; weights run in parallel.
std::vector<CohomologyGroup> cohomology(const Flavor& flavor, int degree, int weight_min, int weight_max,
                                        bool with_representatives = true);

struct DuminyReport {
  int max_index = 0;
  std::map<int, std::size_t> dims;  // degree → dim H^degree(L₀ᵏ)
  std::map<int, std::vector<ExteriorCochain>> representatives;
  std::vector<CohomologyGroup> groups;  // non-empty slices, for reporting
};

/// Cohomology of the complex spanned by ω∧c0, ω a wedge of c1..c_k, over all weights.
DuminyReport duminy_cohomology(int max_index);

}  // namespace folcc::gf
