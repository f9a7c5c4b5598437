#pragma once

// One-dimensional local diffeomorphisms and pseudogroup presentations.

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "folcc/expr.hpp"
#include "folcc/jet.hpp"

namespace folcc {

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x) const { return x >= lo && x <= hi; }
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
  std::string to_string() const;
};

class LocalDiffeo {
 public:
  enum class Kind { explicit_map, conjugated_shift, lift, piecewise };

  struct Piece;

  LocalDiffeo() = default;

  /// x ↦ map(x) on `domain`.
  static LocalDiffeo explicit_map(ExprAst map, Interval domain = {});
  /// x ↦ f⁻¹(f(x) + shift) for a strictly monotone profile f on `domain`.
  static LocalDiffeo conjugated_shift(ExprAst profile, double shift, Interval domain = {});
  /// Lift of a circle map; F(z+1) = F(z)+1 is checked on samples (1e−10).
  static LocalDiffeo lift(ExprAst map);
  /// First piece whose interval contains x wins.
  static LocalDiffeo piecewise(std::vector<Piece> pieces);
  /// The Reeb holonomy: f⁻¹(f(x)+1) on (0,1), identity for x ≥ 1.
  static LocalDiffeo reeb(ExprAst profile);

  /// Parses a map SPEC:
  ///   EXPR                   explicit map on ℝ
  ///   lift:EXPR              circle-map lift
  ///   conj:PROFILE@SHIFT     PROFILE⁻¹(PROFILE(x) + SHIFT)
  ///   reeb:PROFILE           the Reeb holonomy built from PROFILE
  static LocalDiffeo parse(const std::string& spec);

  Kind kind() const { return kind_; }
  const Interval& domain() const { return domain_; }
  /// The map (explicit/lift) or the profile (conjugated_shift).
  const ExprAst& expr() const { return expr_; }
  double shift() const { return shift_; }
  const std::vector<Piece>& pieces() const { return *pieces_; }
  /// Structurally x ↦ x.
  bool is_identity() const;

  double operator()(double x) const;
  /// Derivative stack of the map at x, order q.
  Jet<double> jet(double x, int q) const;

  /// f⁻¹(target) for the conjugated-shift profile: bracket outward from
  /// `guess` starting with `step`, bisect to 1e−14, then two Newton steps.
  double profile_inverse(double target, double guess, double step = 0.0) const;

  std::string describe() const;

 private:
  Kind kind_ = Kind::explicit_map;
  ExprAst expr_ = ExprAst::variable();
  double shift_ = 0.0;
  int orientation_ = 1;  // sign of the profile's slope
  Interval domain_;
  std::shared_ptr<const std::vector<Piece>> pieces_;
};

struct LocalDiffeo::Piece {
  Interval interval;
  LocalDiffeo map;
};

/// Numerical check of F(z+1) = F(z) + 1 at `samples` points of [0, 1).
bool is_lift(const LocalDiffeo& phi, int samples = 16, double tol = 1e-10);

struct Generator {
  std::string name;
  LocalDiffeo map;
  std::string source_chart;
  std::string target_chart;
  /// Where the cocycle is sampled; defaults to the source chart clipped to [−10, 10].
  std::optional<Interval> sample;
};

struct Chart {
  std::string name;
  Interval interval;
};

struct PseudogroupPresentation {
  std::string name;
  std::string description;
  std::vector<Chart> charts;
  std::vector<Generator> generators;

  const Chart& chart(const std::string& name) const;
  /// Sampling interval of a generator (explicit, else chart ∩ domain ∩ [−10, 10]).
  Interval sample_interval(const Generator& g) const;
};

}  // namespace folcc
