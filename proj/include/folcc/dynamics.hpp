#pragma once

// Circle and interval dynamics: rotation numbers, Diophantine estimates,
// conjugacy and fixed-point checks, the Szekeres recursion, flows and the
// Reeb probe.

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

#include "folcc/diffeo.hpp"
#include "folcc/expr.hpp"

namespace folcc {

// ---------------------------------------------------------------------------
// Rotation numbers

struct RotationEstimate {
  double rho = 0.0;    // reduced into (0, 1]
  double raw = 0.0;    // (φⁿ(z) − z)/n before reduction
  double bound = 0.0;  // |ρ − raw| ≤ bound
  long iterations = 0;
};

/// Birkhoff estimate of the rotation number of φ^power (a lift).
RotationEstimate rotation_number(const LocalDiffeo& phi, long iterations, double z = 0.0, int power = 1);

/// Distance on ℝ/ℤ.
double circle_distance(double a, double b);

// ---------------------------------------------------------------------------
// Diophantine estimates

struct Convergent {
  mpz_class p, q;
  double error = 0.0;     // |α − p/q|
  double exponent = 0.0;  // −ln|α − p/q| / ln q − 2
};

struct DiophantineReport {
  std::vector<mpz_class> partial_quotients;
  std::vector<Convergent> convergents;
  double exponent = 0.0;           // least-squares estimate on the upper half of the log range
  double pointwise_sup = 0.0;      // sup of pointwise exponents over q ≥ 2
  double constant = 0.0;           // min over the tail of q^{2+β}|α − p/q|, β = max(exponent, 0)
  bool liouville_suspect = false;  // pointwise exponent grows with the cap
};

DiophantineReport diophantine_exponent(const BigFloat& alpha, double denominator_cap);
DiophantineReport diophantine_exponent(const ExprAst& alpha, double denominator_cap);

// ---------------------------------------------------------------------------
// Conjugacy and fixed points

/// max over `samples` points of [0, 1) of the circle distance between f(φ(z)) and f(z) + α.
double verify_conjugacy(const LocalDiffeo& phi, const LocalDiffeo& f, double alpha, int samples = 256);

struct FixedPoint {
  double x = 0.0;
  double derivative = 0.0;
  bool hyperbolic = false;
  bool left_semi_isolated = false;   // observed at `resolution`, never proved
  bool right_semi_isolated = false;
  double resolution = 0.0;
  std::string note;
};

struct FixedPointGrid {
  double lo = -1.0, hi = 1.0;
  int samples = 2001;
  double resolution = 0.05;  // width of the side intervals tested for semi-isolation
  int side_samples = 64;
};

std::vector<FixedPoint> classify_fixed_points(const LocalDiffeo& phi, const FixedPointGrid& grid, double tol = 1e-12);

// ---------------------------------------------------------------------------
// Szekeres fields

/// Q_n as an integer polynomial in u₁..u_{n−1}; exponent vectors have length n−1.
struct QPolynomial {
  int n = 1;
  std::map<std::vector<int>, mpz_class> coefficients;

  int degree() const;
  double evaluate(const std::vector<double>& u) const;  // u[k−1] = u_k
  std::string to_string() const;
};

QPolynomial q_polynomial(int n);

/// max over xs of |v^{(n)}v^{n−1} + u_n − Q_n(u)| / max(1, |v^{(n)}v^{n−1}|)
/// with u_k = f^{(k+1)}/(f′)^{k+1} and f′ = 1/v.
double verify_szekeres_identity(const ExprAst& v, int n, const std::vector<double>& xs);

struct FlowReport {
  double time_one_residual = 0.0;  // max |φ₁(x) − φ(x)|
  double group_law_residual = 0.0; // max |φ_s(φ_t(x)) − φ_{s+t}(x)|
  double v0 = 0.0;                 // v(0)
  double v0_prime = 0.0;           // v′(0)
  double phi_prime0 = 0.0;         // φ′(0)
  bool zero_in_domain = false;
};

/// Integrates dx/dt = v(x) from x over time t (adaptive Dormand-Prince).
double integrate_flow(const ExprAst& v, double x, double t, double tol = 1e-10);

FlowReport flow_check(const LocalDiffeo& phi, const ExprAst& v, const std::vector<double>& xs,
                      const std::vector<double>& ts, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Reeb probe

struct ReebRow {
  double n = 0.0;
  double x0n = 0.0;
  double ratio[3] = {0, 0, 0};  // f^{(k)}/(f′)^k for k = 2, 3, 4
  double ln_fprime = 0.0;
  double ln_fprime_over_f = 0.0;
};

struct ReebProfileCheck {
  bool f0_zero = false, nonnegative = false, even = false, increasing = false, blows_up = false,
       inverse_derivative_vanishes = false;
  bool ok() const { return f0_zero && nonnegative && even && increasing && blows_up && inverse_derivative_vanishes; }
};

struct ReebReport {
  ReebProfileCheck profile;
  std::vector<ReebRow> rows;  // n = 1..n_max, then the tail n = 10^j
  bool truncated = false;     // overflow cut the tail short
  double truncated_at = 0.0;
  bool ratios_decreasing[3] = {false, false, false};  // over n = 1..n_max
  bool ln_fprime_increasing = false;                  // over all rows
  double max_ln_fprime = 0.0;
  bool ln_ratio_decreasing = false;                   // ln f′/f over all rows
};

ReebProfileCheck check_reeb_profile(const ExprAst& f);

/// Throws ArgumentError when the profile fails its preconditions.
ReebReport reeb_probe(const ExprAst& f, int n_max, int tail_max_exponent = 300);

}  // namespace folcc
