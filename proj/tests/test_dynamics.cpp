#include "doctest.h"

#include <cmath>
#include <random>

#include "folcc/dynamics.hpp"

using namespace folcc;

namespace {

const double kAlpha = std::sqrt(2.0) - 1.0;
const char* kConj = "conj:x + 1/100*sin(6.283185307179586*x)@sqrt(2) - 1";
const char* kReeb = "exp(1/(1 - x^2)) - exp(1)";

double frac(double x) { return x - std::floor(x); }

// (φⁿ(z) − z)/n by plain iteration, no reduction.
double brute_rotation(const LocalDiffeo& phi, long n, double z = 0.0) {
  double w = z;
  for (long i = 0; i < n; ++i) w = phi(w);
  return (w - z) / static_cast<double>(n);
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("local diffeos: conjugated shifts invert the profile") {
  const auto phi = LocalDiffeo::parse(kConj);
  const auto f = ExprAst::parse("x + 1/100*sin(6.283185307179586*x)");
  for (double x = -2.0; x <= 2.0; x += 0.173) CHECK(std::abs(f.eval(phi(x)) - f.eval(x) - kAlpha) <= 1e-9);
  CHECK(is_lift(phi));
  CHECK_FALSE(is_lift(LocalDiffeo::parse("2*x")));

  // jet of the implicit map against central differences of its values
  const double x = 0.3, h = 1e-4;
  const auto j = phi.jet(x, 2);
  CHECK(j.derivative(1) == doctest::Approx((phi(x + h) - phi(x - h)) / (2 * h)).epsilon(1e-8));
  CHECK(j.derivative(2) == doctest::Approx((phi(x + h) - 2 * phi(x) + phi(x - h)) / (h * h)).epsilon(1e-4));

  const auto reeb = LocalDiffeo::reeb(ExprAst::parse(kReeb));
  const auto fr = ExprAst::parse(kReeb);
  for (double y : {0.1, 0.5, 0.9}) CHECK(std::abs(fr.eval(reeb(y)) - fr.eval(y) - 1.0) <= 1e-9 * std::max(1.0, fr.eval(reeb(y))));
  CHECK(reeb(1.0) == 1.0);
  CHECK(reeb(1.3) == 1.3);
  CHECK_THROWS_AS((void)LocalDiffeo::parse("conj:x@"), Error);
}

TEST_CASE("rotation number of a rigid rotation") {
  const auto rot = LocalDiffeo::parse("lift:x + sqrt(2) - 1");
  for (long n : {1L, 7L, 1000L, 100000L}) {
    const auto est = rotation_number(rot, n);
    CHECK(std::abs(est.rho - kAlpha) <= 1e-14);
    CHECK(est.bound == doctest::Approx(1.0 / static_cast<double>(n)));
  }
  CHECK(rotation_number(LocalDiffeo::parse("lift:x + 1"), 10).rho == 1.0);  // convention: (0, 1]
  CHECK_THROWS_AS((void)rotation_number(LocalDiffeo::parse("2*x"), 10), ArgumentError);
  CHECK_THROWS_AS((void)rotation_number(rot, 0), ArgumentError);
}

TEST_CASE("rotation number of a conjugated rotation") {
  const auto phi = LocalDiffeo::parse(kConj);
  const long n = 100000;
  const auto est = rotation_number(phi, n, 0.25);
  CHECK(std::abs(est.rho - kAlpha) <= est.bound);
  CHECK(std::abs(est.raw - brute_rotation(phi, 2000, 0.25)) <= 1.0 / 2000 + est.bound);

  // ρ(φ^k) ≡ k·ρ(φ) mod 1
  for (int k = 2; k <= 5; ++k) {
    const auto pk = rotation_number(phi, n / k, 0.25, k);
    CHECK(circle_distance(pk.rho, frac(k * est.rho)) <= pk.bound + k * est.bound);
  }
}

TEST_CASE("rotation number is a conjugacy invariant") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> eps(-0.1, 0.1), shift(0.05, 0.95);
  for (int t = 0; t < 5; ++t) {
    const double a = shift(rng);
    char buf[256];
    std::snprintf(buf, sizeof buf, "conj:x + %.6f*sin(6.283185307179586*x) + %.6f*cos(12.566370614359172*x)@%.17g",
                  eps(rng), eps(rng) / 2, a);
    const auto phi = LocalDiffeo::parse(buf);
    const auto est = rotation_number(phi, 20000);
    CHECK(circle_distance(est.rho, a) <= est.bound);
  }
}

TEST_CASE("circle distance") {
  CHECK(circle_distance(0.05, 0.95) == doctest::Approx(0.1));
  CHECK(circle_distance(1.0, 0.0) == 0.0);
  CHECK(circle_distance(0.2, 3.2) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("Diophantine: golden ratio") {
  const auto r = diophantine_exponent(ExprAst::parse("(sqrt(5) - 1)/2"), 1e6);
  CHECK(r.exponent <= 0.05);
  CHECK_FALSE(r.liouville_suspect);
  CHECK(std::abs(r.constant - 1 / std::sqrt(5.0)) <= 0.1 / std::sqrt(5.0));
  // partial quotients [0; 1, 1, 1, ...], convergent denominators are Fibonacci numbers
  REQUIRE(r.partial_quotients.size() > 20);
  CHECK(r.partial_quotients[0] == 0);
  for (std::size_t i = 1; i < r.partial_quotients.size(); ++i) CHECK(r.partial_quotients[i] == 1);
  mpz_class a = 1, b = 1;
  for (const auto& c : r.convergents) {
    CHECK(c.q <= mpz_class(1000000));
    if (c.q < 2) continue;
    while (b < c.q) {
      const mpz_class t = a + b;
      a = b;
      b = t;
    }
    CHECK(c.q == b);
    CHECK(c.p == a);  // p_k/q_k = F_{k-1}/F_k
  }
}

TEST_CASE("Diophantine: sqrt(2) - 1 and a Liouville number") {
  const auto r = diophantine_exponent(ExprAst::parse("sqrt(2) - 1"), 1e8);
  CHECK(std::abs(r.exponent) <= 0.05);
  CHECK_FALSE(r.liouville_suspect);
  for (std::size_t i = 1; i < r.partial_quotients.size(); ++i) CHECK(r.partial_quotients[i] == 2);

  // Σ_{k ≤ 4} 10^{−k!} is rational with denominator 10^24; below that cap it
  // is indistinguishable from the Liouville constant. The flag compares the
  // upper and lower halves of the (log) cap window, so the 10^6 spike has to
  // land in the upper half.
  BigFloat alpha = 0;
  for (int k = 1, f = 1; k <= 4; ++k, f *= k) alpha += boost::multiprecision::pow(BigFloat(10), -f);
  for (double cap : {1e8, 1e12}) CHECK(diophantine_exponent(alpha, cap).liouville_suspect);
  const auto l = diophantine_exponent(alpha, 1e8);
  CHECK(l.pointwise_sup >= 1.5);
  // the partial sums are convergents: 1/10, 11/100, 110001/10^6
  bool found = false;
  for (const auto& c : l.convergents) found |= (c.q == mpz_class(1000000) && c.p == mpz_class(110001));
  CHECK(found);

  CHECK_THROWS_AS((void)diophantine_exponent(ExprAst::parse("3/7"), 1e6), DomainError);
  CHECK_THROWS_AS((void)diophantine_exponent(ExprAst::parse("sqrt(2)"), 1), ArgumentError);
}

TEST_CASE("conjugacy verification") {
  const auto rot = LocalDiffeo::parse("lift:x + sqrt(2) - 1");
  const auto id = LocalDiffeo::parse("x");
  CHECK(verify_conjugacy(rot, id, kAlpha) == doctest::Approx(0.0).epsilon(1e-15));
  const auto phi = LocalDiffeo::parse(kConj);
  const auto f = LocalDiffeo::parse("x + 1/100*sin(6.283185307179586*x)");
  CHECK(verify_conjugacy(phi, f, kAlpha) <= 1e-9);
  CHECK(verify_conjugacy(phi, f, kAlpha + 0.01) == doctest::Approx(0.01).epsilon(1e-6));
}

TEST_CASE("fixed points: hyperbolic and parabolic") {
  const auto a = classify_fixed_points(LocalDiffeo::parse("2*x"), {-1, 1});
  REQUIRE(a.size() == 1);
  CHECK(a[0].x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(a[0].derivative == doctest::Approx(2.0));
  CHECK(a[0].hyperbolic);

  const auto b = classify_fixed_points(LocalDiffeo::parse("x + x^3"), {-0.99, 0.99});
  REQUIRE(b.size() == 1);
  CHECK(std::abs(b[0].x) <= 1e-4);
  CHECK(b[0].derivative == doctest::Approx(1.0));
  CHECK_FALSE(b[0].hyperbolic);
  CHECK(b[0].left_semi_isolated);
  CHECK(b[0].right_semi_isolated);

  const auto c = classify_fixed_points(LocalDiffeo::parse("-x"), {-0.9, 0.9});
  REQUIRE(c.size() == 1);
  CHECK_FALSE(c[0].hyperbolic);  // |φ′| = 1

  const auto d = classify_fixed_points(LocalDiffeo::parse("x/(1-x)"), {-0.5, 0.5});
  REQUIRE(d.size() == 1);
  CHECK_FALSE(d[0].hyperbolic);

  const auto e = classify_fixed_points(LocalDiffeo::parse("x^2"), {-0.5, 2.0});
  REQUIRE(e.size() == 2);
  CHECK(e[0].hyperbolic);  // 0, φ′ = 0
  CHECK(e[1].x == doctest::Approx(1.0));
  CHECK(e[1].hyperbolic);  // 1, φ′ = 2

  CHECK(classify_fixed_points(LocalDiffeo::parse("x + 1"), {-3, 3}).empty());
}

TEST_CASE("fixed points: the Reeb holonomy") {
  const auto phi = LocalDiffeo::reeb(ExprAst::parse(kReeb));
  FixedPointGrid grid;
  grid.lo = 0.05;
  grid.hi = std::sqrt(2.0) - 0.01;
  const auto fps = classify_fixed_points(phi, grid);
  REQUIRE_FALSE(fps.empty());
  const auto& p = fps.front();
  CHECK(p.x == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(p.derivative == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_FALSE(p.hyperbolic);
  CHECK(p.left_semi_isolated);
  CHECK_FALSE(p.right_semi_isolated);
  CHECK(p.resolution == grid.resolution);
}

TEST_CASE("Q polynomials") {
  CHECK(q_polynomial(1).coefficients.empty());
  const auto q2 = q_polynomial(2);
  REQUIRE(q2.coefficients.size() == 1);
  CHECK(q2.coefficients.begin()->first == std::vector<int>{2});
  CHECK(q2.coefficients.begin()->second == 2);
  for (int n = 1; n <= 8; ++n) CHECK(q_polynomial(n).degree() <= n);
  CHECK_THROWS_AS((void)q_polynomial(0), ArgumentError);
}

TEST_CASE("Q polynomials against the closed form for v = x^2") {
  // 1/v = x^{-2}: u_k = (1/v)^{(k)} v^{k+1} = (−1)^k (k+1)! x^k,
  // and v^{(n)} v^{n−1} is 2x, 2x², then 0; so Q_n = v^{(n)}v^{n−1} + u_n.
  for (double x : {0.1, 0.7, 1.3}) {
    std::vector<double> u;
    double fact = 1.0;
    for (int k = 1; k <= 7; ++k) {
      fact *= (k + 1);
      u.push_back((k % 2 == 0 ? 1.0 : -1.0) * fact * std::pow(x, k));
    }
    for (int n = 1; n <= 7; ++n) {
      const double lhs = n == 1 ? 2 * x : n == 2 ? 2 * x * x : 0.0;
      const double expect = lhs + u[static_cast<std::size_t>(n - 1)];
      const double got = q_polynomial(n).evaluate(u);
      CHECK(std::abs(got - expect) <= 1e-9 * std::max(1.0, std::abs(expect)));
    }
  }
}

TEST_CASE("Szekeres identity") {
  const auto v2 = ExprAst::parse("x^2");
  // n = 1 by hand: v′ = 2x and −f″/f′² = 2x with f = −1/x
  CHECK(verify_szekeres_identity(v2, 1, {0.1, 0.2, 0.5}) <= 1e-15);
  for (int n = 1; n <= 4; ++n) CHECK(verify_szekeres_identity(v2, n, {0.1, 0.2, 0.5}) <= 1e-8);
  for (int n = 1; n <= 6; ++n) {
    CHECK(verify_szekeres_identity(ExprAst::parse("x"), n, {0.3, 1.0, 2.5}) <= 1e-8);
    CHECK(verify_szekeres_identity(ExprAst::parse("x*ln(2)"), n, {0.3, 1.0, 2.5}) <= 1e-8);
  }
  CHECK_THROWS_AS((void)verify_szekeres_identity(v2, 2, {0.0}), DomainError);
}

TEST_CASE("flows: parabolic and linear") {
  const auto v2 = ExprAst::parse("x^2");
  double worst = 0.0;
  for (double x = 0.05; x <= 0.5 + 1e-12; x += 0.05)
    for (double t = 0.0; t <= 1.0 + 1e-12; t += 0.125) worst = std::max(worst, std::abs(integrate_flow(v2, x, t) - x / (1 - t * x)));
  CHECK(worst <= 1e-8);

  const auto rep = flow_check(LocalDiffeo::parse("x/(1-x)"), v2, {0.05, 0.2, 0.5}, {0.125, 0.25, 0.5});
  CHECK(rep.time_one_residual <= 1e-8);
  CHECK(rep.group_law_residual <= 1e-7);
  CHECK(rep.zero_in_domain);
  CHECK(std::abs(rep.v0) <= 1e-10);
  CHECK(std::abs(rep.v0_prime) <= 1e-10);
  CHECK(rep.phi_prime0 == doctest::Approx(1.0));

  const auto vl = ExprAst::parse("x*ln(3)");
  for (double x : {-1.0, 0.5, 2.0})
    for (double t : {0.3, 1.0}) CHECK(integrate_flow(vl, x, t) == doctest::Approx(std::pow(3.0, t) * x).epsilon(1e-9));
  const auto lin = flow_check(LocalDiffeo::parse("3*x"), vl, {-1.0, 0.5, 2.0}, {0.5, 1.0});
  CHECK(lin.time_one_residual <= 1e-8);
  CHECK(lin.v0_prime == doctest::Approx(std::log(3.0)));

  // blow-up: x′ = x² from 2 escapes before t = 1
  CHECK_THROWS_AS((void)integrate_flow(v2, 2.0, 1.0), DomainError);
}

TEST_CASE("Reeb profile conditions") {
  const auto ok = check_reeb_profile(ExprAst::parse(kReeb));
  CHECK(ok.ok());
  CHECK_FALSE(check_reeb_profile(ExprAst::parse("x")).ok());          // odd, negative
  CHECK_FALSE(check_reeb_profile(ExprAst::parse("x^2")).ok());        // bounded at 1
  CHECK_FALSE(check_reeb_profile(ExprAst::parse("1/(1 - x^2)")).ok());  // f(0) = 1
  CHECK_THROWS_AS((void)reeb_probe(ExprAst::parse("x^2"), 12), ArgumentError);
}

TEST_CASE("Reeb probe") {
  const auto f = ExprAst::parse(kReeb);
  const auto r = reeb_probe(f, 12);
  REQUIRE(r.rows.size() >= 12);
  for (int i = 0; i < 12; ++i) {
    const auto& row = r.rows[static_cast<std::size_t>(i)];
    CHECK(row.n == i + 1);
    CHECK(f.eval(row.x0n) == doctest::Approx(row.n).epsilon(1e-10));
  }
  // first row by an independent route: symbolic derivatives
  const auto d1 = f.derivative(), d2 = d1.derivative();
  const double x1 = r.rows[0].x0n;
  CHECK(r.rows[0].ratio[0] == doctest::Approx(d2.eval(x1) / (d1.eval(x1) * d1.eval(x1))).epsilon(1e-9));
  CHECK(r.rows[0].ln_fprime == doctest::Approx(std::log(d1.eval(x1))).epsilon(1e-12));

  for (int k = 0; k < 3; ++k) {
    CHECK(r.ratios_decreasing[k]);
    for (int i = 1; i < 12; ++i) CHECK(std::abs(r.rows[static_cast<std::size_t>(i)].ratio[k]) < std::abs(r.rows[static_cast<std::size_t>(i - 1)].ratio[k]));
  }
  CHECK(r.ln_fprime_increasing);
  CHECK(r.max_ln_fprime > 50);
  CHECK(r.ln_ratio_decreasing);
  CHECK(r.rows.back().ln_fprime_over_f < 1e-3);
  if (r.truncated) CHECK(r.truncated_at > 1e12);
}

}  // TEST_SUITE
