#include "doctest.h"

#include <random>

#include "folcc/gf.hpp"
#include "folcc/linalg.hpp"

using namespace folcc;
using gf::ExteriorCochain;
using gf::Flavor;

namespace {

ExteriorCochain c(int r) { return ExteriorCochain::generator(r); }
ExteriorCochain w(std::vector<int> idx, Rational k = 1) { return ExteriorCochain::wedge_of(std::move(idx), k); }

// Homogeneous random cochain of the given degree with indices ≤ max_index.
ExteriorCochain random_cochain(std::mt19937_64& rng, int degree, int max_index, int terms = 4) {
  std::uniform_int_distribution<int> idx(0, max_index), coef(-4, 4);
  ExteriorCochain out;
  for (int t = 0; t < terms; ++t) {
    std::vector<int> m;
    for (int k = 0; k < degree; ++k) m.push_back(idx(rng));
    out += w(m, coef(rng));
  }
  return out;
}

int degree_of(const ExteriorCochain& a) { return a.is_zero() ? 0 : static_cast<int>(a.terms().begin()->first.size()); }

// The only monomial of the cochain, up to a nonzero scalar.
bool spans(const ExteriorCochain& a, const gf::Monomial& m) {
  return a.terms().size() == 1 && a.terms().begin()->first == m;
}

}  // namespace

TEST_SUITE("gf") {

TEST_CASE("wedge: anticommutativity, nilpotence, bilinearity") {
  const auto a = gf::wedge(c(2), c(0));
  CHECK(a.terms().size() == 1);
  CHECK(a.coefficient({0, 2}) == -1);
  CHECK(gf::wedge(c(1), c(1)).is_zero());
  CHECK(gf::wedge(c(0) + c(1), c(2)) == w({0, 2}) + w({1, 2}));
  CHECK(w({3, 1, 2}) == w({1, 2, 3}));
  CHECK(w({2, 1, 3}) == Rational(-1) * w({1, 2, 3}));
  CHECK(w({1, 2, 1}).is_zero());
}

TEST_CASE("differential on generators") {
  CHECK(gf::differential(c(1)) == gf::wedge(c(2), c(0)));
  CHECK(gf::differential(c(0)) == gf::wedge(c(1), c(0)));
  CHECK(gf::differential(c(2)) == gf::wedge(c(3), c(0)) + gf::wedge(c(2), c(1)));
  CHECK(gf::differential(gf::wedge(c(2), c(0))).is_zero());
  // d c_r straight from the binomial sum, for a few more r
  for (int r = 0; r <= 10; ++r) {
    ExteriorCochain expect;
    mpz_class binom = 1;
    for (int k = 0; k <= r; ++k) {
      expect += Rational(binom) * gf::wedge(c(r - k + 1), c(k));
      binom = binom * (r - k) / (k + 1);
    }
    CHECK(gf::differential(c(r)) == expect);
    CHECK(gf::differential_of_generator(r) == expect);
  }
}

TEST_CASE("d∘d = 0 on random cochains") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 60; ++i) {
    const auto a = random_cochain(rng, 1 + i % 4, 12);
    CHECK(gf::differential(gf::differential(a)).is_zero());
  }
}

TEST_CASE("d preserves weight") {
  std::mt19937_64 rng(18);
  for (int i = 0; i < 60; ++i) {
    const auto a = random_cochain(rng, 1 + i % 4, 10, 1);
    if (a.is_zero()) continue;
    const int wt = gf::weight(a.terms().begin()->first);
    const auto da = gf::differential(a);
    for (const auto& [m, k] : da.terms()) CHECK(gf::weight(m) == wt);
  }
}

TEST_CASE("graded Leibniz rule") {
  std::mt19937_64 rng(19);
  for (int i = 0; i < 60; ++i) {
    const auto a = random_cochain(rng, 1 + i % 3, 9, 3);
    const auto b = random_cochain(rng, 1 + (i / 3) % 3, 9, 3);
    const Rational sign = degree_of(a) % 2 == 0 ? 1 : -1;
    CHECK(gf::differential(gf::wedge(a, b)) ==
          gf::wedge(gf::differential(a), b) + sign * gf::wedge(a, gf::differential(b)));
  }
}

TEST_CASE("slice bases") {
  const auto s = gf::slice(Flavor::full(), 3, 0);
  REQUIRE(s.basis.size() == 1);
  CHECK(s.basis[0] == gf::Monomial{0, 1, 2});

  const auto g = gf::slice(Flavor::gl1(), 2, 0);
  REQUIRE(g.basis.size() == 1);
  CHECK(g.basis[0] == gf::Monomial{0, 2});

  const auto d = gf::enumerate_basis(Flavor::duminy(2), 3, 0);
  REQUIRE(d.size() == 1);
  CHECK(d[0] == gf::Monomial{0, 1, 2});

  // O(1): even weight only
  CHECK(gf::enumerate_basis(Flavor::o1(), 2, 1).empty());
  CHECK_FALSE(gf::enumerate_basis(Flavor::o1(), 2, 2).empty());
}

TEST_CASE("enumerated bases match brute force") {
  // strictly increasing tuples with Σ(i − 1) = w, by direct recursion over index sums
  for (int d = 0; d <= 4; ++d)
    for (int wt = -2; wt <= 6; ++wt) {
      std::vector<gf::Monomial> brute;
      const int total = wt + d;
      std::vector<int> cur;
      auto rec = [&](auto&& self, int next, int left) -> void {
        if (static_cast<int>(cur.size()) == d) {
          if (left == 0) brute.push_back(cur);
          return;
        }
        for (int i = next; i <= left; ++i) {
          cur.push_back(i);
          self(self, i + 1, left - i);
          cur.pop_back();
        }
      };
      if (total >= 0) rec(rec, 0, total);
      auto got = gf::enumerate_basis(Flavor::full(), d, wt);
      std::sort(got.begin(), got.end());
      std::sort(brute.begin(), brute.end());
      CHECK(got == brute);
    }
}

TEST_CASE("subcomplexes are closed under d") {
  for (const auto& fl : {Flavor::o1(), Flavor::gl1(), Flavor::duminy(2), Flavor::duminy(4)})
    for (int d = 0; d <= 4; ++d)
      for (int wt = -2; wt <= 6; ++wt)
        for (const auto& m : gf::enumerate_basis(fl, d, wt)) {
          const auto dm = gf::differential(w(m));
          for (const auto& [img, k] : dm.terms()) CHECK_MESSAGE(fl.contains(img), fl.name());
        }
}

TEST_CASE("boundary matrices compose to zero") {
  for (int d = 1; d <= 4; ++d)
    for (int wt = -1; wt <= 5; ++wt) {
      const auto s = gf::slice(Flavor::full(), d, wt);
      if (s.basis.empty() || s.basis_below.empty() || s.basis_above.empty()) continue;
      CHECK(linalg::multiply(s.boundary_out, s.boundary_in).is_zero());
    }
}

TEST_CASE("full complex cohomology") {
  for (int d = 0; d <= 5; ++d)
    for (const auto& g : gf::cohomology(Flavor::full(), d, -2, 6)) {
      const std::size_t expect = (g.weight == 0 && (d == 0 || d == 3)) ? 1 : 0;
      CHECK_MESSAGE(g.dim == expect, "degree " << d << " weight " << g.weight);
      CHECK(g.dim == g.cochains - g.rank_out - g.rank_in);
    }
  const auto h3 = gf::cohomology_at(Flavor::full(), 3, 0);
  REQUIRE(h3.representatives.size() == 1);
  CHECK(spans(h3.representatives[0], {0, 1, 2}));
}

TEST_CASE("relative GL(1) cohomology") {
  const auto h2 = gf::cohomology_at(Flavor::gl1(), 2, 0);
  CHECK(h2.dim == 1);
  REQUIRE(h2.representatives.size() == 1);
  CHECK(spans(h2.representatives[0], {0, 2}));
  for (int d = 1; d <= 5; ++d)
    if (d != 2)
      for (const auto& g : gf::cohomology(Flavor::gl1(), d, -2, 6)) CHECK(g.dim == 0);
}

TEST_CASE("relative O(1) complex carries the Godbillon-Vey class") {
  CHECK(gf::cohomology_at(Flavor::o1(), 3, 0).dim == 1);
  for (int d = 1; d <= 5; ++d)
    for (const auto& g : gf::cohomology(Flavor::o1(), d, -2, 6))
      if (!(d == 3 && g.weight == 0)) CHECK(g.dim == 0);
}

TEST_CASE("Duminy complex") {
  for (int k = 2; k <= 6; ++k) {
    const auto r = gf::duminy_cohomology(k);
    for (const auto& [deg, dim] : r.dims) CHECK_MESSAGE(dim == ((deg == 2 || deg == 3) ? 1u : 0u), "k=" << k << " deg " << deg);
    CHECK(r.dims.at(2) == 1);
    CHECK(r.dims.at(3) == 1);
    REQUIRE(r.representatives.at(2).size() == 1);
    REQUIRE(r.representatives.at(3).size() == 1);
    CHECK(spans(r.representatives.at(2)[0], {0, 2}));
    CHECK(spans(r.representatives.at(3)[0], {0, 1, 2}));
  }
  const auto r2 = gf::duminy_cohomology(2);
  CHECK((r2.dims.count(4) == 0 || r2.dims.at(4) == 0));
}

TEST_CASE("Euler characteristic per weight") {
  for (int wt = -1; wt <= 6; ++wt) {
    long chi_c = 0, chi_h = 0;
    for (int d = 0; d * (d - 3) / 2 <= wt; ++d) {
      const auto g = gf::cohomology_at(Flavor::full(), d, wt, false);
      const long sign = d % 2 == 0 ? 1 : -1;
      chi_c += sign * static_cast<long>(g.cochains);
      chi_h += sign * static_cast<long>(g.dim);
    }
    CHECK_MESSAGE(chi_c == chi_h, "weight " << wt);
  }
}

TEST_CASE("parallel and serial rank agree") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> v(-3, 3);
  for (int t = 0; t < 20; ++t) {
    linalg::IntMatrix m(static_cast<std::size_t>(5 + t), static_cast<std::size_t>(9 + t % 4));
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t col = 0; col < m.cols(); ++col) m(r, col) = (r % 3 == 2) ? mpz_class(m(r - 1, col) * 2 - m(r - 2, col)) : mpz_class(v(rng));
    CHECK(linalg::rank(m) == linalg::reference::rank(m));
  }
  const auto s = gf::slice(Flavor::full(), 4, 7);
  CHECK(linalg::rank(s.boundary_out) <= s.basis.size());
}

TEST_CASE("cochain printing") {
  CHECK((w({0, 1, 2}) - Rational(2) * w({0, 3})).to_string() == "c0^c1^c2 - 2*c0^c3");
  CHECK(ExteriorCochain().to_string() == "0");
}

}  // TEST_SUITE
