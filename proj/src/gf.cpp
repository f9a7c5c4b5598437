#include "folcc/gf.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace folcc::gf {

int weight(const Monomial& m) {
  int w = 0;
  for (int i : m) w += i - 1;
  return w;
}

ExteriorCochain ExteriorCochain::one() {
  ExteriorCochain c;
  c.terms_[{}] = 1;
  return c;
}

ExteriorCochain ExteriorCochain::generator(int r) { return wedge_of({r}); }

ExteriorCochain ExteriorCochain::wedge_of(std::vector<int> idx, const Rational& coeff) {
  if (std::any_of(idx.begin(), idx.end(), [](int i) { return i < 0; }))
    throw ArgumentError("generator indices must be non-negative");
  // insertion sort, counting transpositions
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i)
    for (std::size_t j = i; j > 0 && idx[j - 1] > idx[j]; --j) {
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  ExteriorCochain c;
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) return c;
  c.add_term(idx, sign * coeff);
  return c;
}

Rational ExteriorCochain::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

void ExteriorCochain::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

ExteriorCochain& ExteriorCochain::operator+=(const ExteriorCochain& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

ExteriorCochain& ExteriorCochain::operator-=(const ExteriorCochain& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

ExteriorCochain& ExteriorCochain::operator*=(const Rational& s) {
  if (s == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

std::string ExteriorCochain::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational mag = abs(c);
    if (first) {
      if (sgn(c) < 0) os << "-";
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    const bool unit = mag == 1;
    if (!unit || m.empty()) os << folcc::to_string(mag);
    if (!unit && !m.empty()) os << "*";
    for (std::size_t k = 0; k < m.size(); ++k) os << (k ? "^" : "") << "c" << m[k];
  }
  return os.str();
}

ExteriorCochain wedge(const ExteriorCochain& a, const ExteriorCochain& b) {
  ExteriorCochain out;
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      std::vector<int> idx(ma);
      idx.insert(idx.end(), mb.begin(), mb.end());
      out += ExteriorCochain::wedge_of(std::move(idx), ca * cb);
    }
  return out;
}

ExteriorCochain differential_of_generator(int r) {
  ExteriorCochain out;
  mpz_class binom(1);
  for (int k = 0; k <= r; ++k) {
    if (k > 0) {
      binom *= r - k + 1;
      binom /= k;
    }
    out += ExteriorCochain::wedge_of({r - k + 1, k}, Rational(binom));
  }
  return out;
}

ExteriorCochain differential(const ExteriorCochain& a) {
  ExteriorCochain out;
  for (const auto& [m, c] : a.terms()) {
    // d(c_{i1}∧…∧c_{id}) = Σ_j (−1)^j c_{i1}∧…∧d(c_{ij})∧…∧c_{id}
    for (std::size_t j = 0; j < m.size(); ++j) {
      const ExteriorCochain left = ExteriorCochain::wedge_of(std::vector<int>(m.begin(), m.begin() + static_cast<long>(j)));
      const ExteriorCochain right = ExteriorCochain::wedge_of(std::vector<int>(m.begin() + static_cast<long>(j) + 1, m.end()));
      ExteriorCochain term = wedge(wedge(left, differential_of_generator(m[j])), right);
      term *= (j % 2 == 0 ? c : Rational(-c));
      out += term;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string Flavor::name() const {
  switch (kind) {
    case Kind::full: return "full";
    case Kind::relative_o1: return "o1";
    case Kind::relative_gl1: return "gl1";
    case Kind::duminy: return "duminy(" + std::to_string(max_index) + ")";
  }
  return "?";
}

bool Flavor::contains(const Monomial& m) const {
  switch (kind) {
    case Kind::full:
      return true;
    case Kind::relative_o1:
      // invariants of c_r ↦ (−1)^{r−1} c_r
      return weight(m) % 2 == 0;
    case Kind::relative_gl1:
      return weight(m) == 0 && std::find(m.begin(), m.end(), 1) == m.end();
    case Kind::duminy:
      if (m.empty() || m.front() != 0) return false;
      return std::all_of(m.begin() + 1, m.end(), [&](int i) { return i >= 1 && i <= max_index; });
  }
  return false;
}

std::vector<Monomial> enumerate_basis(const Flavor& flavor, int degree, int w) {
  std::vector<Monomial> out;
  if (degree < 0) return out;
  const int total = w + degree;  // Σ i_j
  if (total < 0) return out;
  Monomial cur;
  std::function<void(int, int)> rec = [&](int next_min, int remaining) {
    const int slots = degree - static_cast<int>(cur.size());
    if (slots == 0) {
      if (remaining == 0 && flavor.contains(cur)) out.push_back(cur);
      return;
    }
    // smallest possible sum of `slots` distinct indices ≥ next_min
    for (int i = next_min;; ++i) {
      const int min_rest = (slots - 1) * (i + 1) + (slots - 1) * (slots - 2) / 2;
      if (i + min_rest > remaining) break;
      cur.push_back(i);
      rec(i + 1, remaining - i);
      cur.pop_back();
    }
  };
  rec(0, total);
  return out;
}

namespace {

linalg::RatMatrix boundary_matrix(const Flavor& flavor, const std::vector<Monomial>& source,
                                  const std::vector<Monomial>& target) {
  linalg::RatMatrix m(target.size(), source.size());
  std::map<Monomial, std::size_t> row_of;
  for (std::size_t i = 0; i < target.size(); ++i) row_of[target[i]] = i;
  for (std::size_t j = 0; j < source.size(); ++j) {
    const ExteriorCochain image = differential(ExteriorCochain::wedge_of(source[j]));
    for (const auto& [mono, c] : image.terms()) {
      auto it = row_of.find(mono);
      if (it == row_of.end())
        throw Error("complex " + flavor.name() + " is not closed under d: d(" +
                    ExteriorCochain::wedge_of(source[j]).to_string() + ") leaves the span");
      m(it->second, j) = c;
    }
  }
  return m;
}

ExteriorCochain from_vector(const std::vector<Monomial>& basis, const std::vector<Rational>& v) {
  ExteriorCochain c;
  for (std::size_t i = 0; i < basis.size(); ++i) c.add_term(basis[i], v[i]);
  return c;
}

}  // namespace

ComplexSlice slice(const Flavor& flavor, int degree, int w) {
  ComplexSlice s;
  s.flavor = flavor;
  s.degree = degree;
  s.weight = w;
  s.basis = enumerate_basis(flavor, degree, w);
  s.basis_below = enumerate_basis(flavor, degree - 1, w);
  s.basis_above = enumerate_basis(flavor, degree + 1, w);
  s.boundary_in = boundary_matrix(flavor, s.basis_below, s.basis);
  s.boundary_out = boundary_matrix(flavor, s.basis, s.basis_above);
  if (s.boundary_in.cols() > 0 && s.boundary_out.rows() > 0 &&
      !linalg::multiply(s.boundary_out, s.boundary_in).is_zero())
    throw Error("d∘d ≠ 0 on slice " + flavor.name() + " degree " + std::to_string(degree));
  return s;
}

CohomologyGroup cohomology_at(const Flavor& flavor, int degree, int w, bool with_representatives) {
  const ComplexSlice s = slice(flavor, degree, w);
  CohomologyGroup g;
  g.degree = degree;
  g.weight = w;
  g.cochains = s.basis.size();
  g.rank_in = linalg::rank(s.boundary_in);
  g.rank_out = linalg::rank(s.boundary_out);
  g.dim = g.cochains - g.rank_in - g.rank_out;
  if (!with_representatives || g.dim == 0) return g;

  const auto kernel = linalg::nullspace(s.boundary_out);
  // Greedily extend a basis of the image by kernel vectors.
  std::vector<std::vector<Rational>> span;
  for (std::size_t j = 0; j < s.boundary_in.cols(); ++j) {
    std::vector<Rational> col(s.basis.size());
    for (std::size_t i = 0; i < s.basis.size(); ++i) col[i] = s.boundary_in(i, j);
    span.push_back(std::move(col));
  }
  auto rank_of = [&](const std::vector<std::vector<Rational>>& vs) {
    linalg::RatMatrix m(vs.size(), s.basis.size());
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t k = 0; k < s.basis.size(); ++k) m(i, k) = vs[i][k];
    return linalg::rank(m);
  };
  std::size_t current = rank_of(span);
  for (const auto& v : kernel) {
    span.push_back(v);
    const std::size_t r = rank_of(span);
    if (r > current) {
      current = r;
      g.representatives.push_back(from_vector(s.basis, v));
    } else {
      span.pop_back();
    }
    if (g.representatives.size() == g.dim) break;
  }
  return g;
}

std::vector<CohomologyGroup> cohomology(const Flavor& flavor, int degree, int weight_min, int weight_max,
                                        bool with_representatives) {
  if (weight_max < weight_min) return {};
  std::vector<CohomologyGroup> out(static_cast<std::size_t>(weight_max - weight_min + 1));
  const int n = static_cast<int>(out.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = cohomology_at(flavor, degree, weight_min + i, with_representatives);
  return out;
}

DuminyReport duminy_cohomology(int k) {
  if (k < 2) throw ArgumentError("duminy_cohomology needs k >= 2");
  DuminyReport rep;
  rep.max_index = k;
  const Flavor flavor = Flavor::duminy(k);
  // Every monomial is c0 ∧ (subset of c1..ck); collect the occupied (degree, weight) slices.
  std::map<std::pair<int, int>, bool> slices;
  for (unsigned mask = 0; mask < (1U << k); ++mask) {
    Monomial m{0};
    for (int i = 1; i <= k; ++i)
      if (mask & (1U << (i - 1))) m.push_back(i);
    slices[{static_cast<int>(m.size()), weight(m)}] = true;
  }
  for (int d = 1; d <= k + 1; ++d) rep.dims[d] = 0;
  for (const auto& [key, unused] : slices) {
    (void)unused;
    CohomologyGroup g = cohomology_at(flavor, key.first, key.second, true);
    rep.dims[g.degree] += g.dim;
    for (auto& r : g.representatives) rep.representatives[g.degree].push_back(r);
    rep.groups.push_back(std::move(g));
  }
  return rep;
}

}  // namespace folcc::gf
