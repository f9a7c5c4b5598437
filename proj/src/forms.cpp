#include "folcc/forms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "folcc/error.hpp"

namespace folcc::forms {
namespace {

const char* symbol(Chart chart) { return chart == Chart::y ? "y" : "x"; }

void require_same(int a, int b) {
  if (a != b) throw ArgumentError("forms of different jet orders cannot be combined");
}

}  // namespace

// ---------------------------------------------------------------------------
// Poly

Poly Poly::constant(int order, const Rational& c) {
  Poly p(order);
  p.add_term(Exponents(static_cast<std::size_t>(p.nvars()), 0), c);
  return p;
}

Poly Poly::coordinate(int order, int index, int power) {
  if (index < 0 || index > order) throw ArgumentError("coordinate index out of range");
  Poly p(order);
  Exponents e(static_cast<std::size_t>(p.nvars()), 0);
  e[static_cast<std::size_t>(index)] = power;
  p.add_term(e, Rational(1));
  return p;
}

Poly Poly::exp_x1(int order, int power) {
  Poly p(order);
  Exponents e(static_cast<std::size_t>(p.nvars()), 0);
  e.back() = power;
  p.add_term(e, Rational(1));
  return p;
}

void Poly::add_term(const Exponents& e, const Rational& c) {
  if (c == 0) return;
  if (static_cast<int>(e.size()) != nvars()) throw ArgumentError("exponent vector has the wrong length");
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Poly& Poly::operator+=(const Poly& o) {
  if (terms_.empty()) order_ = o.order_;
  if (!o.terms_.empty()) require_same(order_, o.order_);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (terms_.empty()) order_ = o.order_;
  if (!o.terms_.empty()) require_same(order_, o.order_);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Poly& Poly::operator*=(const Rational& s) {
  if (s == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly out(a.order_);
  if (a.terms_.empty() || b.terms_.empty()) return out;
  require_same(a.order_, b.order_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      Poly::Exponents e(ea);
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
      out.add_term(e, ca * cb);
    }
  return out;
}

Poly Poly::pow(int n) const {
  if (n < 0) {
    if (terms_.size() != 1) throw DomainError("negative power of a non-monomial coefficient");
    const auto& [e, c] = *terms_.begin();
    Poly inv(order_);
    Exponents ne(e);
    for (auto& k : ne) k = -k;
    inv.add_term(ne, 1 / c);
    return inv.pow(-n);
  }
  Poly r = constant(order_, Rational(1));
  for (int i = 0; i < n; ++i) r = r * *this;
  return r;
}

Poly Poly::partial(int index, Chart chart) const {
  Poly out(order_);
  const auto i = static_cast<std::size_t>(index);
  for (const auto& [e, c] : terms_) {
    if (e[i] != 0) {
      Exponents ne(e);
      ne[i] -= 1;
      out.add_term(ne, c * e[i]);
    }
    if (chart == Chart::x && index == 1 && e.back() != 0) out.add_term(e, c * e.back());
  }
  return out;
}

Poly Poly::substitute(std::span<const Poly> images) const {
  if (static_cast<int>(images.size()) != order_ + 1) throw ArgumentError("substitute: need one image per coordinate");
  Poly out(order_);
  for (const auto& [e, c] : terms_) {
    Poly term = constant(order_, c);
    for (std::size_t i = 0; i + 1 < e.size(); ++i)
      if (e[i] != 0) term = term * images[i].pow(e[i]);
    if (e.back() != 0) term = term * exp_x1(order_, e.back());
    out += term;
  }
  return out;
}

double Poly::evaluate(std::span<const double> point, Chart chart) const {
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double v = c.get_d();
    for (std::size_t i = 0; i + 1 < e.size(); ++i)
      if (e[i] != 0) v *= std::pow(point[i], e[i]);
    if (e.back() != 0) {
      if (chart != Chart::x) throw ArgumentError("E symbol outside the x-chart");
      v *= std::exp(e.back() * point[1]);
    }
    sum += v;
  }
  return sum;
}

std::string Poly::to_string(Chart chart) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    const Rational mag = abs(c);
    os << (first ? (sgn(c) < 0 ? "-" : "") : (sgn(c) < 0 ? " - " : " + "));
    first = false;
    std::vector<std::string> factors;
    for (std::size_t i = 0; i + 1 < e.size(); ++i) {
      if (e[i] == 0) continue;
      std::string f = std::string(symbol(chart)) + std::to_string(i);
      if (e[i] != 1) f += "^" + std::to_string(e[i]);
      factors.push_back(f);
    }
    if (e.back() != 0) factors.push_back(e.back() == 1 ? "exp(x1)" : "exp(" + std::to_string(e.back()) + "*x1)");
    if (mag != 1 || factors.empty()) factors.insert(factors.begin(), folcc::to_string(mag));
    for (std::size_t k = 0; k < factors.size(); ++k) os << (k ? "*" : "") << factors[k];
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// CoordForm

CoordForm CoordForm::function(Chart chart, const Poly& f) {
  CoordForm a(chart, f.order());
  a.add_term({}, f);
  return a;
}

CoordForm CoordForm::monomial(Chart chart, const Poly& f, std::vector<int> idx) {
  CoordForm a(chart, f.order());
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i)
    for (std::size_t j = i; j > 0 && idx[j - 1] > idx[j]; --j) {
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) return a;
  for (int i : idx)
    if (i < 0 || i > f.order()) throw ArgumentError("differential index out of range");
  a.add_term(idx, Rational(sign) * f);
  return a;
}

CoordForm CoordForm::differential_of(Chart chart, int order, int index) {
  return monomial(chart, Poly::constant(order, Rational(1)), {index});
}

int CoordForm::degree() const { return terms_.empty() ? -1 : static_cast<int>(terms_.begin()->first.size()); }

void CoordForm::add_term(const Basis& b, const Poly& p) {
  if (p.is_zero()) return;
  if (terms_.empty()) order_ = p.order();
  require_same(order_, p.order());
  auto [it, inserted] = terms_.try_emplace(b, p);
  if (!inserted) {
    it->second += p;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

CoordForm& CoordForm::operator+=(const CoordForm& o) {
  if (!o.terms_.empty() && !terms_.empty() && o.chart_ != chart_) throw ArgumentError("forms in different charts");
  if (terms_.empty()) chart_ = o.chart_;
  for (const auto& [b, p] : o.terms_) add_term(b, p);
  return *this;
}

CoordForm& CoordForm::operator-=(const CoordForm& o) {
  if (!o.terms_.empty() && !terms_.empty() && o.chart_ != chart_) throw ArgumentError("forms in different charts");
  if (terms_.empty()) chart_ = o.chart_;
  for (const auto& [b, p] : o.terms_) add_term(b, -p);
  return *this;
}

CoordForm operator*(const Poly& f, const CoordForm& a) {
  CoordForm out(a.chart_, a.order_);
  for (const auto& [b, p] : a.terms_) out.add_term(b, f * p);
  return out;
}

CoordForm operator*(const Rational& s, const CoordForm& a) {
  CoordForm out(a.chart_, a.order_);
  for (const auto& [b, p] : a.terms_) out.add_term(b, s * p);
  return out;
}

double CoordForm::evaluate(std::span<const double> point, std::span<const double> tangent) const {
  double sum = 0.0;
  for (const auto& [b, p] : terms_) {
    if (b.size() != 1) throw ArgumentError("evaluate: only 1-forms can be evaluated on a single vector");
    sum += p.evaluate(point, chart_) * tangent[static_cast<std::size_t>(b[0])];
  }
  return sum;
}

std::string CoordForm::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [b, p] : terms_) {
    std::string coef = p.to_string(chart_);
    const bool single = p.terms().size() == 1;
    bool negative = single && sgn(p.terms().begin()->second) < 0;
    if (negative) coef = coef.substr(1);
    os << (first ? (negative ? "-" : "") : (negative ? " - " : " + "));
    first = false;
    std::string basis;
    for (std::size_t k = 0; k < b.size(); ++k)
      basis += (k ? "^d" : "d") + std::string(symbol(chart_)) + std::to_string(b[k]);
    if (basis.empty()) {
      os << (single ? coef : "(" + coef + ")");
    } else if (coef == "1") {
      os << basis;
    } else {
      os << (single ? coef : "(" + coef + ")") << "*" << basis;
    }
  }
  return os.str();
}

CoordForm wedge(const CoordForm& a, const CoordForm& b) {
  if (!a.is_zero() && !b.is_zero() && a.chart() != b.chart()) throw ArgumentError("wedge: forms in different charts");
  CoordForm out(a.is_zero() ? b.chart() : a.chart(), a.order());
  for (const auto& [ba, pa] : a.terms())
    for (const auto& [bb, pb] : b.terms()) {
      std::vector<int> idx(ba);
      idx.insert(idx.end(), bb.begin(), bb.end());
      out += CoordForm::monomial(out.chart(), pa * pb, std::move(idx));
    }
  return out;
}

CoordForm exterior_derivative(const CoordForm& a) {
  CoordForm out(a.chart(), a.order());
  for (const auto& [b, p] : a.terms())
    for (int i = 0; i <= a.order(); ++i) {
      Poly dp = p.partial(i, a.chart());
      if (dp.is_zero()) continue;
      std::vector<int> idx{i};
      idx.insert(idx.end(), b.begin(), b.end());
      out += CoordForm::monomial(a.chart(), dp, std::move(idx));
    }
  return out;
}

CoordForm y_to_x(const CoordForm& a) {
  if (a.chart() != Chart::y) throw ArgumentError("y_to_x expects a y-chart form");
  const int q = a.order();
  std::vector<Poly> images;
  for (int i = 0; i <= q; ++i) images.push_back(i == 1 ? Poly::exp_x1(q) : Poly::coordinate(q, i));
  // dy_i pulled back: d(image_i) as an x-chart 1-form.
  std::vector<CoordForm> dimages;
  for (int i = 0; i <= q; ++i) dimages.push_back(exterior_derivative(CoordForm::function(Chart::x, images[static_cast<std::size_t>(i)])));
  CoordForm out(Chart::x, q);
  for (const auto& [b, p] : a.terms()) {
    CoordForm term = CoordForm::function(Chart::x, p.substitute(images));
    for (int i : b) term = wedge(term, dimages[static_cast<std::size_t>(i)]);
    out += term;
  }
  return out;
}

CoordForm gysin(const CoordForm& a) {
  if (a.chart() != Chart::x) throw ArgumentError("gysin expects an x-chart form");
  CoordForm out(Chart::x, a.order());
  for (const auto& [b, p] : a.terms()) {
    auto pos = std::find(b.begin(), b.end(), 1);
    if (pos == b.end()) continue;
    // move dx1 to the front
    const int sign = (pos - b.begin()) % 2 == 0 ? 1 : -1;
    std::vector<int> rest(b.begin(), pos);
    rest.insert(rest.end(), pos + 1, b.end());
    Poly integral(a.order());
    for (const auto& [e, c] : p.terms()) {
      if (e.back() != 0) throw DomainError("gysin: coefficient depends on exp(x1); fiber integral is not polynomial");
      if (e[1] < 0) throw DomainError("gysin: coefficient is not polynomial in x1");
      Poly::Exponents ne(e);
      ne[1] = 0;
      integral.add_term(ne, c / (e[1] + 1));
    }
    out += CoordForm::monomial(Chart::x, Rational(-sign) * integral, rest);
  }
  return out;
}

}  // namespace folcc::forms
