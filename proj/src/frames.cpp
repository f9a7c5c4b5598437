#include "folcc/frames.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "folcc/error.hpp"

namespace folcc {

using FC = forms::Chart;
using forms::exterior_derivative;
using forms::wedge;
using forms::CoordForm;
using forms::Poly;

namespace {

Poly y(int order, int i, int power = 1) { return Poly::coordinate(order, i, power); }
CoordForm dy(int order, int i) { return CoordForm::differential_of(FC::y, order, i); }

}  // namespace

CoordForm theta(int k, int order) {
  if (k < 0 || k > 3) throw ArgumentError("closed forms exist for theta0..theta3 only");
  if (order < k + 1) throw ArgumentError("theta" + std::to_string(k) + " needs jet order >= " + std::to_string(k + 1));
  const int q = order;
  const Poly one = Poly::constant(q, Rational(1));
  switch (k) {
    case 0:
      return -y(q, 1, -1) * dy(q, 0);
    case 1:
      return -y(q, 1, -1) * dy(q, 1) + y(q, 2) * dy(q, 0);
    case 2:
      return -y(q, 1) * dy(q, 2) + (y(q, 1) * (y(q, 3) - Rational(2) * y(q, 2, 2))) * dy(q, 0);
    default: {
      const Poly y1sq = y(q, 1, 2);
      const Poly c0 = y1sq * (y(q, 4) + Rational(6) * y(q, 2, 3) - Rational(6) * y(q, 2) * y(q, 3));
      return -y1sq * dy(q, 3) + (Rational(3) * y(q, 2) * y1sq) * dy(q, 2) + c0 * dy(q, 0);
    }
  }
}

double theta_numeric(int k, const Jet<double>& frame, const std::vector<double>& tangent) {
  using D = Dual<double>;
  const int q = frame.order();
  if (k < 0 || k > q - 1) throw ArgumentError("theta_numeric needs 0 <= k <= order - 1");
  if (static_cast<int>(tangent.size()) != q + 1) throw ArgumentError("tangent must have order + 1 components");
  const auto yc = FrameCoordsY<double>::from_jet(frame);
  FrameCoordsY<D> curve;
  for (int i = 0; i <= q; ++i) curve.y.emplace_back(yc.y[static_cast<std::size_t>(i)], tangent[static_cast<std::size_t>(i)]);
  const Jet<D> ku = curve.to_jet(D(0.0));
  const Jet<D> inv = jet_cast<D>(revert(frame));
  const Jet<D> c = compose(inv, ku);
  double fact = 1.0;
  for (int i = 2; i <= k; ++i) fact *= i;
  return -fact * c.coeff(k).eps;
}

double check_invariance(const LocalDiffeo& h, int k, const Jet<double>& frame) {
  using D = Dual<double>;
  const int q = frame.order();
  if (q < k + 1) throw ArgumentError("check_invariance: frame order must be >= k + 1");
  if (h.is_identity()) return 0.0;
  const CoordForm th = theta(k, q);
  const auto yc = FrameCoordsY<double>::from_jet(frame);
  const Jet<D> hd = jet_cast<D>(h.jet(frame.value(), q + 1));
  if (!hd.regular()) throw RegularityError("check_invariance: h is not regular at the frame's base");

  double worst = 0.0;
  std::vector<double> e(static_cast<std::size_t>(q) + 1, 0.0);
  for (int i = 0; i <= q; ++i) {
    FrameCoordsY<D> curve;
    for (int p = 0; p <= q; ++p) curve.y.emplace_back(yc.y[static_cast<std::size_t>(p)], p == i ? 1.0 : 0.0);
    const auto image = FrameCoordsY<D>::from_jet(compose(hd, curve.to_jet(D(0.0))));
    std::vector<double> point, push;
    for (const D& v : image.y) {
      point.push_back(v.re);
      push.push_back(v.eps);
    }
    std::fill(e.begin(), e.end(), 0.0);
    e[static_cast<std::size_t>(i)] = 1.0;
    const double before = th.evaluate(yc.y, e);
    const double after = th.evaluate(point, push);
    worst = std::max(worst, std::fabs(after - before) / std::max(1.0, std::fabs(before)));
  }
  return worst;
}

// ---------------------------------------------------------------------------

std::vector<IdentityResult> structure_identities() {
  constexpr int q = 4;
  const CoordForm t0 = theta(0, q), t1 = theta(1, q), t2 = theta(2, q), t3 = theta(3, q);
  const CoordForm gvl = wedge(wedge(t0, t1), t2);
  const CoordForm cl1 = wedge(t2, t0);
  auto dx = [](int i) { return CoordForm::differential_of(FC::x, q, i); };

  std::vector<IdentityResult> out;
  auto record = [&](std::string name, std::string statement, const CoordForm& lhs, const CoordForm& rhs) {
    const CoordForm diff = lhs - rhs;
    out.push_back({std::move(name), std::move(statement), diff.is_zero(), diff.to_string()});
  };
  record("dtheta0", "d(theta0) = theta1^theta0", exterior_derivative(t0), wedge(t1, t0));
  record("dtheta1", "d(theta1) = theta2^theta0", exterior_derivative(t1), wedge(t2, t0));
  record("dtheta2", "d(theta2) = theta3^theta0 + theta2^theta1", exterior_derivative(t2),
         wedge(t3, t0) + wedge(t2, t1));
  record("gvl", "theta0^theta1^theta2 = theta1^d(theta1)", gvl, wedge(t1, exterior_derivative(t1)));
  record("gvl_x", "gvl = -dx0^dx1^dx2 (x-chart)", forms::y_to_x(gvl), -wedge(wedge(dx(0), dx(1)), dx(2)));
  record("cl1_x", "cl1 = theta2^theta0 = dx2^dx0 (x-chart)", forms::y_to_x(cl1), wedge(dx(2), dx(0)));
  record("gysin_gvl", "pi_*(theta0^theta1^theta2) = theta2^theta0", forms::gysin(forms::y_to_x(gvl)),
         forms::y_to_x(cl1));
  return out;
}

CoordForm parse_x_form(const std::string& spec, int order) {
  std::string s;
  for (char c : spec)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw ParseError("empty form", 0);

  std::size_t pos = 0;
  auto number = [&]() {
    const std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) throw ParseError("expected an integer", pos);
    return std::stoi(s.substr(start, pos - start));
  };

  CoordForm total(FC::x, order);
  while (pos < s.size()) {
    Rational sign(1);
    if (s[pos] == '+' || s[pos] == '-') {
      if (s[pos] == '-') sign = -1;
      ++pos;
    } else if (pos != 0) {
      throw ParseError("expected '+' or '-'", pos);
    }
    Poly coef = Poly::constant(order, sign);
    CoordForm wedge_part = CoordForm::function(FC::x, Poly::constant(order, Rational(1)));
    for (bool first = true;; first = false) {
      if (!first) {
        if (pos >= s.size() || (s[pos] != '*' && s[pos] != '^')) break;
        ++pos;
      }
      if (pos >= s.size()) throw ParseError("unexpected end of form", pos);
      if (std::isdigit(static_cast<unsigned char>(s[pos]))) {
        Rational r(number());
        if (pos < s.size() && s[pos] == '/') {
          ++pos;
          const int den = number();
          if (den == 0) throw ParseError("zero denominator", pos);
          r /= den;
        }
        coef *= r;
      } else if (s.compare(pos, 5, "theta") == 0) {
        pos += 5;
        const int k = number();
        wedge_part = wedge(wedge_part, forms::y_to_x(theta(k, order)));
      } else if (s.compare(pos, 2, "dx") == 0) {
        pos += 2;
        const int i = number();
        if (i > order) throw ParseError("coordinate index above the jet order", pos);
        wedge_part = wedge(wedge_part, CoordForm::differential_of(FC::x, order, i));
      } else if (s[pos] == 'x') {
        ++pos;
        const int i = number();
        if (i > order) throw ParseError("coordinate index above the jet order", pos);
        int power = 1;
        if (pos + 1 < s.size() && s[pos] == '^' && std::isdigit(static_cast<unsigned char>(s[pos + 1]))) {
          ++pos;
          power = number();
        }
        coef = coef * Poly::coordinate(order, i, power);
      } else {
        throw ParseError("unknown factor in form", pos);
      }
    }
    total += coef * wedge_part;
  }
  return total;
}

// ---------------------------------------------------------------------------

double cocycle_residual(ConnectionKind kind, const LocalDiffeo& phi, const ExprAst& source, const ExprAst& target,
                        double w) {
  const Jet<double> j = phi.jet(w, kind == ConnectionKind::affine ? 2 : 3);
  const double d1 = j.derivative(1);
  if (d1 == 0.0 || !std::isfinite(d1)) throw RegularityError("generator is not regular at the sample");
  const double d2 = j.derivative(2);
  const double t = j.value();
  if (kind == ConnectionKind::affine) return target.eval(t) + d2 / (d1 * d1) - source.eval(w) / d1;
  const double s = j.derivative(3) / d1 - 1.5 * (d2 / d1) * (d2 / d1);
  return target.eval(t) * d1 * d1 - source.eval(w) + s;
}

namespace {

ConnectionReport verify_impl(const PseudogroupPresentation& pres, const ConnectionCandidate& cand,
                             const SampleSpec& grid, double tol, bool parallel) {
  if (grid.samples < 2) throw ArgumentError("need at least two samples per chart");
  auto lookup = [&](const std::string& chart) -> const ExprAst& {
    auto it = cand.per_chart.find(chart);
    if (it == cand.per_chart.end()) throw ConfigError("candidate has no function for chart '" + chart + "'");
    return it->second;
  };

  ConnectionReport report;
  report.kind = cand.kind;
  report.tolerance = tol;
  bool clean = true;
  for (const Generator& g : pres.generators) {
    const ExprAst& src = lookup(g.source_chart);
    const ExprAst& dst = lookup(g.target_chart);
    const Interval iv = pres.sample_interval(g);
    const double len = iv.hi - iv.lo;
    const double a = iv.lo + grid.trim * len, b = iv.hi - grid.trim * len;
    const int n = grid.samples;
    std::vector<double> res(static_cast<std::size_t>(n), 0.0);
    std::vector<std::string> err(static_cast<std::size_t>(n));

#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < n; ++i) {
      const double w = a + (b - a) * i / (n - 1);
      try {
        const double r = std::fabs(cocycle_residual(cand.kind, g.map, src, dst, w));
        res[static_cast<std::size_t>(i)] = std::isnan(r) ? std::numeric_limits<double>::infinity() : r;
      } catch (const Error& e) {
        err[static_cast<std::size_t>(i)] = "w=" + std::to_string(w) + ": " + e.what();
      }
    }

    GeneratorResidual gr;
    gr.generator = g.name;
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      if (!err[ui].empty()) {
        gr.errors.push_back(err[ui]);
        continue;
      }
      ++gr.evaluated;
      if (res[ui] > gr.max_residual || (gr.evaluated == 1 && res[ui] == 0.0)) {
        gr.max_residual = res[ui];
        gr.worst_point = a + (b - a) * i / (n - 1);
      }
    }
    if (!gr.errors.empty()) clean = false;
    report.max_residual = std::max(report.max_residual, gr.max_residual);
    report.generators.push_back(std::move(gr));
  }
  report.pass = clean && report.max_residual <= tol;
  return report;
}

}  // namespace

ConnectionReport verify_connection(const PseudogroupPresentation& pres, const ConnectionCandidate& cand,
                                   const SampleSpec& grid, double tol) {
  return verify_impl(pres, cand, grid, tol, true);
}

ConnectionReport reference::verify_connection(const PseudogroupPresentation& pres, const ConnectionCandidate& cand,
                                              const SampleSpec& grid, double tol) {
  return verify_impl(pres, cand, grid, tol, false);
}

ConnectionCandidate connection_from_conjugacy(const LocalDiffeo& f, const std::vector<std::string>& charts) {
  if (f.kind() == LocalDiffeo::Kind::piecewise) throw ArgumentError("conjugacy must be a single closed-form map");
  const ExprAst d1 = f.expr().derivative();
  const ExprAst t = d1.derivative() / d1;
  ConnectionCandidate c;
  c.kind = ConnectionKind::affine;
  for (const auto& name : charts) c.per_chart.emplace(name, t);
  return c;
}

double schwarzian(const LocalDiffeo& h, double w) {
  const Jet<double> j = h.jet(w, 3);
  const double d1 = j.derivative(1);
  if (d1 == 0.0) throw RegularityError("schwarzian: h'(w) = 0");
  const double r = j.derivative(2) / d1;
  return j.derivative(3) / d1 - 1.5 * r * r;
}

}  // namespace folcc
