#include "folcc/diffeo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "folcc/error.hpp"

namespace folcc {

std::string Interval::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << "[" << lo << ", " << hi << "]";
  return os.str();
}

LocalDiffeo LocalDiffeo::explicit_map(ExprAst map, Interval domain) {
  LocalDiffeo d;
  d.kind_ = Kind::explicit_map;
  d.expr_ = std::move(map);
  d.domain_ = domain;
  return d;
}

LocalDiffeo LocalDiffeo::conjugated_shift(ExprAst profile, double shift, Interval domain) {
  LocalDiffeo d;
  d.kind_ = Kind::conjugated_shift;
  d.expr_ = std::move(profile);
  d.shift_ = shift;
  d.domain_ = domain;
  // Orientation from two interior samples.
  double a = 0.0, b = 1.0;
  if (domain.bounded()) {
    a = domain.lo + 0.25 * (domain.hi - domain.lo);
    b = domain.lo + 0.75 * (domain.hi - domain.lo);
  } else if (std::isfinite(domain.lo)) {
    a = domain.lo + 0.5;
    b = domain.lo + 1.5;
  } else if (std::isfinite(domain.hi)) {
    a = domain.hi - 1.5;
    b = domain.hi - 0.5;
  }
  const double fa = d.expr_.eval(a), fb = d.expr_.eval(b);
  if (!(fa != fb)) throw ArgumentError("conjugated shift: profile is not strictly monotone");
  d.orientation_ = fb > fa ? 1 : -1;
  return d;
}

LocalDiffeo LocalDiffeo::lift(ExprAst map) {
  LocalDiffeo d;
  d.kind_ = Kind::lift;
  d.expr_ = std::move(map);
  if (!is_lift(d)) throw ArgumentError("lift: F(z+1) = F(z) + 1 fails on samples");
  return d;
}

LocalDiffeo LocalDiffeo::piecewise(std::vector<Piece> pieces) {
  if (pieces.empty()) throw ArgumentError("piecewise map needs at least one piece");
  LocalDiffeo d;
  d.kind_ = Kind::piecewise;
  d.domain_ = pieces.front().interval;
  for (const auto& p : pieces) {
    d.domain_.lo = std::min(d.domain_.lo, p.interval.lo);
    d.domain_.hi = std::max(d.domain_.hi, p.interval.hi);
  }
  d.pieces_ = std::make_shared<const std::vector<Piece>>(std::move(pieces));
  return d;
}

LocalDiffeo LocalDiffeo::reeb(ExprAst profile) {
  const double below_one = std::nextafter(1.0, 0.0);
  return piecewise({
      Piece{Interval{0.0, below_one}, conjugated_shift(std::move(profile), 1.0, Interval{0.0, 1.0})},
      Piece{Interval{1.0, std::numeric_limits<double>::infinity()}, explicit_map(ExprAst::variable(), Interval{1.0})},
  });
}

LocalDiffeo LocalDiffeo::parse(const std::string& spec) {
  auto starts = [&](const char* p) { return spec.rfind(p, 0) == 0; };
  if (starts("lift:")) return lift(ExprAst::parse(spec.substr(5)));
  if (starts("reeb:")) return reeb(ExprAst::parse(spec.substr(5)));
  if (starts("conj:")) {
    const auto at = spec.rfind('@');
    if (at == std::string::npos || at < 5) throw ArgumentError("conj:PROFILE@SHIFT expected");
    const double shift = ExprAst::parse(spec.substr(at + 1)).eval(0.0);
    return conjugated_shift(ExprAst::parse(spec.substr(5, at - 5)), shift);
  }
  return explicit_map(ExprAst::parse(spec));
}

bool LocalDiffeo::is_identity() const {
  if (kind_ == Kind::piecewise)
    return std::all_of(pieces_->begin(), pieces_->end(), [](const Piece& p) { return p.map.is_identity(); });
  if (kind_ == Kind::conjugated_shift) return shift_ == 0.0;
  return expr_.is_identity();
}

double LocalDiffeo::profile_inverse(double target, double guess, double step) const {
  if (!std::isfinite(target)) throw DomainError("profile inverse: target is not finite (overflow)");
  const double center = domain_.bounded() ? 0.5 * (domain_.lo + domain_.hi) : guess;
  // Increasing in y; evaluation failures near the ends count as ±∞.
  auto h = [&](double y) {
    double v;
    try {
      v = expr_.eval(y);
    } catch (const DomainError&) {
      v = std::numeric_limits<double>::quiet_NaN();
    }
    if (std::isnan(v)) return y >= center ? HUGE_VAL : -HUGE_VAL;
    return orientation_ * (v - target);
  };

  // Fast path: plain Newton from the guess, accepted only once a sign change
  // of h is confirmed across a 1e-14 bracket around the result.
  {
    double y = std::clamp(guess, domain_.lo, domain_.hi);
    for (int it = 0; it < 8; ++it) {
      Dual<double> j;
      try {
        j = expr_.eval_as(Dual<double>(y, 1.0));
      } catch (const DomainError&) {
        break;
      }
      const double dx = (j.re - target) / j.eps;
      if (!std::isfinite(dx) || !domain_.contains(y - dx)) break;
      y -= dx;
      const double tol = 1e-14 * std::max(1.0, std::fabs(y));
      if (std::fabs(dx) <= tol) {
        if (h(std::max(y - tol, domain_.lo)) <= 0 && h(std::min(y + tol, domain_.hi)) >= 0) return y;
        break;
      }
    }
  }

  double a = std::clamp(guess, domain_.lo, domain_.hi);
  double ha = h(a);
  if (ha == 0.0) return a;
  double b = a;
  if (!(step > 0.0)) step = 1e-6 * std::max(1.0, std::fabs(a));
  if (ha < 0) {
    for (;;) {
      b = std::min(a + step, domain_.hi);
      if (h(b) >= 0) break;
      if (b == domain_.hi) throw DomainError("profile inverse: target above the profile's range");
      a = b;
      step *= 2;
    }
  } else {
    std::swap(a, b);  // b holds the point with h ≥ 0
    for (;;) {
      a = std::max(b - step, domain_.lo);
      if (h(a) < 0) break;
      if (a == domain_.lo) throw DomainError("profile inverse: target below the profile's range");
      b = a;
      step *= 2;
    }
  }
  // Bracketed Newton: take the Newton step when it stays inside [a, b] and
  // the previous step was at least halving; otherwise bisect.
  const double tol = 1e-14 * std::max(1.0, std::fabs(a));
  double y = 0.5 * (a + b), dx_old = b - a;
  for (int it = 0; it < 200 && b - a > tol; ++it) {
    double next = 0.5 * (a + b);
    try {
      const Dual<double> j = expr_.eval_as(Dual<double>(y, 1.0));
      const double dx = (j.re - target) / j.eps;
      const double cand = y - dx;
      if (std::isfinite(cand) && cand > a && cand < b && std::fabs(dx) <= 0.5 * dx_old) {
        next = cand;
        if (std::fabs(dx) <= 0.25 * tol) {
          y = cand;
          break;
        }
      }
    } catch (const DomainError&) {
    }
    if (next <= a || next >= b) break;
    dx_old = std::fabs(next - y);
    const double hv = h(next);
    y = next;
    if (hv == 0.0) break;
    (hv < 0 ? a : b) = next;
  }
  if (!(y >= a && y <= b)) y = 0.5 * (a + b);
  for (int k = 0; k < 2; ++k) {
    try {
      const Dual<double> j = expr_.eval_as(Dual<double>(y, 1.0));
      const double next = y - (j.re - target) / j.eps;
      if (!(next >= a && next <= b)) break;
      y = next;
    } catch (const DomainError&) {
      break;
    }
  }
  return y;
}

namespace {
const LocalDiffeo::Piece& find_piece(const std::vector<LocalDiffeo::Piece>& pieces, double x) {
  for (const auto& p : pieces)
    if (p.interval.contains(x)) return p;
  throw DomainError("piecewise map is not defined at " + std::to_string(x));
}
}  // namespace

double LocalDiffeo::operator()(double x) const {
  switch (kind_) {
    case Kind::explicit_map:
    case Kind::lift:
      return expr_.eval(x);
    case Kind::conjugated_shift: {
      if (!domain_.contains(x)) throw DomainError("conjugated shift evaluated outside its domain");
      // Newton guess from x; the bracket starts at a fraction of the expected move.
      const Dual<double> fx = expr_.eval_as(Dual<double>(x, 1.0));
      double guess = x + shift_ / fx.eps;
      if (!std::isfinite(guess) || !domain_.contains(guess)) guess = x;
      const double step = std::max(0.01 * std::fabs(guess - x), 1e-12 * std::max(1.0, std::fabs(x)));
      return profile_inverse(fx.re + shift_, guess, step);
    }
    case Kind::piecewise:
      return find_piece(*pieces_, x).map(x);
  }
  return x;
}

Jet<double> LocalDiffeo::jet(double x, int q) const {
  switch (kind_) {
    case Kind::explicit_map:
    case Kind::lift:
      return expr_.eval_jet(Jet<double>::identity(x, q));
    case Kind::conjugated_shift: {
      const double y = (*this)(x);
      const Jet<double> fx = expr_.eval_jet(Jet<double>::identity(x, q)) + shift_;
      const Jet<double> fy = expr_.eval_jet(Jet<double>::identity(y, q));
      return compose(revert(fy), fx, 1e-6);
    }
    case Kind::piecewise:
      return find_piece(*pieces_, x).map.jet(x, q);
  }
  return Jet<double>::identity(x, q);
}

std::string LocalDiffeo::describe() const {
  switch (kind_) {
    case Kind::explicit_map:
      return expr_.to_string();
    case Kind::lift:
      return "lift:" + expr_.to_string();
    case Kind::conjugated_shift: {
      std::ostringstream os;
      os.precision(17);
      os << "conj:" << expr_.to_string() << "@" << shift_;
      return os.str();
    }
    case Kind::piecewise: {
      std::string s = "piecewise{";
      for (std::size_t i = 0; i < pieces_->size(); ++i) {
        const auto& p = (*pieces_)[i];
        s += (i ? "; " : "") + p.interval.to_string() + ": " + p.map.describe();
      }
      return s + "}";
    }
  }
  return {};
}

bool is_lift(const LocalDiffeo& phi, int samples, double tol) {
  try {
    for (int i = 0; i < samples; ++i) {
      const double z = static_cast<double>(i) / samples;
      const double a = phi(z), b = phi(z + 1.0);
      if (!(std::fabs(b - a - 1.0) <= tol * std::max(1.0, std::fabs(a)))) return false;
    }
  } catch (const Error&) {
    return false;
  }
  return true;
}

const Chart& PseudogroupPresentation::chart(const std::string& chart_name) const {
  for (const auto& c : charts)
    if (c.name == chart_name) return c;
  throw ConfigError("unknown chart '" + chart_name + "'");
}

Interval PseudogroupPresentation::sample_interval(const Generator& g) const {
  if (g.sample) return *g.sample;
  Interval iv = chart(g.source_chart).interval;
  iv.lo = std::max({iv.lo, g.map.domain().lo, -10.0});
  iv.hi = std::min({iv.hi, g.map.domain().hi, 10.0});
  if (!(iv.lo < iv.hi)) throw ConfigError("generator '" + g.name + "' has an empty sampling interval");
  return iv;
}

}  // namespace folcc
