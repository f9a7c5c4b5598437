#include "folcc/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "folcc/error.hpp"

namespace folcc {

// ---------------------------------------------------------------------------
// Rotation numbers

double circle_distance(double a, double b) {
  double d = std::fmod(a - b, 1.0);
  d -= std::round(d);
  return std::fabs(d);
}

RotationEstimate rotation_number(const LocalDiffeo& phi, long iterations, double z, int power) {
  if (iterations < 1) throw ArgumentError("rotation number needs at least one iteration");
  if (power < 1) throw ArgumentError("power must be >= 1");
  if (!is_lift(phi)) throw ArgumentError("rotation number needs the lift of a circle map");
  // Kahan-summed displacements; z stays reduced mod 1 since φ(z+1) = φ(z)+1.
  double sum = 0.0, carry = 0.0;
  z -= std::floor(z);
  for (long i = 0; i < iterations; ++i) {
    double w = z;
    for (int p = 0; p < power; ++p) w = phi(w);
    const double y = (w - z) - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
    z = w - std::floor(w);
  }
  RotationEstimate est;
  est.iterations = iterations;
  est.raw = sum / static_cast<double>(iterations);
  est.rho = est.raw - std::floor(est.raw);
  if (est.rho == 0.0) est.rho = 1.0;
  est.bound = 1.0 / static_cast<double>(iterations);
  return est;
}

// ---------------------------------------------------------------------------
// Diophantine estimates

namespace {
BigFloat to_big(const mpz_class& z) { return BigFloat(z.get_str()); }
}  // namespace

DiophantineReport diophantine_exponent(const BigFloat& alpha, double denominator_cap) {
  using boost::multiprecision::floor;
  using boost::multiprecision::log;
  if (!(denominator_cap >= 2)) throw ArgumentError("denominator cap must be >= 2");
  const BigFloat tiny("1e-45");
  const mpz_class cap(std::floor(denominator_cap));

  DiophantineReport rep;
  mpz_class p1 = 1, p2 = 0, q1 = 0, q2 = 1;
  BigFloat x = alpha;
  for (;;) {
    const BigFloat a_big = floor(x);
    const mpz_class a(a_big.str(0, std::ios_base::fixed).substr(0, a_big.str(0, std::ios_base::fixed).find('.')));
    const mpz_class p = a * p1 + p2, q = a * q1 + q2;
    if (q > cap) break;
    rep.partial_quotients.push_back(a);
    const BigFloat err = boost::multiprecision::abs(alpha - to_big(p) / to_big(q));
    Convergent c{p, q, static_cast<double>(err), 0.0};
    if (q >= 2 && err > tiny) c.exponent = static_cast<double>(-log(err) / log(to_big(q))) - 2.0;
    rep.convergents.push_back(c);
    const BigFloat frac = x - a_big;
    if (frac < tiny || err < tiny) throw DomainError("alpha is rational to working precision (expansion terminates)");
    x = 1 / frac;
    p2 = p1;
    p1 = p;
    q2 = q1;
    q1 = q;
  }

  const double split = std::sqrt(denominator_cap);
  std::vector<const Convergent*> lower, upper;
  for (const auto& c : rep.convergents) {
    if (c.q < 2) continue;
    rep.pointwise_sup = std::max(rep.pointwise_sup, c.exponent);
    (c.q.get_d() >= split ? upper : lower).push_back(&c);
  }
  std::vector<const Convergent*> tail = upper.size() >= 2 ? upper : lower;
  if (upper.size() < 2) tail.insert(tail.end(), upper.begin(), upper.end());
  if (tail.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto* c : tail) {
      const double lx = std::log(c->q.get_d());
      const double ly = (c->exponent + 2.0) * lx;  // −ln|α − p/q|
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    const double n = static_cast<double>(tail.size());
    rep.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx) - 2.0;
  } else if (!tail.empty()) {
    rep.exponent = tail.back()->exponent;
  }
  const double beta = std::max(rep.exponent, 0.0);
  rep.constant = std::numeric_limits<double>::infinity();
  for (const auto* c : tail) rep.constant = std::min(rep.constant, std::pow(c->q.get_d(), 2.0 + beta) * c->error);
  if (tail.empty()) rep.constant = 0.0;

  if (!lower.empty() && !upper.empty()) {
    double lo_max = -HUGE_VAL, hi_max = -HUGE_VAL;
    for (const auto* c : lower) lo_max = std::max(lo_max, c->exponent);
    for (const auto* c : upper) hi_max = std::max(hi_max, c->exponent);
    rep.liouville_suspect = hi_max - lo_max > 0.5;
  }
  return rep;
}

DiophantineReport diophantine_exponent(const ExprAst& alpha, double denominator_cap) {
  return diophantine_exponent(alpha.eval_as<BigFloat>(BigFloat(0)), denominator_cap);
}

// ---------------------------------------------------------------------------
// Conjugacy and fixed points

double verify_conjugacy(const LocalDiffeo& phi, const LocalDiffeo& f, double alpha, int samples) {
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double z = static_cast<double>(i) / samples;
    worst = std::max(worst, circle_distance(f(phi(z)), f(z) + alpha));
  }
  return worst;
}

namespace {

double displacement(const LocalDiffeo& phi, double x) {
  try {
    return phi(x) - x;
  } catch (const Error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

// No sign change among the finite samples, and not all of them zero.
bool side_free(const LocalDiffeo& phi, double x, double width, int m) {
  int sign = 0;
  bool any = false;
  for (int j = 1; j <= m; ++j) {
    const double g = displacement(phi, x + width * j / m);
    if (std::isnan(g)) return false;
    if (g == 0.0) continue;
    const int s = g > 0 ? 1 : -1;
    if (sign != 0 && s != sign) return false;
    sign = s;
    any = true;
  }
  return any;
}

}  // namespace

std::vector<FixedPoint> classify_fixed_points(const LocalDiffeo& phi, const FixedPointGrid& grid, double tol) {
  if (grid.samples < 2 || !(grid.lo < grid.hi)) throw ArgumentError("fixed-point grid needs lo < hi and >= 2 samples");
  struct Candidate {
    double x;
    std::string note;
  };
  std::vector<Candidate> cand;
  std::vector<Interval> fixed_intervals;
  if (phi.kind() == LocalDiffeo::Kind::piecewise)
    for (const auto& piece : phi.pieces())
      if (piece.map.is_identity()) {
        fixed_intervals.push_back(piece.interval);
        for (double e : {piece.interval.lo, piece.interval.hi})
          if (std::isfinite(e) && e >= grid.lo && e <= grid.hi) cand.push_back({e, "endpoint of a fixed interval"});
      }
  auto structural = [&](double x) {
    return std::any_of(fixed_intervals.begin(), fixed_intervals.end(), [&](const Interval& iv) { return iv.contains(x); });
  };

  const int n = grid.samples;
  std::vector<double> xs(static_cast<std::size_t>(n)), gs(xs.size());
  for (int i = 0; i < n; ++i) {
    xs[static_cast<std::size_t>(i)] = grid.lo + (grid.hi - grid.lo) * i / (n - 1);
    gs[static_cast<std::size_t>(i)] = displacement(phi, xs[static_cast<std::size_t>(i)]);
  }
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const double g = gs[ui];
    if (std::isnan(g) || structural(xs[ui])) continue;
    if (g == 0.0) {
      // runs of exact zeros: report their ends, absorbing runs that touch a fixed interval
      std::size_t j = ui;
      while (j + 1 < xs.size() && gs[j + 1] == 0.0 && !structural(xs[j + 1])) ++j;
      // neighbours past any unevaluable samples
      std::size_t r = j + 1;
      while (r < xs.size() && std::isnan(gs[r])) ++r;
      std::ptrdiff_t l = static_cast<std::ptrdiff_t>(ui) - 1;
      while (l >= 0 && std::isnan(gs[static_cast<std::size_t>(l)])) --l;
      const bool touches = (l >= 0 && structural(xs[static_cast<std::size_t>(l)])) || (r < xs.size() && structural(xs[r]));
      if (j == ui) {
        cand.push_back({xs[ui], ""});
      } else if (!touches) {
        cand.push_back({xs[ui], "start of a numerically fixed run"});
        cand.push_back({xs[j], "end of a numerically fixed run"});
      }
      i = static_cast<int>(j);
      continue;
    }
    // tangential contact: a local minimum of |g| without a sign change
    if (i > 0 && i + 1 < n) {
      const double gp = gs[ui - 1], gn = gs[ui + 1];
      if (!std::isnan(gp) && !std::isnan(gn) && gp != 0.0 && gn != 0.0 && (gp > 0) == (g > 0) &&
          (gn > 0) == (g > 0) && std::fabs(g) < std::fabs(gp) && std::fabs(g) <= std::fabs(gn)) {
        double a = xs[ui - 1], b = xs[ui + 1];
        for (int it = 0; it < 200 && b - a > tol; ++it) {
          const double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
          const double g1 = std::fabs(displacement(phi, m1)), g2 = std::fabs(displacement(phi, m2));
          if (std::isnan(g1) || std::isnan(g2)) break;
          if (g1 < g2) b = m2; else a = m1;
        }
        const double xm = 0.5 * (a + b);
        if (std::fabs(displacement(phi, xm)) <= tol) cand.push_back({xm, "tangential (no sign change)"});
      }
    }
    if (i + 1 < n) {
      const double gn = gs[ui + 1];
      if (!std::isnan(gn) && gn != 0.0 && (g > 0) != (gn > 0) && !structural(xs[ui + 1])) {
        double a = xs[ui], b = xs[ui + 1], ga = g;
        while (b - a > tol) {
          const double m = 0.5 * (a + b);
          if (m <= a || m >= b) break;
          const double gm = displacement(phi, m);
          if (std::isnan(gm)) break;
          if (gm == 0.0) {
            a = b = m;
            break;
          }
          if ((gm > 0) == (ga > 0)) {
            a = m;
            ga = gm;
          } else {
            b = m;
          }
        }
        cand.push_back({0.5 * (a + b), ""});
      }
    }
  }

  std::sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) { return a.x < b.x; });
  std::vector<FixedPoint> out;
  const double class_tol = std::max(tol, 1e-9);
  for (const auto& c : cand) {
    if (!out.empty() && std::fabs(out.back().x - c.x) <= 10 * tol) continue;
    FixedPoint fp;
    fp.x = c.x;
    fp.note = c.note;
    fp.resolution = grid.resolution;
    try {
      fp.derivative = phi.jet(c.x, 1).derivative(1);
    } catch (const Error&) {
      fp.derivative = std::numeric_limits<double>::quiet_NaN();
    }
    fp.hyperbolic = std::fabs(std::fabs(fp.derivative) - 1.0) > class_tol;
    fp.left_semi_isolated = side_free(phi, c.x, -grid.resolution, grid.side_samples);
    fp.right_semi_isolated = side_free(phi, c.x, grid.resolution, grid.side_samples);
    out.push_back(fp);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Szekeres fields

int QPolynomial::degree() const {
  int d = 0;
  for (const auto& [e, c] : coefficients) {
    int s = 0;
    for (int k : e) s += k;
    d = std::max(d, s);
  }
  return d;
}

double QPolynomial::evaluate(const std::vector<double>& u) const {
  double sum = 0.0;
  for (const auto& [e, c] : coefficients) {
    double t = c.get_d();
    for (std::size_t k = 0; k < e.size(); ++k)
      if (e[k] != 0) t *= std::pow(u.at(k), e[k]);
    sum += t;
  }
  return sum;
}

std::string QPolynomial::to_string() const {
  if (coefficients.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
    const auto& [e, c] = *it;
    os << (first ? (sgn(c) < 0 ? "-" : "") : (sgn(c) < 0 ? " - " : " + "));
    first = false;
    const mpz_class mag = abs(c);
    bool wrote = false;
    if (mag != 1) {
      os << mag.get_str();
      wrote = true;
    }
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (e[k] == 0) continue;
      os << (wrote ? "*" : "") << "u" << k + 1;
      if (e[k] != 1) os << "^" << e[k];
      wrote = true;
    }
    if (!wrote) os << "1";
  }
  return os.str();
}

QPolynomial q_polynomial(int n) {
  if (n < 1) throw ArgumentError("q_polynomial needs n >= 1");
  using Poly = std::map<std::vector<int>, mpz_class>;
  auto add = [](Poly& p, const std::vector<int>& e, const mpz_class& c) {
    if (c == 0) return;
    mpz_class& slot = p[e];
    slot += c;
    if (slot == 0) p.erase(e);
  };
  Poly q;  // Q_1 = 0, no variables
  for (int m = 1; m < n; ++m) {
    // Q_m lives in u_1..u_{m−1}; Q_{m+1} in u_1..u_m.
    const auto nv = static_cast<std::size_t>(m);
    Poly next;
    std::vector<int> e(nv, 0);
    e[0] += 1;
    e[nv - 1] += 1;
    add(next, e, 2);
    for (const auto& [ex, c] : q) {
      std::vector<int> base(ex);
      base.resize(nv, 0);
      std::vector<int> t(base);
      t[0] += 1;
      add(next, t, mpz_class(m - 1) * c);
      for (int k = 1; k <= m - 1; ++k) {
        const auto uk = static_cast<std::size_t>(k - 1);
        if (base[uk] == 0) continue;
        std::vector<int> d(base);
        const mpz_class dc = c * base[uk];
        d[uk] -= 1;
        std::vector<int> a(d);
        a[uk + 1] += 1;  // · u_{k+1}
        add(next, a, dc);
        std::vector<int> b(d);
        b[0] += 1;
        b[uk] += 1;  // · u_1 u_k
        add(next, b, -dc * (k + 1));
      }
    }
    q = std::move(next);
  }
  QPolynomial out;
  out.n = n;
  out.coefficients = std::move(q);
  return out;
}

double verify_szekeres_identity(const ExprAst& v, int n, const std::vector<double>& xs) {
  if (n < 1) throw ArgumentError("n must be >= 1");
  const QPolynomial qn = q_polynomial(n);
  double worst = 0.0;
  for (double x : xs) {
    const Jet<double> jv = v.eval_jet(Jet<double>::identity(x, n));
    const double vx = jv.value();
    if (std::fabs(vx) < 1e-12) throw DomainError("vector field vanishes at a sample point");
    const Jet<double> w = Jet<double>::divide(Jet<double>::constant(x, 1.0, n), jv, 1e-12);
    std::vector<double> u;
    for (int k = 1; k <= n; ++k) u.push_back(w.derivative(k) * std::pow(vx, k + 1));
    const double lhs = jv.derivative(n) * std::pow(vx, n - 1);
    const double rhs = -u.back() + qn.evaluate(u);
    worst = std::max(worst, std::fabs(lhs - rhs) / std::max(1.0, std::fabs(lhs)));
  }
  return worst;
}

double integrate_flow(const ExprAst& v, double x, double t, double tol) {
  namespace ode = boost::numeric::odeint;
  using State = std::array<double, 1>;
  if (t == 0.0) return x;
  State s{x};
  auto rhs = [&](const State& y, State& dy, double) { dy[0] = v.eval(y[0]); };
  auto observer = [](const State& y, double) {
    if (!std::isfinite(y[0])) throw DomainError("flow integration left the finite range");
  };
  auto stepper = ode::make_controlled(tol, tol, ode::runge_kutta_dopri5<State>());
  const double dt = t > 0 ? std::min(1e-3, t) : std::max(-1e-3, t);
  ode::integrate_adaptive(stepper, rhs, s, 0.0, t, dt, observer);
  return s[0];
}

FlowReport flow_check(const LocalDiffeo& phi, const ExprAst& v, const std::vector<double>& xs,
                      const std::vector<double>& ts, double tol) {
  FlowReport r;
  for (double x : xs) {
    r.time_one_residual = std::max(r.time_one_residual, std::fabs(integrate_flow(v, x, 1.0, tol) - phi(x)));
    for (double s : ts)
      for (double t : ts) {
        const double lhs = integrate_flow(v, integrate_flow(v, x, t, tol), s, tol);
        const double rhs = integrate_flow(v, x, s + t, tol);
        r.group_law_residual = std::max(r.group_law_residual, std::fabs(lhs - rhs));
      }
  }
  try {
    const Jet<double> jv = v.eval_jet(Jet<double>::identity(0.0, 1));
    r.v0 = jv.value();
    r.v0_prime = jv.derivative(1);
    r.phi_prime0 = phi.jet(0.0, 1).derivative(1);
    r.zero_in_domain = true;
  } catch (const Error&) {
    r.zero_in_domain = false;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Reeb probe

ReebProfileCheck check_reeb_profile(const ExprAst& f) {
  ReebProfileCheck c;
  try {
    c.f0_zero = std::fabs(f.eval(0.0)) <= 1e-12;
    c.nonnegative = c.even = c.increasing = true;
    double prev = f.eval(0.0);
    for (int i = 1; i < 64; ++i) {
      const double x = i / 64.0;
      const double fx = f.eval(x), fm = f.eval(-x);
      c.nonnegative = c.nonnegative && fx >= 0 && fm >= 0;
      c.even = c.even && std::fabs(fx - fm) <= 1e-12 * std::max(1.0, std::fabs(fx));
      c.increasing = c.increasing && fx > prev;
      prev = fx;
    }
    const double near = 1.0 - 1e-3;
    const Jet<double> j = f.eval_jet(Jet<double>::identity(near, 1));
    c.blows_up = j.value() > 1e6 * std::max(1.0, f.eval(0.5)) && j.value() > f.eval(0.99);
    c.inverse_derivative_vanishes = std::isfinite(j.coeff(1)) ? 1.0 / j.coeff(1) < 1e-6 : true;
  } catch (const Error&) {
    return c;
  }
  return c;
}

ReebReport reeb_probe(const ExprAst& f, int n_max, int tail_max_exponent) {
  if (n_max < 1) throw ArgumentError("n_max must be >= 1");
  ReebReport rep;
  rep.profile = check_reeb_profile(f);
  if (!rep.profile.ok()) throw ArgumentError("profile fails the Reeb conditions (f)/(f1)");
  const LocalDiffeo inverse = LocalDiffeo::conjugated_shift(f, 0.0, Interval{0.0, 1.0});

  std::vector<double> levels;
  for (int n = 1; n <= n_max; ++n) levels.push_back(n);
  for (int j = 1; j <= tail_max_exponent; ++j)
    if (std::pow(10.0, j) > n_max) levels.push_back(std::pow(10.0, j));

  for (double n : levels) {
    ReebRow row;
    row.n = n;
    try {
      row.x0n = inverse.profile_inverse(n, 0.5);
      const std::vector<double> d = f.eval_jet(Jet<double>::identity(row.x0n, 4)).derivatives();
      bool finite = true;
      for (double v : d) finite = finite && std::isfinite(v);
      if (!finite || d[1] <= 0) throw DomainError("overflow");
      row.ln_fprime = std::log(d[1]);
      for (int k = 2; k <= 4; ++k) {
        const double lr = std::log(std::fabs(d[static_cast<std::size_t>(k)])) - k * row.ln_fprime;
        row.ratio[k - 2] = std::copysign(std::exp(lr), d[static_cast<std::size_t>(k)]);
      }
      row.ln_fprime_over_f = row.ln_fprime / d[0];
    } catch (const Error&) {
      rep.truncated = true;
      rep.truncated_at = n;
      break;
    }
    rep.rows.push_back(row);
  }

  const std::size_t head = std::min<std::size_t>(static_cast<std::size_t>(n_max), rep.rows.size());
  for (int k = 0; k < 3; ++k) {
    bool dec = head >= 2;
    for (std::size_t i = 1; i < head; ++i) dec = dec && rep.rows[i].ratio[k] < rep.rows[i - 1].ratio[k];
    rep.ratios_decreasing[k] = dec;
  }
  rep.ln_fprime_increasing = rep.rows.size() >= 2;
  rep.ln_ratio_decreasing = rep.rows.size() >= 2;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    rep.max_ln_fprime = std::max(rep.max_ln_fprime, rep.rows[i].ln_fprime);
    if (i == 0) continue;
    rep.ln_fprime_increasing = rep.ln_fprime_increasing && rep.rows[i].ln_fprime > rep.rows[i - 1].ln_fprime;
    rep.ln_ratio_decreasing = rep.ln_ratio_decreasing && rep.rows[i].ln_fprime_over_f < rep.rows[i - 1].ln_fprime_over_f;
  }
  return rep;
}

}  // namespace folcc
