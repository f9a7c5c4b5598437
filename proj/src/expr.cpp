#include "folcc/expr.hpp"

#include <cctype>
#include <cmath>
#include <optional>
#include <sstream>
#include <utility>

namespace folcc {
namespace {

bool is_unary_fn(Op op) {
  switch (op) {
    case Op::exp:
    case Op::ln:
    case Op::sin:
    case Op::cos:
    case Op::sqrt:
    case Op::abs:
      return true;
    default:
      return false;
  }
}

bool is_binary(Op op) {
  switch (op) {
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div:
    case Op::pow:
      return true;
    default:
      return false;
  }
}

const char* fn_name(Op op) {
  switch (op) {
    case Op::exp: return "exp";
    case Op::ln: return "ln";
    case Op::sin: return "sin";
    case Op::cos: return "cos";
    case Op::sqrt: return "sqrt";
    case Op::abs: return "abs";
    default: return "?";
  }
}

ExprNode make_const_node(const Rational& v) {
  ExprNode n;
  n.op = Op::constant;
  n.value = v;
  n.value.canonicalize();
  n.dvalue = n.value.get_d();
  return n;
}

// --------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  std::vector<ExprNode> run() {
    skip_ws();
    parse_expr();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError("unexpected character '" + std::string(1, src_[pos_]) + "'", pos_);
    return std::move(nodes_);
  }

 private:
  int emit(ExprNode n) {
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }
  int emit(Op op, int lhs, int rhs = -1) {
    ExprNode n;
    n.op = op;
    n.lhs = lhs;
    n.rhs = rhs;
    return emit(std::move(n));
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < src_.size() && src_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) {
      if (pos_ >= src_.size()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
    ++pos_;
  }

  int parse_expr() {
    int lhs = parse_term();
    for (;;) {
      if (peek('+')) {
        ++pos_;
        lhs = emit(Op::add, lhs, parse_term());
      } else if (peek('-')) {
        ++pos_;
        lhs = emit(Op::sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  int parse_term() {
    int lhs = parse_factor();
    for (;;) {
      if (peek('*')) {
        ++pos_;
        lhs = emit(Op::mul, lhs, parse_factor());
      } else if (peek('/')) {
        ++pos_;
        lhs = emit(Op::div, lhs, parse_factor());
      } else {
        return lhs;
      }
    }
  }

  int parse_factor() {
    const int b = parse_base();
    if (peek('^')) {
      ++pos_;
      const int e = parse_factor();
      return emit(Op::pow, b, e);
    }
    return b;
  }

  int parse_base() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = src_[pos_];
    if (c == '-') {
      ++pos_;
      return emit(Op::neg, parse_factor());
    }
    if (c == '(') {
      ++pos_;
      const int inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return emit(make_const_node(parse_number()));
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      const std::string_view ident = src_.substr(start, pos_ - start);
      if (ident == "x") return emit(Op::var, -1);
      static constexpr std::pair<std::string_view, Op> kFns[] = {
          {"exp", Op::exp}, {"ln", Op::ln}, {"sin", Op::sin}, {"cos", Op::cos}, {"sqrt", Op::sqrt}, {"abs", Op::abs}};
      for (const auto& [name, op] : kFns) {
        if (ident == name) {
          expect('(');
          const int arg = parse_expr();
          expect(')');
          return emit(op, arg);
        }
      }
      throw ParseError("unknown identifier '" + std::string(ident) + "'", start);
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  // integer | decimal [exponent] | integer "/" integer (no embedded spaces)
  Rational parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t s = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      return std::string(src_.substr(s, pos_ - s));
    };
    std::string int_part = digits();
    bool decimal = false;
    std::string frac_part;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      decimal = true;
      ++pos_;
      frac_part = digits();
    }
    if (int_part.empty() && frac_part.empty()) throw ParseError("malformed number", start);
    long exponent = 0;
    if (pos_ + 1 < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      bool neg = false;
      if (src_[look] == '+' || src_[look] == '-') {
        neg = src_[look] == '-';
        ++look;
      }
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        exponent = std::stol(digits());
        if (neg) exponent = -exponent;
        decimal = true;
      }
    }
    if (!decimal && pos_ + 1 < src_.size() && src_[pos_] == '/' &&
        std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
      ++pos_;
      const std::string den = digits();
      mpz_class d(den);
      if (d == 0) throw ParseError("zero denominator in rational literal", start);
      Rational q(mpz_class(int_part), d);
      q.canonicalize();
      return q;
    }
    mpz_class num(int_part.empty() ? std::string("0") : int_part);
    mpz_class den(1);
    for (char ch : frac_part) {
      num = num * 10 + (ch - '0');
      den *= 10;
    }
    mpz_class ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    if (exponent >= 0) {
      num *= ten_pow;
    } else {
      den *= ten_pow;
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::vector<ExprNode> nodes_;
};

// --------------------------------------------------------------------------
// Printer

constexpr int kPrecAdd = 1;
constexpr int kPrecMul = 2;
constexpr int kPrecNeg = 3;
constexpr int kPrecPow = 4;
constexpr int kPrecAtom = 5;

struct Printed {
  std::string text;
  int prec;
};

Printed print_node(const std::vector<ExprNode>& nodes, int i) {
  const ExprNode& n = nodes[static_cast<std::size_t>(i)];
  auto wrap = [](const Printed& p, bool paren) { return paren ? "(" + p.text + ")" : p.text; };
  switch (n.op) {
    case Op::constant:
      return {to_string(n.value), kPrecAtom};
    case Op::var:
      return {"x", kPrecAtom};
    case Op::neg: {
      const Printed a = print_node(nodes, n.lhs);
      return {"-" + wrap(a, a.prec < kPrecNeg), kPrecNeg};
    }
    case Op::add:
    case Op::sub: {
      const Printed a = print_node(nodes, n.lhs);
      const Printed b = print_node(nodes, n.rhs);
      const char* sym = n.op == Op::add ? " + " : " - ";
      return {wrap(a, a.prec < kPrecAdd || a.prec == kPrecNeg) + sym + wrap(b, b.prec <= kPrecAdd || b.prec == kPrecNeg),
              kPrecAdd};
    }
    case Op::mul:
    case Op::div: {
      const Printed a = print_node(nodes, n.lhs);
      const Printed b = print_node(nodes, n.rhs);
      const char* sym = n.op == Op::mul ? " * " : " / ";
      return {wrap(a, a.prec < kPrecMul || a.prec == kPrecNeg) + sym + wrap(b, b.prec <= kPrecMul || b.prec == kPrecNeg),
              kPrecMul};
    }
    case Op::pow: {
      const Printed a = print_node(nodes, n.lhs);
      const Printed b = print_node(nodes, n.rhs);
      return {wrap(a, a.prec < kPrecAtom) + "^" + wrap(b, b.prec < kPrecNeg), kPrecPow};
    }
    default: {
      const Printed a = print_node(nodes, n.lhs);
      return {std::string(fn_name(n.op)) + "(" + a.text + ")", kPrecAtom};
    }
  }
}

// --------------------------------------------------------------------------
// Builders

// Append `src` to `dst` and return the index of src's root in dst.
int splice(std::vector<ExprNode>& dst, const std::vector<ExprNode>& src) {
  const int offset = static_cast<int>(dst.size());
  for (ExprNode n : src) {
    if (n.lhs >= 0) n.lhs += offset;
    if (n.rhs >= 0) n.rhs += offset;
    dst.push_back(std::move(n));
  }
  return static_cast<int>(dst.size()) - 1;
}

std::optional<Rational> const_value(const ExprAst& a) {
  const auto& n = a.nodes();
  const ExprNode& r = n.back();
  if (r.op == Op::constant) return r.value;
  if (r.op == Op::neg && n[static_cast<std::size_t>(r.lhs)].op == Op::constant)
    return Rational(-n[static_cast<std::size_t>(r.lhs)].value);
  return std::nullopt;
}

std::optional<long> integer_exponent(const std::vector<ExprNode>& nodes, int i) {
  const ExprNode& n = nodes[static_cast<std::size_t>(i)];
  if (n.op == Op::constant && n.value.get_den() == 1 && n.value.get_num().fits_slong_p())
    return n.value.get_num().get_si();
  if (n.op == Op::neg) {
    const ExprNode& c = nodes[static_cast<std::size_t>(n.lhs)];
    if (c.op == Op::constant && c.value.get_den() == 1 && c.value.get_num().fits_slong_p())
      return -c.value.get_num().get_si();
  }
  return std::nullopt;
}

bool is_const_subtree(const std::vector<ExprNode>& nodes, int i) {
  const ExprNode& n = nodes[static_cast<std::size_t>(i)];
  if (n.op == Op::var) return false;
  if (n.op == Op::constant) return true;
  if (n.lhs >= 0 && !is_const_subtree(nodes, n.lhs)) return false;
  if (n.rhs >= 0 && !is_const_subtree(nodes, n.rhs)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Evaluation

template <class T>
T scalar_pow_int(T base, long e, const EvalOptions& opt) {
  bool neg = e < 0;
  unsigned long k = neg ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  T result(1);
  while (k != 0) {
    if (k & 1UL) result *= base;
    k >>= 1;
    if (k != 0) base *= base;
  }
  if (neg) {
    if (Ops<T>::near_zero(result, opt.zero_tol)) throw DomainError("division by a value near zero");
    result = T(1) / result;
  }
  return result;
}

template <class T>
T eval_scalar(const std::vector<ExprNode>& nodes, const T& x, const EvalOptions& opt, std::vector<T>& v) {
  v.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const ExprNode& n = nodes[i];
    const auto L = [&]() -> const T& { return v[static_cast<std::size_t>(n.lhs)]; };
    const auto R = [&]() -> const T& { return v[static_cast<std::size_t>(n.rhs)]; };
    switch (n.op) {
      case Op::constant:
        if constexpr (std::is_same_v<T, double>) {
          v[i] = n.dvalue;
        } else {
          v[i] = Ops<T>::from_rational(n.value);
        }
        break;
      case Op::var: v[i] = x; break;
      case Op::neg: v[i] = -L(); break;
      case Op::add: v[i] = L() + R(); break;
      case Op::sub: v[i] = L() - R(); break;
      case Op::mul: v[i] = L() * R(); break;
      case Op::div:
        if (Ops<T>::near_zero(R(), opt.zero_tol)) throw DomainError("division by a value near zero");
        v[i] = L() / R();
        break;
      case Op::pow: {
        if (auto e = integer_exponent(nodes, n.rhs)) {
          v[i] = scalar_pow_int<T>(L(), *e, opt);
        } else {
          if (Ops<T>::negative(L()) || Ops<T>::near_zero(L(), 0.0))
            throw DomainError("non-integer power of a non-positive value");
          v[i] = Ops<T>::exp(R() * Ops<T>::log(L()));
        }
        break;
      }
      case Op::exp: v[i] = Ops<T>::exp(L()); break;
      case Op::ln:
        if (Ops<T>::negative(L()) || Ops<T>::near_zero(L(), 0.0)) throw DomainError("ln of a non-positive value");
        v[i] = Ops<T>::log(L());
        break;
      case Op::sin: v[i] = Ops<T>::sin(L()); break;
      case Op::cos: v[i] = Ops<T>::cos(L()); break;
      case Op::sqrt:
        if (Ops<T>::negative(L())) throw DomainError("sqrt of a negative value");
        v[i] = Ops<T>::sqrt(L());
        break;
      case Op::abs: v[i] = Ops<T>::negative(L()) ? T(-L()) : L(); break;
    }
  }
  return v.back();
}

}  // namespace

// ---------------------------------------------------------------------------

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(const std::string& text) {
  try {
    const ExprAst a = ExprAst::parse(text);
    if (auto v = const_value(a)) return *v;
  } catch (const ParseError&) {
  }
  throw ArgumentError("not a rational literal: '" + text + "'");
}

ExprAst::ExprAst() : ExprAst(std::vector<ExprNode>{make_const_node(Rational(0))}) {}

ExprAst::ExprAst(std::vector<ExprNode> nodes)
    : nodes_(std::make_shared<const std::vector<ExprNode>>(std::move(nodes))) {}

ExprAst ExprAst::from_postorder(std::vector<ExprNode> nodes) {
  if (nodes.empty()) throw ArgumentError("empty expression");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const ExprNode& n = nodes[i];
    const int need = n.op == Op::constant || n.op == Op::var ? 0 : (is_binary(n.op) ? 2 : 1);
    const int have = (n.lhs >= 0) + (n.rhs >= 0);
    if (need != have || n.lhs >= static_cast<int>(i) || n.rhs >= static_cast<int>(i))
      throw ArgumentError("malformed expression node list");
  }
  return ExprAst(std::move(nodes));
}

ExprAst ExprAst::parse(std::string_view source) { return from_postorder(Parser(source).run()); }

ExprAst ExprAst::constant(const Rational& v) {
  if (sgn(v) < 0) return -from_postorder(std::vector<ExprNode>{make_const_node(Rational(-v))});
  return from_postorder(std::vector<ExprNode>{make_const_node(v)});
}

ExprAst ExprAst::variable() {
  ExprNode n;
  n.op = Op::var;
  return from_postorder(std::vector<ExprNode>{n});
}

namespace {
// Post-order storage: the subtree rooted at i is the contiguous block that
// starts at its leftmost descendant and ends at i.
ExprAst subtree(const ExprAst& a, int i) {
  const auto& n = a.nodes();
  int first = i;
  while (n[static_cast<std::size_t>(first)].lhs >= 0) first = n[static_cast<std::size_t>(first)].lhs;
  std::vector<ExprNode> out;
  out.reserve(static_cast<std::size_t>(i - first + 1));
  for (int k = first; k <= i; ++k) {
    ExprNode node = n[static_cast<std::size_t>(k)];
    if (node.lhs >= 0) node.lhs -= first;
    if (node.rhs >= 0) node.rhs -= first;
    out.push_back(std::move(node));
  }
  return ExprAst::from_postorder(std::move(out));
}

ExprAst binary(Op op, const ExprAst& a, const ExprAst& b) {
  std::vector<ExprNode> nodes;
  nodes.reserve(a.nodes().size() + b.nodes().size() + 1);
  const int l = splice(nodes, a.nodes());
  const int r = splice(nodes, b.nodes());
  ExprNode n;
  n.op = op;
  n.lhs = l;
  n.rhs = r;
  nodes.push_back(n);
  return ExprAst::from_postorder(std::move(nodes));
}
}  // namespace

// Folding rules keep derivative() output readable: 0 and 1 absorb, constant
// operands combine. Nothing else is simplified.
ExprAst operator+(const ExprAst& a, const ExprAst& b) {
  const auto ca = const_value(a), cb = const_value(b);
  if (ca && cb) return ExprAst::constant(*ca + *cb);
  if (ca && sgn(*ca) == 0) return b;
  if (cb && sgn(*cb) == 0) return a;
  return binary(Op::add, a, b);
}

ExprAst operator-(const ExprAst& a, const ExprAst& b) {
  const auto ca = const_value(a), cb = const_value(b);
  if (ca && cb) return ExprAst::constant(*ca - *cb);
  if (cb && sgn(*cb) == 0) return a;
  if (ca && sgn(*ca) == 0) return -b;
  return binary(Op::sub, a, b);
}

ExprAst operator*(const ExprAst& a, const ExprAst& b) {
  const auto ca = const_value(a), cb = const_value(b);
  if (ca && cb) return ExprAst::constant(*ca * *cb);
  if ((ca && sgn(*ca) == 0) || (cb && sgn(*cb) == 0)) return ExprAst::constant(Rational(0));
  if (ca && *ca == 1) return b;
  if (cb && *cb == 1) return a;
  return binary(Op::mul, a, b);
}

ExprAst operator/(const ExprAst& a, const ExprAst& b) {
  const auto ca = const_value(a), cb = const_value(b);
  if (cb && sgn(*cb) == 0) throw DomainError("division by the constant 0");
  if (ca && cb) return ExprAst::constant(*ca / *cb);
  if (ca && sgn(*ca) == 0) return ExprAst::constant(Rational(0));
  if (cb && *cb == 1) return a;
  return binary(Op::div, a, b);
}

ExprAst operator-(const ExprAst& a) {
  if (auto ca = const_value(a); ca && sgn(*ca) == 0) return a;
  const auto& n = a.nodes();
  if (n.back().op == Op::neg) return subtree(a, n.back().lhs);
  std::vector<ExprNode> nodes(n.begin(), n.end());
  ExprNode neg;
  neg.op = Op::neg;
  neg.lhs = static_cast<int>(nodes.size()) - 1;
  nodes.push_back(neg);
  return ExprAst::from_postorder(std::move(nodes));
}

ExprAst ExprAst::apply(Op fn, const ExprAst& arg) {
  if (!is_unary_fn(fn) && fn != Op::neg) throw ArgumentError("apply: not a unary function");
  std::vector<ExprNode> nodes(arg.nodes().begin(), arg.nodes().end());
  ExprNode n;
  n.op = fn;
  n.lhs = static_cast<int>(nodes.size()) - 1;
  nodes.push_back(n);
  return from_postorder(std::move(nodes));
}

ExprAst ExprAst::power(const ExprAst& base, const ExprAst& exponent) {
  if (auto ce = const_value(exponent)) {
    if (sgn(*ce) == 0) return constant(Rational(1));
    if (*ce == 1) return base;
  }
  return binary(Op::pow, base, exponent);
}

ExprAst ExprAst::compose(const ExprAst& outer, const ExprAst& inner) {
  std::vector<ExprNode> nodes;
  std::vector<int> remap(outer.nodes().size());
  for (std::size_t i = 0; i < outer.nodes().size(); ++i) {
    ExprNode n = outer.nodes()[i];
    if (n.op == Op::var) {
      remap[i] = splice(nodes, inner.nodes());
      continue;
    }
    if (n.lhs >= 0) n.lhs = remap[static_cast<std::size_t>(n.lhs)];
    if (n.rhs >= 0) n.rhs = remap[static_cast<std::size_t>(n.rhs)];
    nodes.push_back(std::move(n));
    remap[i] = static_cast<int>(nodes.size()) - 1;
  }
  return from_postorder(std::move(nodes));
}


ExprAst ExprAst::derivative() const {
  const auto& n = nodes();
  std::vector<ExprAst> d(n.size());
  std::vector<ExprAst> s(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    s[i] = subtree(*this, static_cast<int>(i));
    const ExprNode& node = n[i];
    const auto L = [&] { return s[static_cast<std::size_t>(node.lhs)]; };
    const auto R = [&] { return s[static_cast<std::size_t>(node.rhs)]; };
    const auto dL = [&] { return d[static_cast<std::size_t>(node.lhs)]; };
    const auto dR = [&] { return d[static_cast<std::size_t>(node.rhs)]; };
    const ExprAst two = constant(Rational(2));
    switch (node.op) {
      case Op::constant: d[i] = constant(Rational(0)); break;
      case Op::var: d[i] = constant(Rational(1)); break;
      case Op::neg: d[i] = -dL(); break;
      case Op::add: d[i] = dL() + dR(); break;
      case Op::sub: d[i] = dL() - dR(); break;
      case Op::mul: d[i] = dL() * R() + L() * dR(); break;
      case Op::div: d[i] = (dL() * R() - L() * dR()) / power(R(), two); break;
      case Op::pow: {
        if (is_const_subtree(n, node.rhs)) {
          d[i] = R() * power(L(), R() - constant(Rational(1))) * dL();
        } else {
          d[i] = s[i] * (dR() * apply(Op::ln, L()) + R() * dL() / L());
        }
        break;
      }
      case Op::exp: d[i] = s[i] * dL(); break;
      case Op::ln: d[i] = dL() / L(); break;
      case Op::sin: d[i] = apply(Op::cos, L()) * dL(); break;
      case Op::cos: d[i] = -(apply(Op::sin, L()) * dL()); break;
      case Op::sqrt: d[i] = dL() / (two * s[i]); break;
      case Op::abs: d[i] = L() / s[i] * dL(); break;
    }
  }
  return d.back();
}

std::string ExprAst::to_string() const { return print_node(nodes(), root()).text; }

bool ExprAst::is_polynomial() const {
  const auto& n = nodes();
  for (const ExprNode& node : n) {
    switch (node.op) {
      case Op::constant:
      case Op::var:
      case Op::neg:
      case Op::add:
      case Op::sub:
      case Op::mul:
        break;
      case Op::div:
        if (!is_const_subtree(n, node.rhs)) return false;
        break;
      case Op::pow: {
        auto e = integer_exponent(n, node.rhs);
        if (!e || *e < 0) return false;
        break;
      }
      default:
        return false;
    }
  }
  return true;
}

bool ExprAst::is_rational_function() const {
  const auto& n = nodes();
  for (const ExprNode& node : n) {
    if (is_unary_fn(node.op)) return false;
    if (node.op == Op::pow && !integer_exponent(n, node.rhs)) return false;
  }
  return true;
}

bool ExprAst::is_constant() const { return is_const_subtree(nodes(), root()); }

bool ExprAst::is_identity() const { return nodes().size() == 1 && nodes()[0].op == Op::var; }

double ExprAst::eval(double x, const EvalOptions& opt) const {
  thread_local std::vector<double> scratch;
  return eval_scalar<double>(nodes(), x, opt, scratch);
}

template <class T>
T ExprAst::eval_as(const T& x, const EvalOptions& opt) const {
  thread_local std::vector<T> scratch;
  return eval_scalar<T>(nodes(), x, opt, scratch);
}

template <class T>
Jet<T> ExprAst::eval_jet(const Jet<T>& input, const EvalOptions& opt) const {
  const auto& n = nodes();
  const int q = input.order();
  std::vector<Jet<T>> v;
  v.reserve(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    const ExprNode& node = n[i];
    const auto L = [&]() -> const Jet<T>& { return v[static_cast<std::size_t>(node.lhs)]; };
    const auto R = [&]() -> const Jet<T>& { return v[static_cast<std::size_t>(node.rhs)]; };
    switch (node.op) {
      case Op::constant:
        v.push_back(Jet<T>::constant(input.base(), Ops<T>::from_rational(node.value), q));
        break;
      case Op::var: v.push_back(input); break;
      case Op::neg: v.push_back(-L()); break;
      case Op::add: v.push_back(L() + R()); break;
      case Op::sub: v.push_back(L() - R()); break;
      case Op::mul: v.push_back(L() * R()); break;
      case Op::div: v.push_back(Jet<T>::divide(L(), R(), opt.zero_tol)); break;
      case Op::pow: {
        if (auto e = integer_exponent(n, node.rhs)) {
          v.push_back(pow_int(L(), *e, opt.zero_tol));
        } else {
          v.push_back(exp(R() * log(L())));
        }
        break;
      }
      case Op::exp: v.push_back(exp(L())); break;
      case Op::ln: v.push_back(log(L())); break;
      case Op::sin: v.push_back(sincos(L()).first); break;
      case Op::cos: v.push_back(sincos(L()).second); break;
      case Op::sqrt: v.push_back(sqrt(L(), opt.zero_tol)); break;
      case Op::abs: v.push_back(abs(L(), opt.zero_tol)); break;
    }
  }
  return v.back();
}

bool operator==(const ExprAst& a, const ExprAst& b) {
  const auto& x = a.nodes();
  const auto& y = b.nodes();
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].op != y[i].op || x[i].lhs != y[i].lhs || x[i].rhs != y[i].rhs) return false;
    if (x[i].op == Op::constant && x[i].value != y[i].value) return false;
  }
  return true;
}

template double ExprAst::eval_as<double>(const double&, const EvalOptions&) const;
template long double ExprAst::eval_as<long double>(const long double&, const EvalOptions&) const;
template BigFloat ExprAst::eval_as<BigFloat>(const BigFloat&, const EvalOptions&) const;
template Rational ExprAst::eval_as<Rational>(const Rational&, const EvalOptions&) const;
template Dual<double> ExprAst::eval_as<Dual<double>>(const Dual<double>&, const EvalOptions&) const;

template Jet<double> ExprAst::eval_jet<double>(const Jet<double>&, const EvalOptions&) const;
template Jet<Rational> ExprAst::eval_jet<Rational>(const Jet<Rational>&, const EvalOptions&) const;
template Jet<Dual<double>> ExprAst::eval_jet<Dual<double>>(const Jet<Dual<double>>&, const EvalOptions&) const;

}  // namespace folcc
