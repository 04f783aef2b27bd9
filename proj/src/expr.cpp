#include "asymgreen/expr.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <unordered_map>

namespace asymgreen {

const char* fn_name(Fn fn) {
  switch (fn) {
    case Fn::Exp: return "exp";
    case Fn::Log: return "log";
    case Fn::Sqrt: return "sqrt";
    case Fn::Sin: return "sin";
    case Fn::Cos: return "cos";
    case Fn::Sinh: return "sinh";
    case Fn::Cosh: return "cosh";
    case Fn::Tanh: return "tanh";
    case Fn::Sech: return "sech";
  }
  return "?";
}

namespace ex {

static Expr make(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

Expr constant(double v) {
  if (!std::isfinite(v)) throw std::domain_error("non-finite constant in expression");
  return make({NodeKind::Const, v, 0, Fn::Exp, nullptr, nullptr});
}
Expr var() { return make({NodeKind::Var, 0, 0, Fn::Exp, nullptr, nullptr}); }
Expr add(Expr a, Expr b) { return make({NodeKind::Add, 0, 0, Fn::Exp, std::move(a), std::move(b)}); }
Expr sub(Expr a, Expr b) { return make({NodeKind::Sub, 0, 0, Fn::Exp, std::move(a), std::move(b)}); }
Expr mul(Expr a, Expr b) { return make({NodeKind::Mul, 0, 0, Fn::Exp, std::move(a), std::move(b)}); }
Expr div(Expr a, Expr b) { return make({NodeKind::Div, 0, 0, Fn::Exp, std::move(a), std::move(b)}); }
Expr neg(Expr a) { return make({NodeKind::Neg, 0, 0, Fn::Exp, std::move(a), nullptr}); }
Expr pow(Expr a, int n) { return make({NodeKind::Pow, 0, n, Fn::Exp, std::move(a), nullptr}); }
Expr call(Fn fn, Expr a) { return make({NodeKind::Call, 0, 0, fn, std::move(a), nullptr}); }

}  // namespace ex

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case NodeKind::Const: return a->value == b->value;
    case NodeKind::Var: return true;
    case NodeKind::Pow: return a->power == b->power && structurally_equal(a->lhs, b->lhs);
    case NodeKind::Call: return a->fn == b->fn && structurally_equal(a->lhs, b->lhs);
    case NodeKind::Neg: return structurally_equal(a->lhs, b->lhs);
    default: return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
  }
}

bool depends_on_z(const Expr& e) {
  switch (e->kind) {
    case NodeKind::Const: return false;
    case NodeKind::Var: return true;
    case NodeKind::Neg:
    case NodeKind::Pow:
    case NodeKind::Call: return depends_on_z(e->lhs);
    default: return depends_on_z(e->lhs) || depends_on_z(e->rhs);
  }
}

// ---------------------------------------------------------------- parsing

namespace {

enum class Tok { Number, Ident, Op, End };

struct Token {
  Tok kind;
  std::string text;
  double number = 0;
  std::size_t pos = 0;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i;
      while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.')) ++j;
      if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
        if (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
          while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
          j = k;
        }
      }
      double v = 0;
      auto [p, ec] = std::from_chars(s.data() + i, s.data() + j, v);
      if (ec != std::errc() || p != s.data() + j) throw ParseError("malformed number", i);
      out.push_back({Tok::Number, std::string(s.substr(i, j - i)), v, i});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), 0, i});
      i = j;
      continue;
    }
    if (c == '<' || c == '>') {
      if (i + 1 < s.size() && s[i + 1] == '=') {
        out.push_back({Tok::Op, std::string(s.substr(i, 2)), 0, i});
        i += 2;
      } else {
        out.push_back({Tok::Op, std::string(1, c), 0, i});
        ++i;
      }
      continue;
    }
    if (std::string_view("+-*/^(),").find(c) != std::string_view::npos) {
      out.push_back({Tok::Op, std::string(1, c), 0, i});
      ++i;
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", i);
  }
  out.push_back({Tok::End, "", 0, s.size()});
  return out;
}

bool lookup_fn(const std::string& name, Fn& fn) {
  static const std::pair<const char*, Fn> table[] = {
      {"exp", Fn::Exp},   {"log", Fn::Log},   {"sqrt", Fn::Sqrt}, {"sin", Fn::Sin},  {"cos", Fn::Cos},
      {"sinh", Fn::Sinh}, {"cosh", Fn::Cosh}, {"tanh", Fn::Tanh}, {"sech", Fn::Sech}};
  for (const auto& [n, f] : table)
    if (name == n) {
      fn = f;
      return true;
    }
  return false;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  Expr parse_all() {
    Expr e = expr();
    if (peek().kind != Tok::End) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    return e;
  }

  Expr expr() {
    Expr e = term();
    while (is_op("+") || is_op("-")) {
      const bool plus = next().text == "+";
      Expr r = term();
      e = plus ? ex::add(e, r) : ex::sub(e, r);
    }
    return e;
  }

  const Token& peek(std::size_t ahead = 0) const {
    return t_[std::min(i_ + ahead, t_.size() - 1)];
  }
  bool is_op(const char* op, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Op && peek(ahead).text == op;
  }
  const Token& next() { return t_[i_++]; }
  void expect(const char* op) {
    if (!is_op(op)) throw ParseError(std::string("expected '") + op + "'", peek().pos);
    ++i_;
  }

 private:
  Expr term() {
    Expr e = unary();
    while (is_op("*") || is_op("/")) {
      const bool times = next().text == "*";
      Expr r = unary();
      e = times ? ex::mul(e, r) : ex::div(e, r);
    }
    return e;
  }

  Expr unary() {
    if (is_op("-")) {
      if (peek(1).kind == Tok::Number && !is_op("^", 2)) {
        ++i_;
        return ex::constant(-next().number);
      }
      ++i_;
      return ex::neg(unary());
    }
    if (is_op("+")) {
      ++i_;
      return unary();
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (!is_op("^")) return base;
    ++i_;
    bool negative = false;
    if (is_op("-")) {
      negative = true;
      ++i_;
    }
    const Token& tok = peek();
    if (tok.kind != Tok::Number || tok.number != std::floor(tok.number) || std::abs(tok.number) > 1e6)
      throw ParseError("exponent must be an integer literal", tok.pos);
    ++i_;
    const int n = static_cast<int>(tok.number);
    return ex::pow(base, negative ? -n : n);
  }

  Expr primary() {
    const Token& tok = peek();
    if (tok.kind == Tok::Number) {
      ++i_;
      return ex::constant(tok.number);
    }
    if (tok.kind == Tok::Ident) {
      ++i_;
      if (tok.text == "z") return ex::var();
      if (tok.text == "pi") return ex::constant(std::numbers::pi);
      Fn fn;
      if (!lookup_fn(tok.text, fn)) {
        if (is_op("(")) throw ParseError("unknown function '" + tok.text + "'", tok.pos);
        throw ParseError("unknown identifier '" + tok.text + "'", tok.pos);
      }
      expect("(");
      Expr arg = expr();
      expect(")");
      return ex::call(fn, arg);
    }
    if (is_op("(")) {
      ++i_;
      Expr e = expr();
      expect(")");
      return e;
    }
    if (tok.kind == Tok::End) throw ParseError("unexpected end of input", tok.pos);
    throw ParseError("unexpected '" + tok.text + "'", tok.pos);
  }

  std::vector<Token> t_;
  std::size_t i_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text) {
  Parser p(tokenize(text));
  return p.parse_all();
}

// --------------------------------------------------------------- printing

std::string format_number(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

namespace {

int precedence(const Expr& e) {
  switch (e->kind) {
    case NodeKind::Add:
    case NodeKind::Sub: return 1;
    case NodeKind::Mul:
    case NodeKind::Div: return 2;
    case NodeKind::Neg: return 3;
    case NodeKind::Pow: return 4;
    case NodeKind::Const: return std::signbit(e->value) ? 3 : 5;
    default: return 5;
  }
}

std::string print_at(const Expr& e, int min_prec);

std::string render(const Expr& e) {
  switch (e->kind) {
    case NodeKind::Const: return format_number(e->value);
    case NodeKind::Var: return "z";
    case NodeKind::Add: return print_at(e->lhs, 1) + " + " + print_at(e->rhs, 2);
    case NodeKind::Sub: return print_at(e->lhs, 1) + " - " + print_at(e->rhs, 2);
    case NodeKind::Mul: return print_at(e->lhs, 2) + "*" + print_at(e->rhs, 3);
    case NodeKind::Div: return print_at(e->lhs, 2) + "/" + print_at(e->rhs, 3);
    case NodeKind::Neg:
      // "-2" would re-parse as a negative literal
      if (e->lhs->kind == NodeKind::Const && !std::signbit(e->lhs->value))
        return "-(" + render(e->lhs) + ")";
      return "-" + print_at(e->lhs, 3);
    case NodeKind::Pow: return print_at(e->lhs, 5) + "^" + std::to_string(e->power);
    case NodeKind::Call: return std::string(fn_name(e->fn)) + "(" + print_at(e->lhs, 0) + ")";
  }
  return "";
}

std::string print_at(const Expr& e, int min_prec) {
  std::string s = render(e);
  return precedence(e) < min_prec ? "(" + s + ")" : s;
}

}  // namespace

std::string print(const Expr& e) { return print_at(e, 0); }

// ------------------------------------------------------------- evaluation

double evaluate(const Expr& e, double z) {
  switch (e->kind) {
    case NodeKind::Const: return e->value;
    case NodeKind::Var: return z;
    case NodeKind::Add: return evaluate(e->lhs, z) + evaluate(e->rhs, z);
    case NodeKind::Sub: return evaluate(e->lhs, z) - evaluate(e->rhs, z);
    case NodeKind::Mul: return evaluate(e->lhs, z) * evaluate(e->rhs, z);
    case NodeKind::Div: return evaluate(e->lhs, z) / evaluate(e->rhs, z);
    case NodeKind::Neg: return -evaluate(e->lhs, z);
    case NodeKind::Pow: return std::pow(evaluate(e->lhs, z), e->power);
    case NodeKind::Call: {
      const double u = evaluate(e->lhs, z);
      switch (e->fn) {
        case Fn::Exp: return std::exp(u);
        case Fn::Log: return std::log(u);
        case Fn::Sqrt: return std::sqrt(u);
        case Fn::Sin: return std::sin(u);
        case Fn::Cos: return std::cos(u);
        case Fn::Sinh: return std::sinh(u);
        case Fn::Cosh: return std::cosh(u);
        case Fn::Tanh: return std::tanh(u);
        case Fn::Sech: {
          const double t = std::exp(-std::abs(u));
          return 2 * t / (1 + t * t);
        }
      }
    }
  }
  return 0;
}

namespace {

using JetMemo = std::unordered_map<const ExprNode*, Taylor<double>>;

Taylor<double> jet_rec(const Expr& e, double z, std::size_t K, JetMemo& memo) {
  if (auto it = memo.find(e.get()); it != memo.end()) return it->second;
  Taylor<double> r;
  switch (e->kind) {
    case NodeKind::Const: r = Taylor<double>(K, e->value); break;
    case NodeKind::Var: r = Taylor<double>::variable(K, z); break;
    case NodeKind::Add: r = jet_rec(e->lhs, z, K, memo) + jet_rec(e->rhs, z, K, memo); break;
    case NodeKind::Sub: r = jet_rec(e->lhs, z, K, memo) - jet_rec(e->rhs, z, K, memo); break;
    case NodeKind::Mul: r = jet_rec(e->lhs, z, K, memo) * jet_rec(e->rhs, z, K, memo); break;
    case NodeKind::Div: r = jet_rec(e->lhs, z, K, memo) / jet_rec(e->rhs, z, K, memo); break;
    case NodeKind::Neg: r = -jet_rec(e->lhs, z, K, memo); break;
    case NodeKind::Pow: r = taylor::ipow(jet_rec(e->lhs, z, K, memo), e->power); break;
    case NodeKind::Call: {
      const Taylor<double> u = jet_rec(e->lhs, z, K, memo);
      Taylor<double> s, c;
      switch (e->fn) {
        case Fn::Exp: r = taylor::exp(u); break;
        case Fn::Log: r = taylor::log(u); break;
        case Fn::Sqrt: r = taylor::sqrt(u); break;
        case Fn::Sin: taylor::sin_cos(u, s, c, -1); r = s; break;
        case Fn::Cos: taylor::sin_cos(u, s, c, -1); r = c; break;
        case Fn::Sinh: taylor::sin_cos(u, s, c, +1); r = s; break;
        case Fn::Cosh: taylor::sin_cos(u, s, c, +1); r = c; break;
        case Fn::Tanh: r = taylor::tanh(u); break;
        case Fn::Sech: r = taylor::sech(u); break;
      }
      break;
    }
  }
  memo.emplace(e.get(), r);
  return r;
}

}  // namespace

Taylor<double> jet(const Expr& e, double z, int order) {
  if (order < 0) throw std::invalid_argument("negative jet order");
  JetMemo memo;
  return jet_rec(e, z, static_cast<std::size_t>(order), memo);
}

std::vector<double> derivatives(const Expr& e, double z, int order) {
  return jet(e, z, order).derivatives();
}

// --------------------------------------------------------- differentiation

namespace {

bool is_const(const Expr& e, double v) { return e->kind == NodeKind::Const && e->value == v; }
bool is_const(const Expr& e) { return e->kind == NodeKind::Const; }

Expr s_neg(const Expr& a) {
  if (is_const(a)) return ex::constant(-a->value);
  if (a->kind == NodeKind::Neg) return a->lhs;
  return ex::neg(a);
}

Expr s_add(const Expr& a, const Expr& b) {
  if (is_const(a, 0)) return b;
  if (is_const(b, 0)) return a;
  if (is_const(a) && is_const(b)) return ex::constant(a->value + b->value);
  if (b->kind == NodeKind::Neg) return ex::sub(a, b->lhs);
  return ex::add(a, b);
}

Expr s_sub(const Expr& a, const Expr& b) {
  if (is_const(b, 0)) return a;
  if (is_const(a, 0)) return s_neg(b);
  if (is_const(a) && is_const(b)) return ex::constant(a->value - b->value);
  if (b->kind == NodeKind::Neg) return ex::add(a, b->lhs);
  return ex::sub(a, b);
}

Expr s_mul(Expr a, Expr b) {
  if (is_const(a, 0) || is_const(b, 0)) return ex::constant(0);
  if (is_const(b) && !is_const(a)) std::swap(a, b);
  if (is_const(a, 1)) return b;
  if (is_const(a, -1)) return s_neg(b);
  if (is_const(a) && is_const(b)) return ex::constant(a->value * b->value);
  if (is_const(a) && b->kind == NodeKind::Mul && is_const(b->lhs))
    return s_mul(ex::constant(a->value * b->lhs->value), b->rhs);
  if (a->kind == NodeKind::Neg) return s_neg(s_mul(a->lhs, b));
  if (b->kind == NodeKind::Neg) return s_neg(s_mul(a, b->lhs));
  return ex::mul(a, b);
}

Expr s_div(const Expr& a, const Expr& b) {
  if (is_const(a, 0)) return ex::constant(0);
  if (is_const(b, 1)) return a;
  if (is_const(a) && is_const(b)) return ex::constant(a->value / b->value);
  return ex::div(a, b);
}

Expr s_pow(const Expr& a, int n) {
  if (n == 0) return ex::constant(1);
  if (n == 1) return a;
  if (is_const(a)) return ex::constant(std::pow(a->value, n));
  return ex::pow(a, n);
}

Expr d1(const Expr& e) {
  switch (e->kind) {
    case NodeKind::Const: return ex::constant(0);
    case NodeKind::Var: return ex::constant(1);
    case NodeKind::Add: return s_add(d1(e->lhs), d1(e->rhs));
    case NodeKind::Sub: return s_sub(d1(e->lhs), d1(e->rhs));
    case NodeKind::Mul:
      return s_add(s_mul(d1(e->lhs), e->rhs), s_mul(e->lhs, d1(e->rhs)));
    case NodeKind::Div:
      return s_div(s_sub(s_mul(d1(e->lhs), e->rhs), s_mul(e->lhs, d1(e->rhs))), s_pow(e->rhs, 2));
    case NodeKind::Neg: return s_neg(d1(e->lhs));
    case NodeKind::Pow:
      return s_mul(s_mul(ex::constant(e->power), s_pow(e->lhs, e->power - 1)), d1(e->lhs));
    case NodeKind::Call: {
      const Expr& u = e->lhs;
      const Expr du = d1(u);
      if (is_const(du, 0)) return ex::constant(0);
      switch (e->fn) {
        case Fn::Exp: return s_mul(e, du);
        case Fn::Log: return s_div(du, u);
        case Fn::Sqrt: return s_div(du, s_mul(ex::constant(2), e));
        case Fn::Sin: return s_mul(ex::call(Fn::Cos, u), du);
        case Fn::Cos: return s_neg(s_mul(ex::call(Fn::Sin, u), du));
        case Fn::Sinh: return s_mul(ex::call(Fn::Cosh, u), du);
        case Fn::Cosh: return s_mul(ex::call(Fn::Sinh, u), du);
        case Fn::Tanh: return s_mul(s_pow(ex::call(Fn::Sech, u), 2), du);
        case Fn::Sech: return s_neg(s_mul(s_mul(e, ex::call(Fn::Tanh, u)), du));
      }
    }
  }
  return ex::constant(0);
}

}  // namespace

Expr simplified_add(const Expr& a, const Expr& b) { return s_add(a, b); }
Expr simplified_mul(const Expr& a, const Expr& b) { return s_mul(a, b); }
Expr scaled(double c, const Expr& e) { return s_mul(ex::constant(c), e); }

Expr differentiate(const Expr& e, int n, int max_order) {
  if (n < 0) throw std::invalid_argument("negative derivative order");
  if (n > max_order)
    throw std::out_of_range("derivative order " + std::to_string(n) + " exceeds configured max " +
                            std::to_string(max_order));
  Expr r = e;
  for (int i = 0; i < n; ++i) r = d1(r);
  return r;
}

}  // namespace asymgreen
