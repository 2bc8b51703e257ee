#include "oylab/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <memory>
#include <utility>
#include <vector>

namespace oylab {
namespace {

// ---------------------------------------------------------------- duals ---

// Value with first and second derivative with respect to the variable.
struct Dual2 {
  double v = 0.0, d1 = 0.0, d2 = 0.0;
};

Dual2 operator+(const Dual2& a, const Dual2& b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
Dual2 operator-(const Dual2& a, const Dual2& b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
Dual2 operator-(const Dual2& a) { return {-a.v, -a.d1, -a.d2}; }

Dual2 operator*(const Dual2& a, const Dual2& b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}

Dual2 div(const Dual2& a, const Dual2& b, double t) {
  if (b.v == 0.0) throw ExprEvalError("division by zero", t);
  const double q = a.v / b.v;
  const double q1 = (a.d1 - q * b.d1) / b.v;
  const double q2 = (a.d2 - 2.0 * q1 * b.d1 - q * b.d2) / b.v;
  return {q, q1, q2};
}

// f(u) by the chain rule given f(u), f'(u), f''(u).
Dual2 chain(const Dual2& u, double f, double fp, double fpp) {
  return {f, fp * u.d1, fpp * u.d1 * u.d1 + fp * u.d2};
}

Dual2 pow_int(const Dual2& a, int n, double t) {
  if (n == 0) return {1.0, 0.0, 0.0};
  if (a.v == 0.0 && n < 0) throw ExprEvalError("zero raised to a negative power", t);
  const double vn = std::pow(a.v, n);
  const double vn1 = (a.v == 0.0 && n == 1) ? 1.0 : n * std::pow(a.v, n - 1);
  double term2 = 0.0;
  if (n != 1) {
    // n*(n-1)*a^(n-2); guard the a=0 cases so 0*inf never forms.
    const double c = static_cast<double>(n) * (n - 1);
    if (a.v == 0.0 && n - 2 < 0) throw ExprEvalError("zero raised to a negative power", t);
    term2 = (a.v == 0.0 && n == 2) ? c : c * std::pow(a.v, n - 2);
    if (a.v == 0.0 && n > 2) term2 = 0.0;
  }
  return {vn, vn1 * a.d1, term2 * a.d1 * a.d1 + vn1 * a.d2};
}

Dual2 pow_general(const Dual2& a, const Dual2& b, double t) {
  if (a.v <= 0.0) throw ExprEvalError("power of a non-positive base with non-integer exponent", t);
  // a^b = exp(b * log a)
  const double lg = std::log(a.v);
  const Dual2 loga{lg, a.d1 / a.v, (a.d2 - a.d1 * a.d1 / a.v) / a.v};
  const Dual2 expo = b * loga;
  const double v = std::exp(expo.v);
  return chain(expo, v, v, v);
}

// ------------------------------------------------------------------ AST ---

enum class Func { exp, log, sqrt, sin, cos, sinh, cosh, tanh };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum class Kind { num, var, add, sub, mul, divide, neg, powi, powg, call } kind;
  double number = 0.0;
  int ipow = 0;
  Func func = Func::exp;
  NodePtr a, b;
};

Dual2 evaluate(const Node& n, double t) {
  switch (n.kind) {
    case Node::Kind::num:
      return {n.number, 0.0, 0.0};
    case Node::Kind::var:
      return {t, 1.0, 0.0};
    case Node::Kind::add:
      return evaluate(*n.a, t) + evaluate(*n.b, t);
    case Node::Kind::sub:
      return evaluate(*n.a, t) - evaluate(*n.b, t);
    case Node::Kind::mul:
      return evaluate(*n.a, t) * evaluate(*n.b, t);
    case Node::Kind::divide:
      return div(evaluate(*n.a, t), evaluate(*n.b, t), t);
    case Node::Kind::neg:
      return -evaluate(*n.a, t);
    case Node::Kind::powi:
      return pow_int(evaluate(*n.a, t), n.ipow, t);
    case Node::Kind::powg:
      return pow_general(evaluate(*n.a, t), evaluate(*n.b, t), t);
    case Node::Kind::call: {
      const Dual2 u = evaluate(*n.a, t);
      switch (n.func) {
        case Func::exp: {
          const double e = std::exp(u.v);
          return chain(u, e, e, e);
        }
        case Func::log:
          if (u.v <= 0.0) throw ExprEvalError("log of a non-positive value", t);
          return chain(u, std::log(u.v), 1.0 / u.v, -1.0 / (u.v * u.v));
        case Func::sqrt: {
          if (u.v <= 0.0) throw ExprEvalError("sqrt of a non-positive value", t);
          const double s = std::sqrt(u.v);
          return chain(u, s, 0.5 / s, -0.25 / (u.v * s));
        }
        case Func::sin:
          return chain(u, std::sin(u.v), std::cos(u.v), -std::sin(u.v));
        case Func::cos:
          return chain(u, std::cos(u.v), -std::sin(u.v), -std::cos(u.v));
        case Func::sinh:
          return chain(u, std::sinh(u.v), std::cosh(u.v), std::sinh(u.v));
        case Func::cosh:
          return chain(u, std::cosh(u.v), std::sinh(u.v), std::cosh(u.v));
        case Func::tanh: {
          const double th = std::tanh(u.v);
          const double sech2 = 1.0 - th * th;
          return chain(u, th, sech2, -2.0 * th * sech2);
        }
      }
      break;
    }
  }
  throw ExprEvalError("corrupt expression tree", t);
}

// --------------------------------------------------------------- parser ---

struct Token {
  enum class Kind { number, ident, plus, minus, star, slash, caret, lparen, rparen, comma, end } kind;
  std::size_t offset = 0;
  double number = 0.0;
  std::string text;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }
  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    tok_.offset = pos_;
    if (pos_ >= src_.size()) {
      tok_.kind = Token::Kind::end;
      return;
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double value = 0.0;
      auto res = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), value);
      if (res.ec != std::errc{}) {
        throw ExprParseError("malformed number literal", pos_);
      }
      tok_.kind = Token::Kind::number;
      tok_.number = value;
      pos_ = static_cast<std::size_t>(res.ptr - src_.data());
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_')) {
        ++end;
      }
      tok_.kind = Token::Kind::ident;
      tok_.text = src_.substr(pos_, end - pos_);
      pos_ = end;
      return;
    }
    switch (c) {
      case '+': tok_.kind = Token::Kind::plus; break;
      case '-': tok_.kind = Token::Kind::minus; break;
      case '*': tok_.kind = Token::Kind::star; break;
      case '/': tok_.kind = Token::Kind::slash; break;
      case '^': tok_.kind = Token::Kind::caret; break;
      case '(': tok_.kind = Token::Kind::lparen; break;
      case ')': tok_.kind = Token::Kind::rparen; break;
      case ',': tok_.kind = Token::Kind::comma; break;
      default:
        throw ExprParseError(std::string("unexpected character '") + c + "'", pos_);
    }
    ++pos_;
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  Token tok_;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) {}

  NodePtr parse() {
    NodePtr root = parse_expr();
    if (lex_.peek().kind != Token::Kind::end) {
      throw ExprParseError("trailing input after expression", lex_.peek().offset);
    }
    return root;
  }

 private:
  static NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

  NodePtr parse_expr() {
    NodePtr left = parse_term();
    while (true) {
      const auto k = lex_.peek().kind;
      if (k == Token::Kind::plus || k == Token::Kind::minus) {
        lex_.take();
        NodePtr right = parse_term();
        Node n;
        n.kind = (k == Token::Kind::plus) ? Node::Kind::add : Node::Kind::sub;
        n.a = left;
        n.b = right;
        left = make(std::move(n));
      } else {
        return left;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr left = parse_unary();
    while (true) {
      const auto k = lex_.peek().kind;
      if (k == Token::Kind::star || k == Token::Kind::slash) {
        lex_.take();
        NodePtr right = parse_unary();
        Node n;
        n.kind = (k == Token::Kind::star) ? Node::Kind::mul : Node::Kind::divide;
        n.a = left;
        n.b = right;
        left = make(std::move(n));
      } else {
        return left;
      }
    }
  }

  NodePtr parse_unary() {
    const auto k = lex_.peek().kind;
    if (k == Token::Kind::plus) {
      lex_.take();
      return parse_unary();
    }
    if (k == Token::Kind::minus) {
      lex_.take();
      Node n;
      n.kind = Node::Kind::neg;
      n.a = parse_unary();
      return make(std::move(n));
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (lex_.peek().kind != Token::Kind::caret) return base;
    lex_.take();
    NodePtr expo = parse_unary();  // right-associative: a^b^c = a^(b^c)
    return make_power(std::move(base), std::move(expo));
  }

  // Literal integer exponents get the restricted power node, which is
  // defined for non-positive bases; everything else goes through exp/log.
  static NodePtr make_power(NodePtr base, NodePtr expo) {
    double lit = 0.0;
    bool is_lit = false;
    if (expo->kind == Node::Kind::num) {
      lit = expo->number;
      is_lit = true;
    } else if (expo->kind == Node::Kind::neg && expo->a->kind == Node::Kind::num) {
      lit = -expo->a->number;
      is_lit = true;
    }
    Node n;
    if (is_lit && lit == std::floor(lit) && std::fabs(lit) <= 64.0) {
      n.kind = Node::Kind::powi;
      n.ipow = static_cast<int>(lit);
      n.a = base;
    } else {
      n.kind = Node::Kind::powg;
      n.a = base;
      n.b = expo;
    }
    return make(std::move(n));
  }

  NodePtr parse_atom() {
    Token t = lex_.take();
    switch (t.kind) {
      case Token::Kind::number: {
        Node n;
        n.kind = Node::Kind::num;
        n.number = t.number;
        return make(std::move(n));
      }
      case Token::Kind::lparen: {
        NodePtr inner = parse_expr();
        if (lex_.peek().kind != Token::Kind::rparen) {
          throw ExprParseError("expected ')'", lex_.peek().offset);
        }
        lex_.take();
        return inner;
      }
      case Token::Kind::ident: {
        if (t.text == "t" || t.text == "r") {
          Node n;
          n.kind = Node::Kind::var;
          return make(std::move(n));
        }
        if (t.text == "e") {
          Node n;
          n.kind = Node::Kind::num;
          n.number = std::exp(1.0);
          return make(std::move(n));
        }
        if (t.text == "pi") {
          Node n;
          n.kind = Node::Kind::num;
          n.number = 4.0 * std::atan(1.0);
          return make(std::move(n));
        }
        if (t.text == "pow") {
          if (lex_.peek().kind != Token::Kind::lparen) {
            throw ExprParseError("expected '(' after function name", lex_.peek().offset);
          }
          lex_.take();
          NodePtr base = parse_expr();
          if (lex_.peek().kind != Token::Kind::comma) {
            throw ExprParseError("expected ',' between pow arguments", lex_.peek().offset);
          }
          lex_.take();
          NodePtr expo = parse_expr();
          if (lex_.peek().kind != Token::Kind::rparen) {
            throw ExprParseError("expected ')'", lex_.peek().offset);
          }
          lex_.take();
          return make_power(std::move(base), std::move(expo));
        }
        Func f;
        if (t.text == "exp") f = Func::exp;
        else if (t.text == "log" || t.text == "ln") f = Func::log;
        else if (t.text == "sqrt") f = Func::sqrt;
        else if (t.text == "sin") f = Func::sin;
        else if (t.text == "cos") f = Func::cos;
        else if (t.text == "sinh") f = Func::sinh;
        else if (t.text == "cosh") f = Func::cosh;
        else if (t.text == "tanh") f = Func::tanh;
        else throw ExprParseError("unknown identifier '" + t.text + "'", t.offset);
        if (lex_.peek().kind != Token::Kind::lparen) {
          throw ExprParseError("expected '(' after function name", lex_.peek().offset);
        }
        lex_.take();
        NodePtr arg = parse_expr();
        if (lex_.peek().kind != Token::Kind::rparen) {
          throw ExprParseError("expected ')'", lex_.peek().offset);
        }
        lex_.take();
        Node n;
        n.kind = Node::Kind::call;
        n.func = f;
        n.a = arg;
        return make(std::move(n));
      }
      case Token::Kind::end:
        throw ExprParseError("unexpected end of expression", t.offset);
      default:
        throw ExprParseError("unexpected token", t.offset);
    }
  }

  Lexer lex_;
};

Dual2 evaluate_checked(const NodePtr& root, double t) {
  const Dual2 d = evaluate(*root, t);
  if (!std::isfinite(d.v) || !std::isfinite(d.d1) || !std::isfinite(d.d2)) {
    throw ExprEvalError("expression evaluated to a non-finite value", t);
  }
  return d;
}

}  // namespace

ScalarFunction1D parse_expression(const std::string& source, double domain_max) {
  NodePtr root = Parser(source).parse();

  ScalarFunction1D fn;
  fn.kind = FunctionKind::parsed_expression;
  fn.label = source;
  fn.domain_max = domain_max;
  fn.eval = [root](double t) { return evaluate_checked(root, t).v; };
  fn.deriv = [root](double t) { return evaluate_checked(root, t).d1; };
  fn.deriv2 = [root](double t) { return evaluate_checked(root, t).d2; };
  return fn;
}

}  // namespace oylab
