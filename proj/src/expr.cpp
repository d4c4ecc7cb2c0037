#include "anisofrac/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "anisofrac/errors.hpp"

namespace anisofrac {

namespace {

ExprPtr make_node(Expr::Kind kind, std::vector<ExprPtr> args) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->args = std::move(args);
  return e;
}

ExprPtr make_number(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Number;
  e->number = v;
  return e;
}

struct FuncSig {
  const char* name;
  Expr::Kind kind;
  int arity;
};

constexpr FuncSig kFuncs[] = {
    {"min", Expr::Kind::Min, 2},
    {"max", Expr::Kind::Max, 2},
    {"clamp", Expr::Kind::Clamp, 3},
    {"exp", Expr::Kind::Exp, 1},
};

class Parser {
public:
  explicit Parser(std::string_view src) : src_(src) {}

  ExprPtr run() {
    ExprPtr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) throw SyntaxError(pos_, "end of input");
    return e;
  }

private:
  std::string_view src_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  bool eat(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!eat(c)) throw SyntaxError(pos_, what);
  }

  ExprPtr parse_expr() {
    ExprPtr lhs = parse_term();
    for (;;) {
      if (eat('+')) {
        lhs = make_node(Expr::Kind::Add, {lhs, parse_term()});
      } else if (eat('-')) {
        lhs = make_node(Expr::Kind::Sub, {lhs, parse_term()});
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_factor();
    for (;;) {
      if (eat('*')) {
        lhs = make_node(Expr::Kind::Mul, {lhs, parse_factor()});
      } else if (eat('/')) {
        lhs = make_node(Expr::Kind::Div, {lhs, parse_factor()});
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_factor() {
    char c = peek();
    if (c == '-') {
      ++pos_;
      ExprPtr inner = parse_factor();
      // Fold literal negation so "-2" is one finite literal and printing
      // round-trips exactly.
      if (inner->kind == Expr::Kind::Number) return make_number(-inner->number);
      return make_node(Expr::Kind::Neg, {inner});
    }
    if (c == '(') {
      ++pos_;
      ExprPtr e = parse_expr();
      expect(')', "')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
    throw SyntaxError(pos_, "number, identifier, function call, '(' or '-'");
  }

  ExprPtr parse_number() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    std::string text(src_.substr(start, pos_ - start));
    if (text == ".") throw SyntaxError(start, "decimal literal");
    double v = std::strtod(text.c_str(), nullptr);
    if (!std::isfinite(v)) throw SyntaxError(start, "finite decimal literal");
    return make_number(v);
  }

  ExprPtr parse_ident() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    std::string name(src_.substr(start, pos_ - start));

    if (name == "dist") return parse_dist(start);
    for (const FuncSig& f : kFuncs) {
      if (name == f.name) return parse_call(f);
    }
    // Coordinates cap at the largest supported dimension, x1/x2 and y1/y2.
    if ((name[0] == 'x' || name[0] == 'y') && name.size() == 2 &&
        (name[1] == '1' || name[1] == '2')) {
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::Coord;
      e->axis = name[1] - '1';
      e->of_y = name[0] == 'y';
      return e;
    }
    throw UnknownIdentifier(start, name);
  }

  ExprPtr parse_dist(std::size_t at) {
    expect('(', "'(' after dist");
    bool first_is_x = parse_point_name();
    expect(',', "','");
    bool second_is_x = parse_point_name();
    expect(')', "')'");
    if (first_is_x == second_is_x)
      throw SyntaxError(at, "dist over the two distinct points x and y");
    return make_node(Expr::Kind::Dist, {});
  }

  bool parse_point_name() {
    char c = peek();
    if (c != 'x' && c != 'y') throw SyntaxError(pos_, "'x' or 'y'");
    ++pos_;
    if (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_])))
      throw SyntaxError(pos_ - 1, "bare point name 'x' or 'y'");
    return c == 'x';
  }

  ExprPtr parse_call(const FuncSig& f) {
    expect('(', "'('");
    std::vector<ExprPtr> args;
    args.push_back(parse_expr());
    for (int i = 1; i < f.arity; ++i) {
      expect(',', "','");
      args.push_back(parse_expr());
    }
    expect(')', "')'");
    return make_node(f.kind, std::move(args));
  }
};

// Non-exponent decimal form with enough digits to reparse to the same bits;
// the grammar has no scientific notation, so "%g" output is not always legal.
std::string print_number(double v) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  if (!std::strpbrk(buf, "eE")) return buf;
  for (int prec = 17; prec < 400; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  std::string s(buf);
  while (s.size() > 1 && s.back() == '0' && std::strtod(s.substr(0, s.size() - 1).c_str(), nullptr) == v)
    s.pop_back();
  return s;
}

}  // namespace

double Expr::eval(const Point& x, const Point& y) const {
  switch (kind) {
    case Kind::Number:
      return number;
    case Kind::Coord:
      return of_y ? y[axis] : x[axis];
    case Kind::Dist: {
      double d0 = x[0] - y[0];
      double d1 = x[1] - y[1];
      return std::sqrt(d0 * d0 + d1 * d1);
    }
    case Kind::Add:
      return args[0]->eval(x, y) + args[1]->eval(x, y);
    case Kind::Sub:
      return args[0]->eval(x, y) - args[1]->eval(x, y);
    case Kind::Mul:
      return args[0]->eval(x, y) * args[1]->eval(x, y);
    case Kind::Div: {
      double denom = args[1]->eval(x, y);
      if (denom == 0.0) throw EvalError("division by zero in exponent expression");
      return args[0]->eval(x, y) / denom;
    }
    case Kind::Neg:
      return -args[0]->eval(x, y);
    case Kind::Min: {
      double a = args[0]->eval(x, y), b = args[1]->eval(x, y);
      return a < b ? a : b;
    }
    case Kind::Max: {
      double a = args[0]->eval(x, y), b = args[1]->eval(x, y);
      return a > b ? a : b;
    }
    case Kind::Clamp: {
      double v = args[0]->eval(x, y);
      double lo = args[1]->eval(x, y);
      double hi = args[2]->eval(x, y);
      if (!(lo < hi)) throw EvalError("clamp bounds must satisfy lo < hi");
      return v < lo ? lo : (v > hi ? hi : v);
    }
    case Kind::Exp:
      return std::exp(args[0]->eval(x, y));
  }
  throw EvalError("corrupt expression node");
}

std::string Expr::print() const {
  switch (kind) {
    case Kind::Number:
      return print_number(number);
    case Kind::Coord:
      return (of_y ? "y" : "x") + std::to_string(axis + 1);
    case Kind::Dist:
      return "dist(x, y)";
    case Kind::Add:
      return "(" + args[0]->print() + " + " + args[1]->print() + ")";
    case Kind::Sub:
      return "(" + args[0]->print() + " - " + args[1]->print() + ")";
    case Kind::Mul:
      return "(" + args[0]->print() + " * " + args[1]->print() + ")";
    case Kind::Div:
      return "(" + args[0]->print() + " / " + args[1]->print() + ")";
    case Kind::Neg:
      return "(-" + args[0]->print() + ")";
    case Kind::Min:
      return "min(" + args[0]->print() + ", " + args[1]->print() + ")";
    case Kind::Max:
      return "max(" + args[0]->print() + ", " + args[1]->print() + ")";
    case Kind::Clamp:
      return "clamp(" + args[0]->print() + ", " + args[1]->print() + ", " + args[2]->print() + ")";
    case Kind::Exp:
      return "exp(" + args[0]->print() + ")";
  }
  return "";
}

bool Expr::equals(const Expr& other) const {
  if (kind != other.kind) return false;
  if (kind == Kind::Number)
    return std::memcmp(&number, &other.number, sizeof number) == 0;
  if (kind == Kind::Coord) return axis == other.axis && of_y == other.of_y;
  if (args.size() != other.args.size()) return false;
  for (std::size_t i = 0; i < args.size(); ++i)
    if (!args[i]->equals(*other.args[i])) return false;
  return true;
}

int Expr::max_coord_index() const {
  int m = kind == Kind::Coord ? axis + 1 : 0;
  for (const ExprPtr& a : args) m = std::max(m, a->max_coord_index());
  return m;
}

bool Expr::depends_on_y() const {
  if (kind == Kind::Dist) return true;
  if (kind == Kind::Coord) return of_y;
  for (const ExprPtr& a : args)
    if (a->depends_on_y()) return true;
  return false;
}

ExprPtr parse_exponent(std::string_view src) { return Parser(src).run(); }

ScalarField::ScalarField(ExprPtr expr) : expr_(std::move(expr)) {
  if (expr_->depends_on_y())
    throw ConfigValidationError(
        "scalar exponent field must not reference y coordinates or dist(x, y)");
}

}  // namespace anisofrac
