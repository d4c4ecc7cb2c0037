// Arithmetic expressions for exponent fields over point pairs (x, y).
//
// Grammar (whitespace insignificant, decimal literals only):
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := number | ident | func '(' args ')' | '(' expr ')' | '-' factor
//   ident  := x1..xN | y1..yN
//   func   := dist | min | max | clamp | exp      (dist takes the pair: dist(x,y))
#pragma once

#include <array>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace anisofrac {

// Points carry up to two coordinates; the unused coordinate stays 0 in 1-D.
using Point = std::array<double, 2>;

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

class Expr {
public:
  enum class Kind { Number, Coord, Dist, Add, Sub, Mul, Div, Neg, Min, Max, Clamp, Exp };

  Kind kind;
  double number = 0.0;              // Kind::Number
  int axis = 0;                     // Kind::Coord: 0-based coordinate index
  bool of_y = false;                // Kind::Coord: refers to y instead of x
  std::vector<ExprPtr> args;

  // Evaluates at a point pair. Hard errors (division by zero, clamp bounds out
  // of order, non-finite result) throw EvalError.
  double eval(const Point& x, const Point& y) const;

  // Canonical text form; parse(print()) reproduces the tree exactly.
  std::string print() const;

  // Structural equality; number literals compare bitwise.
  bool equals(const Expr& other) const;

  // Largest 1-based coordinate index referenced (0 if none).
  int max_coord_index() const;
  // True if any y-coordinate or dist() appears (pair expressions only).
  bool depends_on_y() const;
};

// Parses the grammar above. Throws SyntaxError / UnknownIdentifier with
// 0-based character offsets into src.
ExprPtr parse_exponent(std::string_view src);

// Symmetrized pair exponent: value(x,y) = (e(x,y) + e(y,x)) / 2. The two
// evaluations are added in a fixed order, so value(x,y) == value(y,x) bitwise.
class PairExponent {
public:
  PairExponent() = default;
  explicit PairExponent(ExprPtr expr) : expr_(std::move(expr)) {}

  double operator()(const Point& x, const Point& y) const {
    return 0.5 * (expr_->eval(x, y) + expr_->eval(y, x));
  }

  const ExprPtr& expr() const { return expr_; }

private:
  ExprPtr expr_;
};

// Scalar field on the domain (q, r): must not reference y or dist.
class ScalarField {
public:
  ScalarField() = default;
  explicit ScalarField(ExprPtr expr);

  double operator()(const Point& x) const { return expr_->eval(x, x); }

  const ExprPtr& expr() const { return expr_; }

private:
  ExprPtr expr_;
};

}  // namespace anisofrac
