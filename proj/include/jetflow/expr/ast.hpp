#pragma once

#include <memory>
#include <string>

namespace jetflow::expr {

enum class NodeKind { Constant, Variable, Binary, Negate, Call };

enum class BinOp { Add, Sub, Mul, Div, Pow };

enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh };

/// Reference to one of the jet coordinates t, x1..xn, y1..yn.
struct Var {
  enum class Kind { T, X, Y };
  Kind kind = Kind::T;
  int index = 0;  // 0-based; unused for T

  bool operator==(const Var&) const = default;
};

/// Flat slot of a variable in an evaluation environment of size 2n+1,
/// ordered (t, x1..xn, y1..yn).
inline int flatId(Var v, int n) {
  switch (v.kind) {
    case Var::Kind::T:
      return 0;
    case Var::Kind::X:
      return 1 + v.index;
    default:
      return 1 + n + v.index;
  }
}

struct AstNode {
  NodeKind kind;
  std::size_t pos = 0;  // byte offset in the source text

  double constant = 0.0;     // Constant
  Var var;                   // Variable
  BinOp op = BinOp::Add;     // Binary
  Func fn = Func::Sin;       // Call
  std::unique_ptr<AstNode> lhs, rhs;  // Binary: both; Negate/Call: lhs only
};

using AstPtr = std::unique_ptr<AstNode>;

/// Parses standard infix syntax with precedence ^ > unary- > *,/ > +,-,
/// left-associative except ^. Variables are t, x1..xn, y1..yn.
/// Throws SyntaxError / DimensionError.
AstPtr parse(const std::string& text, int n);

/// Fully parenthesized rendering; parse(print(ast)) is structurally
/// identical to ast.
std::string print(const AstNode& ast);

bool structurallyEqual(const AstNode& a, const AstNode& b);

}  // namespace jetflow::expr
