#pragma once

#include <cmath>
#include <vector>

#include "jetflow/errors.hpp"
#include "jetflow/expr/ast.hpp"
#include "jetflow/expr/taylor.hpp"

namespace jetflow::expr {

namespace detail {

inline bool isIntegerConstant(const AstNode& node, long long& out) {
  if (node.kind != NodeKind::Constant) return false;
  double c = node.constant;
  if (!std::isfinite(c) || c != std::floor(c) || std::abs(c) > 1e15) return false;
  out = static_cast<long long>(c);
  return true;
}

}  // namespace detail

/// Evaluates an AST over any AD scalar type S. `vars` is indexed by
/// flatId(var, n) and must contain 2n+1 entries with a consistent seed
/// shape; `mkc(c)` builds a constant scalar of that shape. Throws
/// DomainError with the offending node position.
template <class S, class ConstFn>
S evalAst(const AstNode& node, const std::vector<S>& vars, int n, const ConstFn& mkc) {
  using std::exp; using std::log;
  switch (node.kind) {
    case NodeKind::Constant:
      return mkc(node.constant);
    case NodeKind::Variable:
      return vars[flatId(node.var, n)];
    case NodeKind::Negate:
      return -evalAst(*node.lhs, vars, n, mkc);
    case NodeKind::Call: {
      using std::cos; using std::cosh; using std::exp; using std::log;
      using std::sin; using std::sinh; using std::sqrt; using std::tan;
      S u = evalAst(*node.lhs, vars, n, mkc);
      double uv = primal(u);
      switch (node.fn) {
        case Func::Sin: return sin(u);
        case Func::Cos: return cos(u);
        case Func::Tan:
          if (std::abs(std::cos(uv)) < 1e-300) throw DomainError("tan at a pole", node.pos);
          return tan(u);
        case Func::Exp: return exp(u);
        case Func::Log:
          if (!(uv > 0.0)) throw DomainError("log of non-positive argument", node.pos);
          return log(u);
        case Func::Sqrt:
          if (!(uv > 0.0)) throw DomainError("sqrt of non-positive argument", node.pos);
          return sqrt(u);
        case Func::Sinh: return sinh(u);
        default: return cosh(u);
      }
    }
    case NodeKind::Binary: {
      S a = evalAst(*node.lhs, vars, n, mkc);
      switch (node.op) {
        case BinOp::Add: return a + evalAst(*node.rhs, vars, n, mkc);
        case BinOp::Sub: return a - evalAst(*node.rhs, vars, n, mkc);
        case BinOp::Mul: return a * evalAst(*node.rhs, vars, n, mkc);
        case BinOp::Div: {
          S b = evalAst(*node.rhs, vars, n, mkc);
          if (primal(b) == 0.0) throw DomainError("division by zero", node.pos);
          return a / b;
        }
        case BinOp::Pow: {
          long long e = 0;
          if (detail::isIntegerConstant(*node.rhs, e)) {
            if (e == 0) return mkc(1.0);
            bool neg = e < 0;
            if (neg) {
              if (primal(a) == 0.0)
                throw DomainError("zero raised to a negative power", node.pos);
              e = -e;
            }
            // integer powers by repeated multiplication, exact
            S result = mkc(1.0);
            S cur = a;
            while (e > 0) {
              if (e & 1) result = result * cur;
              cur = cur * cur;
              e >>= 1;
            }
            if (neg) return mkc(1.0) / result;
            return result;
          }
          if (!(primal(a) > 0.0))
            throw DomainError("non-integer power of a non-positive base", node.pos);
          S b = evalAst(*node.rhs, vars, n, mkc);
          return exp(b * log(a));
        }
      }
      break;
    }
  }
  throw Error("evalAst: malformed AST node");
}

}  // namespace jetflow::expr
