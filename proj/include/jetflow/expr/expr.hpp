#pragma once

#include <memory>
#include <string>
#include <vector>

#include "jetflow/expr/ast.hpp"
#include "jetflow/expr/eval.hpp"
#include "jetflow/expr/taylor.hpp"
#include "jetflow/jet_point.hpp"

namespace jetflow::expr {

/// Parsed, immutable scalar expression in t, x1..xn, y1..yn. Evaluation is
/// pure; instances may be shared across threads freely.
class Expr {
 public:
  Expr() = default;

  static Expr parse(const std::string& text, int n) {
    Expr e;
    e.ast_ = std::shared_ptr<const AstNode>(expr::parse(text, n).release());
    e.n_ = n;
    return e;
  }

  bool valid() const { return ast_ != nullptr; }
  int dim() const { return n_; }
  const AstNode& ast() const { return *ast_; }
  std::string str() const { return print(*ast_); }

  double value(const JetPoint& p) const {
    std::vector<double> vars = flatten(p);
    return evalAst<double>(*ast_, vars, n_, [](double c) { return c; });
  }

  /// Value + exact gradient/Hessian over the given seed variables.
  Taylor2 eval2(const JetPoint& p, const std::vector<Var>& seeds) const {
    const int m = static_cast<int>(seeds.size());
    std::vector<double> flat = flatten(p);
    std::vector<Taylor2> vars;
    vars.reserve(flat.size());
    for (double v : flat) vars.push_back(Taylor2::constant(v, m));
    for (int s = 0; s < m; ++s) vars[flatId(seeds[s], n_)] = Taylor2::seeded(flat[flatId(seeds[s], n_)], m, s);
    return evalAst<Taylor2>(*ast_, vars, n_,
                            [m](double c) { return Taylor2::constant(c, m); });
  }

  /// eval2 with one extra dual derivative along dualVar: the dual parts of
  /// the result's Hessian are third derivatives d^3 / d seed_i d seed_j d dualVar.
  Taylor2T<Dual> eval2Dual(const JetPoint& p, const std::vector<Var>& seeds,
                           Var dualVar) const {
    using TD = Taylor2T<Dual>;
    const int m = static_cast<int>(seeds.size());
    std::vector<double> flat = flatten(p);
    std::vector<TD> vars;
    vars.reserve(flat.size());
    const int dualSlot = flatId(dualVar, n_);
    for (int i = 0; i < static_cast<int>(flat.size()); ++i)
      vars.push_back(TD::constant(Dual{flat[i], i == dualSlot ? 1.0 : 0.0}, m));
    for (int s = 0; s < m; ++s) {
      const int id = flatId(seeds[s], n_);
      vars[id] = TD::seeded(Dual{flat[id], id == dualSlot ? 1.0 : 0.0}, m, s);
    }
    return evalAst<TD>(*ast_, vars, n_, [m](double c) { return TD::constant(Dual{c, 0.0}, m); });
  }

  /// Seed sets for common derivative requests.
  static std::vector<Var> seedsT() { return {Var{Var::Kind::T, 0}}; }
  static std::vector<Var> seedsX(int n) {
    std::vector<Var> s;
    for (int i = 0; i < n; ++i) s.push_back({Var::Kind::X, i});
    return s;
  }
  static std::vector<Var> seedsY(int n) {
    std::vector<Var> s;
    for (int i = 0; i < n; ++i) s.push_back({Var::Kind::Y, i});
    return s;
  }
  static std::vector<Var> seedsAll(int n) {
    std::vector<Var> s = {Var{Var::Kind::T, 0}};
    for (int i = 0; i < n; ++i) s.push_back({Var::Kind::X, i});
    for (int i = 0; i < n; ++i) s.push_back({Var::Kind::Y, i});
    return s;
  }

 private:
  std::vector<double> flatten(const JetPoint& p) const {
    std::vector<double> vars(2 * n_ + 1, 0.0);
    vars[0] = p.t;
    for (int i = 0; i < n_ && i < p.x.size(); ++i) vars[1 + i] = p.x[i];
    for (int i = 0; i < n_ && i < p.y.size(); ++i) vars[1 + n_ + i] = p.y[i];
    return vars;
  }

  std::shared_ptr<const AstNode> ast_;
  int n_ = 0;
};

}  // namespace jetflow::expr
