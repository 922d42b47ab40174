#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "jetflow/errors.hpp"
#include "jetflow/expr/expr.hpp"

using jetflow::DimensionError;
using jetflow::DomainError;
using jetflow::JetPoint;
using jetflow::SyntaxError;
using jetflow::VectorXd;
using jetflow::expr::Expr;
using jetflow::expr::Var;

namespace {

JetPoint pointOf(int n, double t, std::initializer_list<double> x,
                 std::initializer_list<double> y) {
  VectorXd xv(n), yv(n);
  int i = 0;
  for (double v : x) xv[i++] = v;
  i = 0;
  for (double v : y) yv[i++] = v;
  return JetPoint(t, xv, yv);
}

// central differences on the flattened variable vector (t, x1.., y1..)
double fdGrad(const Expr& e, const JetPoint& p, Var v, double step = 1e-5) {
  auto shift = [&](double s) {
    JetPoint q = p;
    if (v.kind == Var::Kind::T)
      q.t += s;
    else if (v.kind == Var::Kind::X)
      q.x[v.index] += s;
    else
      q.y[v.index] += s;
    return e.value(q);
  };
  return (shift(step) - shift(-step)) / (2.0 * step);
}

double fdHess(const Expr& e, const JetPoint& p, Var a, Var b, double step = 1e-4) {
  auto shift = [&](const JetPoint& base, Var v, double s) {
    JetPoint q = base;
    if (v.kind == Var::Kind::T)
      q.t += s;
    else if (v.kind == Var::Kind::X)
      q.x[v.index] += s;
    else
      q.y[v.index] += s;
    return q;
  };
  double pp = e.value(shift(shift(p, a, step), b, step));
  double pm = e.value(shift(shift(p, a, step), b, -step));
  double mp = e.value(shift(shift(p, a, -step), b, step));
  double mm = e.value(shift(shift(p, a, -step), b, -step));
  return (pp - pm - mp + mm) / (4.0 * step * step);
}

}  // namespace

TEST_CASE("square in one velocity variable") {
  Expr e = Expr::parse("y1^2", 1);
  JetPoint p = pointOf(1, 0.0, {0.0}, {3.0});
  auto t2 = e.eval2(p, Expr::seedsY(1));
  CHECK(t2.value() == doctest::Approx(9.0).epsilon(1e-14));
  CHECK(t2.grad(0) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(t2.hess(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("identity in t") {
  Expr e = Expr::parse("t", 1);
  JetPoint p = pointOf(1, 1.7, {0.0}, {0.0});
  auto t2 = e.eval2(p, Expr::seedsT());
  CHECK(t2.value() == doctest::Approx(1.7));
  CHECK(t2.grad(0) == doctest::Approx(1.0));
  CHECK(t2.hess(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("exponential in t") {
  Expr e = Expr::parse("exp(2*t)", 1);
  JetPoint p = pointOf(1, 0.5, {0.0}, {0.0});
  auto t2 = e.eval2(p, Expr::seedsT());
  const double ee = std::exp(1.0);
  CHECK(t2.value() == doctest::Approx(ee).epsilon(1e-12));
  CHECK(t2.grad(0) == doctest::Approx(2.0 * ee).epsilon(1e-12));
  CHECK(t2.hess(0, 0) == doctest::Approx(4.0 * ee).epsilon(1e-12));
  CHECK(fdGrad(e, p, Var{Var::Kind::T, 0}) ==
        doctest::Approx(t2.grad(0)).epsilon(1e-6));
}

TEST_CASE("syntax and dimension errors") {
  CHECK_THROWS_AS(Expr::parse("y3", 2), DimensionError);
  CHECK_THROWS_AS(Expr::parse("1 + * 2", 1), SyntaxError);
  CHECK_THROWS_AS(Expr::parse("2x1", 1), SyntaxError);  // no implicit product
  CHECK_THROWS_AS(Expr::parse("sin(x1", 1), SyntaxError);
  CHECK_NOTHROW(Expr::parse("sin(x1)*y1", 1));
}

TEST_CASE("domain errors carry a position") {
  Expr e = Expr::parse("log(x1)", 1);
  JetPoint p = pointOf(1, 0.0, {-1.0}, {0.0});
  CHECK_THROWS_AS(e.value(p), DomainError);
  Expr d = Expr::parse("1/x1", 1);
  CHECK_THROWS_AS(d.value(pointOf(1, 0.0, {0.0}, {0.0})), DomainError);
  Expr f = Expr::parse("x1^(1/2)", 1);
  CHECK_THROWS_AS(f.value(p), DomainError);
}

TEST_CASE("integer powers are exact, including negative base") {
  Expr e = Expr::parse("x1^3", 1);
  JetPoint p = pointOf(1, 0.0, {-2.0}, {0.0});
  CHECK(e.value(p) == doctest::Approx(-8.0).epsilon(1e-15));
  auto t2 = e.eval2(p, Expr::seedsX(1));
  CHECK(t2.grad(0) == doctest::Approx(12.0).epsilon(1e-13));
  CHECK(t2.hess(0, 0) == doctest::Approx(-12.0).epsilon(1e-13));
}

TEST_CASE("power is right-associative and binds above unary minus") {
  Expr a = Expr::parse("2^3^2", 1);
  JetPoint p = pointOf(1, 0.0, {0.0}, {0.0});
  CHECK(a.value(p) == doctest::Approx(512.0));
  Expr b = Expr::parse("-2^2", 1);
  CHECK(b.value(p) == doctest::Approx(-4.0));
}

TEST_CASE("print then parse is structurally identical") {
  const std::vector<std::string> texts = {
      "y1^2 + y2^2", "sin(x1)*cos(x2) - t/2", "sqrt(1 + x1^2)",
      "exp(-t)*sinh(y2) + log(2 + cosh(x2))", "-(x1 - y1)^3"};
  for (const auto& s : texts) {
    Expr e = Expr::parse(s, 2);
    Expr r = Expr::parse(e.str(), 2);
    CHECK(jetflow::expr::structurallyEqual(e.ast(), r.ast()));
  }
}

TEST_CASE("randomized finite-difference oracle over 200 draws") {
  std::mt19937_64 rng(20260824);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const int n = 2;
  const std::vector<std::string> pool = {
      "sin(x1)*y1 + cos(t)*y2",
      "exp(x2/3)*y1^2 + t*y2^2",
      "(x1 + 2)*(y1 - y2) + sqrt(4 + x2^2)",
      "log(3 + x1^2 + y1^2) + sinh(x2/2)",
      "y1^3/6 + cosh(t/2)*x2",
      "tan(x1/4) + y1*y2*t",
  };
  std::vector<Var> seeds = Expr::seedsAll(n);
  for (int trial = 0; trial < 200; ++trial) {
    const auto& text = pool[trial % pool.size()];
    Expr e = Expr::parse(text, n);
    JetPoint p = pointOf(n, uni(rng), {uni(rng), uni(rng)}, {uni(rng), uni(rng)});
    auto t2 = e.eval2(p, seeds);
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      double fd = fdGrad(e, p, seeds[i]);
      CHECK(std::abs(t2.grad(static_cast<int>(i)) - fd) <=
            1e-6 * (1.0 + std::abs(t2.grad(static_cast<int>(i)))));
    }
    for (std::size_t i = 0; i < seeds.size(); ++i)
      for (std::size_t j = i; j < seeds.size(); ++j) {
        double fd = fdHess(e, p, seeds[i], seeds[j]);
        double got = t2.hess(static_cast<int>(i), static_cast<int>(j));
        CHECK(std::abs(got - fd) <= 1e-4 * (1.0 + std::abs(got)));
      }
  }
}

TEST_CASE("hessian is symmetric exactly") {
  Expr e = Expr::parse("sin(x1*y2) + exp(t*y1) - x2^2*y2", 2);
  JetPoint p = pointOf(2, 0.3, {0.7, -0.4}, {1.1, -0.6});
  auto t2 = e.eval2(p, Expr::seedsAll(2));
  for (int i = 0; i < t2.seeds(); ++i)
    for (int j = 0; j < t2.seeds(); ++j)
      CHECK(t2.hess(i, j) == t2.hess(j, i));  // bitwise, packed storage
}

TEST_CASE("nested dual pass yields third derivatives") {
  Expr e = Expr::parse("y1^3", 1);
  JetPoint p = pointOf(1, 0.0, {0.0}, {0.8});
  auto td = e.eval2Dual(p, Expr::seedsY(1), Var{Var::Kind::Y, 0});
  CHECK(td.value().v == doctest::Approx(0.512).epsilon(1e-14));
  CHECK(td.hess(0, 0).v == doctest::Approx(6.0 * 0.8).epsilon(1e-13));
  CHECK(td.hess(0, 0).d == doctest::Approx(6.0).epsilon(1e-13));
}
