#include <cmath>
#include <random>

#include "doctest.h"
#include "jetflow/change.hpp"
#include "jetflow/errors.hpp"
#include "jetflow/laws.hpp"

using namespace jetflow;

namespace {

JetPoint p1(double t, double x, double y) {
  VectorXd xv(1), yv(1);
  xv << x;
  yv << y;
  return JetPoint(t, xv, yv);
}

}  // namespace

TEST_CASE("identity prolongation fixes every point") {
  JetChange c = JetChange::identity(2);
  VectorXd x(2), y(2);
  x << 0.3, -0.8;
  y << 1.5, 2.5;
  JetPoint p(0.7, x, y);
  JetPoint q = c.prolong(p);
  CHECK(q.t == doctest::Approx(p.t));
  CHECK((q.x - p.x).norm() == doctest::Approx(0.0));
  CHECK((q.y - p.y).norm() == doctest::Approx(0.0));
  CHECK((c.jetJacobian(p) - MatrixXd::Identity(5, 5)).norm() == doctest::Approx(0.0));
}

TEST_CASE("time dilation halves the velocity") {
  JetChange c;
  c.time = TimeChange::fromExpr("2*t", "t/2");
  c.space = SpaceChange::identity(1);
  JetPoint q = c.prolong(p1(1.0, 0.0, 4.0));
  CHECK(q.t == doctest::Approx(2.0));
  CHECK(q.x[0] == doctest::Approx(0.0));
  CHECK(q.y[0] == doctest::Approx(2.0));

  MatrixXd M = c.jetJacobian(p1(1.0, 0.0, 4.0));
  CHECK(M(2, 2) == doctest::Approx(0.5));  // d/dy block = (dx~/dx)(dt/dt~)
  CHECK(M(0, 2) == doctest::Approx(0.0));  // dy~/dt vanishes for affine t~
}

TEST_CASE("space scaling triples the velocity") {
  JetChange c;
  c.time = TimeChange::identity();
  c.space = SpaceChange::linear(3.0 * MatrixXd::Identity(1, 1));
  JetPoint q = c.prolong(p1(0.0, 1.0, 4.0));
  CHECK(q.x[0] == doctest::Approx(3.0));
  CHECK(q.y[0] == doctest::Approx(12.0));
}

TEST_CASE("jet jacobian against its inverse change") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    JetChange c = randomJetChange(rng, 2);
    JetPoint p = randomJetPoint(rng, 2);
    MatrixXd M = c.jetJacobian(p);
    MatrixXd Mi = c.inverse().jetJacobian(c.prolong(p));
    CHECK((M * Mi - MatrixXd::Identity(5, 5)).lpNorm<Eigen::Infinity>() < 1e-9);
  }
}

TEST_CASE("triangular block structure of the jet jacobian") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    JetChange c = randomJetChange(rng, 3);
    JetPoint p = randomJetPoint(rng, 3);
    ChangeFrame f = c.frame(p);
    MatrixXd M = c.jetJacobian(p);
    // x rows have no t component; y block is (dx~/dx)(dt/dt~)
    for (int i = 0; i < 3; ++i) {
      CHECK(M(1 + i, 0) == doctest::Approx(0.0));
      CHECK(M(0, 1 + i) == doctest::Approx(0.0));
      for (int j = 0; j < 3; ++j) {
        CHECK(M(1 + 3 + i, 1 + 3 + j) == doctest::Approx(f.J(j, i) * f.dti));
        CHECK(M(1 + 3 + i, 1 + j) == doctest::Approx(0.0));
      }
    }
  }
}

TEST_CASE("prolongation is functorial under composition") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    JetChange c1 = randomJetChange(rng, 2);
    JetChange c2 = randomJetChange(rng, 2);
    JetChange c = JetChange::compose(c2, c1);
    JetPoint p = randomJetPoint(rng, 2);
    JetPoint a = c2.prolong(c1.prolong(p));
    JetPoint b = c.prolong(p);
    CHECK(std::abs(a.t - b.t) < 1e-9);
    CHECK((a.x - b.x).lpNorm<Eigen::Infinity>() < 1e-9);
    CHECK((a.y - b.y).lpNorm<Eigen::Infinity>() < 1e-9);

    MatrixXd prod = c1.jetJacobian(p) * c2.jetJacobian(c1.prolong(p));
    MatrixXd direct = c.jetJacobian(p);
    CHECK((prod - direct).lpNorm<Eigen::Infinity>() <
          1e-8 * (1.0 + direct.lpNorm<Eigen::Infinity>()));
  }
}

TEST_CASE("singular changes are rejected") {
  JetChange c;
  c.time = TimeChange::fromExpr("t^3");  // dt~/dt = 0 at t = 0
  c.space = SpaceChange::identity(1);
  CHECK_THROWS_AS(c.frame(p1(0.0, 0.0, 1.0)), SingularChangeError);

  JetChange d;
  d.time = TimeChange::identity();
  d.space = SpaceChange::fromExpr({"x1^3"}, {}, 1);  // jacobian vanishes at x = 0
  CHECK_THROWS_AS(d.frame(p1(0.0, 0.0, 1.0)), SingularChangeError);
}

TEST_CASE("newton inverse agrees with closed forms") {
  JetChange c;
  c.time = TimeChange::fromExpr("exp(t)");  // no inverse expression given
  c.space = SpaceChange::identity(1);
  CHECK(c.time.inverse(std::exp(0.4)) == doctest::Approx(0.4).epsilon(1e-12));
  checkInverseConsistency(c, p1(0.25, 0.5, 1.0));
}

TEST_CASE("expression-backed space change round trip") {
  JetChange c;
  c.time = TimeChange::identity();
  c.space = SpaceChange::fromExpr({"x1 + x2^3", "x2"}, {"x1 - x2^3", "x2"}, 2);
  VectorXd x(2);
  x << 0.4, -0.9;
  VectorXd xi = c.space.inverse(c.space.forward(x).value);
  CHECK((xi - x).lpNorm<Eigen::Infinity>() < 1e-12);
}
