#include <cmath>
#include <random>

#include "doctest.h"
#include "jetflow/dynamics.hpp"
#include "jetflow/errors.hpp"
#include "jetflow/laws.hpp"

using namespace jetflow;

namespace {

SpatialMetric sphereMetric() {
  return SpatialMetric::fromExpr({{"1", "0"}, {"0", "sin(x1)^2"}});
}

VectorXd vec2(double a, double b) {
  VectorXd v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("harmonic rhs closed forms") {
  RelativisticSemispray flat =
      canonicalSemispray(TemporalMetric::constant(1.0), SpatialMetric::euclidean(2));
  SodeRhs rhs = harmonicRhs(flat);
  CHECK(rhs(0.3, vec2(1, 2), vec2(3, 4)).lpNorm<Eigen::Infinity>() == doctest::Approx(0.0));

  RelativisticSemispray exph = canonicalSemispray(TemporalMetric::fromExpr("exp(2*t)"),
                                                  SpatialMetric::euclidean(1));
  VectorXd x(1), v(1);
  x << 0.0;
  v << 4.0;
  CHECK(harmonicRhs(exph)(0.0, x, v)[0] == doctest::Approx(4.0).epsilon(1e-12));

  RelativisticSemispray sphere =
      canonicalSemispray(TemporalMetric::constant(1.0), sphereMetric());
  VectorXd a = harmonicRhs(sphere)(0.0, vec2(M_PI / 2.0, 0.0), vec2(0.0, 1.0));
  CHECK(a.lpNorm<Eigen::Infinity>() < 1e-12);  // equator is a geodesic
}

TEST_CASE("autoparallel rhs arithmetic") {
  NonlinearConnection g;
  g.n = 1;
  g.M = [](const JetPoint&) { return VectorXd::Constant(1, 5.0); };
  g.N = [](const JetPoint&) { return MatrixXd::Constant(1, 1, 2.0); };
  VectorXd x = VectorXd::Zero(1), v = VectorXd::Ones(1);
  CHECK(autoparallelRhs(g)(0.0, x, v)[0] == doctest::Approx(-7.0));
}

TEST_CASE("harmonic and autoparallel dynamics coincide for the canonical pair") {
  TemporalMetric h = TemporalMetric::fromExpr("1 + t^2/4");
  SpatialMetric phi = SpatialMetric::fromExpr(
      {{"2 + sin(x2)", "x1*x2/4"}, {"x1*x2/4", "3 + x1^2"}});
  SodeRhs a = harmonicRhs(canonicalSemispray(h, phi));
  SodeRhs b = autoparallelRhs(canonicalConnection(h, phi));
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 1000; ++trial) {
    JetPoint p = randomJetPoint(rng, 2);
    VectorXd da = a(p.t, p.x, p.y), db = b(p.t, p.x, p.y);
    CHECK((da - db).lpNorm<Eigen::Infinity>() <
          1e-12 * (1.0 + da.lpNorm<Eigen::Infinity>()));
  }
}

TEST_CASE("straight line integration is exact to 1e-10") {
  SodeProblem prob;
  prob.rhs = [](double, const VectorXd&, const VectorXd&) { return VectorXd::Zero(1); };
  prob.t0 = 0.0;
  prob.x0 = VectorXd::Zero(1);
  prob.v0 = VectorXd::Ones(1);
  prob.tEnd = 1.0;
  prob.stepper = Stepper::RK4;
  prob.dt = 1e-3;
  Trajectory traj = integrate(prob);
  CHECK(traj.t.front() == 0.0);
  CHECK(traj.t.back() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(traj.x.back()[0] - 1.0) < 1e-10);
}

TEST_CASE("exponential time metric has the closed form x = e^t - 1") {
  RelativisticSemispray s = canonicalSemispray(TemporalMetric::fromExpr("exp(2*t)"),
                                               SpatialMetric::euclidean(1));
  SodeProblem prob;
  prob.rhs = harmonicRhs(s);
  prob.t0 = 0.0;
  prob.x0 = VectorXd::Zero(1);
  prob.v0 = VectorXd::Ones(1);
  prob.tEnd = 1.0;
  prob.dt = 1e-3;
  Trajectory traj = integrate(prob);
  CHECK(std::abs(traj.x.back()[0] - (std::exp(1.0) - 1.0)) < 1e-8);

  // reparametrized by s(t) = e^t the solution is a straight line
  for (std::size_t i = 0; i < traj.size(); i += 100) {
    double sOf = std::exp(traj.t[i]);
    CHECK(std::abs(traj.x[i][0] - (sOf - 1.0)) < 1e-6);
  }
}

TEST_CASE("equator great circle stays on the equator") {
  RelativisticSemispray s =
      canonicalSemispray(TemporalMetric::constant(1.0), sphereMetric());
  SodeProblem prob;
  prob.rhs = harmonicRhs(s);
  prob.t0 = 0.0;
  prob.x0 = vec2(M_PI / 2.0, 0.0);
  prob.v0 = vec2(0.0, 1.0);
  prob.tEnd = M_PI / 2.0;
  prob.dt = 1e-3;
  Trajectory traj = integrate(prob);
  for (std::size_t i = 0; i < traj.size(); ++i)
    CHECK(std::abs(traj.x[i][0] - M_PI / 2.0) < 1e-6);
  CHECK(std::abs(traj.x.back()[1] - M_PI / 2.0) < 1e-6);
}

TEST_CASE("rk45 matches rk4 on a nonlinear geodesic") {
  RelativisticSemispray s =
      canonicalSemispray(TemporalMetric::constant(1.0), sphereMetric());
  SodeProblem prob;
  prob.rhs = harmonicRhs(s);
  prob.t0 = 0.0;
  prob.x0 = vec2(1.0, 0.2);
  prob.v0 = vec2(0.3, 0.8);
  prob.tEnd = 1.0;
  prob.dt = 1e-3;
  Trajectory a = integrate(prob);
  prob.stepper = Stepper::RK45;
  prob.absTol = 1e-12;
  prob.relTol = 1e-12;
  Trajectory b = integrate(prob);
  CHECK((a.x.back() - b.x.back()).lpNorm<Eigen::Infinity>() < 1e-8);
  CHECK(b.stepsRejected < b.stepsAccepted);
}

TEST_CASE("reverse-time integration retraces the forward solution") {
  RelativisticSemispray s =
      canonicalSemispray(TemporalMetric::fromExpr("1 + t^2/4"), sphereMetric());
  SodeProblem fwd;
  fwd.rhs = harmonicRhs(s);
  fwd.t0 = 0.0;
  fwd.x0 = vec2(1.1, 0.4);
  fwd.v0 = vec2(0.2, 0.6);
  fwd.tEnd = 0.8;
  fwd.dt = 1e-3;
  Trajectory traj = integrate(fwd);
  SodeProblem back = fwd;
  back.t0 = 0.8;
  back.tEnd = 0.0;
  back.x0 = traj.x.back();
  back.v0 = traj.v.back();
  Trajectory rtraj = integrate(back);
  CHECK((rtraj.x.back() - fwd.x0).lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("energy first integral is conserved along geodesics") {
  SpatialMetric phi = sphereMetric();
  RelativisticSemispray s = canonicalSemispray(TemporalMetric::constant(1.0), phi);
  SodeProblem prob;
  prob.rhs = harmonicRhs(s);
  prob.t0 = 0.0;
  prob.x0 = vec2(1.0, 0.3);
  prob.v0 = vec2(0.4, 0.7);
  prob.tEnd = 1.0;
  prob.dt = 1e-3;
  Trajectory traj = integrate(prob);
  auto energy = [&](std::size_t i) {
    return traj.v[i].dot(phi.phi(traj.x[i]) * traj.v[i]);
  };
  double e0 = energy(0);
  for (std::size_t i = 0; i < traj.size(); i += 25)
    CHECK(std::abs(energy(i) - e0) <= 1e-8 * (1.0 + std::abs(e0)));
}

TEST_CASE("integrator failure modes") {
  SodeProblem prob;
  prob.rhs = [](double, const VectorXd& x, const VectorXd&) {
    return VectorXd(x.array().square().matrix() * 1e8);
  };
  prob.t0 = 0.0;
  prob.x0 = VectorXd::Ones(1);
  prob.v0 = VectorXd::Ones(1);
  prob.tEnd = 2.0;
  prob.stepper = Stepper::RK45;
  prob.absTol = 1e-10;
  prob.relTol = 1e-10;
  CHECK_THROWS_AS(integrate(prob), Error);  // blows up: step underflow or non-finite

  SodeProblem bad = prob;
  bad.absTol = 1e-20;  // outside the allowed tolerance window
  CHECK_THROWS_AS(integrate(bad), Error);
}

TEST_CASE("poisson force identities") {
  TemporalMetric h = TemporalMetric::constant(1.0);
  SpatialMetric phi = SpatialMetric::euclidean(2);
  RelativisticSemispray canon = canonicalSemispray(h, phi);
  std::mt19937_64 rng(62);
  JetPoint p = randomJetPoint(rng, 2);
  CHECK(poissonForce(canon, h, phi, p).lpNorm<Eigen::Infinity>() < 1e-14);

  RelativisticSemispray s = canon;
  auto G0 = s.spatial.G;
  VectorXd F0 = vec2(1.0, 0.0);
  s.spatial.G = [G0, F0](const JetPoint& q) -> VectorXd { return G0(q) - F0; };
  VectorXd F = poissonForce(s, h, phi, p);
  CHECK(F[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(F[1] == doctest::Approx(0.0));

  // identity: h^11 [xdd - H111 xd + gamma(xd, xd)] with xdd from the
  // harmonic equation of s equals F
  TemporalMetric h4 = TemporalMetric::fromExpr("1 + t^2/4");
  SpatialMetric wavy = SpatialMetric::fromExpr(
      {{"2 + sin(x2)", "x1*x2/4"}, {"x1*x2/4", "3 + x1^2"}});
  RelativisticSemispray pert = canonicalSemispray(h4, wavy);
  auto G1 = pert.spatial.G;
  pert.spatial.G = [G1](const JetPoint& q) -> VectorXd {
    VectorXd g = G1(q);
    g[0] -= 0.3 * std::sin(q.x[1]);
    return g;
  };
  JetPoint q = randomJetPoint(rng, 2);
  VectorXd xdd = harmonicRhs(pert)(q.t, q.x, q.y);
  Tensor3 gamma = wavy.christoffel(q.x);
  VectorXd lhs(2);
  for (int i = 0; i < 2; ++i)
    lhs[i] = (xdd[i] - h4.christoffel(q.t) * q.y[i] + q.y.dot(gamma[i] * q.y)) /
             h4.h11(q.t);
  VectorXd rhs = poissonForce(pert, h4, wavy, q);
  CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() < 1e-9 * (1.0 + rhs.lpNorm<Eigen::Infinity>()));
}

TEST_CASE("action functional closed forms") {
  TemporalMetric one = TemporalMetric::constant(1.0);
  Trajectory traj;
  for (int i = 0; i <= 200; ++i) {
    double t = 2.0 * i / 200.0;
    traj.t.push_back(t);
    traj.x.push_back(VectorXd::Constant(1, t));
    traj.v.push_back(VectorXd::Ones(1));
  }
  auto constL = [](const JetPoint&) { return 1.0; };
  CHECK(actionFunctional(constL, one, traj) == doctest::Approx(2.0).epsilon(1e-12));

  auto speedL = [](const JetPoint& p) { return p.y[0] * p.y[0]; };
  Trajectory unit;
  for (int i = 0; i <= 100; ++i) {
    double t = i / 100.0;
    unit.t.push_back(t);
    unit.x.push_back(VectorXd::Constant(1, t));
    unit.v.push_back(VectorXd::Ones(1));
  }
  CHECK(actionFunctional(speedL, one, unit) == doctest::Approx(1.0).epsilon(1e-12));

  Trajectory tiny;
  tiny.t = {0.0};
  tiny.x = {VectorXd::Zero(1)};
  tiny.v = {VectorXd::Zero(1)};
  CHECK_THROWS_AS(actionFunctional(constL, one, tiny), QuadratureError);
}

TEST_CASE("action functional is reparametrization invariant") {
  // straight line x(t) = t on [0, 1]; tilde chart ttilde = t^3 + t
  TemporalMetric h = TemporalMetric::constant(1.0);
  TimeChange c = TimeChange::fromExpr("t^3 + t");
  TemporalMetric ht = h.transformed(c);
  auto L = [](const JetPoint& p) { return p.y[0] * p.y[0] + 1.0; };

  Trajectory orig;
  const int m = 400;
  for (int i = 0; i <= m; ++i) {
    double t = static_cast<double>(i) / m;
    orig.t.push_back(t);
    orig.x.push_back(VectorXd::Constant(1, t));
    orig.v.push_back(VectorXd::Ones(1));
  }
  double e2 = actionFunctional(L, h, orig);

  Trajectory tilde;
  for (int i = 0; i <= m; ++i) {
    double t = static_cast<double>(i) / m;
    double tt = t * t * t + t;
    double dt = 3.0 * t * t + 1.0;
    tilde.t.push_back(tt);
    tilde.x.push_back(VectorXd::Constant(1, t));
    tilde.v.push_back(VectorXd::Constant(1, 1.0 / dt));  // dx/dttilde
  }
  // L is a scalar: in the tilde chart it is evaluated at the pulled-back
  // point (here t = x along the curve, y = ytilde dttilde/dt)
  auto Lt = [L](const JetPoint& q) {
    double dt = 3.0 * q.x[0] * q.x[0] + 1.0;
    return L(JetPoint(q.x[0], q.x, VectorXd::Constant(1, q.y[0] * dt)));
  };
  double e2t = actionFunctional(Lt, ht, tilde);
  CHECK(std::abs(e2 - e2t) < 1e-6 * (1.0 + std::abs(e2)));
}

TEST_CASE("sode invariance of harmonic curves under a jet change") {
  TemporalMetric h = TemporalMetric::fromExpr("1 + t^2/4");
  SpatialMetric phi = SpatialMetric::fromExpr(
      {{"2 + sin(x2)", "x1*x2/4"}, {"x1*x2/4", "3 + x1^2"}});
  RelativisticSemispray s = canonicalSemispray(h, phi);
  SodeProblem prob;
  prob.rhs = harmonicRhs(s);
  prob.t0 = 0.0;
  prob.x0 = vec2(0.4, -0.2);
  prob.v0 = vec2(0.5, 0.3);
  prob.tEnd = 0.5;
  prob.dt = 1e-3;
  Trajectory traj = integrate(prob);

  std::mt19937_64 rng(63);
  JetChange c = randomJetChange(rng, 2);
  RelativisticSemispray st =
      canonicalSemispray(h.transformed(c.time), phi.transformed(c.space));
  SodeRhs rhsT = harmonicRhs(st);

  // image curve: xtilde(ttilde(t)); second derivative by central difference
  // on the transformed samples, residual against the tilde equation
  auto imageAt = [&](std::size_t i) {
    return c.prolong(JetPoint(traj.t[i], traj.x[i], traj.v[i]));
  };
  for (std::size_t i = 50; i + 50 < traj.size(); i += 37) {
    JetPoint a = imageAt(i - 1), b = imageAt(i), d = imageAt(i + 1);
    double dt1 = b.t - a.t, dt2 = d.t - b.t;
    // nonuniform central second difference
    VectorXd xdd = 2.0 *
                   ((d.x - b.x) / dt2 - (b.x - a.x) / dt1) / (dt1 + dt2);
    VectorXd want = rhsT(b.t, b.x, b.y);
    CHECK((xdd - want).lpNorm<Eigen::Infinity>() <
          1e-4 * (1.0 + want.lpNorm<Eigen::Infinity>()));
  }
}
