#include "jetflow/change.hpp"

#include <cmath>

#include "jetflow/errors.hpp"

namespace jetflow {

namespace {

constexpr double kSingularTol = 1e-12;

JetPoint timeOnlyPoint(double t) {
  return JetPoint(t, VectorXd::Zero(1), VectorXd::Zero(1));
}

// Safeguarded Newton for a monotone scalar map.
double newtonScalar(const std::function<std::array<double, 3>(double)>& f, double target) {
  double t = target;  // reasonable for near-affine maps
  // bracket the root first
  auto val = [&](double s) { return f(s)[0] - target; };
  double lo = t, hi = t, flo = val(lo), fhi = flo;
  double step = 1.0;
  for (int it = 0; it < 200 && flo * fhi > 0.0; ++it) {
    lo -= step;
    hi += step;
    step *= 1.6;
    flo = val(lo);
    fhi = val(hi);
    if (flo * fhi <= 0.0) break;
    // keep the side closer to zero
    if (std::abs(flo) < std::abs(fhi)) { hi = lo + 2 * step; fhi = val(hi); }
  }
  if (flo * fhi > 0.0) throw Error("TimeChange::inverse: failed to bracket the preimage");
  if (flo > 0.0) { std::swap(lo, hi); std::swap(flo, fhi); }
  t = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    auto e = f(t);
    double r = e[0] - target;
    if (std::abs(r) < 1e-14 * (1.0 + std::abs(target))) return t;
    if (r < 0.0) lo = t; else hi = t;
    double d = e[1];
    double tn = (std::abs(d) > kSingularTol) ? t - r / d : 0.5 * (lo + hi);
    if (!(tn > std::min(lo, hi) && tn < std::max(lo, hi))) tn = 0.5 * (lo + hi);
    t = tn;
  }
  return t;
}

}  // namespace

double TimeChange::inverse(double ttilde) const {
  if (inverseValue) return inverseValue(ttilde);
  return newtonScalar(forward, ttilde);
}

TimeChange TimeChange::identity() {
  return {[](double t) { return std::array<double, 3>{t, 1.0, 0.0}; },
          [](double tt) { return tt; }};
}

TimeChange TimeChange::fromExpr(const std::string& fwd, const std::string& inv) {
  auto fe = expr::Expr::parse(fwd, 1);
  TimeChange c;
  c.forward = [fe](double t) {
    auto r = fe.eval2(timeOnlyPoint(t), expr::Expr::seedsT());
    return std::array<double, 3>{r.value(), r.grad(0), r.hess(0, 0)};
  };
  if (!inv.empty()) {
    auto ie = expr::Expr::parse(inv, 1);
    c.inverseValue = [ie](double tt) { return ie.value(timeOnlyPoint(tt)); };
  }
  return c;
}

VectorXd SpaceChange::inverse(const VectorXd& xtilde) const {
  if (inverseValue) return inverseValue(xtilde);
  // damped Newton on the forward map
  VectorXd x = xtilde;
  {
    SpaceMapEval e0 = forward(VectorXd::Zero(n));
    Eigen::FullPivLU<MatrixXd> lu(e0.jac);
    if (lu.isInvertible()) x = lu.solve(xtilde - e0.value);
  }
  for (int it = 0; it < 100; ++it) {
    SpaceMapEval e = forward(x);
    VectorXd r = e.value - xtilde;
    if (r.lpNorm<Eigen::Infinity>() < 1e-13 * (1.0 + xtilde.lpNorm<Eigen::Infinity>()))
      return x;
    Eigen::FullPivLU<MatrixXd> lu(e.jac);
    if (!lu.isInvertible()) throw SingularChangeError("SpaceChange::inverse: singular Jacobian");
    VectorXd dx = lu.solve(r);
    double alpha = 1.0;
    for (int k = 0; k < 30; ++k) {
      VectorXd xn = x - alpha * dx;
      if ((forward(xn).value - xtilde).norm() < r.norm()) { x = xn; break; }
      alpha *= 0.5;
      if (k == 29) x = x - alpha * dx;
    }
  }
  return x;
}

SpaceChange SpaceChange::identity(int n) {
  SpaceChange c;
  c.n = n;
  c.forward = [n](const VectorXd& x) {
    SpaceMapEval e;
    e.value = x;
    e.jac = MatrixXd::Identity(n, n);
    e.hess.assign(n, MatrixXd::Zero(n, n));
    return e;
  };
  c.inverseValue = [](const VectorXd& x) { return x; };
  return c;
}

SpaceChange SpaceChange::linear(const MatrixXd& A) {
  const int n = static_cast<int>(A.rows());
  Eigen::FullPivLU<MatrixXd> lu(A);
  if (!lu.isInvertible()) throw SingularChangeError("SpaceChange::linear: singular matrix");
  MatrixXd Ainv = lu.inverse();
  SpaceChange c;
  c.n = n;
  c.forward = [A, n](const VectorXd& x) {
    SpaceMapEval e;
    e.value = A * x;
    e.jac = A;
    e.hess.assign(n, MatrixXd::Zero(n, n));
    return e;
  };
  c.inverseValue = [Ainv](const VectorXd& xt) { return VectorXd(Ainv * xt); };
  return c;
}

SpaceChange SpaceChange::fromExpr(const std::vector<std::string>& fwd,
                                  const std::vector<std::string>& inv, int n) {
  if (static_cast<int>(fwd.size()) != n)
    throw DimensionError("SpaceChange: expected " + std::to_string(n) + " components");
  std::vector<expr::Expr> fe;
  for (const auto& s : fwd) fe.push_back(expr::Expr::parse(s, n));
  SpaceChange c;
  c.n = n;
  c.forward = [fe, n](const VectorXd& x) {
    JetPoint p(0.0, x, VectorXd::Zero(n));
    auto seeds = expr::Expr::seedsX(n);
    SpaceMapEval e;
    e.value.resize(n);
    e.jac.resize(n, n);
    e.hess.assign(n, MatrixXd(n, n));
    for (int i = 0; i < n; ++i) {
      auto r = fe[i].eval2(p, seeds);
      e.value[i] = r.value();
      for (int j = 0; j < n; ++j) {
        e.jac(i, j) = r.grad(j);
        for (int k = 0; k < n; ++k) e.hess[i](j, k) = r.hess(j, k);
      }
    }
    return e;
  };
  if (!inv.empty()) {
    if (static_cast<int>(inv.size()) != n)
      throw DimensionError("SpaceChange: inverse component count mismatch");
    std::vector<expr::Expr> ie;
    for (const auto& s : inv) ie.push_back(expr::Expr::parse(s, n));
    c.inverseValue = [ie, n](const VectorXd& xt) {
      JetPoint p(0.0, xt, VectorXd::Zero(n));
      VectorXd x(n);
      for (int i = 0; i < n; ++i) x[i] = ie[i].value(p);
      return x;
    };
  }
  return c;
}

JetPoint JetChange::prolong(const JetPoint& p) const { return frame(p).image; }

ChangeFrame JetChange::frame(const JetPoint& p) const {
  ChangeFrame f;
  auto te = time.forward(p.t);
  f.dtf = te[1];
  f.d2tf = te[2];
  if (std::abs(f.dtf) < kSingularTol)
    throw SingularChangeError("time change derivative below 1e-12");
  f.dti = 1.0 / f.dtf;
  f.d2ti = -f.d2tf * f.dti * f.dti * f.dti;

  SpaceMapEval se = space.forward(p.x);
  f.J = se.jac;
  f.H = se.hess;
  Eigen::FullPivLU<MatrixXd> lu(f.J);
  if (std::abs(lu.determinant()) < kSingularTol)
    throw SingularChangeError("space change Jacobian determinant below 1e-12");
  f.Jinv = lu.inverse();

  const int n = dim();
  f.Hinv.assign(n, MatrixXd::Zero(n, n));
  // d2x^l/dxt^q dxt^r = -Jinv(l,a) H[a](b,c) Jinv(b,q) Jinv(c,r)
  for (int l = 0; l < n; ++l) {
    MatrixXd acc = MatrixXd::Zero(n, n);
    for (int a = 0; a < n; ++a) acc += f.Jinv(l, a) * (f.Jinv.transpose() * f.H[a] * f.Jinv);
    f.Hinv[l] = -acc;
  }

  f.image = JetPoint(te[0], se.value, (f.J * p.y) * f.dti);
  return f;
}

MatrixXd JetChange::jetJacobian(const JetPoint& p) const {
  const int n = dim();
  ChangeFrame f = frame(p);
  MatrixXd M = MatrixXd::Zero(2 * n + 1, 2 * n + 1);
  M(0, 0) = f.dtf;
  // d ytilde^j / dt = (J y)^j * d(dt/dttilde)/dt
  const double ddti_dt = -f.d2tf * f.dti * f.dti;
  VectorXd Jy = f.J * p.y;
  for (int j = 0; j < n; ++j) M(0, 1 + n + j) = Jy[j] * ddti_dt;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      M(1 + i, 1 + j) = f.J(j, i);
      // d ytilde^j / dx^i = H[j](i,k) y^k * dti
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += f.H[j](i, k) * p.y[k];
      M(1 + i, 1 + n + j) = s * f.dti;
      M(1 + n + i, 1 + n + j) = f.J(j, i) * f.dti;
    }
  }
  return M;
}

JetChange JetChange::inverse() const {
  JetChange inv;
  TimeChange tc = time;
  inv.time.forward = [tc](double ttilde) {
    double t = tc.inverse(ttilde);
    auto e = tc.forward(t);
    double d1 = 1.0 / e[1];
    return std::array<double, 3>{t, d1, -e[2] * d1 * d1 * d1};
  };
  inv.time.inverseValue = [tc](double t) { return tc.forward(t)[0]; };

  SpaceChange sc = space;
  const int n = space.n;
  inv.space.n = n;
  inv.space.forward = [sc, n](const VectorXd& xtilde) {
    VectorXd x = sc.inverse(xtilde);
    SpaceMapEval fe = sc.forward(x);
    SpaceMapEval e;
    e.value = x;
    Eigen::FullPivLU<MatrixXd> lu(fe.jac);
    if (!lu.isInvertible())
      throw SingularChangeError("JetChange::inverse: singular Jacobian");
    e.jac = lu.inverse();
    e.hess.assign(n, MatrixXd::Zero(n, n));
    for (int l = 0; l < n; ++l) {
      MatrixXd acc = MatrixXd::Zero(n, n);
      for (int a = 0; a < n; ++a) acc += e.jac(l, a) * (e.jac.transpose() * fe.hess[a] * e.jac);
      e.hess[l] = -acc;
    }
    return e;
  };
  inv.space.inverseValue = [sc](const VectorXd& x) { return sc.forward(x).value; };
  return inv;
}

JetChange JetChange::compose(const JetChange& c2, const JetChange& c1) {
  JetChange c;
  TimeChange t1 = c1.time, t2 = c2.time;
  c.time.forward = [t1, t2](double t) {
    auto a = t1.forward(t);
    auto b = t2.forward(a[0]);
    return std::array<double, 3>{b[0], b[1] * a[1], b[2] * a[1] * a[1] + b[1] * a[2]};
  };
  if (t1.inverseValue && t2.inverseValue) {
    auto i1 = t1.inverseValue, i2 = t2.inverseValue;
    c.time.inverseValue = [i1, i2](double tt) { return i1(i2(tt)); };
  }

  SpaceChange s1 = c1.space, s2 = c2.space;
  const int n = s1.n;
  c.space.n = n;
  c.space.forward = [s1, s2, n](const VectorXd& x) {
    SpaceMapEval a = s1.forward(x);
    SpaceMapEval b = s2.forward(a.value);
    SpaceMapEval e;
    e.value = b.value;
    e.jac = b.jac * a.jac;
    e.hess.assign(n, MatrixXd::Zero(n, n));
    for (int i = 0; i < n; ++i) {
      MatrixXd acc = a.jac.transpose() * b.hess[i] * a.jac;
      for (int m = 0; m < n; ++m) acc += b.jac(i, m) * a.hess[m];
      e.hess[i] = acc;
    }
    return e;
  };
  if (s1.inverseValue && s2.inverseValue) {
    auto i1 = s1.inverseValue, i2 = s2.inverseValue;
    c.space.inverseValue = [i1, i2](const VectorXd& xt) { return i1(i2(xt)); };
  }
  return c;
}

JetChange JetChange::identity(int n) {
  return {TimeChange::identity(), SpaceChange::identity(n)};
}

void checkInverseConsistency(const JetChange& c, const JetPoint& probe, double tol) {
  JetPoint q = c.prolong(probe);
  double tBack = c.time.inverse(q.t);
  VectorXd xBack = c.space.inverse(q.x);
  if (std::abs(tBack - probe.t) > tol * (1.0 + std::abs(probe.t)))
    throw Error("coordinate change: time inverse is inconsistent with the forward map");
  if ((xBack - probe.x).lpNorm<Eigen::Infinity>() > tol * (1.0 + probe.x.lpNorm<Eigen::Infinity>()))
    throw Error("coordinate change: space inverse is inconsistent with the forward map");
}

}  // namespace jetflow
