#include "jetflow/lagrangian.hpp"

#include <cmath>

#include "jetflow/errors.hpp"

namespace jetflow {

using expr::Expr;
using expr::Var;

JetLagrangian JetLagrangian::fromExpr(const std::string& text, int n) {
  JetLagrangian l;
  l.expr_ = Expr::parse(text, n);
  l.n_ = n;
  return l;
}

JetLagrangian::Derivs JetLagrangian::derivs(const JetPoint& p) const {
  const int n = n_;
  expr::Taylor2 t2 = expr_.eval2(p, Expr::seedsAll(n));
  Derivs d;
  d.L = t2.value();
  d.Lt = t2.grad(0);
  d.Lx.resize(n);
  d.Ly.resize(n);
  d.Lty.resize(n);
  d.Lyy.resize(n, n);
  d.Lxy.resize(n, n);
  for (int i = 0; i < n; ++i) {
    d.Lx[i] = t2.grad(1 + i);
    d.Ly[i] = t2.grad(1 + n + i);
    d.Lty[i] = t2.hess(0, 1 + n + i);
    for (int j = 0; j < n; ++j) {
      d.Lyy(i, j) = t2.hess(1 + n + i, 1 + n + j);
      d.Lxy(i, j) = t2.hess(1 + n + i, 1 + j);
    }
  }
  return d;
}

JetLagrangian::ThirdDerivs JetLagrangian::thirdDerivs(const JetPoint& p, int m) const {
  const int n = n_;
  auto t2 = expr_.eval2Dual(p, Expr::seedsAll(n), Var{Var::Kind::Y, m});
  ThirdDerivs d;
  d.Lyyy.resize(n, n);
  d.Lxyy.resize(n, n);
  d.Ltyy.resize(n);
  for (int k = 0; k < n; ++k) {
    d.Ltyy[k] = t2.hess(0, 1 + n + k).d;
    for (int j = 0; j < n; ++j) {
      d.Lyyy(k, j) = t2.hess(1 + n + k, 1 + n + j).d;
      d.Lxyy(k, j) = t2.hess(1 + n + k, 1 + j).d;
    }
  }
  return d;
}

DTensorValue fundamentalMetric(const JetLagrangian& L, const JetPoint& p) {
  const int n = L.dim();
  JetLagrangian::Derivs d = L.derivs(p);
  DTensorValue v({Slot::VelDown, Slot::VelDown}, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) v.at({i, j}) = 0.5 * d.Lyy(i, j);
  return v;
}

GMatrix gMatrix(const JetLagrangian& L, const TemporalMetric& h, const JetPoint& p) {
  const int n = L.dim();
  JetLagrangian::Derivs d = L.derivs(p);
  GMatrix r;
  r.g = 0.5 * h.h11(p.t) * d.Lyy;
  r.g = 0.5 * (r.g + r.g.transpose()).eval();
  Eigen::FullPivLU<MatrixXd> lu(r.g);
  if (!lu.isInvertible())
    throw DegenerateLagrangianError("g matrix is singular at the probed point");
  r.gInv = lu.inverse();
  double cond = r.g.lpNorm<Eigen::Infinity>() * r.gInv.lpNorm<Eigen::Infinity>();
  if (cond > 1e12)
    throw DegenerateLagrangianError("g matrix condition number exceeds 1e12");
  if (cond >= 1e8) r.conditionWarning = true;
  (void)n;
  return r;
}

namespace {

/// Bracket B_k of the spatial Euler-Lagrange semispray; G = (h11/4) g^-1 B.
VectorXd elBracket(const JetLagrangian::Derivs& d, const MatrixXd& g, double h11,
                   double H111, const VectorXd& y, BracketVariant variant) {
  const double hInv = 1.0 / h11;
  VectorXd B = d.Lxy * y - d.Lx + d.Lty;
  B += H111 * (variant == BracketVariant::Corrected ? d.Ly : d.Lx);
  B += 2.0 * hInv * H111 * (g * y);
  return B;
}

MatrixXd dGdyAt(const JetLagrangian& L, const TemporalMetric& h, const JetPoint& p,
                BracketVariant variant) {
  const int n = L.dim();
  JetLagrangian::Derivs d = L.derivs(p);
  GMatrix gm = gMatrix(L, h, p);
  const double h11 = h.h11(p.t);
  const double hInv = 1.0 / h11;
  const double H111 = h.christoffel(p.t);
  VectorXd B = elBracket(d, gm.g, h11, H111, p.y, variant);

  MatrixXd N(n, n);
  for (int m = 0; m < n; ++m) {
    JetLagrangian::ThirdDerivs td = L.thirdDerivs(p, m);
    VectorXd dB = td.Lxyy * p.y;
    for (int k = 0; k < n; ++k) {
      dB[k] += d.Lxy(k, m) - d.Lxy(m, k);
      dB[k] += H111 * (variant == BracketVariant::Corrected ? d.Lyy(k, m) : d.Lxy(m, k));
      dB[k] += td.Ltyy[k];
      dB[k] += 2.0 * hInv * H111 * (0.5 * h11 * td.Lyyy.row(k).dot(p.y) + gm.g(k, m));
    }
    MatrixXd dg = 0.5 * h11 * td.Lyyy;
    dg = 0.5 * (dg + dg.transpose()).eval();
    MatrixXd dgInv = -gm.gInv * dg * gm.gInv;
    N.col(m) = 0.25 * h11 * (dgInv * B + gm.gInv * dB);
  }
  return N;
}

}  // namespace

std::pair<VectorXd, VectorXd> elSemisprays(const JetLagrangian& L, const TemporalMetric& h,
                                           const JetPoint& p, BracketVariant variant) {
  JetLagrangian::Derivs d = L.derivs(p);
  GMatrix gm = gMatrix(L, h, p);
  const double h11 = h.h11(p.t);
  const double H111 = h.christoffel(p.t);
  VectorXd H = -0.5 * H111 * p.y;
  VectorXd B = elBracket(d, gm.g, h11, H111, p.y, variant);
  VectorXd G = 0.25 * h11 * (gm.gInv * B);
  return {H, G};
}

RelativisticSemispray elSemispray(const JetLagrangian& L, const TemporalMetric& h,
                                  BracketVariant variant) {
  RelativisticSemispray s;
  const int n = L.dim();
  s.temporal.n = n;
  s.temporal.H = [L, h, variant](const JetPoint& p) -> VectorXd {
    return elSemisprays(L, h, p, variant).first;
  };
  s.spatial.n = n;
  s.spatial.G = [L, h, variant](const JetPoint& p) -> VectorXd {
    return elSemisprays(L, h, p, variant).second;
  };
  s.spatial.dGdy = [L, h, variant](const JetPoint& p) -> MatrixXd {
    return dGdyAt(L, h, p, variant);
  };
  return s;
}

VectorXd elResidual(const JetLagrangian& L, const TemporalMetric& h, double t,
                    const VectorXd& x, const VectorXd& v, const VectorXd& a) {
  JetPoint p(t, x, v);
  JetLagrangian::Derivs d = L.derivs(p);
  const double h11 = h.h11(t);
  const double rootH = std::sqrt(h11);
  const double dRootH = h.dh11(t) / (2.0 * rootH);
  return dRootH * d.Ly + rootH * (d.Lty + d.Lxy * v + d.Lyy * a - d.Lx);
}

NonlinearConnection connectionFromLagrangian(const JetLagrangian& L, const TemporalMetric& h,
                                             BracketVariant variant) {
  NonlinearConnection g;
  g.n = L.dim();
  g.M = [h](const JetPoint& p) -> VectorXd { return -h.christoffel(p.t) * p.y; };
  g.N = [L, h, variant](const JetPoint& p) -> MatrixXd { return dGdyAt(L, h, p, variant); };
  return g;
}

double GravPotential::pairing(const VectorXd& u, const VectorXd& w) const {
  const int n = static_cast<int>(gBlock.rows());
  VectorXd a = coframe * u;
  VectorXd b = coframe * w;
  double s = hBlock * a[0] * b[0];
  s += a.segment(1, n).dot(gBlock * b.segment(1, n));
  s += a.segment(1 + n, n).dot(vBlock * b.segment(1 + n, n));
  return s;
}

GravPotential gravitationalPotential(const JetLagrangian& L, const TemporalMetric& h,
                                     const JetPoint& p, BracketVariant variant) {
  GMatrix gm = gMatrix(L, h, p);
  GravPotential g;
  g.hBlock = h.h11(p.t);
  g.gBlock = gm.g;
  g.vBlock = gm.g / g.hBlock;
  g.coframe = adaptedCoframe(connectionFromLagrangian(L, h, variant), p);
  g.conditionWarning = gm.conditionWarning;
  return g;
}

}  // namespace jetflow
