#include "jetflow/laws.hpp"

#include <cmath>

#include "jetflow/errors.hpp"

namespace jetflow {

JetChange randomJetChange(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  double a = (0.5 + 1.5 * std::abs(uni(rng))) * (uni(rng) < 0 ? -1.0 : 1.0);
  double b = uni(rng);
  double epsT = 0.005 + 0.095 * std::abs(uni(rng));

  JetChange c;
  c.time.forward = [a, b, epsT](double t) {
    return std::array<double, 3>{a * t + b + epsT * std::sin(t), a + epsT * std::cos(t),
                                 -epsT * std::sin(t)};
  };

  // A with singular values clamped into [0.3, 3] => condition number <= 10
  MatrixXd raw(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) raw(i, j) = uni(rng);
  Eigen::JacobiSVD<MatrixXd> svd(raw, Eigen::ComputeFullU | Eigen::ComputeFullV);
  VectorXd sv = svd.singularValues();
  for (int i = 0; i < n; ++i) sv[i] = std::min(3.0, std::max(0.3, sv[i] + 0.5));
  MatrixXd A = svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose();

  MatrixXd B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = uni(rng) / n;  // keeps the perturbation small
  double epsX = 0.005 + 0.095 * std::abs(uni(rng));

  c.space.n = n;
  c.space.forward = [A, B, epsX, n](const VectorXd& x) {
    VectorXd bx = B * x;
    SpaceMapEval e;
    e.value = A * x + epsX * bx.array().sin().matrix();
    e.jac = A + epsX * (MatrixXd(bx.array().cos().matrix().asDiagonal()) * B);
    e.hess.assign(n, MatrixXd::Zero(n, n));
    for (int i = 0; i < n; ++i)
      e.hess[i] = -epsX * std::sin(bx[i]) * (B.row(i).transpose() * B.row(i));
    return e;
  };
  return c;
}

JetPoint randomJetPoint(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  double t = uni(rng);
  VectorXd x(n), y(n);
  for (int i = 0; i < n; ++i) x[i] = uni(rng);
  for (;;) {
    for (int i = 0; i < n; ++i) y[i] = 2.0 * uni(rng);
    if (y.lpNorm<Eigen::Infinity>() >= 0.1) break;
  }
  return JetPoint(t, x, y);
}

double relErr(double got, double want) {
  return std::abs(got - want) / (1.0 + std::abs(want));
}

double relErr(const VectorXd& got, const VectorXd& want) {
  return (got - want).lpNorm<Eigen::Infinity>() / (1.0 + want.lpNorm<Eigen::Infinity>());
}

double relErr(const MatrixXd& got, const MatrixXd& want) {
  return (got - want).lpNorm<Eigen::Infinity>() / (1.0 + want.lpNorm<Eigen::Infinity>());
}

ProlongedVelocityDerivs prolongedVelocityDerivs(const JetChange& c, const JetPoint& p) {
  ChangeFrame f = c.frame(p);
  const int n = p.dim();
  ProlongedVelocityDerivs d;
  d.dytDt = (f.J * p.y) * (-f.d2tf * f.dti * f.dti);
  d.dytDx.resize(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += f.H[j](i, k) * p.y[k];
      d.dytDx(j, i) = s * f.dti;
    }
  return d;
}

double checkTemporalChristoffelLaw(const TemporalMetric& h, const JetChange& c,
                                   const JetPoint& p) {
  ChangeFrame f = c.frame(p);
  double H = h.christoffel(p.t);
  double Ht = h.transformed(c.time).christoffel(f.image.t);
  double law = H * f.dti + f.dtf * f.d2ti;
  return relErr(Ht, law);
}

double checkSpatialChristoffelLaw(const SpatialMetric& phi, const JetChange& c,
                                  const JetPoint& p) {
  ChangeFrame f = c.frame(p);
  const int n = p.dim();
  Tensor3 g = phi.christoffel(p.x);
  Tensor3 gt = phi.transformed(c.space).christoffel(f.image.x);
  double err = 0.0;
  for (int pp = 0; pp < n; ++pp)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r) {
        double law = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
              law += g[i](j, k) * f.J(pp, i) * f.Jinv(j, q) * f.Jinv(k, r);
        for (int l = 0; l < n; ++l) law += f.J(pp, l) * f.Hinv[l](q, r);
        err = std::max(err, relErr(gt[pp](q, r), law));
      }
  return err;
}

double checkTemporalSemisprayLaw(const TemporalMetric& h, const JetChange& c,
                                 const JetPoint& p) {
  ChangeFrame f = c.frame(p);
  const int n = p.dim();
  VectorXd H = canonicalTemporalSemispray(h, n).H(p);
  VectorXd Ht = canonicalTemporalSemispray(h.transformed(c.time), n).H(f.image);
  ProlongedVelocityDerivs d = prolongedVelocityDerivs(c, p);
  VectorXd law = f.dti * f.dti * (f.J * H) - 0.5 * f.dti * d.dytDt;
  return relErr(Ht, law);
}

double checkSpatialSemisprayLaw(const SpatialMetric& phi, const JetChange& c,
                                const JetPoint& p) {
  ChangeFrame f = c.frame(p);
  const int n = p.dim();
  VectorXd G = canonicalSpatialSemispray(phi).G(p);
  VectorXd Gt = canonicalSpatialSemispray(phi.transformed(c.space)).G(f.image);
  ProlongedVelocityDerivs d = prolongedVelocityDerivs(c, p);
  // 2Gt^k = 2G^j (dt/dtt)^2 dxt^k/dx^j - (dx^i/dxt^j)(dyt^k/dx^i) yt^j
  VectorXd law = f.dti * f.dti * (f.J * G);
  const VectorXd& yt = f.image.y;
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) s += f.Jinv(i, j) * d.dytDx(k, i) * yt[j];
    law[k] -= 0.5 * s;
  }
  return relErr(Gt, law);
}

double checkConnectionTemporalLaw(const TemporalMetric& h, const SpatialMetric& phi,
                                  const JetChange& c, const JetPoint& p) {
  ChangeFrame f = c.frame(p);
  VectorXd M = canonicalConnection(h, phi).M(p);
  VectorXd Mt = canonicalConnection(h.transformed(c.time), phi.transformed(c.space))
                    .M(f.image);
  ProlongedVelocityDerivs d = prolongedVelocityDerivs(c, p);
  VectorXd law = f.dti * f.dti * (f.J * M) - f.dti * d.dytDt;
  return relErr(Mt, law);
}

double checkConnectionSpatialLaw(const TemporalMetric& h, const SpatialMetric& phi,
                                 const JetChange& c, const JetPoint& p) {
  ChangeFrame f = c.frame(p);
  const int n = p.dim();
  MatrixXd N = canonicalConnection(h, phi).N(p);
  MatrixXd Nt = canonicalConnection(h.transformed(c.time), phi.transformed(c.space))
                    .N(f.image);
  ProlongedVelocityDerivs d = prolongedVelocityDerivs(c, p);
  MatrixXd law(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      double s = 0.0;
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) s += N(j, i) * f.dti * f.Jinv(i, l) * f.J(k, j);
      for (int i = 0; i < n; ++i) s -= f.Jinv(i, l) * d.dytDx(k, i);
      law(k, l) = s;
    }
  return relErr(Nt, law);
}

double checkDTensorLaw(const DTensorField& sourceField, const DTensorField& tildeField,
                       const JetChange& c, const JetPoint& p) {
  DTensorValue transformed = sourceField.eval(p).transformed(c);
  DTensorValue direct = tildeField.eval(transformed.base());
  double scale = 0.0;
  for (double v : direct.data()) scale = std::max(scale, std::abs(v));
  return transformed.maxAbsDiff(direct) / (1.0 + scale);
}

namespace {

MatrixXd frameBlockScale(const ChangeFrame& f, bool forFrame) {
  const int n = static_cast<int>(f.J.rows());
  MatrixXd S = MatrixXd::Zero(2 * n + 1, 2 * n + 1);
  if (forFrame) {
    S(0, 0) = f.dtf;
    S.block(1, 1, n, n) = f.J.transpose();
    S.block(1 + n, 1 + n, n, n) = f.J.transpose() * f.dti;
  } else {
    S(0, 0) = f.dti;
    S.block(1, 1, n, n) = f.Jinv;
    S.block(1 + n, 1 + n, n, n) = f.Jinv * f.dtf;
  }
  return S;
}

}  // namespace

double checkAdaptedFrameLaw(const TemporalMetric& h, const SpatialMetric& phi,
                            const JetChange& c, const JetPoint& p) {
  ChangeFrame f = c.frame(p);
  NonlinearConnection g = canonicalConnection(h, phi);
  NonlinearConnection gt =
      canonicalConnection(h.transformed(c.time), phi.transformed(c.space));
  MatrixXd F = adaptedFrame(g, p);
  MatrixXd Ft = adaptedFrame(gt, f.image);
  MatrixXd lhs = F * c.jetJacobian(p);
  MatrixXd rhs = frameBlockScale(f, true) * Ft;
  return relErr(lhs, rhs);
}

double checkAdaptedCoframeLaw(const TemporalMetric& h, const SpatialMetric& phi,
                              const JetChange& c, const JetPoint& p) {
  ChangeFrame f = c.frame(p);
  NonlinearConnection g = canonicalConnection(h, phi);
  NonlinearConnection gt =
      canonicalConnection(h.transformed(c.time), phi.transformed(c.space));
  MatrixXd C = adaptedCoframe(g, p);
  MatrixXd Ct = adaptedCoframe(gt, f.image);
  MatrixXd Kc = c.jetJacobian(p).inverse();
  MatrixXd lhs = C * Kc.transpose();
  MatrixXd rhs = frameBlockScale(f, false) * Ct;
  return relErr(lhs, rhs);
}

}  // namespace jetflow
