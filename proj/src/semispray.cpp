#include "jetflow/semispray.hpp"

#include "jetflow/errors.hpp"

namespace jetflow {

TemporalSemispray canonicalTemporalSemispray(const TemporalMetric& h, int n) {
  return {n, [h](const JetPoint& p) -> VectorXd {
            return -0.5 * h.christoffel(p.t) * p.y;
          }};
}

SpatialSemispray canonicalSpatialSemispray(const SpatialMetric& phi) {
  const int n = phi.dim();
  SpatialSemispray s;
  s.n = n;
  s.G = [phi, n](const JetPoint& p) {
    Tensor3 gamma = phi.christoffel(p.x);
    VectorXd g(n);
    for (int j = 0; j < n; ++j) g[j] = 0.5 * p.y.dot(gamma[j] * p.y);
    return g;
  };
  s.dGdy = [phi, n](const JetPoint& p) {
    Tensor3 gamma = phi.christoffel(p.x);
    MatrixXd d(n, n);
    // dG^j/dy^k = gamma^j_km y^m by the lower-index symmetry
    for (int j = 0; j < n; ++j) d.row(j) = (gamma[j] * p.y).transpose();
    return d;
  };
  return s;
}

RelativisticSemispray canonicalSemispray(const TemporalMetric& h, const SpatialMetric& phi) {
  return {canonicalTemporalSemispray(h, phi.dim()), canonicalSpatialSemispray(phi)};
}

std::pair<DTensorField, DTensorField> semisprayDifference(const RelativisticSemispray& s,
                                                          const TemporalMetric& h,
                                                          const SpatialMetric& phi) {
  if (s.dim() != phi.dim()) throw Error("semisprayDifference: dimension mismatch");
  RelativisticSemispray canon = canonicalSemispray(h, phi);
  std::vector<Slot> sig = {Slot::VelUp, Slot::TimeDown, Slot::TimeDown};
  auto wrap = [sig](std::function<VectorXd(const JetPoint&)> f) {
    DTensorField field;
    field.signature = sig;
    field.eval = [sig, f](const JetPoint& p) {
      DTensorValue v(sig, p);
      VectorXd c = f(p);
      for (int i = 0; i < p.dim(); ++i) v.at({i, 0, 0}) = c[i];
      return v;
    };
    return field;
  };
  auto Hc = canon.temporal.H, Hs = s.temporal.H;
  auto Gc = canon.spatial.G, Gs = s.spatial.G;
  DTensorField T = wrap([Hc, Hs](const JetPoint& p) -> VectorXd { return Hc(p) - Hs(p); });
  DTensorField S = wrap([Gc, Gs](const JetPoint& p) -> VectorXd { return Gc(p) - Gs(p); });
  return {T, S};
}

NonlinearConnection connectionFromSemispray(const RelativisticSemispray& s) {
  NonlinearConnection g;
  g.n = s.dim();
  auto H = s.temporal.H;
  auto dGdy = s.spatial.dGdy;
  if (!dGdy) throw Error("connectionFromSemispray: spatial semispray lacks a y-Jacobian");
  g.M = [H](const JetPoint& p) -> VectorXd { return 2.0 * H(p); };
  g.N = dGdy;
  return g;
}

RelativisticSemispray semisprayFromConnection(const NonlinearConnection& g) {
  RelativisticSemispray s;
  const int n = g.n;
  auto M = g.M;
  auto N = g.N;
  s.temporal.n = n;
  s.temporal.H = [M](const JetPoint& p) -> VectorXd { return 0.5 * M(p); };
  s.spatial.n = n;
  s.spatial.G = [N](const JetPoint& p) -> VectorXd { return 0.5 * (N(p) * p.y); };
  auto dNdy = g.dNdy;
  s.spatial.dGdy = [N, dNdy](const JetPoint& p) -> MatrixXd {
    MatrixXd d = 0.5 * N(p);
    if (dNdy) {
      Tensor3 dn = dNdy(p);
      const int n = static_cast<int>(dn.size());
      for (int k = 0; k < n; ++k) d.col(k) += 0.5 * (dn[k] * p.y);
    }
    return d;
  };
  return s;
}

NonlinearConnection canonicalConnection(const TemporalMetric& h, const SpatialMetric& phi) {
  NonlinearConnection g;
  const int n = phi.dim();
  g.n = n;
  g.M = [h](const JetPoint& p) -> VectorXd { return -h.christoffel(p.t) * p.y; };
  g.N = [phi, n](const JetPoint& p) {
    Tensor3 gamma = phi.christoffel(p.x);
    MatrixXd N(n, n);
    for (int j = 0; j < n; ++j) N.row(j) = (gamma[j] * p.y).transpose();
    return N;
  };
  g.dNdy = [phi, n](const JetPoint& p) {
    Tensor3 gamma = phi.christoffel(p.x);
    Tensor3 d(n, MatrixXd::Zero(n, n));
    // dN^(j)_m / dy^k = gamma^j_mk
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int m = 0; m < n; ++m) d[k](j, m) = gamma[j](m, k);
    return d;
  };
  return g;
}

MatrixXd adaptedFrame(const NonlinearConnection& g, const JetPoint& p) {
  const int n = g.n;
  MatrixXd F = MatrixXd::Identity(2 * n + 1, 2 * n + 1);
  VectorXd M = g.M(p);
  MatrixXd N = g.N(p);
  for (int j = 0; j < n; ++j) {
    F(0, 1 + n + j) = -M[j];
    for (int i = 0; i < n; ++i) F(1 + i, 1 + n + j) = -N(j, i);
  }
  return F;
}

MatrixXd adaptedCoframe(const NonlinearConnection& g, const JetPoint& p) {
  const int n = g.n;
  MatrixXd C = MatrixXd::Identity(2 * n + 1, 2 * n + 1);
  VectorXd M = g.M(p);
  MatrixXd N = g.N(p);
  for (int i = 0; i < n; ++i) {
    C(1 + n + i, 0) = M[i];
    for (int j = 0; j < n; ++j) C(1 + n + i, 1 + j) = N(i, j);
  }
  return C;
}

}  // namespace jetflow
