#pragma once

#include <functional>

#include "jetflow/dtensor.hpp"
#include "jetflow/jet_point.hpp"
#include "jetflow/metrics.hpp"

namespace jetflow {

/// Temporal semispray components H^(j)_(1)1 as a field on the jet space.
struct TemporalSemispray {
  int n = 0;
  std::function<VectorXd(const JetPoint&)> H;
};

/// Spatial semispray components G^(j)_(1)1 with the y-Jacobian, which the
/// induced connection needs.
struct SpatialSemispray {
  int n = 0;
  std::function<VectorXd(const JetPoint&)> G;
  std::function<MatrixXd(const JetPoint&)> dGdy;  // (j, k) = dG^j / dy^k
};

struct RelativisticSemispray {
  TemporalSemispray temporal;
  SpatialSemispray spatial;
  int dim() const { return temporal.n; }
};

/// Nonlinear connection components (M^(j)_(1)1, N^(j)_(1)i); N row j,
/// column i.
struct NonlinearConnection {
  int n = 0;
  std::function<VectorXd(const JetPoint&)> M;
  std::function<MatrixXd(const JetPoint&)> N;
  /// Optional exact y-derivative, dNdy[k](j, m) = dN^(j)_m / dy^k. When
  /// absent the induced semispray treats N as y-independent.
  std::function<Tensor3(const JetPoint&)> dNdy;
};

/// Canonical temporal semispray of h: H = -(1/2) H^1_11(t) y.
TemporalSemispray canonicalTemporalSemispray(const TemporalMetric& h, int n);

/// Canonical spatial semispray of phi: G^j = (1/2) gamma^j_kl y^k y^l.
SpatialSemispray canonicalSpatialSemispray(const SpatialMetric& phi);

RelativisticSemispray canonicalSemispray(const TemporalMetric& h, const SpatialMetric& phi);

/// Difference d-tensors (T, S_sp) with S = canonical - (T, S_sp), each of
/// signature (VelUp, TimeDown, TimeDown).
std::pair<DTensorField, DTensorField> semisprayDifference(const RelativisticSemispray& s,
                                                          const TemporalMetric& h,
                                                          const SpatialMetric& phi);

/// M = 2H, N^(j)_k = dG^j/dy^k.
NonlinearConnection connectionFromSemispray(const RelativisticSemispray& s);

/// H = M/2, G^j = (1/2) N^(j)_m y^m.
RelativisticSemispray semisprayFromConnection(const NonlinearConnection& g);

/// Canonical connection of (h, phi): M = -H^1_11 y, N^(j)_i = gamma^j_im y^m.
NonlinearConnection canonicalConnection(const TemporalMetric& h, const SpatialMetric& phi);

/// Rows delta/delta t, delta/delta x^i, d/dy^i of the adapted frame in the
/// natural basis (t, x, y); unit lower-triangular.
MatrixXd adaptedFrame(const NonlinearConnection& g, const JetPoint& p);

/// Rows dt, dx^i, delta y^i of the adapted coframe in the natural cobasis;
/// frame * coframe^T = identity.
MatrixXd adaptedCoframe(const NonlinearConnection& g, const JetPoint& p);

}  // namespace jetflow
