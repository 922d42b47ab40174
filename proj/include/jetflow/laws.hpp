#pragma once

#include <random>
#include <string>
#include <vector>

#include "jetflow/change.hpp"
#include "jetflow/dtensor.hpp"
#include "jetflow/metrics.hpp"
#include "jetflow/semispray.hpp"

namespace jetflow {

/// Outcome of one transformation-law check. Errors are relative to
/// 1 + max reference magnitude.
struct CheckRecord {
  std::string name;
  double maxError = 0.0;
  double tolerance = 0.0;
  bool pass() const { return maxError <= tolerance; }
};

/// Documented randomized-change family: ttilde = a t + b + eps sin t with
/// |a| in [0.5, 2]; xtilde = A x + eps sin(B x) componentwise, A with
/// condition number <= 10, |eps| <= 0.1. All draws come from the given
/// 64-bit Mersenne Twister so runs are reproducible.
JetChange randomJetChange(std::mt19937_64& rng, int n);

/// Random probe point with t in [-1, 1], x in [-1, 1]^n, y in [-2, 2]^n
/// with |y| bounded away from 0.
JetPoint randomJetPoint(std::mt19937_64& rng, int n);

double relErr(double got, double want);
double relErr(const VectorXd& got, const VectorXd& want);
double relErr(const MatrixXd& got, const MatrixXd& want);

// Each check compares the object computed in the tilde chart (from
// transformed metrics) with the value demanded by the corresponding
// transformation law, at the image of `p` under `c`.

/// Temporal Christoffel law: Ht = H (dt/dtt) + (dtt/dt)(d2t/dtt2).
double checkTemporalChristoffelLaw(const TemporalMetric& h, const JetChange& c,
                                   const JetPoint& p);

/// Spatial Christoffel law with its inhomogeneous second-derivative term.
double checkSpatialChristoffelLaw(const SpatialMetric& phi, const JetChange& c,
                                  const JetPoint& p);

/// Temporal semispray law: 2Ht = 2H (dt/dtt)^2 dxt/dx - (dt/dtt) dyt/dt.
double checkTemporalSemisprayLaw(const TemporalMetric& h, const JetChange& c,
                                 const JetPoint& p);

/// Spatial semispray law: 2Gt = 2G (dt/dtt)^2 dxt/dx - (dx/dxt)(dyt/dx) yt.
double checkSpatialSemisprayLaw(const SpatialMetric& phi, const JetChange& c,
                                const JetPoint& p);

/// Connection laws for (M, N) of the canonical connection.
double checkConnectionTemporalLaw(const TemporalMetric& h, const SpatialMetric& phi,
                                  const JetChange& c, const JetPoint& p);
double checkConnectionSpatialLaw(const TemporalMetric& h, const SpatialMetric& phi,
                                 const JetChange& c, const JetPoint& p);

/// d-tensor law for a field defined in both charts by `eval` against the
/// slot-by-slot factor transformation.
double checkDTensorLaw(const DTensorField& sourceField, const DTensorField& tildeField,
                       const JetChange& c, const JetPoint& p);

/// Adapted frame/coframe tensoriality (block-diagonal laws) for the
/// canonical connection of (h, phi).
double checkAdaptedFrameLaw(const TemporalMetric& h, const SpatialMetric& phi,
                            const JetChange& c, const JetPoint& p);
double checkAdaptedCoframeLaw(const TemporalMetric& h, const SpatialMetric& phi,
                              const JetChange& c, const JetPoint& p);

/// Derivatives of the prolonged velocity, dyt/dt and dyt/dx, read off the
/// jet Jacobian blocks; shared by the semispray laws.
struct ProlongedVelocityDerivs {
  VectorXd dytDt;   // j
  MatrixXd dytDx;   // (j, i) = d ytilde^j / d x^i
};
ProlongedVelocityDerivs prolongedVelocityDerivs(const JetChange& c, const JetPoint& p);

}  // namespace jetflow
