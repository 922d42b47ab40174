#pragma once

#include <string>
#include <utility>

#include "jetflow/dtensor.hpp"
#include "jetflow/jet_point.hpp"
#include "jetflow/metrics.hpp"
#include "jetflow/semispray.hpp"

namespace jetflow {

/// Scalar jet Lagrangian L(t, x, y) backed by a parsed expression, so all
/// partial derivatives up to third order in y are exact.
class JetLagrangian {
 public:
  /// First and second partials of L at one point, indexed so that
  /// Lxy(k, j) = d2L / dy^k dx^j.
  struct Derivs {
    double L = 0.0;
    double Lt = 0.0;
    VectorXd Lx, Ly;
    MatrixXd Lyy;   // (k, m) = d2L / dy^k dy^m
    MatrixXd Lxy;   // (k, j) = d2L / dy^k dx^j
    VectorXd Lty;   // k      = d2L / dt dy^k
  };

  /// y-derivative of the second partials, from one nested dual pass.
  struct ThirdDerivs {
    MatrixXd Lyyy;  // (k, l) = d3L / dy^k dy^l dy^m
    MatrixXd Lxyy;  // (k, j) = d3L / dy^k dx^j dy^m
    VectorXd Ltyy;  // k      = d3L / dt dy^k dy^m
  };

  JetLagrangian() = default;

  static JetLagrangian fromExpr(const std::string& text, int n);

  int dim() const { return n_; }
  const expr::Expr& expr() const { return expr_; }

  double value(const JetPoint& p) const { return expr_.value(p); }
  Derivs derivs(const JetPoint& p) const;
  ThirdDerivs thirdDerivs(const JetPoint& p, int m) const;

 private:
  expr::Expr expr_;
  int n_ = 0;
};

/// Fundamental metrical d-tensor (1/2) d2L/dy dy, signature
/// (VelDown, VelDown).
DTensorValue fundamentalMetric(const JetLagrangian& L, const JetPoint& p);

struct GMatrix {
  MatrixXd g, gInv;
  bool conditionWarning = false;  // condition number in [1e8, 1e12)
};

/// g_ij = (h11 / 2) d2L/dy^i dy^j with its checked inverse. Throws
/// DegenerateLagrangianError above condition number 1e12.
GMatrix gMatrix(const JetLagrangian& L, const TemporalMetric& h, const JetPoint& p);

/// The bracket term that multiplies H^1_11 inside the spatial
/// Euler-Lagrange semispray. Corrected uses dL/dy^k, which the
/// Euler-Lagrange equations force; PaperExact uses dL/dx^k.
enum class BracketVariant { Corrected, PaperExact };

/// Euler-Lagrange semisprays (H, G) of the action density L sqrt(h11).
std::pair<VectorXd, VectorXd> elSemisprays(const JetLagrangian& L, const TemporalMetric& h,
                                           const JetPoint& p,
                                           BracketVariant variant = BracketVariant::Corrected);

/// The same pair packaged as a RelativisticSemispray field with exact dG/dy.
RelativisticSemispray elSemispray(const JetLagrangian& L, const TemporalMetric& h,
                                  BracketVariant variant = BracketVariant::Corrected);

/// Independent Euler-Lagrange oracle: component k of
/// d/dt(sqrt(h11) dL/dy^k) - sqrt(h11) dL/dx^k with d/dt expanded as
/// dt + v dx + a dy. Zero iff (x, v, a) solves the equations at t.
VectorXd elResidual(const JetLagrangian& L, const TemporalMetric& h, double t,
                    const VectorXd& x, const VectorXd& v, const VectorXd& a);

/// Canonical nonlinear connection of L: M = 2H, N^(j)_k = dG^j/dy^k with
/// the y-derivative assembled from exact third derivatives of L.
NonlinearConnection connectionFromLagrangian(const JetLagrangian& L, const TemporalMetric& h,
                                             BracketVariant variant = BracketVariant::Corrected);

/// Block metric h11 dt^2 + g_ij dx^i dx^j + h^11 g_ij dy^i dy^j on the jet
/// space, expressed through the adapted coframe of the connection of L.
struct GravPotential {
  double hBlock = 1.0;
  MatrixXd gBlock;
  MatrixXd vBlock;   // h^11 gBlock
  MatrixXd coframe;  // rows dt, dx^i, delta y^i at the base point
  bool conditionWarning = false;

  /// Pairing of two tangent vectors given in natural (t, x, y) components.
  double pairing(const VectorXd& u, const VectorXd& w) const;
};

GravPotential gravitationalPotential(const JetLagrangian& L, const TemporalMetric& h,
                                     const JetPoint& p,
                                     BracketVariant variant = BracketVariant::Corrected);

}  // namespace jetflow
