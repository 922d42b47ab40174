#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "jetflow/expr/expr.hpp"
#include "jetflow/jet_point.hpp"

namespace jetflow {

/// Reparametrization of the time axis. `forward` returns
/// (value, d/dt, d2/dt2) of ttilde(t). The inverse map may be supplied
/// explicitly; otherwise it is solved by a safeguarded Newton iteration on
/// the forward map.
struct TimeChange {
  std::function<std::array<double, 3>(double)> forward;
  std::function<double(double)> inverseValue;  // optional

  double inverse(double ttilde) const;

  static TimeChange identity();
  /// fwd is an expression in t; inv (expression in t, meaning t(ttilde))
  /// may be empty.
  static TimeChange fromExpr(const std::string& fwd, const std::string& inv = "");
};

struct SpaceMapEval {
  VectorXd value;  // xtilde
  MatrixXd jac;    // jac(i,j) = d xtilde^i / d x^j
  Tensor3 hess;    // hess[i](j,k) = d2 xtilde^i / d x^j d x^k
};

/// Diffeomorphism of the spatial manifold, independent of t.
struct SpaceChange {
  int n = 0;
  std::function<SpaceMapEval(const VectorXd&)> forward;
  std::function<VectorXd(const VectorXd&)> inverseValue;  // optional

  VectorXd inverse(const VectorXd& xtilde) const;

  static SpaceChange identity(int n);
  static SpaceChange linear(const MatrixXd& A);
  /// Component expressions in x1..xn; inverse expressions optional.
  static SpaceChange fromExpr(const std::vector<std::string>& fwd,
                              const std::vector<std::string>& inv, int n);
};

/// Forward-derivative data of a jet change evaluated at one point,
/// including the inverse-map derivatives obtained from the inverse
/// function theorem.
struct ChangeFrame {
  double dtf = 1.0;   // dttilde/dt
  double d2tf = 0.0;  // d2ttilde/dt2
  double dti = 1.0;   // dt/dttilde
  double d2ti = 0.0;  // d2t/dttilde2
  MatrixXd J;         // dxtilde/dx
  MatrixXd Jinv;      // dx/dxtilde
  Tensor3 H;          // d2xtilde^i/dx^j dx^k
  Tensor3 Hinv;       // d2x^l/dxtilde^q dxtilde^r
  JetPoint image;     // the prolonged point
};

/// A coordinate change of the jet bundle base (separate time and space
/// factors) together with its jet prolongation.
class JetChange {
 public:
  TimeChange time;
  SpaceChange space;

  int dim() const { return space.n; }

  /// (t, x, y) -> (ttilde, xtilde, ytilde) with the velocity rule
  /// ytilde = (dxtilde/dx)(dt/dttilde) y.
  JetPoint prolong(const JetPoint& p) const;

  /// Full derivative data at p. Throws SingularChangeError when
  /// |dttilde/dt| or |det dxtilde/dx| drops below 1e-12.
  ChangeFrame frame(const JetPoint& p) const;

  /// (2n+1)x(2n+1) matrix with entry (a, b) = d utilde^b / d u^a over the
  /// coordinate order (t, x^i, y^i); row a expresses the natural frame
  /// vector d/du^a in the tilde natural frame.
  MatrixXd jetJacobian(const JetPoint& p) const;

  JetChange inverse() const;

  /// c2 after c1.
  static JetChange compose(const JetChange& c2, const JetChange& c1);
  static JetChange identity(int n);
};

/// Verifies forward(inverse(q)) = q at the probe point to tol. Throws Error
/// on failure; used when user-supplied inverse expressions are loaded.
void checkInverseConsistency(const JetChange& c, const JetPoint& probe, double tol = 1e-9);

}  // namespace jetflow
