#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "jetflow/change.hpp"
#include "jetflow/jet_point.hpp"

namespace jetflow {

/// Riemannian metric h11(t) on the time axis. Evaluation returns
/// (h11, dh11/dt); positivity is enforced at every query.
class TemporalMetric {
 public:
  using Eval = std::function<std::array<double, 2>(double)>;

  TemporalMetric() = default;
  explicit TemporalMetric(Eval eval) : eval_(std::move(eval)) {}

  static TemporalMetric constant(double h = 1.0);
  static TemporalMetric fromExpr(const std::string& h11_of_t);

  double h11(double t) const;
  double h11Inv(double t) const { return 1.0 / h11(t); }
  double dh11(double t) const;

  /// Christoffel symbol H^1_11 = (h^11 / 2) dh11/dt.
  double christoffel(double t) const;

  /// Pullback under a time change: htilde(ttilde) = h(t) (dt/dttilde)^2.
  TemporalMetric transformed(const TimeChange& c) const;

 private:
  std::array<double, 2> evalChecked(double t) const;
  Eval eval_;
};

/// Semi-Riemannian metric phi_ij(x) with first partial derivatives.
/// Indefinite signatures are allowed; only nondegeneracy is enforced.
class SpatialMetric {
 public:
  struct Eval {
    MatrixXd phi;   // phi_ij
    Tensor3 dphi;   // dphi[k](i,j) = d phi_ij / d x^k
  };
  using EvalFn = std::function<Eval(const VectorXd&)>;

  SpatialMetric() = default;
  SpatialMetric(int n, EvalFn eval) : n_(n), eval_(std::move(eval)) {}

  static SpatialMetric euclidean(int n);
  static SpatialMetric constant(const MatrixXd& phi);
  /// n x n matrix of expressions in x1..xn.
  static SpatialMetric fromExpr(const std::vector<std::vector<std::string>>& entries);

  int dim() const { return n_; }
  MatrixXd phi(const VectorXd& x) const;
  MatrixXd phiInv(const VectorXd& x) const;
  Tensor3 dphi(const VectorXd& x) const;

  /// Christoffel symbols gamma^i_jk, returned as gamma[i](j,k); symmetric
  /// in the lower indices by construction.
  Tensor3 christoffel(const VectorXd& x) const;

  /// Pullback under a space change:
  /// phitilde_pq(xt) = phi_ij(x(xt)) (dx^i/dxt^p)(dx^j/dxt^q).
  SpatialMetric transformed(const SpaceChange& c) const;

 private:
  Eval evalChecked(const VectorXd& x) const;
  int n_ = 0;
  EvalFn eval_;
};

/// LU-based inverse with an infinity-norm condition estimate; throws
/// MetricDegenerateError above 1e12 (tag names the caller).
MatrixXd invertChecked(const MatrixXd& a, const char* tag);

}  // namespace jetflow
