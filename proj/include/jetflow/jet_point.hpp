#pragma once

#include <Eigen/Dense>

#include "jetflow/errors.hpp"

namespace jetflow {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Third-order index container: tensor[i](j, k).
using Tensor3 = std::vector<MatrixXd>;

/// A point (t, x^i, y^i) of the 1-jet space over R x M, with y the
/// relativistic velocity block.
struct JetPoint {
  double t = 0.0;
  VectorXd x;
  VectorXd y;

  JetPoint() = default;
  JetPoint(double t_, VectorXd x_, VectorXd y_)
      : t(t_), x(std::move(x_)), y(std::move(y_)) {
    if (x.size() != y.size() || x.size() < 1)
      throw Error("JetPoint: x and y must share a positive dimension");
    if (!std::isfinite(t) || !x.allFinite() || !y.allFinite())
      throw Error("JetPoint: coordinates must be finite");
  }

  int dim() const { return static_cast<int>(x.size()); }
};

}  // namespace jetflow
