#pragma once

#include <stdexcept>
#include <string>

namespace jetflow {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed expression text. Carries the byte offset of the offending token.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& msg, std::size_t position)
      : Error(msg + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Variable index exceeds the declared spatial dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Evaluation outside a function's domain (log of non-positive, division by
/// zero, fractional power of a non-positive base).
class DomainError : public Error {
 public:
  DomainError(const std::string& msg, std::size_t position)
      : Error(msg + " (expression position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// A coordinate change whose time derivative or spatial Jacobian is
/// numerically singular at the probed point.
class SingularChangeError : public Error {
 public:
  using Error::Error;
};

/// Metric not positive (temporal) or not invertible (spatial) at the point.
class MetricDegenerateError : public Error {
 public:
  using Error::Error;
};

/// The Lagrangian's g-matrix is singular or too ill-conditioned to invert.
class DegenerateLagrangianError : public Error {
 public:
  using Error::Error;
};

/// Adaptive integrator step size underflow.
class StepFailure : public Error {
 public:
  using Error::Error;
};

/// Integrator state became NaN or infinite.
class NonFiniteState : public Error {
 public:
  using Error::Error;
};

/// Too few trajectory samples for the requested quadrature.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

}  // namespace jetflow
