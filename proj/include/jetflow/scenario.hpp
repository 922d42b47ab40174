#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "jetflow/change.hpp"
#include "jetflow/dynamics.hpp"
#include "jetflow/lagrangian.hpp"
#include "jetflow/metrics.hpp"

namespace jetflow {

/// Parsed scenario file (JSON). Expressions are compiled at load time, so
/// syntax and dimension errors surface before any command runs.
struct Scenario {
  int n = 0;

  std::optional<TemporalMetric> h;
  std::optional<SpatialMetric> phi;
  std::optional<JetLagrangian> lagrangian;
  std::optional<JetChange> change;

  double t0 = 0.0;
  double tEnd = 1.0;
  VectorXd x0, v0;
  bool hasInitial = false;

  Stepper stepper = Stepper::RK4;
  double dt = 1e-3;
  double absTol = 1e-10;
  double relTol = 1e-10;

  int trials = 50;
  std::uint64_t seed = 0;

  /// Negative-control switch: drops the inhomogeneous term from the
  /// spatial connection law inside `check`.
  bool corruptSpatialConnection = false;

  static Scenario load(const std::string& path);
};

}  // namespace jetflow
