#pragma once

#include <functional>
#include <vector>

#include "jetflow/jet_point.hpp"
#include "jetflow/metrics.hpp"
#include "jetflow/semispray.hpp"

namespace jetflow {

/// Second-order right-hand side: (t, x, v) -> acceleration.
using SodeRhs = std::function<VectorXd(double, const VectorXd&, const VectorXd&)>;

enum class Stepper { RK4, RK45 };

struct SodeProblem {
  SodeRhs rhs;
  double t0 = 0.0;
  VectorXd x0, v0;
  double tEnd = 1.0;
  Stepper stepper = Stepper::RK4;
  double dt = 1e-3;        // RK4 step (sign-adjusted for reverse time)
  double absTol = 1e-10;   // RK45
  double relTol = 1e-10;   // RK45
};

struct Trajectory {
  std::vector<double> t;
  std::vector<VectorXd> x;
  std::vector<VectorXd> v;
  std::size_t stepsAccepted = 0;
  std::size_t stepsRejected = 0;

  std::size_t size() const { return t.size(); }
};

/// Harmonic-curve equation: xdd + 2H + 2G = 0.
SodeRhs harmonicRhs(const RelativisticSemispray& s);

/// Autoparallel equation: xdd^j + M^j + N^j_m v^m = 0.
SodeRhs autoparallelRhs(const NonlinearConnection& g);

Trajectory integrate(const SodeProblem& prob);

/// Generalized Poisson force F^i = 2 h^11 [T^(i) + S_sp^(i)].
VectorXd poissonForce(const RelativisticSemispray& s, const TemporalMetric& h,
                      const SpatialMetric& phi, const JetPoint& p);

/// E2 = integral of L(t, x, v) sqrt(h11(t)) dt along the trajectory, by
/// composite Simpson; non-uniform grids are resampled with cubic Hermite
/// interpolation using the stored velocities.
double actionFunctional(const std::function<double(const JetPoint&)>& lagrangian,
                        const TemporalMetric& h, const Trajectory& traj);

}  // namespace jetflow
