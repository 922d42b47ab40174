#include "jetflow/dynamics.hpp"

#include <cmath>

#include "jetflow/errors.hpp"

namespace jetflow {

namespace {

struct State {
  VectorXd x, v;
};

State axpy(const State& a, double c, const State& b) {
  return {a.x + c * b.x, a.v + c * b.v};
}

void checkFinite(const State& s, double t) {
  if (!s.x.allFinite() || !s.v.allFinite())
    throw NonFiniteState("integrator state non-finite at t=" + std::to_string(t));
}

State deriv(const SodeRhs& rhs, double t, const State& s) {
  return {s.v, rhs(t, s.x, s.v)};
}

// classic RK4 step
State rk4Step(const SodeRhs& rhs, double t, const State& s, double h) {
  State k1 = deriv(rhs, t, s);
  State k2 = deriv(rhs, t + 0.5 * h, axpy(s, 0.5 * h, k1));
  State k3 = deriv(rhs, t + 0.5 * h, axpy(s, 0.5 * h, k2));
  State k4 = deriv(rhs, t + h, axpy(s, h, k3));
  State out = s;
  out.x += (h / 6.0) * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
  out.v += (h / 6.0) * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
  return out;
}

// Dormand-Prince 5(4) coefficients
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;

}  // namespace

SodeRhs harmonicRhs(const RelativisticSemispray& s) {
  auto H = s.temporal.H;
  auto G = s.spatial.G;
  return [H, G](double t, const VectorXd& x, const VectorXd& v) -> VectorXd {
    JetPoint p(t, x, v);
    return -2.0 * H(p) - 2.0 * G(p);
  };
}

SodeRhs autoparallelRhs(const NonlinearConnection& g) {
  auto M = g.M;
  auto N = g.N;
  return [M, N](double t, const VectorXd& x, const VectorXd& v) -> VectorXd {
    JetPoint p(t, x, v);
    return -M(p) - N(p) * v;
  };
}

Trajectory integrate(const SodeProblem& prob) {
  if (prob.tEnd == prob.t0) throw Error("integrate: t_end equals t0");
  const double dir = prob.tEnd > prob.t0 ? 1.0 : -1.0;
  Trajectory traj;
  State s{prob.x0, prob.v0};
  double t = prob.t0;
  traj.t.push_back(t);
  traj.x.push_back(s.x);
  traj.v.push_back(s.v);

  if (prob.stepper == Stepper::RK4) {
    if (!(prob.dt > 0.0)) throw Error("integrate: RK4 requires dt > 0");
    const double h = dir * prob.dt;
    const double span = std::abs(prob.tEnd - prob.t0);
    const std::size_t steps = static_cast<std::size_t>(std::ceil(span / prob.dt - 1e-12));
    for (std::size_t i = 0; i < steps; ++i) {
      double hi = h;
      if ((t + hi - prob.tEnd) * dir > 0.0) hi = prob.tEnd - t;  // clamp last step
      s = rk4Step(prob.rhs, t, s, hi);
      t = (i + 1 == steps) ? prob.tEnd : prob.t0 + (static_cast<double>(i + 1)) * h;
      checkFinite(s, t);
      traj.t.push_back(t);
      traj.x.push_back(s.x);
      traj.v.push_back(s.v);
      ++traj.stepsAccepted;
    }
    return traj;
  }

  // adaptive Dormand-Prince
  if (!(prob.absTol >= 1e-14 && prob.absTol <= 1e-2 && prob.relTol >= 1e-14 &&
        prob.relTol <= 1e-2))
    throw Error("integrate: RK45 tolerances must lie in [1e-14, 1e-2]");
  double h = dir * std::min(1e-2, std::abs(prob.tEnd - prob.t0) / 10.0);
  State k1 = deriv(prob.rhs, t, s);
  while ((prob.tEnd - t) * dir > 0.0) {
    if (std::abs(h) < 1e-12)
      throw StepFailure("adaptive step size underflow below 1e-12 at t=" + std::to_string(t));
    if ((t + h - prob.tEnd) * dir > 0.0) h = prob.tEnd - t;
    State s2 = axpy(s, h * A21, k1);
    State k2 = deriv(prob.rhs, t + h / 5.0, s2);
    State s3{s.x + h * (A31 * k1.x + A32 * k2.x), s.v + h * (A31 * k1.v + A32 * k2.v)};
    State k3 = deriv(prob.rhs, t + 3.0 * h / 10.0, s3);
    State s4{s.x + h * (A41 * k1.x + A42 * k2.x + A43 * k3.x),
             s.v + h * (A41 * k1.v + A42 * k2.v + A43 * k3.v)};
    State k4 = deriv(prob.rhs, t + 4.0 * h / 5.0, s4);
    State s5{s.x + h * (A51 * k1.x + A52 * k2.x + A53 * k3.x + A54 * k4.x),
             s.v + h * (A51 * k1.v + A52 * k2.v + A53 * k3.v + A54 * k4.v)};
    State k5 = deriv(prob.rhs, t + 8.0 * h / 9.0, s5);
    State s6{s.x + h * (A61 * k1.x + A62 * k2.x + A63 * k3.x + A64 * k4.x + A65 * k5.x),
             s.v + h * (A61 * k1.v + A62 * k2.v + A63 * k3.v + A64 * k4.v + A65 * k5.v)};
    State k6 = deriv(prob.rhs, t + h, s6);
    State s7{s.x + h * (B1 * k1.x + B3 * k3.x + B4 * k4.x + B5 * k5.x + B6 * k6.x),
             s.v + h * (B1 * k1.v + B3 * k3.v + B4 * k4.v + B5 * k5.v + B6 * k6.v)};
    State k7 = deriv(prob.rhs, t + h, s7);

    VectorXd errX = h * (E1 * k1.x + E3 * k3.x + E4 * k4.x + E5 * k5.x + E6 * k6.x + E7 * k7.x);
    VectorXd errV = h * (E1 * k1.v + E3 * k3.v + E4 * k4.v + E5 * k5.v + E6 * k6.v + E7 * k7.v);
    double err = 0.0;
    for (int i = 0; i < errX.size(); ++i) {
      double scX = prob.absTol + prob.relTol * std::max(std::abs(s.x[i]), std::abs(s7.x[i]));
      double scV = prob.absTol + prob.relTol * std::max(std::abs(s.v[i]), std::abs(s7.v[i]));
      err = std::max(err, std::abs(errX[i]) / scX);
      err = std::max(err, std::abs(errV[i]) / scV);
    }
    if (err <= 1.0) {
      t += h;
      s = s7;
      k1 = k7;  // FSAL
      checkFinite(s, t);
      traj.t.push_back(t);
      traj.x.push_back(s.x);
      traj.v.push_back(s.v);
      ++traj.stepsAccepted;
    } else {
      ++traj.stepsRejected;
    }
    double factor = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
    factor = std::min(5.0, std::max(0.2, factor));
    h *= factor;
  }
  return traj;
}

VectorXd poissonForce(const RelativisticSemispray& s, const TemporalMetric& h,
                      const SpatialMetric& phi, const JetPoint& p) {
  auto [T, Ssp] = semisprayDifference(s, h, phi);
  DTensorValue tv = T.eval(p);
  DTensorValue sv = Ssp.eval(p);
  const double hInv = h.h11Inv(p.t);
  VectorXd f(p.dim());
  for (int i = 0; i < p.dim(); ++i) f[i] = 2.0 * hInv * (tv.at({i, 0, 0}) + sv.at({i, 0, 0}));
  return f;
}

double actionFunctional(const std::function<double(const JetPoint&)>& lagrangian,
                        const TemporalMetric& h, const Trajectory& traj) {
  const std::size_t m = traj.size();
  if (m < 3) throw QuadratureError("action functional needs at least 3 samples");

  auto integrand = [&](double t, const VectorXd& x, const VectorXd& v) {
    return lagrangian(JetPoint(t, x, v)) * std::sqrt(h.h11(t));
  };

  // uniform grid?
  const double h0 = traj.t[1] - traj.t[0];
  bool uniform = true;
  for (std::size_t i = 1; i + 1 < m; ++i)
    if (std::abs((traj.t[i + 1] - traj.t[i]) - h0) > 1e-9 * std::abs(h0)) {
      uniform = false;
      break;
    }

  std::vector<double> ts;
  std::vector<VectorXd> xs, vs;
  if (uniform && m % 2 == 1) {
    ts = traj.t;
    xs = traj.x;
    vs = traj.v;
  } else {
    // resample to an odd-count uniform grid by cubic Hermite segments
    std::size_t count = std::max<std::size_t>(2 * m + 1, 201);
    if (count % 2 == 0) ++count;
    const double a = traj.t.front(), b = traj.t.back();
    std::size_t seg = 0;
    for (std::size_t i = 0; i < count; ++i) {
      double t = a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
      while (seg + 2 < m && (traj.t[seg + 1] - t) * (b - a > 0 ? 1.0 : -1.0) < 0.0) ++seg;
      double t0 = traj.t[seg], t1 = traj.t[seg + 1], dt = t1 - t0;
      double u = (t - t0) / dt;
      double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
      double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
      double g00 = 6 * u * (u - 1) / dt, g10 = (1 - u) * (1 - 3 * u);
      double g01 = -6 * u * (u - 1) / dt, g11 = u * (3 * u - 2);
      VectorXd x = h00 * traj.x[seg] + h10 * dt * traj.v[seg] + h01 * traj.x[seg + 1] +
                   h11 * dt * traj.v[seg + 1];
      VectorXd v = g00 * traj.x[seg] + g10 * traj.v[seg] + g01 * traj.x[seg + 1] +
                   g11 * traj.v[seg + 1];
      ts.push_back(t);
      xs.push_back(x);
      vs.push_back(v);
    }
  }

  const std::size_t k = ts.size();
  const double step = ts[1] - ts[0];
  double sum = integrand(ts[0], xs[0], vs[0]) + integrand(ts[k - 1], xs[k - 1], vs[k - 1]);
  for (std::size_t i = 1; i + 1 < k; ++i)
    sum += (i % 2 == 1 ? 4.0 : 2.0) * integrand(ts[i], xs[i], vs[i]);
  return sum * step / 3.0;
}

}  // namespace jetflow
