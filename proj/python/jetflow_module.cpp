#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>
#include <utility>

#include "jetflow/dynamics.hpp"
#include "jetflow/expr/expr.hpp"
#include "jetflow/lagrangian.hpp"
#include "jetflow/laws.hpp"

namespace py = pybind11;
using namespace jetflow;

namespace {

JetPoint point(double t, const VectorXd& x, const VectorXd& y) {
  return JetPoint(t, x, y);
}

SodeProblem problem(SodeRhs rhs, double t0, const VectorXd& x0, const VectorXd& v0,
                    double tEnd, const std::string& stepper, double dt, double absTol,
                    double relTol) {
  SodeProblem prob;
  prob.rhs = std::move(rhs);
  prob.t0 = t0;
  prob.x0 = x0;
  prob.v0 = v0;
  prob.tEnd = tEnd;
  if (stepper == "rk4")
    prob.stepper = Stepper::RK4;
  else if (stepper == "rk45")
    prob.stepper = Stepper::RK45;
  else
    throw Error("stepper must be 'rk4' or 'rk45'");
  prob.dt = dt;
  prob.absTol = absTol;
  prob.relTol = relTol;
  return prob;
}

py::dict trajectoryDict(const Trajectory& traj) {
  const int n = traj.x.empty() ? 0 : static_cast<int>(traj.x.front().size());
  const int m = static_cast<int>(traj.size());
  VectorXd t(m);
  MatrixXd x(m, n), v(m, n);
  for (int i = 0; i < m; ++i) {
    t[i] = traj.t[i];
    x.row(i) = traj.x[i].transpose();
    v.row(i) = traj.v[i].transpose();
  }
  py::dict d;
  d["t"] = t;
  d["x"] = x;
  d["v"] = v;
  d["steps_accepted"] = traj.stepsAccepted;
  d["steps_rejected"] = traj.stepsRejected;
  return d;
}

}  // namespace

PYBIND11_MODULE(_jetflow, m) {
  m.doc() = "Jet-space geometry of time-dependent lagrangians";

  py::register_exception<Error>(m, "JetflowError");

  py::class_<expr::Expr>(m, "Expr")
      .def_static("parse", &expr::Expr::parse, py::arg("text"), py::arg("n"))
      .def_property_readonly("dim", &expr::Expr::dim)
      .def("__str__", &expr::Expr::str)
      .def(
          "value",
          [](const expr::Expr& e, double t, const VectorXd& x, const VectorXd& y) {
            return e.value(point(t, x, y));
          },
          py::arg("t"), py::arg("x"), py::arg("y"))
      .def(
          "gradient",
          [](const expr::Expr& e, double t, const VectorXd& x, const VectorXd& y) {
            auto t2 = e.eval2(point(t, x, y), expr::Expr::seedsAll(e.dim()));
            VectorXd g(2 * e.dim() + 1);
            for (int i = 0; i < g.size(); ++i) g[i] = t2.grad(i);
            return g;
          },
          py::arg("t"), py::arg("x"), py::arg("y"),
          "Exact gradient over (t, x1..xn, y1..yn)")
      .def(
          "hessian",
          [](const expr::Expr& e, double t, const VectorXd& x, const VectorXd& y) {
            auto t2 = e.eval2(point(t, x, y), expr::Expr::seedsAll(e.dim()));
            const int k = 2 * e.dim() + 1;
            MatrixXd h(k, k);
            for (int i = 0; i < k; ++i)
              for (int j = 0; j < k; ++j) h(i, j) = t2.hess(i, j);
            return h;
          },
          py::arg("t"), py::arg("x"), py::arg("y"),
          "Exact Hessian over (t, x1..xn, y1..yn)");

  py::class_<TemporalMetric>(m, "TemporalMetric")
      .def_static("from_expr", &TemporalMetric::fromExpr, py::arg("h11_of_t"))
      .def_static("constant", &TemporalMetric::constant, py::arg("h") = 1.0)
      .def("h11", &TemporalMetric::h11, py::arg("t"))
      .def("christoffel", &TemporalMetric::christoffel, py::arg("t"),
           "H^1_11 = (h^11 / 2) dh11/dt");

  py::class_<SpatialMetric>(m, "SpatialMetric")
      .def_static("from_expr", &SpatialMetric::fromExpr, py::arg("entries"))
      .def_static("euclidean", &SpatialMetric::euclidean, py::arg("n"))
      .def_property_readonly("dim", &SpatialMetric::dim)
      .def("phi", &SpatialMetric::phi, py::arg("x"))
      .def("phi_inv", &SpatialMetric::phiInv, py::arg("x"))
      .def("christoffel", &SpatialMetric::christoffel, py::arg("x"),
           "gamma[i](j, k), symmetric in (j, k)");

  py::class_<JetChange>(m, "JetChange")
      .def_static(
          "from_expr",
          [](const std::string& tFwd, const std::string& tInv,
             const std::vector<std::string>& xFwd, const std::vector<std::string>& xInv,
             int n) {
            JetChange c;
            c.time = TimeChange::fromExpr(tFwd, tInv);
            c.space = SpaceChange::fromExpr(xFwd, xInv, n);
            return c;
          },
          py::arg("t_forward"), py::arg("t_inverse"), py::arg("x_forward"),
          py::arg("x_inverse"), py::arg("n"))
      .def_static("identity", &JetChange::identity, py::arg("n"))
      .def_property_readonly("dim", &JetChange::dim)
      .def(
          "prolong",
          [](const JetChange& c, double t, const VectorXd& x, const VectorXd& y) {
            JetPoint q = c.prolong(point(t, x, y));
            return py::make_tuple(q.t, q.x, q.y);
          },
          py::arg("t"), py::arg("x"), py::arg("y"),
          "Image (t, x, y) with the prolonged velocity")
      .def(
          "jet_jacobian",
          [](const JetChange& c, double t, const VectorXd& x, const VectorXd& y) {
            return c.jetJacobian(point(t, x, y));
          },
          py::arg("t"), py::arg("x"), py::arg("y"));

  py::class_<JetLagrangian>(m, "Lagrangian")
      .def_static("from_expr", &JetLagrangian::fromExpr, py::arg("text"), py::arg("n"))
      .def_property_readonly("dim", &JetLagrangian::dim)
      .def(
          "value",
          [](const JetLagrangian& L, double t, const VectorXd& x, const VectorXd& y) {
            return L.value(point(t, x, y));
          },
          py::arg("t"), py::arg("x"), py::arg("y"));

  m.def(
      "canonical_semisprays",
      [](const TemporalMetric& h, const SpatialMetric& phi, double t, const VectorXd& x,
         const VectorXd& y) {
        RelativisticSemispray s = canonicalSemispray(h, phi);
        JetPoint p = point(t, x, y);
        return py::make_tuple(s.temporal.H(p), s.spatial.G(p));
      },
      py::arg("h"), py::arg("phi"), py::arg("t"), py::arg("x"), py::arg("y"),
      "(H, G) of the canonical semispray of (h, phi)");

  m.def(
      "canonical_connection",
      [](const TemporalMetric& h, const SpatialMetric& phi, double t, const VectorXd& x,
         const VectorXd& y) {
        NonlinearConnection g = canonicalConnection(h, phi);
        JetPoint p = point(t, x, y);
        return py::make_tuple(g.M(p), g.N(p));
      },
      py::arg("h"), py::arg("phi"), py::arg("t"), py::arg("x"), py::arg("y"),
      "(M, N) of the canonical nonlinear connection of (h, phi)");

  m.def(
      "adapted_frame",
      [](const TemporalMetric& h, const SpatialMetric& phi, double t, const VectorXd& x,
         const VectorXd& y) {
        return adaptedFrame(canonicalConnection(h, phi), point(t, x, y));
      },
      py::arg("h"), py::arg("phi"), py::arg("t"), py::arg("x"), py::arg("y"));

  m.def(
      "adapted_coframe",
      [](const TemporalMetric& h, const SpatialMetric& phi, double t, const VectorXd& x,
         const VectorXd& y) {
        return adaptedCoframe(canonicalConnection(h, phi), point(t, x, y));
      },
      py::arg("h"), py::arg("phi"), py::arg("t"), py::arg("x"), py::arg("y"));

  m.def(
      "el_semisprays",
      [](const JetLagrangian& L, const TemporalMetric& h, double t, const VectorXd& x,
         const VectorXd& y, bool paperExact) {
        auto [H, G] = elSemisprays(
            L, h, point(t, x, y),
            paperExact ? BracketVariant::PaperExact : BracketVariant::Corrected);
        return py::make_tuple(H, G);
      },
      py::arg("lagrangian"), py::arg("h"), py::arg("t"), py::arg("x"), py::arg("y"),
      py::arg("paper_exact") = false,
      "(H, G) of the euler-lagrange semisprays of the lagrangian");

  m.def(
      "el_residual",
      [](const JetLagrangian& L, const TemporalMetric& h, double t, const VectorXd& x,
         const VectorXd& v, const VectorXd& a) { return elResidual(L, h, t, x, v, a); },
      py::arg("lagrangian"), py::arg("h"), py::arg("t"), py::arg("x"), py::arg("v"),
      py::arg("a"), "Euler-lagrange residual at acceleration a");

  m.def(
      "el_connection",
      [](const JetLagrangian& L, const TemporalMetric& h, double t, const VectorXd& x,
         const VectorXd& y) {
        NonlinearConnection g = connectionFromLagrangian(L, h);
        JetPoint p = point(t, x, y);
        return py::make_tuple(g.M(p), g.N(p));
      },
      py::arg("lagrangian"), py::arg("h"), py::arg("t"), py::arg("x"), py::arg("y"),
      "(M, N) of the canonical connection of the lagrangian");

  m.def(
      "g_matrix",
      [](const JetLagrangian& L, const TemporalMetric& h, double t, const VectorXd& x,
         const VectorXd& y) {
        GMatrix g = gMatrix(L, h, point(t, x, y));
        return py::make_tuple(g.g, g.gInv);
      },
      py::arg("lagrangian"), py::arg("h"), py::arg("t"), py::arg("x"), py::arg("y"),
      "(g, g_inv) with g_ij = (h11 / 2) d2L/dy^i dy^j");

  m.def(
      "integrate_harmonic",
      [](const TemporalMetric& h, const SpatialMetric& phi, double t0, const VectorXd& x0,
         const VectorXd& v0, double tEnd, const std::string& stepper, double dt,
         double absTol, double relTol) {
        SodeRhs rhs = harmonicRhs(canonicalSemispray(h, phi));
        return trajectoryDict(
            integrate(problem(rhs, t0, x0, v0, tEnd, stepper, dt, absTol, relTol)));
      },
      py::arg("h"), py::arg("phi"), py::arg("t0"), py::arg("x0"), py::arg("v0"),
      py::arg("t_end"), py::arg("stepper") = "rk4", py::arg("dt") = 1e-3,
      py::arg("abs_tol") = 1e-10, py::arg("rel_tol") = 1e-10,
      "Harmonic curve of the canonical semispray of (h, phi)");

  m.def(
      "integrate_lagrangian",
      [](const JetLagrangian& L, const TemporalMetric& h, double t0, const VectorXd& x0,
         const VectorXd& v0, double tEnd, const std::string& stepper, double dt,
         double absTol, double relTol) {
        SodeRhs rhs = harmonicRhs(elSemispray(L, h));
        return trajectoryDict(
            integrate(problem(rhs, t0, x0, v0, tEnd, stepper, dt, absTol, relTol)));
      },
      py::arg("lagrangian"), py::arg("h"), py::arg("t0"), py::arg("x0"), py::arg("v0"),
      py::arg("t_end"), py::arg("stepper") = "rk4", py::arg("dt") = 1e-3,
      py::arg("abs_tol") = 1e-10, py::arg("rel_tol") = 1e-10,
      "Trajectory of the euler-lagrange equations of the lagrangian");

  m.def(
      "check_covariance",
      [](const TemporalMetric& h, const SpatialMetric& phi, int trials,
         unsigned long long seed) {
        std::mt19937_64 rng(seed);
        const int n = phi.dim();
        py::dict out;
        double tc = 0, sc = 0, ts = 0, ss = 0, ct = 0, cs = 0, fr = 0, co = 0;
        for (int trial = 0; trial < trials; ++trial) {
          JetChange c = randomJetChange(rng, n);
          JetPoint p = randomJetPoint(rng, n);
          tc = std::max(tc, checkTemporalChristoffelLaw(h, c, p));
          sc = std::max(sc, checkSpatialChristoffelLaw(phi, c, p));
          ts = std::max(ts, checkTemporalSemisprayLaw(h, c, p));
          ss = std::max(ss, checkSpatialSemisprayLaw(phi, c, p));
          ct = std::max(ct, checkConnectionTemporalLaw(h, phi, c, p));
          cs = std::max(cs, checkConnectionSpatialLaw(h, phi, c, p));
          fr = std::max(fr, checkAdaptedFrameLaw(h, phi, c, p));
          co = std::max(co, checkAdaptedCoframeLaw(h, phi, c, p));
        }
        out["temporal-christoffel-law"] = tc;
        out["spatial-christoffel-law"] = sc;
        out["temporal-semispray-law"] = ts;
        out["spatial-semispray-law"] = ss;
        out["temporal-connection-law"] = ct;
        out["spatial-connection-law"] = cs;
        out["adapted-frame-law"] = fr;
        out["adapted-coframe-law"] = co;
        return out;
      },
      py::arg("h"), py::arg("phi"), py::arg("trials") = 20, py::arg("seed") = 0,
      "Worst relative errors of the transformation laws over randomized jet changes");
}
