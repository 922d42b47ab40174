#include "jetflow/metrics.hpp"

#include <cmath>

#include "jetflow/errors.hpp"
#include "jetflow/expr/expr.hpp"

namespace jetflow {

namespace {
constexpr double kDetTol = 1e-12;
constexpr double kCondTol = 1e12;
constexpr double kSymTol = 1e-12;
}  // namespace

MatrixXd invertChecked(const MatrixXd& a, const char* tag) {
  Eigen::FullPivLU<MatrixXd> lu(a);
  if (std::abs(lu.determinant()) < kDetTol)
    throw MetricDegenerateError(std::string(tag) + ": matrix is singular");
  MatrixXd inv = lu.inverse();
  double cond = a.cwiseAbs().rowwise().sum().maxCoeff() *
                inv.cwiseAbs().rowwise().sum().maxCoeff();
  if (cond > kCondTol)
    throw MetricDegenerateError(std::string(tag) + ": condition number above 1e12");
  return inv;
}

std::array<double, 2> TemporalMetric::evalChecked(double t) const {
  auto e = eval_(t);
  if (!(e[0] > 0.0))
    throw MetricDegenerateError("temporal metric h11 is not positive at t=" +
                                std::to_string(t));
  return e;
}

double TemporalMetric::h11(double t) const { return evalChecked(t)[0]; }
double TemporalMetric::dh11(double t) const { return evalChecked(t)[1]; }

double TemporalMetric::christoffel(double t) const {
  auto e = evalChecked(t);
  return 0.5 * e[1] / e[0];
}

TemporalMetric TemporalMetric::constant(double h) {
  if (!(h > 0.0)) throw MetricDegenerateError("constant temporal metric must be positive");
  return TemporalMetric([h](double) { return std::array<double, 2>{h, 0.0}; });
}

TemporalMetric TemporalMetric::fromExpr(const std::string& h11_of_t) {
  auto e = expr::Expr::parse(h11_of_t, 1);
  return TemporalMetric([e](double t) {
    JetPoint p(t, VectorXd::Zero(1), VectorXd::Zero(1));
    auto r = e.eval2(p, expr::Expr::seedsT());
    return std::array<double, 2>{r.value(), r.grad(0)};
  });
}

TemporalMetric TemporalMetric::transformed(const TimeChange& c) const {
  Eval base = eval_;
  TimeChange tc = c;
  return TemporalMetric([base, tc](double ttilde) {
    double t = tc.inverse(ttilde);
    auto f = tc.forward(t);
    double ti1 = 1.0 / f[1];                 // dt/dttilde
    double ti2 = -f[2] * ti1 * ti1 * ti1;    // d2t/dttilde2
    auto h = base(t);
    double ht = h[0] * ti1 * ti1;
    double dht = h[1] * ti1 * ti1 * ti1 + 2.0 * h[0] * ti1 * ti2;
    return std::array<double, 2>{ht, dht};
  });
}

SpatialMetric::Eval SpatialMetric::evalChecked(const VectorXd& x) const {
  Eval e = eval_(x);
  if ((e.phi - e.phi.transpose()).lpNorm<Eigen::Infinity>() > kSymTol)
    throw MetricDegenerateError("spatial metric is not symmetric at the probed point");
  return e;
}

MatrixXd SpatialMetric::phi(const VectorXd& x) const { return evalChecked(x).phi; }

MatrixXd SpatialMetric::phiInv(const VectorXd& x) const {
  return invertChecked(evalChecked(x).phi, "spatial metric");
}

Tensor3 SpatialMetric::dphi(const VectorXd& x) const { return evalChecked(x).dphi; }

Tensor3 SpatialMetric::christoffel(const VectorXd& x) const {
  Eval e = evalChecked(x);
  MatrixXd inv = invertChecked(e.phi, "spatial metric");
  const int n = n_;
  Tensor3 gamma(n, MatrixXd::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        double s = 0.0;
        for (int m = 0; m < n; ++m)
          s += inv(i, m) * (e.dphi[k](j, m) + e.dphi[j](k, m) - e.dphi[m](j, k));
        gamma[i](j, k) = 0.5 * s;
        gamma[i](k, j) = gamma[i](j, k);
      }
  return gamma;
}

SpatialMetric SpatialMetric::euclidean(int n) {
  return constant(MatrixXd::Identity(n, n));
}

SpatialMetric SpatialMetric::constant(const MatrixXd& phi) {
  const int n = static_cast<int>(phi.rows());
  return SpatialMetric(n, [phi, n](const VectorXd&) {
    Eval e;
    e.phi = phi;
    e.dphi.assign(n, MatrixXd::Zero(n, n));
    return e;
  });
}

SpatialMetric SpatialMetric::fromExpr(const std::vector<std::vector<std::string>>& entries) {
  const int n = static_cast<int>(entries.size());
  std::vector<std::vector<expr::Expr>> ex(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(entries[i].size()) != n)
      throw DimensionError("spatial metric: expression matrix must be square");
    for (int j = 0; j < n; ++j) ex[i].push_back(expr::Expr::parse(entries[i][j], n));
  }
  return SpatialMetric(n, [ex, n](const VectorXd& x) {
    JetPoint p(0.0, x, VectorXd::Zero(n));
    auto seeds = expr::Expr::seedsX(n);
    Eval e;
    e.phi.resize(n, n);
    e.dphi.assign(n, MatrixXd(n, n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        auto r = ex[i][j].eval2(p, seeds);
        e.phi(i, j) = r.value();
        for (int k = 0; k < n; ++k) e.dphi[k](i, j) = r.grad(k);
      }
    return e;
  });
}

SpatialMetric SpatialMetric::transformed(const SpaceChange& c) const {
  EvalFn base = eval_;
  SpaceChange sc = c;
  const int n = n_;
  return SpatialMetric(n, [base, sc, n](const VectorXd& xtilde) {
    VectorXd x = sc.inverse(xtilde);
    SpaceMapEval fe = sc.forward(x);
    Eigen::FullPivLU<MatrixXd> lu(fe.jac);
    if (std::abs(lu.determinant()) < kDetTol)
      throw SingularChangeError("transformed metric: singular change Jacobian");
    MatrixXd K = lu.inverse();  // dx/dxtilde
    // dK(i,p)/dxtilde^r = second derivative of the inverse map
    Tensor3 Kd(n, MatrixXd::Zero(n, n));
    for (int l = 0; l < n; ++l) {
      MatrixXd acc = MatrixXd::Zero(n, n);
      for (int a = 0; a < n; ++a) acc += K(l, a) * (K.transpose() * fe.hess[a] * K);
      Kd[l] = -acc;
    }
    Eval src = base(x);
    Eval e;
    e.phi = K.transpose() * src.phi * K;
    e.dphi.assign(n, MatrixXd::Zero(n, n));
    for (int r = 0; r < n; ++r) {
      MatrixXd d = MatrixXd::Zero(n, n);
      for (int k = 0; k < n; ++k) d += src.dphi[k] * K(k, r);
      e.dphi[r] = K.transpose() * d * K;
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
          double s = 0.0;
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              s += src.phi(i, j) * (Kd[i](p, r) * K(j, q) + K(i, p) * Kd[j](q, r));
          e.dphi[r](p, q) += s;
        }
    }
    return e;
  });
}

}  // namespace jetflow
