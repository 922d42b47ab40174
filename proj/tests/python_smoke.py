"""Smoke test for the python bindings."""

import math

import numpy as np

try:
    import _jetflow as jf
except ImportError:
    from jetflow import _jetflow as jf


def test_expr():
    e = jf.Expr.parse("y1^2 + sin(x1)*t", 1)
    assert abs(e.value(0.0, [0.0], [3.0]) - 9.0) < 1e-14
    g = e.gradient(0.5, [0.2], [3.0])
    # order (t, x1, y1)
    assert abs(g[0] - math.sin(0.2)) < 1e-14
    assert abs(g[1] - 0.5 * math.cos(0.2)) < 1e-14
    assert abs(g[2] - 6.0) < 1e-14
    h = e.hessian(0.5, [0.2], [3.0])
    assert abs(h[2, 2] - 2.0) < 1e-14
    assert np.allclose(h, h.T)


def test_errors():
    try:
        jf.Expr.parse("y3", 2)
    except jf.JetflowError:
        pass
    else:
        raise AssertionError("expected JetflowError for out-of-range variable")


def test_metrics():
    h = jf.TemporalMetric.from_expr("exp(2*t)")
    assert abs(h.h11(0.5) - math.exp(1.0)) < 1e-12
    assert abs(h.christoffel(0.3) - 1.0) < 1e-12

    phi = jf.SpatialMetric.from_expr([["1", "0"], ["0", "x1^2"]])
    gamma = phi.christoffel([2.0, 0.0])
    assert abs(gamma[0][1, 1] + 2.0) < 1e-12
    assert abs(gamma[1][0, 1] - 0.5) < 1e-12


def test_change():
    c = jf.JetChange.from_expr("2*t", "t/2", ["3*x1"], ["x1/3"], 1)
    t, x, y = c.prolong(1.0, [0.5], [4.0])
    assert abs(t - 2.0) < 1e-14
    assert abs(x[0] - 1.5) < 1e-14
    assert abs(y[0] - 6.0) < 1e-12  # 3 * (1/2) * 4


def test_canonical_objects():
    h = jf.TemporalMetric.from_expr("1 + t^2/4")
    phi = jf.SpatialMetric.from_expr([["1", "0"], ["0", "sin(x1)^2"]])
    t, x, y = 0.4, [1.0, 0.2], [0.3, 0.8]
    H, G = jf.canonical_semisprays(h, phi, t, x, y)
    M, N = jf.canonical_connection(h, phi, t, x, y)
    assert np.allclose(M, 2.0 * np.asarray(H))
    F = jf.adapted_frame(h, phi, t, x, y)
    C = jf.adapted_coframe(h, phi, t, x, y)
    assert np.allclose(F @ C.T, np.eye(5), atol=1e-12)


def test_lagrangian_pipeline():
    h = jf.TemporalMetric.from_expr("1 + t^2/4")
    L = jf.Lagrangian.from_expr("(y1^2 + sin(x1)^2*y2^2)/(1 + t^2/4)", 2)
    phi = jf.SpatialMetric.from_expr([["1", "0"], ["0", "sin(x1)^2"]])
    t, x, y = 0.4, [1.0, 0.2], [0.3, 0.8]
    H, G = jf.el_semisprays(L, h, t, x, y)
    Hc, Gc = jf.canonical_semisprays(h, phi, t, x, y)
    assert np.allclose(H, Hc, atol=1e-8)
    assert np.allclose(G, Gc, atol=1e-8)
    a = -2.0 * np.asarray(H) - 2.0 * np.asarray(G)
    r = jf.el_residual(L, h, t, x, y, a)
    assert np.max(np.abs(r)) < 1e-9

    g, g_inv = jf.g_matrix(L, h, t, x, y)
    assert np.allclose(g @ g_inv, np.eye(2), atol=1e-10)


def test_integration():
    h = jf.TemporalMetric.constant(1.0)
    phi = jf.SpatialMetric.from_expr([["1", "0"], ["0", "sin(x1)^2"]])
    traj = jf.integrate_harmonic(h, phi, 0.0, [math.pi / 2, 0.0], [0.0, 1.0],
                                 math.pi / 2, stepper="rk4", dt=1e-3)
    assert np.max(np.abs(traj["x"][:, 0] - math.pi / 2)) < 1e-6
    assert abs(traj["x"][-1, 1] - math.pi / 2) < 1e-6

    L = jf.Lagrangian.from_expr("y1^2 - x1^2", 1)
    traj = jf.integrate_lagrangian(L, h, 0.0, [1.0], [0.0], math.pi,
                                   stepper="rk45", abs_tol=1e-11, rel_tol=1e-11)
    assert abs(traj["x"][-1, 0] + 1.0) < 1e-8  # x(t) = cos(t)


def test_covariance():
    h = jf.TemporalMetric.from_expr("1 + t^2/4")
    phi = jf.SpatialMetric.from_expr(
        [["2 + sin(x2)", "x1*x2/4"], ["x1*x2/4", "3 + x1^2"]])
    worst = jf.check_covariance(h, phi, trials=20, seed=42)
    for name, err in worst.items():
        assert err < 1e-7, f"{name}: {err}"


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for t in tests:
        t()
        print(f"ok {t.__name__}")
    print(f"{len(tests)} python smoke tests passed")


if __name__ == "__main__":
    main()
