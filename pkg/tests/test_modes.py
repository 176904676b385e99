import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from legendre_phase.errors import InvalidParameterError
from legendre_phase.modes import (
    ModeSpec,
    barred_gradient,
    barred_second,
    hodograph_residual,
    linear_pde_residual,
    omega_cartesian,
    omega_polar,
    theta_eval,
)
from legendre_phase.radial import build_series, closed_form_integer, closed_form_lambda_j

from conftest import integer_mode


def test_theta_at_extremum():
    th = theta_eval(integer_mode(2), math.pi / 4)
    assert th[0] == pytest.approx(1.0, abs=1e-15)
    assert th[1] == pytest.approx(0.0, abs=1e-15)
    assert th[2] == pytest.approx(-4.0, abs=1e-14)


def test_theta_at_zero():
    th = theta_eval(integer_mode(2), 0.0)
    assert th[0] == 0.0 and th[1] == 2.0


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_theta_periodic(n):
    m = ModeSpec(closed_form_integer(n), A=0.3, B=-1.2)
    np.testing.assert_allclose(theta_eval(m, 0.0), theta_eval(m, 2 * math.pi), atol=1e-12)


def test_degenerate_theta_linear():
    m = ModeSpec(build_series(0), degenerate=(2.0, 0.5))
    th = theta_eval(m, 1.5)
    assert th == (3.5, 2.0, 0.0, 0.0)


def test_mode_validation():
    sol = closed_form_integer(2)
    with pytest.raises(InvalidParameterError):
        ModeSpec(sol, A=0.0, B=0.0)
    with pytest.raises(InvalidParameterError):
        ModeSpec(sol, sigma=0.0)
    with pytest.raises(InvalidParameterError):
        ModeSpec(sol, alpha_sign=0)
    with pytest.raises(InvalidParameterError):
        ModeSpec(build_series(0))
    with pytest.raises(InvalidParameterError):
        ModeSpec(sol, degenerate=(1.0, 0.0))


def test_derived_constants():
    m = integer_mode(2, sigma=3.0, alpha_abs=0.5, mass=2.0)
    assert m.alpha == -0.5
    assert m.scale == pytest.approx(-0.5 / 3)
    assert m.hbar == 2.0 and m.beta == 0.5


def test_omega_value():
    p = omega_polar(integer_mode(2), 1.0, math.pi / 4)
    assert float(p.w) == pytest.approx(5 / 6, rel=1e-15)


def test_degenerate_polar():
    m = ModeSpec(build_series(0), degenerate=(1.5, -0.5))
    p = omega_polar(m, 0.7, 2.0)
    assert float(p.w) == pytest.approx(2.5)
    for name in ("w_t", "w_tt", "w_th", "w_hh", "w_ttt", "w_tth", "w_thh", "w_hhh"):
        assert float(getattr(p, name)) == 0.0


@settings(max_examples=50, deadline=None)
@given(tau=st.floats(0.05, 3.0), theta=st.floats(-7.0, 7.0))
def test_mixed_partial_factorises(tau, theta):
    m = integer_mode(3)
    p = omega_polar(m, tau, theta)
    from legendre_phase.radial import eval_T_prime
    assert float(p.w_th) == pytest.approx(eval_T_prime(m.radial, tau) * theta_eval(m, theta)[1], rel=1e-13, abs=1e-15)


def test_cartesian_theta_zero_reduction():
    m = integer_mode(3, sigma=2.0)
    tau = 0.6
    p = omega_polar(m, tau, 0.0)
    d = omega_cartesian(m, tau, 0.0)
    a2 = m.scale ** 2
    assert float(d.xx) == pytest.approx(a2 * float(p.w_tt), rel=1e-14, abs=1e-16)
    assert float(d.yy) == pytest.approx(a2 * float(p.w_hh / tau ** 2 + p.w_t / tau), rel=1e-14, abs=1e-16)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_cartesian_periodic(n):
    m = integer_mode(n)
    a = omega_cartesian(m, 0.7, 0.4)
    b = omega_cartesian(m, 0.7, 0.4 + 2 * math.pi)
    for name in ("xx", "xy", "yy", "xxx", "xxy", "xyy", "yyy"):
        assert float(getattr(a, name)) == pytest.approx(float(getattr(b, name)), rel=1e-12, abs=1e-12)


def _barred_at(mode, xb, yb):
    t, h = math.hypot(xb, yb), math.atan2(yb, xb)
    p = omega_polar(mode, t, h)
    return [float(v) for v in barred_gradient(p, t, h)], [float(v) for v in barred_second(p, t, h)]


@pytest.mark.parametrize("mode", [integer_mode(2), integer_mode(3), ModeSpec(closed_form_lambda_j(2), A=0.4, B=1.0)],
                         ids=["n2", "n3", "lj2"])
@pytest.mark.parametrize("point", [(0.5, 0.3), (-0.4, 0.6), (0.9, -0.2)])
def test_cartesian_against_finite_differences(mode, point):
    xb, yb = point
    h = 1e-4
    t, th = math.hypot(xb, yb), math.atan2(yb, xb)
    d = omega_cartesian(mode, t, th)
    a = mode.scale
    # second derivatives from FD of the barred gradient
    gxp, _ = _barred_at(mode, xb + h, yb)
    gxm, _ = _barred_at(mode, xb - h, yb)
    gyp, _ = _barred_at(mode, xb, yb + h)
    gym, _ = _barred_at(mode, xb, yb - h)
    fd_xx = (gxp[0] - gxm[0]) / (2 * h)
    fd_xy = (gyp[0] - gym[0]) / (2 * h)
    fd_yy = (gyp[1] - gym[1]) / (2 * h)
    scale2 = max(abs(fd_xx), abs(fd_xy), abs(fd_yy))
    for got, fd in ((d.xx, fd_xx), (d.xy, fd_xy), (d.yy, fd_yy)):
        assert abs(float(got) / a ** 2 - fd) <= 1e-5 * scale2
    # third derivatives from FD of the barred Hessian
    _, hxp = _barred_at(mode, xb + h, yb)
    _, hxm = _barred_at(mode, xb - h, yb)
    _, hyp = _barred_at(mode, xb, yb + h)
    _, hym = _barred_at(mode, xb, yb - h)
    fd_xxx = (hxp[0] - hxm[0]) / (2 * h)
    fd_xxy = (hyp[0] - hym[0]) / (2 * h)
    fd_xyy = (hyp[1] - hym[1]) / (2 * h)
    fd_yyy = (hyp[2] - hym[2]) / (2 * h)
    scale3 = max(map(abs, (fd_xxx, fd_xxy, fd_xyy, fd_yyy)))
    for got, fd in ((d.xxx, fd_xxx), (d.xxy, fd_xxy), (d.xyy, fd_xyy), (d.yyy, fd_yyy)):
        assert abs(float(got) / a ** 3 - fd) <= 1e-5 * scale3
    # mixed third partials agree whichever index is differentiated last
    assert abs((hxp[1] - hxm[1]) / (2 * h) - fd_xxy) <= 1e-5 * scale3
    assert abs((hxp[2] - hxm[2]) / (2 * h) - fd_xyy) <= 1e-5 * scale3


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_linear_pde_vanishes(n):
    m = ModeSpec(closed_form_integer(n), A=0.7, B=0.2)
    T, H = np.meshgrid(np.linspace(0.01, 2.5, 40), np.linspace(0, 2 * math.pi, 80), indexing="ij")
    assert np.max(np.abs(linear_pde_residual(m, T, H, scaled=True))) <= 1e-12
    assert np.max(np.abs(hodograph_residual(m, T, H, scaled=True))) <= 1e-12


def test_linear_pde_truncated_series():
    # residual shrinks as the truncation tolerance tightens
    res = []
    for tol in (1e-4, 1e-8, 1e-14):
        m = ModeSpec(build_series(0.5, tail_tol=tol))
        res.append(abs(float(linear_pde_residual(m, 2.0, 0.7, scaled=True))))
    assert res[2] <= res[1] <= res[0]
    assert res[2] <= 1e-10


@settings(max_examples=50, deadline=None)
@given(tau=st.floats(0.05, 3.0), theta=st.floats(0, 2 * math.pi), lam=st.floats(0.3, 4.0))
def test_residual_forms_agree(tau, theta, lam):
    # the Cartesian form expands to exactly the polar form, solution or not
    m = ModeSpec(build_series(lam, tail_tol=1e-6), A=0.8, B=0.3)
    r1 = float(linear_pde_residual(m, tau, theta))
    r2 = float(hodograph_residual(m, tau, theta))
    p = omega_polar(m, tau, theta)
    scale = max(abs(float(p.w_tt)), abs(float(p.w_t)) / tau, abs(float(p.w_hh)) / tau ** 2,
                abs(float(p.w_th)) / tau, abs(float(p.w_h)) / tau ** 2) * (1 + tau * tau)
    assert abs(r1 - r2) <= 1e-12 * scale


@pytest.mark.parametrize("n", [2, 3, 4])
def test_discrete_rotation_invariance(n):
    m = integer_mode(n)
    a = omega_polar(m, 0.6, 0.3)
    b = omega_polar(m, 0.6, 0.3 + 2 * math.pi / n)
    for name in a.__dataclass_fields__:
        assert float(getattr(a, name)) == pytest.approx(float(getattr(b, name)), rel=1e-12, abs=1e-13)


def test_b0_linearity():
    m = integer_mode(3)
    s = 2.5
    a = omega_polar(m, 0.8, 1.1)
    b = omega_polar(m.with_b0(s), 0.8, 1.1)
    for name in a.__dataclass_fields__:
        assert float(getattr(b, name)) == pytest.approx(s * float(getattr(a, name)), rel=1e-14, abs=1e-300)
