import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from legendre_phase import fields as F
from legendre_phase.chart import forward_map
from legendre_phase.errors import SingularPotentialError, UnmappableModeError
from legendre_phase.modes import ModeSpec, omega_cartesian
from legendre_phase.radial import closed_form_integer, closed_form_lambda_j

from conftest import integer_mode


# ---- kinematics -----------------------------------------------------------------


def test_phase_hand_value():
    assert float(F.phase(integer_mode(2), 1.0, math.pi / 4)) == pytest.approx(0.5, rel=1e-15)


def test_plane_phase_vanishes():
    T, H = np.meshgrid(np.linspace(0.1, 3, 7), np.linspace(0, 6, 5))
    assert np.max(np.abs(F.phase(integer_mode(1), T, H))) < 1e-15


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_phase_laguerre_form(n):
    m = ModeSpec(closed_form_integer(n), A=0.6, B=0.8)
    assert float(F.phase_laguerre(m, 0.7, 0.3)) == pytest.approx(float(F.phase(m, 0.7, 0.3)), rel=1e-12)


def test_speed_and_direction():
    m = integer_mode(2, sigma=2.0)
    vx, vy = F.velocity(m, 1.5, 0.0)
    assert math.hypot(vx, vy) == pytest.approx(3.0, rel=1e-15)
    assert vy == 0.0


@settings(max_examples=100, deadline=None)
@given(tau=st.floats(1e-3, 4.0), theta=st.floats(-10, 10), sigma=st.floats(0.1, 20.0),
       sign=st.sampled_from([-1, 1]))
def test_speed_is_sigma_tau(tau, theta, sigma, sign):
    m = integer_mode(2, sigma=sigma, alpha_sign=sign)
    vx, vy = F.velocity(m, tau, theta)
    assert math.hypot(vx, vy) == pytest.approx(sigma * tau, rel=1e-14)
    # velocity points against the hodograph direction for either sign of alpha
    assert vx * math.cos(theta) + vy * math.sin(theta) == pytest.approx(-sigma * tau, rel=1e-12)


def test_density_values():
    m = integer_mode(2, C_norm=2.5)
    assert float(F.density(m, 0.0)) == 2.5
    assert float(F.density(integer_mode(2), 1.0)) == pytest.approx(0.6065306597126334, rel=1e-15)


@settings(max_examples=60, deadline=None)
@given(tau=st.floats(0.0, 5.0), theta=st.floats(0, 7))
def test_density_from_velocity(tau, theta):
    m = integer_mode(3, sigma=1.7)
    vx, vy = F.velocity(m, tau, theta)
    assert F.density_from_velocity(m, vx, vy) == pytest.approx(float(F.density(m, tau)), rel=1e-14)


def test_density_bounds_and_monotone():
    taus = np.linspace(0, 5, 200)
    f = F.density(integer_mode(2), taus)
    assert np.all(f > 0) and np.all(f <= 1.0) and np.all(np.diff(f) < 0)


def test_duality_gradient():
    m = integer_mode(2)
    p = forward_map(m, 0.5, 1.0)
    gx, gy = F.phase_gradient_fd(m, p.x, p.y, 1e-4, (0.5, 1.0))
    xi, eta = F.hodograph_point(m, 0.5, 1.0)
    assert math.hypot(gx - xi, gy - eta) <= 1e-7 * math.hypot(xi, eta)


# ---- quantum potential ----------------------------------------------------------


def q_matrix_oracle(mode, tau, theta):
    """Q from Hess(Phi) = inv(Hess(omega)) and d Hess(Phi) = -Hp dH Hp, no bracket algebra."""
    d = omega_cartesian(mode, tau, theta)
    Hw = np.array([[d.xx, d.xy], [d.xy, d.yy]], dtype=float)
    W3 = np.empty((2, 2, 2))
    W3[0, 0, 0] = d.xxx
    W3[0, 0, 1] = W3[0, 1, 0] = W3[1, 0, 0] = d.xxy
    W3[0, 1, 1] = W3[1, 0, 1] = W3[1, 1, 0] = d.xyy
    W3[1, 1, 1] = d.yyy
    Hp = np.linalg.inv(Hw)
    p = np.array(F.hodograph_point(mode, tau, theta), dtype=float)
    a2 = mode.scale ** 2
    # d/dx_i of Hess(omega) = sum_k W3[:, :, k] Hp[k, i]
    lap = 0.0
    for i in range(2):
        dHw = np.einsum("abk,k->ab", W3, Hp[:, i])
        dHp = -Hp @ dHw @ Hp
        lap += dHp[i] @ p
    lap_tau2 = 2 * a2 * (lap + np.trace(Hp @ Hp))
    grad_tau2 = 2 * a2 * Hp @ p
    return -(mode.alpha / (4 * mode.beta)) * (lap_tau2 - grad_tau2 @ grad_tau2 / 4)


MODES = {
    "n2": integer_mode(2),
    "n3": integer_mode(3),
    "n4": ModeSpec(closed_form_integer(4), A=0.5, B=1.0),
    "n2_sig10": integer_mode(2, sigma=10.0, alpha_abs=1.0, mass=0.7),
    "lj2": ModeSpec(closed_form_lambda_j(2), A=1.0, B=0.3),
    "n3_alpha_plus": integer_mode(3, alpha_sign=1),
}


@pytest.mark.parametrize("name", list(MODES))
@pytest.mark.parametrize("tau,theta", [(0.3, 0.2), (0.55, 1.3), (0.7, 2.9), (0.45, 4.4)])
def test_q_matches_matrix_oracle(name, tau, theta):
    m = MODES[name]
    ref = q_matrix_oracle(m, tau, theta)
    assert float(F.quantum_potential_analytic(m, tau, theta)) == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("sigma", [1.0, 10.0])
def test_q_against_fd_oracle(n, sigma):
    m = integer_mode(n, sigma=sigma)
    L = F.natural_length(m)
    for tau, theta in [(0.4, 0.3), (0.6, 1.9), (0.7, 2.6)]:
        p = forward_map(m, tau, theta)
        qa = float(F.quantum_potential_analytic(m, tau, theta))
        qf = F.quantum_potential_fd(m, p.x, p.y, 1e-3 * L, (tau, theta))
        assert qf == pytest.approx(qa, rel=1e-4)


def test_q_fd_second_order():
    m = integer_mode(2)
    tau, theta = 0.5, 0.9
    p = forward_map(m, tau, theta)
    qa = float(F.quantum_potential_analytic(m, tau, theta))
    L = F.natural_length(m)
    hs = np.array([1e-2, 5e-3, 2.5e-3]) * L
    err = [abs(F.quantum_potential_fd(m, p.x, p.y, h, (tau, theta)) - qa) for h in hs]
    order = np.polyfit(np.log(hs), np.log(err), 1)[0]
    assert 1.8 < order < 2.2


def test_q_finite_near_origin():
    # along theta = 0 the n = 2 potential approaches a finite limit
    m = integer_mode(2)
    vals = [float(F.quantum_potential_analytic(m, t, 0.0)) for t in (1e-2, 1e-3, 1e-4)]
    assert all(np.isfinite(vals))
    assert abs(vals[2] - vals[1]) < abs(vals[1] - vals[0])
    assert vals[2] == pytest.approx(vals[1], rel=1e-4)
    # and FD agrees there with refinement
    tau = 0.05
    p = forward_map(m, tau, 0.0)
    L = math.hypot(p.x, p.y)
    q = F.quantum_potential_fd(m, p.x, p.y, 2e-3 * L, (tau, 0.0))
    assert q == pytest.approx(float(F.quantum_potential_analytic(m, tau, 0.0)), rel=1e-4)


def test_q_b0_scaling():
    m = integer_mode(3)
    q1 = float(F.quantum_potential_analytic(m, 0.6, 0.8))
    q2 = float(F.quantum_potential_analytic(m.with_b0(3.0), 0.6, 0.8))
    assert q2 == pytest.approx(q1 / 9, rel=1e-13)


def test_q_sigma_invariance_at_fixed_b0():
    # |Q|/T_kin depends on sigma and |alpha| only through the physical size |a| b0
    r = []
    for sigma in (1.0, 10.0):
        m = integer_mode(2, sigma=sigma)
        r.append(abs(float(F.quantum_potential_analytic(m, 1.0, 0.0))) / float(F.energies(m, 1.0, 0.0)[0]))
    assert r[1] == pytest.approx(r[0], rel=1e-13)


def test_q_crossover_at_fixed_physical_size():
    r = []
    for sigma in (1.0, 10.0):
        m = integer_mode(2, sigma=sigma).with_b0(sigma)
        r.append(abs(float(F.quantum_potential_analytic(m, 1.0, 0.0))) / float(F.energies(m, 1.0, 0.0)[0]))
    assert r[0] / r[1] == pytest.approx(100.0, rel=1e-12)


def test_q_singular_on_fold():
    with pytest.raises(SingularPotentialError):
        F.quantum_potential_analytic(integer_mode(2), 1.0, math.pi / 4)


def test_q_unmappable():
    with pytest.raises(UnmappableModeError):
        F.quantum_potential_analytic(integer_mode(1), 0.5, 0.1)


# ---- energies -------------------------------------------------------------------


def test_kinetic_values():
    m = integer_mode(2)
    T_kin, e_chi, _ = F.energies(m, 1.0, 0.0)
    assert T_kin == 0.5 and e_chi == -0.5
    T0, e0, _ = F.energies(integer_mode(2, W=1.25), 1e-12, 0.0, Q=0.0)
    assert T0 == pytest.approx(0.0, abs=1e-20) and e0 == pytest.approx(1.25)


@settings(max_examples=60, deadline=None)
@given(tau=st.floats(0.01, 0.79), theta=st.floats(0, 2 * math.pi), W=st.floats(-5, 5),
       sigma=st.floats(0.5, 20), mass=st.floats(0.1, 5))
def test_decomposition_identity(tau, theta, W, sigma, mass):
    m = integer_mode(2, W=W, sigma=sigma, mass=mass)
    Q = float(F.quantum_potential_analytic(m, tau, theta))
    T_kin, e_chi, U = F.energies(m, tau, theta, Q)
    assert abs(U + Q + T_kin - W) <= 1e-12 * max(abs(U), abs(Q), abs(T_kin), abs(W), 1.0)


@pytest.mark.parametrize("n", [2, 3])
def test_direct_potential_matches(n):
    m = integer_mode(n, W=0.3)
    L = F.natural_length(m)
    for tau, theta in [(0.4, 0.3), (0.65, 2.0)]:
        p = forward_map(m, tau, theta)
        U = float(F.energies(m, tau, theta)[2])
        Ud = F.potential_U_direct(m, p.x, p.y, 1e-3 * L, (tau, theta))
        assert Ud == pytest.approx(U, rel=1e-4)


def test_direct_potential_w_shift():
    m0, m1 = integer_mode(2, W=0.0), integer_mode(2, W=1.75)
    p = forward_map(m0, 0.5, 0.7)
    u0 = F.potential_U_direct(m0, p.x, p.y, 1e-3, (0.5, 0.7))
    u1 = F.potential_U_direct(m1, p.x, p.y, 1e-3, (0.5, 0.7))
    assert u1 - u0 == pytest.approx(1.75, rel=1e-13)


def test_quantum_constant_identity():
    hbar, m, e = 1.3, 0.7, 2.1
    alpha, beta, gamma = -hbar / (2 * m), 1 / hbar, -e / m
    assert 2 * alpha * beta / gamma == pytest.approx(1 / e, rel=1e-15)


# ---- Laplace limit --------------------------------------------------------------


@settings(max_examples=80, deadline=None)
@given(tau=st.floats(0.01, 0.79), theta=st.floats(0, 2 * math.pi), n=st.sampled_from([2, 3, 4]))
def test_laplacian_bound(tau, theta, n):
    lap, hess = F.laplacian_bound(integer_mode(n), tau, theta)
    assert lap <= 2 * tau * tau * hess


def test_laplace_regime_small_tau():
    T, H = np.meshgrid(np.linspace(0.005, 0.1, 20), np.linspace(0, 2 * math.pi, 40, endpoint=False))
    lap, hess = F.laplacian_bound(integer_mode(2), T, H)
    assert np.max(lap / hess) <= 0.02


# ---- samples and grids ----------------------------------------------------------


def test_field_sample_consistent():
    m = integer_mode(2, sigma=2.0, W=1.0)
    s = F.field_sample(m, 0.6, 0.4)
    assert s.speed == pytest.approx(1.2)
    assert s.f == pytest.approx(math.exp(-0.18))
    assert s.e_chi == pytest.approx(1.0 - s.T_kin)
    assert s.U + s.Q + s.T_kin == pytest.approx(1.0, rel=1e-14)
    assert s.map_point.x == forward_map(m, 0.6, 0.4).x


def test_field_grid_nan_on_fold():
    m = integer_mode(2)
    T = np.array([[0.5, 1.0]])
    H = np.array([[0.3, math.pi / 4]])
    g = F.field_grid(m, T, H)
    assert np.isfinite(g["Q"][0, 0]) and np.isnan(g["Q"][0, 1])
    assert set(g) == {"tau", "theta", "x", "y", "phi", "speed", "f", "Q", "U", "T_kin", "e_chi", "jac_inv"}
