"""Physical fields at mapped points: phase, velocity, density, potentials.

All quantities are evaluated from parameter coordinates (tau, theta).  The
``*_fd`` functions are independent finite-difference probes that work in
physical (x, y) and reach the parameter plane through ``invert_map``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .chart import MapPoint, check_mappable, forward_map, invert_map, map_arrays
from .errors import InvalidParameterError, SingularPotentialError
from .modes import ModeSpec, omega_cartesian, theta_eval
from .radial import eval_T_deriv
from .specfun import LaguerrePoly, laguerre_eval

# |jac_inv| below this fraction of the squared Hessian size is treated as a fold
_SINGULAR_RTOL = 1e-12
_INVERT_TOL = 1e-13


@dataclass(frozen=True)
class FieldSample:
    map_point: MapPoint
    phi: float
    speed: float
    vx: float
    vy: float
    f: float
    Q: float
    T_kin: float
    U: float
    e_chi: float


def _T(mode: ModeSpec, tau, k):
    if mode.degenerate is not None:
        b0 = float(mode.radial.coeffs[0])
        return np.zeros_like(np.asarray(tau, dtype=float)) + (b0 if k == 0 else 0.0)
    return np.asarray(eval_T_deriv(mode.radial, tau, k))


def phase(mode: ModeSpec, tau, theta):
    """Phi = Theta(theta) (tau T'(tau) - T(tau))."""
    tau = np.asarray(tau, dtype=float)
    if np.any(tau <= 0):
        raise InvalidParameterError("phase needs tau > 0")
    th = np.asarray(theta_eval(mode, theta)[0])
    return (th * (tau * _T(mode, tau, 1) - _T(mode, tau, 0)))[()]


def phase_laguerre(mode: ModeSpec, tau, theta):
    """Phase from the Laguerre form for integer n, in the series normalisation.

    tau^n [(n-1) L_m^(n)(t) - tau^2 L_{m-1}^(n+1)(t)] Theta / c_n with
    m = n(n-1)/2 and t = tau^2/2.
    """
    cf = mode.radial.closed_form
    if cf is None or not mode.integer_lam or mode.lam < 1:
        raise InvalidParameterError("Laguerre phase form needs an integer closed-form mode")
    n = int(mode.lam)
    m = n * (n - 1) // 2
    tau = np.asarray(tau, dtype=float)
    t = tau * tau / 2
    lower = laguerre_eval(LaguerrePoly(m - 1, n + 1), t) if m >= 1 else 0.0
    bracket = (n - 1) * laguerre_eval(LaguerrePoly(m, n), t) - tau * tau * lower
    th = np.asarray(theta_eval(mode, theta)[0])
    return (tau ** n * bracket * th / cf.scale)[()]


def hodograph_point(mode: ModeSpec, tau, theta):
    """(xi, eta) = grad Phi = (tau cos theta, tau sin theta) / a."""
    a = mode.scale
    return np.asarray(tau * np.cos(theta) / a)[()], np.asarray(tau * np.sin(theta) / a)[()]


def velocity(mode: ModeSpec, tau, theta):
    """<v> = -alpha grad Phi; its modulus is sigma * tau."""
    xi, eta = hodograph_point(mode, tau, theta)
    return (-mode.alpha * xi), (-mode.alpha * eta)


def density(mode: ModeSpec, tau):
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise InvalidParameterError("density needs tau >= 0")
    return (mode.C_norm * np.exp(-tau * tau / 2))[()]


def density_from_velocity(mode: ModeSpec, vx, vy):
    return mode.C_norm * np.exp(-(vx * vx + vy * vy) / (2 * mode.sigma ** 2))


def phase_hessian(mode: ModeSpec, tau, theta):
    """(Phi_xx, Phi_xy, Phi_yy) through the Legendre relations."""
    d = omega_cartesian(mode, tau, theta)
    rho = 1.0 / d.hessian_det
    return rho * d.yy, -rho * d.xy, rho * d.xx


def _q_pieces(mode: ModeSpec, tau, theta):
    check_mappable(mode)
    tau = np.asarray(tau, dtype=float)
    theta = np.asarray(theta, dtype=float)
    d = omega_cartesian(mode, tau, theta)
    xi, eta = hodograph_point(mode, tau, theta)
    wxx, wxy, wyy = d.xx, d.xy, d.yy
    wxxx, wxxy, wxyy, wyyy = d.xxx, d.xxy, d.xyy, d.yyy
    det = wxx * wyy - wxy * wxy
    size = wxx * wxx + 2 * wxy * wxy + wyy * wyy
    if np.any(np.abs(det) <= _SINGULAR_RTOL * size):
        raise SingularPotentialError("Legendre Jacobian unbounded (fold) at requested point")
    rho = 1.0 / det

    # |grad tau^2|^2 / 4 = a^4 rho^2 G
    G = (xi * xi * wyy * wyy + eta * eta * wxx * wxx
         - 2 * xi * eta * wxy * (wxx + wyy) + wxy * wxy * (xi * xi + eta * eta))

    # lap tau^2 = 2 a^2 rho^2 L
    lap_w = wxx + wyy
    p1 = wyyy * wxx + wxxy * wyy - 2 * wxy * wxyy
    p2 = wxxx * wyy + wxyy * wxx - 2 * wxy * wxxy
    L = (wyy * wyy + 2 * wxy * wxy + wxx * wxx
         + xi * (wxyy * (wyy - wxx) + wxy * (wxxy - wyyy))
         + eta * (wxxy * (wxx - wyy) + wxy * (wxyy - wxxx))
         + rho * xi * p1 * wxy * lap_w
         + rho * eta * p2 * wxy * lap_w
         - rho * xi * p2 * (wyy * wyy + wxy * wxy)
         - rho * eta * p1 * (wxx * wxx + wxy * wxy))
    a2 = mode.scale ** 2
    lap_tau2 = 2 * a2 * rho * rho * L
    grad_tau2_sq_quarter = a2 * a2 * rho * rho * G
    return lap_tau2, grad_tau2_sq_quarter


def quantum_potential_analytic(mode: ModeSpec, tau, theta):
    """Q = -(alpha / 4 beta) (lap tau^2 - |grad tau^2|^2 / 4) from omega derivatives."""
    lap, grad_q = _q_pieces(mode, tau, theta)
    return np.asarray(-(mode.alpha / (4 * mode.beta)) * (lap - grad_q))[()]


def energies(mode: ModeSpec, tau, theta, Q=None):
    """(T_kin, e_chi, U) with e_chi = W - T_kin and U = e_chi - Q."""
    tau = np.asarray(tau, dtype=float)
    T_kin = 0.5 * mode.mass * mode.sigma ** 2 * tau * tau
    e_chi = mode.W - T_kin
    if Q is None:
        Q = quantum_potential_analytic(mode, tau, theta)
    return T_kin[()], e_chi[()], np.asarray(e_chi - Q)[()]


def field_sample(mode: ModeSpec, tau: float, theta: float) -> FieldSample:
    mp = forward_map(mode, tau, theta)
    vx, vy = velocity(mode, tau, theta)
    Q = float(quantum_potential_analytic(mode, tau, theta))
    T_kin, e_chi, U = energies(mode, tau, theta, Q)
    return FieldSample(mp, float(phase(mode, tau, theta)), mode.sigma * tau, float(vx), float(vy),
                       float(density(mode, tau)), Q, float(T_kin), float(U), float(e_chi))


def field_grid(mode: ModeSpec, TAU, THETA):
    """All exported fields on parameter arrays; Q is NaN where the map folds."""
    X, Y, J = map_arrays(mode, TAU, THETA)
    Q = np.full(np.shape(TAU), np.nan)
    flat_t, flat_h = np.ravel(TAU), np.ravel(THETA)
    try:
        Q = np.reshape(quantum_potential_analytic(mode, TAU, THETA), np.shape(TAU))
    except SingularPotentialError:
        q = np.empty(flat_t.shape)
        for k, (t, h) in enumerate(zip(flat_t, flat_h)):
            try:
                q[k] = quantum_potential_analytic(mode, t, h)
            except SingularPotentialError:
                q[k] = np.nan
        Q = q.reshape(np.shape(TAU))
    T_kin, e_chi, U = energies(mode, TAU, THETA, Q)
    return {
        "tau": TAU, "theta": THETA, "x": X, "y": Y,
        "phi": phase(mode, TAU, THETA), "speed": mode.sigma * TAU,
        "f": density(mode, TAU), "Q": Q, "U": U, "T_kin": T_kin, "e_chi": e_chi,
        "jac_inv": J,
    }


# ---- finite-difference probes in physical space ---------------------------------


def natural_length(mode: ModeSpec) -> float:
    """Characteristic length |a| * |b0| of the mapped picture."""
    return abs(mode.scale) * abs(float(mode.radial.coeffs[0]))


def _preimage(mode, x, y, seed, tau_max=None):
    return invert_map(mode, x, y, seed, tol=_INVERT_TOL, tau_max=tau_max)


def _phase_xy(mode, x, y, seed):
    t, h = _preimage(mode, x, y, seed)
    return float(phase(mode, t, h))


def _sqrt_f_xy(mode, x, y, seed):
    t, _ = _preimage(mode, x, y, seed)
    return math.sqrt(float(density(mode, t)))


def _lap_sqrt_f_ratio(mode, x, y, h, seed):
    u = lambda dx, dy: _sqrt_f_xy(mode, x + dx, y + dy, seed)
    uc = u(0, 0)
    lap = (u(h, 0) + u(-h, 0) + u(0, h) + u(0, -h) - 4 * uc) / (h * h)
    return lap / uc


def quantum_potential_fd(mode: ModeSpec, x: float, y: float, h: float,
                         seed: Tuple[float, float]) -> float:
    """(alpha / beta) lap(sqrt f) / sqrt f with a 5-point Laplacian in (x, y)."""
    return (mode.alpha / mode.beta) * _lap_sqrt_f_ratio(mode, x, y, h, seed)


def phase_gradient_fd(mode: ModeSpec, x: float, y: float, h: float, seed):
    ph = lambda dx, dy: _phase_xy(mode, x + dx, y + dy, seed)
    return ((ph(h, 0) - ph(-h, 0)) / (2 * h), (ph(0, h) - ph(0, -h)) / (2 * h))


def potential_U_direct(mode: ModeSpec, x: float, y: float, h: float, seed,
                       ) -> float:
    """U = -(1/beta) {phi_t + alpha [lap sqrt f / sqrt f - |grad phi|^2]}.

    phi = Phi / 2 and phi_t = -W / hbar; all spatial derivatives are
    central differences through ``invert_map``.
    """
    ratio = _lap_sqrt_f_ratio(mode, x, y, h, seed)
    gx, gy = phase_gradient_fd(mode, x, y, h, seed)
    grad_phi_sq = (gx * gx + gy * gy) / 4
    phi_t = -mode.W / mode.hbar
    return -(1.0 / mode.beta) * (phi_t + mode.alpha * (ratio - grad_phi_sq))


def nonlinear_pde_terms_fd(mode: ModeSpec, x: float, y: float, h: float, seed):
    """Summands of (1 - a^2 Px^2) Pxx - 2 a^2 Px Py Pxy + (1 - a^2 Py^2) Pyy by FD."""
    ph = lambda i, j: _phase_xy(mode, x + i * h, y + j * h, seed)
    c = ph(0, 0)
    e, w, n, s = ph(1, 0), ph(-1, 0), ph(0, 1), ph(0, -1)
    px, py = (e - w) / (2 * h), (n - s) / (2 * h)
    pxx, pyy = (e - 2 * c + w) / h ** 2, (n - 2 * c + s) / h ** 2
    pxy = (ph(1, 1) - ph(-1, 1) - ph(1, -1) + ph(-1, -1)) / (4 * h * h)
    a2 = mode.scale ** 2
    return ((1 - a2 * px * px) * pxx, -2 * a2 * px * py * pxy, (1 - a2 * py * py) * pyy)


def continuity_terms_fd(mode: ModeSpec, x: float, y: float, h: float, seed):
    """(d(f vx)/dx, d(f vy)/dy) by central differences; their sum should vanish."""
    def flux(dx, dy):
        t, th = _preimage(mode, x + dx, y + dy, seed)
        vx, vy = velocity(mode, t, th)
        f = float(density(mode, t))
        return f * float(vx), f * float(vy)
    return ((flux(h, 0)[0] - flux(-h, 0)[0]) / (2 * h),
            (flux(0, h)[1] - flux(0, -h)[1]) / (2 * h))


def laplacian_bound(mode: ModeSpec, tau, theta):
    """(|lap Phi|, ||Hess Phi||_F) from the analytic phase Hessian."""
    pxx, pxy, pyy = phase_hessian(mode, tau, theta)
    return np.abs(pxx + pyy), np.sqrt(pxx * pxx + 2 * pxy * pxy + pyy * pyy)
