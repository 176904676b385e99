"""Separable hodograph solutions omega(tau, theta) = T(tau) Theta(theta).

Polar partials come from products of T^(k) and Theta^(k).  Cartesian
partials in the barred variables (xi_bar, eta_bar) = (tau cos, tau sin)
follow from the chain rule and are rescaled to the physical hodograph
variables by powers of a = alpha / sigma, alpha carrying its sign.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from .errors import InvalidParameterError
from .radial import RadialSolution, eval_T_deriv


@dataclass(frozen=True)
class ModeSpec:
    radial: RadialSolution
    A: float = 1.0
    B: float = 0.0
    degenerate: Optional[Tuple[float, float]] = None
    sigma: float = 1.0
    alpha_abs: float = 1.0
    mass: float = 1.0
    C_norm: float = 1.0
    W: float = 0.0
    alpha_sign: int = -1

    def __post_init__(self):
        for name in ("sigma", "alpha_abs", "mass", "C_norm"):
            if not getattr(self, name) > 0:
                raise InvalidParameterError(f"{name} must be positive")
        if self.alpha_sign not in (-1, 1):
            raise InvalidParameterError("alpha_sign must be +1 or -1")
        if self.degenerate is None:
            if self.A == 0 and self.B == 0:
                raise InvalidParameterError("A and B cannot both vanish")
            if self.radial.lam == 0:
                raise InvalidParameterError("lam = 0 needs the degenerate (C1, C2) pair")
        elif self.radial.lam != 0:
            raise InvalidParameterError("degenerate form applies only to lam = 0")

    @property
    def lam(self) -> float:
        return self.radial.lam

    @property
    def alpha(self) -> float:
        return self.alpha_sign * self.alpha_abs

    @property
    def scale(self) -> float:
        """a = alpha / sigma, with sign: xi_bar = a * xi."""
        return self.alpha / self.sigma

    @property
    def hbar(self) -> float:
        return 2.0 * self.mass * self.alpha_abs

    @property
    def beta(self) -> float:
        return 1.0 / self.hbar

    @property
    def integer_lam(self) -> bool:
        return float(self.lam).is_integer()

    def with_b0(self, factor: float) -> "ModeSpec":
        """Same mode with every coefficient of T multiplied by ``factor``."""
        r = self.radial
        coeffs = tuple(c * factor for c in r.coeffs)
        cf = r.closed_form
        if cf is not None:
            cf = replace(cf, scale=cf.scale / factor)
        return replace(self, radial=replace(r, b0=r.b0 * factor, coeffs=coeffs, closed_form=cf))


@dataclass(frozen=True)
class PolarDerivatives:
    w: np.ndarray
    w_t: np.ndarray
    w_h: np.ndarray
    w_tt: np.ndarray
    w_th: np.ndarray
    w_hh: np.ndarray
    w_ttt: np.ndarray
    w_tth: np.ndarray
    w_thh: np.ndarray
    w_hhh: np.ndarray


@dataclass(frozen=True)
class CartesianDerivatives:
    """Second and third partials of omega in the unbarred (xi, eta) variables."""

    xx: np.ndarray
    xy: np.ndarray
    yy: np.ndarray
    xxx: np.ndarray
    xxy: np.ndarray
    xyy: np.ndarray
    yyy: np.ndarray

    @property
    def hessian_det(self):
        return self.xx * self.yy - self.xy ** 2


def theta_eval(mode: ModeSpec, theta):
    """(Theta, Theta', Theta'', Theta''') at ``theta``."""
    theta = np.asarray(theta, dtype=float)
    if mode.degenerate is not None:
        c1, c2 = mode.degenerate
        z = np.zeros_like(theta)
        return (c1 * theta + c2)[()], (z + c1)[()], z[()], z[()]
    lam = mode.lam
    s, c = np.sin(lam * theta), np.cos(lam * theta)
    A, B = mode.A, mode.B
    th0 = A * s + B * c
    th1 = lam * (A * c - B * s)
    return th0[()], th1[()], (-lam ** 2 * th0)[()], (-lam ** 2 * th1)[()]


def _radial_derivs(mode: ModeSpec, tau):
    if mode.degenerate is not None:
        b0 = float(mode.radial.coeffs[0])
        z = np.zeros_like(np.asarray(tau, dtype=float))
        return z + b0, z, z, z
    return [np.asarray(eval_T_deriv(mode.radial, tau, k)) for k in range(4)]


def omega_polar(mode: ModeSpec, tau, theta) -> PolarDerivatives:
    tau = np.asarray(tau, dtype=float)
    if np.any(tau <= 0):
        raise InvalidParameterError("omega_polar needs tau > 0")
    T = _radial_derivs(mode, tau)
    H = [np.asarray(h) for h in theta_eval(mode, theta)]
    return PolarDerivatives(
        w=T[0] * H[0], w_t=T[1] * H[0], w_h=T[0] * H[1],
        w_tt=T[2] * H[0], w_th=T[1] * H[1], w_hh=T[0] * H[2],
        w_ttt=T[3] * H[0], w_tth=T[2] * H[1], w_thh=T[1] * H[2], w_hhh=T[0] * H[3],
    )


def barred_gradient(p: PolarDerivatives, tau, theta):
    """(omega_xi_bar, omega_eta_bar) from the polar gradient."""
    c, s = np.cos(theta), np.sin(theta)
    return p.w_t * c - p.w_h * s / tau, p.w_t * s + p.w_h * c / tau


def barred_second(p: PolarDerivatives, tau, theta):
    """Barred Hessian entries (xx, xy, yy) from the polar partials."""
    c, s = np.cos(theta), np.sin(theta)
    s2, c2 = np.sin(2 * theta), np.cos(2 * theta)
    t, t2 = tau, tau * tau
    xx = p.w_tt * c * c + p.w_hh * s * s / t2 - p.w_th * s2 / t + p.w_t * s * s / t + p.w_h * s2 / t2
    xy = p.w_tt * s2 / 2 - p.w_hh * s2 / (2 * t2) + p.w_th * c2 / t - p.w_t * s2 / (2 * t) - p.w_h * c2 / t2
    yy = p.w_tt * s * s + p.w_hh * c * c / t2 + p.w_th * s2 / t + p.w_t * c * c / t - p.w_h * s2 / t2
    return xx, xy, yy


def barred_third(p: PolarDerivatives, tau, theta):
    """Barred third partials (xxx, xxy, xyy, yyy) from the polar partials."""
    c, s = np.cos(theta), np.sin(theta)
    t, t2, t3 = tau, tau ** 2, tau ** 3
    xxx = (p.w_ttt * c ** 3 - p.w_hhh * s ** 3 / t3
           - 3 * p.w_tth * c * c * s / t + 3 * p.w_thh * c * s * s / t2
           + 3 * p.w_tt * c * s * s / t - 6 * p.w_hh * s * s * c / t3
           + 3 * p.w_th * s * (3 * c * c - 1) / t2 - 3 * p.w_t * s * s * c / t2
           - 2 * p.w_h * s * (4 * c * c - 1) / t3)
    yyy = (p.w_ttt * s ** 3 + p.w_hhh * c ** 3 / t3
           + 3 * p.w_tth * s * s * c / t + 3 * p.w_thh * s * c * c / t2
           + 3 * p.w_tt * s * c * c / t - 6 * p.w_hh * c * c * s / t3
           - 3 * p.w_th * c * (3 * s * s - 1) / t2 - 3 * p.w_t * c * c * s / t2
           + 2 * p.w_h * c * (4 * s * s - 1) / t3)
    xxy = (p.w_ttt * s * c * c + p.w_hhh * s * s * c / t3
           + p.w_tth * c * (1 - 3 * s * s) / t + p.w_thh * s * (3 * s * s - 2) / t2
           + p.w_tt * s * (3 * s * s - 2) / t + 2 * p.w_hh * s * (3 * c * c - 1) / t3
           + p.w_th * c * (7 - 9 * c * c) / t2 + p.w_t * s * (3 * c * c - 1) / t2
           + 2 * p.w_h * c * (4 * c * c - 3) / t3)
    xyy = (p.w_ttt * c * s * s - p.w_hhh * c * c * s / t3
           - p.w_tth * s * (1 - 3 * c * c) / t + p.w_thh * c * (3 * c * c - 2) / t2
           + p.w_tt * c * (3 * c * c - 2) / t + 2 * p.w_hh * c * (3 * s * s - 1) / t3
           + p.w_th * s * (9 * s * s - 7) / t2 + p.w_t * c * (3 * s * s - 1) / t2
           + 2 * p.w_h * s * (3 - 4 * s * s) / t3)
    return xxx, xxy, xyy, yyy


def omega_cartesian(mode: ModeSpec, tau, theta) -> CartesianDerivatives:
    tau = np.asarray(tau, dtype=float)
    theta = np.asarray(theta, dtype=float)
    p = omega_polar(mode, tau, theta)
    a = mode.scale
    xx, xy, yy = barred_second(p, tau, theta)
    xxx, xxy, xyy, yyy = barred_third(p, tau, theta)
    a2, a3 = a * a, a ** 3
    return CartesianDerivatives(
        xx=(a2 * xx)[()], xy=(a2 * xy)[()], yy=(a2 * yy)[()],
        xxx=(a3 * xxx)[()], xxy=(a3 * xxy)[()], xyy=(a3 * xyy)[()], yyy=(a3 * yyy)[()],
    )


def linear_pde_terms(mode: ModeSpec, tau, theta):
    p = omega_polar(mode, tau, theta)
    tau = np.asarray(tau, dtype=float)
    a = 1 - tau * tau
    return p.w_tt, a * p.w_t / tau, a * p.w_hh / tau ** 2


def _scaled(terms):
    res = sum(terms)
    scale = np.maximum.reduce([np.abs(x) for x in terms])
    return np.where(scale > 0, res / np.where(scale > 0, scale, 1.0), 0.0)[()]


def _scaled_floor(terms, floor):
    res = sum(terms)
    scale = np.maximum.reduce([np.abs(x) for x in terms] + [np.abs(floor)])
    return np.where(scale > 0, res / np.where(scale > 0, scale, 1.0), 0.0)[()]


def linear_pde_residual(mode: ModeSpec, tau, theta, scaled: bool = False):
    """Residual of omega_tt + (1 - tau^2)(omega_t / tau + omega_hh / tau^2)."""
    terms = linear_pde_terms(mode, tau, theta)
    if scaled:
        # summands before the factor 1 - tau^2, which vanishes at tau = 1
        p = omega_polar(mode, tau, theta)
        tau = np.asarray(tau, dtype=float)
        return _scaled_floor(terms, np.maximum(np.abs(p.w_t / tau), np.abs(p.w_hh / tau ** 2)))
    return np.asarray(sum(terms))[()]


def hodograph_residual(mode: ModeSpec, tau, theta, scaled: bool = False):
    """Residual of (1 - xb^2) w_yy + 2 xb yb w_xy + (1 - yb^2) w_xx in barred variables."""
    tau = np.asarray(tau, dtype=float)
    theta = np.asarray(theta, dtype=float)
    p = omega_polar(mode, tau, theta)
    xx, xy, yy = barred_second(p, tau, theta)
    xb, yb = tau * np.cos(theta), tau * np.sin(theta)
    terms = ((1 - xb * xb) * yy, 2 * xb * yb * xy, (1 - yb * yb) * xx)
    if scaled:
        # the barred Hessian inherits rounding from its polar constituents
        t, t2 = tau, tau * tau
        mag = (np.abs(p.w_tt) + np.abs(p.w_hh) / t2 + 2 * np.abs(p.w_th) / t
               + np.abs(p.w_t) / t + 2 * np.abs(p.w_h) / t2)
        return _scaled_floor(terms, (1 + t2) * mag)
    return np.asarray(sum(terms))[()]
