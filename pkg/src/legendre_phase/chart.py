"""Inverse Legendre map (tau, theta) -> (x, y), fold detection and Newton inversion."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .errors import (
    InvalidParameterError,
    InversionError,
    NearFoldError,
    UnmappableModeError,
)
from .modes import ModeSpec, barred_gradient, barred_second, omega_polar

FOLD_RTOL = 1e-10


@dataclass(frozen=True)
class DomainSpec:
    """Parameter region 0 < tau < tau0, 0 <= theta < theta0 sampled on a grid."""

    tau0: float
    theta0: float = 2 * math.pi
    n_tau: int = 50
    n_theta: int = 200
    tau_min: Optional[float] = None

    def __post_init__(self):
        if self.tau_min is None:
            object.__setattr__(self, "tau_min", 1e-3 * self.tau0)
        if not (0 < self.tau_min < self.tau0):
            raise InvalidParameterError("need 0 < tau_min < tau0")
        if not (0 < self.theta0 <= 2 * math.pi + 1e-15):
            raise InvalidParameterError("need 0 < theta0 <= 2 pi")
        if self.n_tau < 2 or self.n_theta < 2:
            raise InvalidParameterError("grid needs at least 2 points per direction")

    @property
    def full_turn(self) -> bool:
        return math.isclose(self.theta0, 2 * math.pi)

    def taus(self) -> np.ndarray:
        return np.linspace(self.tau_min, self.tau0, self.n_tau)

    def thetas(self) -> np.ndarray:
        return self.theta0 * np.arange(self.n_theta) / self.n_theta

    def mesh(self):
        """(TAU, THETA) arrays of shape (n_tau, n_theta), tau outer."""
        return np.meshgrid(self.taus(), self.thetas(), indexing="ij")


@dataclass(frozen=True)
class MapPoint:
    tau: float
    theta: float
    x: float
    y: float
    jac_inv: float


@dataclass(frozen=True)
class FoldReport:
    has_fold: bool
    fold_points: List[Tuple[float, float]]
    single_valued: bool
    suggested_tau0: float
    min_abs_jac_inv: float = field(default=math.nan)


def is_plane(mode: ModeSpec) -> bool:
    r = mode.radial
    return abs(r.lam) == 1 and r.nu == 1 and r.n_nonzero == 1


def check_mappable(mode: ModeSpec) -> None:
    if mode.degenerate is not None:
        raise UnmappableModeError(
            "degenerate lam = 0 mode: the hodograph Hessian vanishes identically, "
            "the Jacobian of the Legendre transform is unbounded"
        )
    if is_plane(mode):
        raise UnmappableModeError(
            "n = 1 mode is a plane: the Jacobian of the Legendre transform is unbounded"
        )


def map_arrays(mode: ModeSpec, tau, theta):
    """Vectorised (x, y, jac_inv) at parameter points."""
    check_mappable(mode)
    tau = np.asarray(tau, dtype=float)
    theta = np.asarray(theta, dtype=float)
    p = omega_polar(mode, tau, theta)
    a = mode.scale
    gx, gy = barred_gradient(p, tau, theta)
    xx, xy, yy = barred_second(p, tau, theta)
    jac_inv = a ** 4 * (xx * yy - xy * xy)
    return a * gx, a * gy, jac_inv


def forward_map(mode: ModeSpec, tau: float, theta: float) -> MapPoint:
    if tau <= 0:
        raise InvalidParameterError("forward_map needs tau > 0")
    x, y, j = map_arrays(mode, tau, theta)
    return MapPoint(float(tau), float(theta), float(x), float(y), float(j))


def map_grid(mode: ModeSpec, dom: DomainSpec):
    TAU, THETA = dom.mesh()
    X, Y, J = map_arrays(mode, TAU, THETA)
    return TAU, THETA, X, Y, J


def sample_domain(mode: ModeSpec, dom: DomainSpec) -> List[MapPoint]:
    """Row-major (tau outer, theta inner) list of mapped grid points."""
    TAU, THETA, X, Y, J = map_grid(mode, dom)
    return [
        MapPoint(float(t), float(h), float(x), float(y), float(j))
        for t, h, x, y, j in zip(TAU.ravel(), THETA.ravel(), X.ravel(), Y.ravel(), J.ravel())
    ]


def _crossings(J: np.ndarray, wrap: bool):
    """Boolean masks of sign changes along tau edges and theta edges."""
    s = np.sign(J)
    radial = s[1:, :] * s[:-1, :] < 0
    angular = s[:, 1:] * s[:, :-1] < 0
    if wrap:
        angular = np.concatenate([angular, (s[:, :1] * s[:, -1:] < 0)], axis=1)
    return radial, angular


def fold_scan(mode: ModeSpec, dom: DomainSpec) -> FoldReport:
    TAU, THETA, X, Y, J = map_grid(mode, dom)
    taus, thetas = dom.taus(), dom.thetas()
    radial, angular = _crossings(J, dom.full_turn)
    median = float(np.median(np.abs(J)))
    tiny = np.abs(J) < FOLD_RTOL * median

    points = []
    for i, j in zip(*np.nonzero(radial)):
        points.append((0.5 * (taus[i] + taus[i + 1]), float(thetas[j])))
    for i, j in zip(*np.nonzero(angular)):
        t_next = thetas[j + 1] if j + 1 < len(thetas) else dom.theta0
        points.append((float(taus[i]), 0.5 * (thetas[j] + t_next)))
    for i, j in zip(*np.nonzero(tiny)):
        points.append((float(taus[i]), float(thetas[j])))
    points = sorted(set((float(a), float(b)) for a, b in points))

    # largest grid radius whose closed sub-disk has no crossing or tiny value
    bad_row = np.zeros(len(taus), dtype=bool)
    bad_row[1:] |= radial.any(axis=1)
    bad_row |= angular.any(axis=1) | tiny.any(axis=1)
    first_bad = int(np.argmax(bad_row)) if bad_row.any() else len(taus)
    suggested = float(taus[first_bad - 1]) if first_bad > 0 else float(taus[0])

    has_fold = bool(points)
    return FoldReport(has_fold, points, not has_fold, suggested, float(np.min(np.abs(J))))


def fold_free_mask(mode: ModeSpec, dom: DomainSpec, margin: int = 2) -> np.ndarray:
    """Grid points lying inside the sign region of the innermost ring.

    Per theta column, rows before the first sign change of jac_inv (relative
    to the innermost ring) minus ``margin`` rows.
    """
    _, _, _, _, J = map_grid(mode, dom)
    ref = np.sign(J[0, :])
    same = np.sign(J) == ref[None, :]
    ok = np.cumprod(same, axis=0).astype(bool)
    if margin:
        keep = np.zeros_like(ok)
        counts = ok.sum(axis=0)
        for j, c in enumerate(counts):
            keep[: max(c - margin, 0), j] = True
        ok = keep
    return ok


def map_jacobian(mode: ModeSpec, tau: float, theta: float):
    """(x, y) and d(x, y)/d(tau, theta) at a point."""
    p = omega_polar(mode, tau, theta)
    a = mode.scale
    gx, gy = barred_gradient(p, tau, theta)
    xx, xy, yy = barred_second(p, tau, theta)
    c, s = math.cos(theta), math.sin(theta)
    H = np.array([[float(xx), float(xy)], [float(xy), float(yy)]])
    R = np.array([[c, -tau * s], [s, tau * c]])
    return np.array([a * float(gx), a * float(gy)]), a * (H @ R)


def invert_map(
    mode: ModeSpec,
    x: float,
    y: float,
    seed: Tuple[float, float],
    tol: float = 1e-12,
    max_iter: int = 50,
    max_halvings: int = 40,
    tau_max: Optional[float] = None,
) -> Tuple[float, float]:
    """Newton solve of forward_map(tau, theta) = (x, y) starting from ``seed``.

    Steps are halved while the residual grows or tau leaves (0, tau_max].
    """
    check_mappable(mode)
    target = np.array([x, y], dtype=float)
    scale = max(abs(x), abs(y), abs(mode.scale))
    tau, theta = float(seed[0]), float(seed[1])
    if tau <= 0:
        raise InvalidParameterError("seed tau must be positive")

    def admissible(t):
        return t > 0 and (tau_max is None or t <= tau_max)

    xy, J = map_jacobian(mode, tau, theta)
    res = xy - target
    norm = float(np.hypot(*res))
    for _ in range(max_iter):
        if norm <= tol * scale:
            return tau, theta
        det = J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
        if abs(det) <= 1e-14 * float(np.sum(J * J)):
            raise NearFoldError(f"map Jacobian singular near (tau, theta) = ({tau:.6g}, {theta:.6g})")
        step = np.linalg.solve(J, -res)
        lam = 1.0
        for _ in range(max_halvings + 1):
            t_new, h_new = tau + lam * step[0], theta + lam * step[1]
            if admissible(t_new):
                xy_new, J_new = map_jacobian(mode, t_new, h_new)
                res_new = xy_new - target
                norm_new = float(np.hypot(*res_new))
                if norm_new < norm or norm_new <= tol * scale:
                    break
            lam *= 0.5
        else:
            raise InversionError(f"no descent step from (tau, theta) = ({tau:.6g}, {theta:.6g})")
        tau, theta, res, J, norm = t_new, h_new, res_new, J_new, norm_new
    if norm <= tol * scale:
        return tau, theta
    raise InversionError(f"Newton did not converge in {max_iter} iterations (residual {norm:.3e})")
