"""Verification suite: residuals, oracle comparisons and identities over a domain."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import fields
from .chart import (
    DomainSpec,
    check_mappable,
    fold_free_mask,
    fold_scan,
    forward_map,
    invert_map,
    map_grid,
    map_jacobian,
)
from .errors import LegendrePhaseError, UnmappableModeError
from .modes import ModeSpec, hodograph_residual, linear_pde_residual
from .radial import eval_T, ode_residual

TOL_EXACT = 1e-12
TOL_SERIES = 1e-10
TOL_FD = 1e-4
TOL_DUALITY = 1e-5
TOL_ROUND_TRIP = 1e-9
FD_REL_STEP = 1e-3

RADIAL_CHECKS = ("ode_residual", "linear_pde", "hodograph_pde", "series_vs_closed_form")
MAP_CHECKS = (
    "fold_report", "round_trip", "legendre_duality", "nonlinear_pde", "continuity",
    "quantum_potential", "energy_identity", "potential_U_direct", "laplace_limit",
    "determinism",
)
SUITES = {"full": RADIAL_CHECKS + MAP_CHECKS, "radial": RADIAL_CHECKS, "map": MAP_CHECKS}


@dataclass
class CheckResult:
    name: str
    status: str
    worst_value: float
    tolerance: float
    location: Optional[Tuple[float, float]] = None
    reason: str = ""
    n_points: int = 0

    @property
    def passed(self) -> bool:
        return self.status == "passed"

    @property
    def failed(self) -> bool:
        return self.status == "failed"

    def as_dict(self) -> dict:
        d = asdict(self)
        d["location"] = list(self.location) if self.location is not None else None
        return d


def _result(name, values, tol, locations=None, n=None) -> CheckResult:
    values = np.asarray(values, dtype=float).ravel()
    if values.size == 0:
        return CheckResult(name, "skipped", math.nan, tol, reason="no sample points available")
    finite = np.where(np.isfinite(values), values, np.inf)
    k = int(np.argmax(finite))
    worst = float(finite[k])
    loc = None
    if locations is not None:
        loc = (float(locations[k][0]), float(locations[k][1]))
    status = "passed" if worst <= tol else "failed"
    return CheckResult(name, status, worst, tol, loc, n_points=int(n or values.size))


def _skip(name, tol, reason) -> CheckResult:
    return CheckResult(name, "skipped", math.nan, tol, reason=reason)


def _rel(a, b, floor=0.0):
    return abs(a - b) / max(abs(b), floor, 1e-300)


def series_tolerance(mode: ModeSpec) -> float:
    return TOL_EXACT if mode.radial.terminating else TOL_SERIES


def sample_points(mode: ModeSpec, dom: DomainSpec, count: int = 50, seed: int = 0,
                  inner: float = 0.15) -> List[Tuple[float, float, float]]:
    """Deterministic interior points inside the fold-free part of ``dom``.

    Returns (tau, theta, d) triples where d is the radial distance to the
    first sign change of jac_inv in that theta column (inf if none).
    """
    mask = fold_free_mask(mode, dom, margin=2)
    raw = fold_free_mask(mode, dom, margin=0)
    taus, thetas = dom.taus(), dom.thetas()
    TAU, THETA = dom.mesh()
    counts = raw.sum(axis=0)
    edge = np.array([taus[c] if c < len(taus) else np.inf for c in counts])
    ok = mask & (TAU >= inner * dom.tau0)
    if not dom.full_turn:
        dth = thetas[1] - thetas[0]
        ok &= (THETA >= 2 * dth) & (THETA <= dom.theta0 - 2 * dth)
    idx = np.flatnonzero(ok.ravel())
    if idx.size == 0:
        return []
    rng = np.random.default_rng(seed)
    pick = np.sort(rng.choice(idx, size=min(count, idx.size), replace=False))
    out = []
    for k in pick:
        i, j = divmod(int(k), dom.n_theta)
        out.append((float(taus[i]), float(thetas[j]), float(edge[j] - taus[i])))
    return out


def _jacobian_smin(mode, tau, theta) -> float:
    _, J = map_jacobian(mode, tau, theta)
    J = J @ np.diag([1.0, 1.0 / tau])
    return float(np.linalg.svd(J, compute_uv=False)[-1])


def local_step(mode: ModeSpec, tau: float, theta: float, rel: float = FD_REL_STEP,
               fold_distance: float = math.inf) -> float:
    """Physical step moving the preimage by about ``rel * min(tau, fold_distance)``."""
    return rel * min(tau, fold_distance) * _jacobian_smin(mode, tau, theta)


# ---- individual checks -----------------------------------------------------------


def check_ode(mode, dom):
    tol = series_tolerance(mode)
    if mode.degenerate is not None:
        taus = np.linspace(dom.tau_min, dom.tau0, 200)
        return _result("ode_residual", np.zeros_like(taus), tol)
    taus = np.linspace(dom.tau_min, dom.tau0, 200)
    res = np.abs(ode_residual(mode.radial, taus, scaled=True))
    return _result("ode_residual", res, tol, [(t, 0.0) for t in taus])


def _pde_grid(mode, dom):
    sub = DomainSpec(dom.tau0, dom.theta0, 40, 80, dom.tau_min)
    return sub.mesh()


def check_linear_pde(mode, dom):
    TAU, THETA = _pde_grid(mode, dom)
    res = np.abs(linear_pde_residual(mode, TAU, THETA, scaled=True))
    return _result("linear_pde", res, series_tolerance(mode), list(zip(TAU.ravel(), THETA.ravel())))


def check_hodograph_pde(mode, dom):
    TAU, THETA = _pde_grid(mode, dom)
    res = np.abs(hodograph_residual(mode, TAU, THETA, scaled=True))
    return _result("hodograph_pde", res, series_tolerance(mode), list(zip(TAU.ravel(), THETA.ravel())))


def closed_form_discrepancy(sol, taus):
    """|c * series - closed| divided by c * sum_s |b_s| tau^(nu+2s) pointwise."""
    taus = np.asarray(taus, dtype=float)
    c = sol.normalization
    series = c * eval_T(sol, taus, "series")
    closed = eval_T(sol, taus, "closed")
    abs_coeffs = np.abs(sol.float_coeffs)
    scale = abs(c) * np.polynomial.polynomial.polyval(taus * taus, abs_coeffs) * taus ** sol.nu
    return np.abs(series - closed) / np.where(scale > 0, scale, 1.0)


def check_series_closed(mode, dom):
    sol = mode.radial
    if sol.closed_form is None:
        return _skip("series_vs_closed_form", TOL_EXACT, "mode has no Laguerre closed form")
    lo = 0.0 if sol.nu >= 0 else dom.tau_min
    taus = np.linspace(lo, max(dom.tau0, 4.0), 200)
    d = closed_form_discrepancy(sol, taus)
    return _result("series_vs_closed_form", d, TOL_EXACT, [(t, 0.0) for t in taus])


def check_fold_report(mode, dom, report):
    consistent = report.has_fold == bool(report.fold_points) and report.single_valued == (not report.has_fold)
    r = CheckResult("fold_report", "passed" if consistent else "failed", 0.0 if consistent else 1.0, 0.0,
                    n_points=dom.n_tau * dom.n_theta)
    r.reason = (f"has_fold={report.has_fold}; fold points={len(report.fold_points)}; "
                f"suggested tau0={report.suggested_tau0:.6g}")
    return r


def check_round_trip(mode, dom, pts):
    vals = []
    for t, h, _ in pts:
        p = forward_map(mode, t, h)
        t2, h2 = invert_map(mode, p.x, p.y, (t * 1.02, h + 0.02))
        vals.append(abs(t2 - t) / t + abs(h2 - h) / max(abs(h), 1.0))
    return _result("round_trip", vals, TOL_ROUND_TRIP, pts)


def check_duality(mode, dom, pts):
    vals = []
    for t, h, d in pts:
        p = forward_map(mode, t, h)
        step = local_step(mode, t, h, fold_distance=d)
        gx, gy = fields.phase_gradient_fd(mode, p.x, p.y, step, (t, h))
        xi, eta = fields.hodograph_point(mode, t, h)
        vals.append(math.hypot(gx - xi, gy - eta) / math.hypot(xi, eta))
    return _result("legendre_duality", vals, TOL_DUALITY, pts)


def check_nonlinear(mode, dom, pts):
    """Residual over max(|summand|, ||Hess Phi||_F); summands vanish on symmetry lines."""
    vals = []
    for t, h, d in pts:
        p = forward_map(mode, t, h)
        terms = fields.nonlinear_pde_terms_fd(mode, p.x, p.y, local_step(mode, t, h, fold_distance=d), (t, h))
        hess = float(fields.laplacian_bound(mode, t, h)[1])
        vals.append(abs(sum(terms)) / max(max(abs(x) for x in terms), hess))
    return _result("nonlinear_pde", vals, TOL_FD, pts)


def check_continuity(mode, dom, pts):
    """Residual over max(|summand|, |f v| / L) with L the local map length per unit tau."""
    vals = []
    for t, h, d in pts:
        p = forward_map(mode, t, h)
        dx, dy = fields.continuity_terms_fd(mode, p.x, p.y, local_step(mode, t, h, fold_distance=d), (t, h))
        flux = float(fields.density(mode, t)) * mode.sigma * t
        natural = flux / (t * _jacobian_smin(mode, t, h))
        vals.append(abs(dx + dy) / max(abs(dx), abs(dy), natural))
    return _result("continuity", vals, TOL_FD, pts)


def check_quantum(mode, dom, pts):
    qa = np.array([float(fields.quantum_potential_analytic(mode, t, h)) for t, h, _ in pts])
    floor = 1e-6 * float(np.max(np.abs(qa))) if qa.size else 0.0
    vals = []
    for (t, h, d), q in zip(pts, qa):
        p = forward_map(mode, t, h)
        qf = fields.quantum_potential_fd(mode, p.x, p.y, local_step(mode, t, h, fold_distance=d), (t, h))
        vals.append(_rel(qf, q, floor))
    return _result("quantum_potential", vals, TOL_FD, pts)


def check_energy(mode, dom, pts):
    TAU, THETA, _, _, _ = map_grid(mode, dom)
    mask = fold_free_mask(mode, dom, margin=2)
    t, h = TAU[mask], THETA[mask]
    Q = fields.quantum_potential_analytic(mode, t, h)
    T_kin, e_chi, U = fields.energies(mode, t, h, Q)
    scale = np.maximum.reduce([np.abs(U), np.abs(Q), np.abs(T_kin), np.full_like(U, abs(mode.W)), np.ones_like(U)])
    vals = np.abs(U + Q + T_kin - mode.W) / scale
    return _result("energy_identity", vals, TOL_EXACT, list(zip(t, h)))


def check_U_direct(mode, dom, pts):
    if mode.alpha_sign != -1:
        return _skip("potential_U_direct", TOL_FD,
                     "U + Q + T_kin = W via the Schroedinger route needs alpha = -hbar/2m")
    vals = []
    Us = []
    for t, h, d in pts:
        p = forward_map(mode, t, h)
        U = float(fields.energies(mode, t, h)[2])
        Ud = fields.potential_U_direct(mode, p.x, p.y, local_step(mode, t, h, fold_distance=d), (t, h))
        Us.append(U)
        vals.append((Ud, U))
    floor = 1e-6 * max(abs(u) for u in Us) if Us else 0.0
    return _result("potential_U_direct", [_rel(a, b, floor) for a, b in vals], TOL_FD, pts)


def check_laplace(mode, dom):
    TAU, THETA, _, _, _ = map_grid(mode, dom)
    mask = fold_free_mask(mode, dom, margin=0)
    t, h = TAU[mask], THETA[mask]
    lap, hess = fields.laplacian_bound(mode, t, h)
    vals = lap / (2 * t * t * hess)
    return _result("laplace_limit", vals, 1.0, list(zip(t, h)))


def check_determinism(mode, dom):
    TAU, THETA = dom.mesh()
    a = fields.field_grid(mode, TAU, THETA)
    b = fields.field_grid(mode, TAU, THETA)
    same = all(np.array_equal(a[k], b[k], equal_nan=True) for k in a)
    return CheckResult("determinism", "passed" if same else "failed", 0.0 if same else 1.0, 0.0,
                       n_points=TAU.size)


# ---- orchestration ---------------------------------------------------------------


def _select(suite) -> Tuple[str, ...]:
    if isinstance(suite, str):
        if suite in SUITES:
            return SUITES[suite]
        suite = [suite]
    names = tuple(suite)
    unknown = [n for n in names if n not in SUITES["full"]]
    if unknown:
        raise ValueError(f"unknown checks: {unknown}")
    # fixed report order regardless of request order
    return tuple(n for n in SUITES["full"] if n in names)


def run_suite(mode: ModeSpec, dom: DomainSpec, suite="full", n_points: int = 50,
              seed: int = 0) -> List[CheckResult]:
    """Run the selected checks; failures are reported, never raised."""
    names = _select(suite)
    out: List[CheckResult] = []
    radial = {
        "ode_residual": check_ode, "linear_pde": check_linear_pde,
        "hodograph_pde": check_hodograph_pde, "series_vs_closed_form": check_series_closed,
    }
    for name in names:
        if name in radial:
            out.append(_guard(name, lambda f=radial[name]: f(mode, dom)))

    map_names = [n for n in names if n in MAP_CHECKS]
    if not map_names:
        return out
    try:
        check_mappable(mode)
    except UnmappableModeError as exc:
        out.extend(_skip(n, _default_tol(n), str(exc)) for n in map_names)
        return out

    report = fold_scan(mode, dom)
    pts = sample_points(mode, dom, n_points, seed)
    table: Dict[str, Callable[[], CheckResult]] = {
        "fold_report": lambda: check_fold_report(mode, dom, report),
        "round_trip": lambda: check_round_trip(mode, dom, pts),
        "legendre_duality": lambda: check_duality(mode, dom, pts),
        "nonlinear_pde": lambda: check_nonlinear(mode, dom, pts),
        "continuity": lambda: check_continuity(mode, dom, pts),
        "quantum_potential": lambda: check_quantum(mode, dom, pts),
        "energy_identity": lambda: check_energy(mode, dom, pts),
        "potential_U_direct": lambda: check_U_direct(mode, dom, pts),
        "laplace_limit": lambda: check_laplace(mode, dom),
        "determinism": lambda: check_determinism(mode, dom),
    }
    for name in map_names:
        out.append(_guard(name, table[name]))
    return out


def _default_tol(name: str) -> float:
    return {
        "fold_report": 0.0, "round_trip": TOL_ROUND_TRIP, "legendre_duality": TOL_DUALITY,
        "energy_identity": TOL_EXACT, "laplace_limit": 1.0, "determinism": 0.0,
    }.get(name, TOL_FD)


def _guard(name, fn) -> CheckResult:
    try:
        return fn()
    except LegendrePhaseError as exc:
        return CheckResult(name, "failed", math.inf, _default_tol(name),
                           reason=f"{type(exc).__name__}: {exc}")


def report_dict(mode: ModeSpec, dom: DomainSpec, results: Sequence[CheckResult]) -> dict:
    fold = None
    try:
        check_mappable(mode)
        r = fold_scan(mode, dom)
        fold = {"has_fold": r.has_fold, "n_fold_points": len(r.fold_points),
                "single_valued": r.single_valued, "suggested_tau0": r.suggested_tau0}
    except UnmappableModeError:
        pass
    return {
        "mode": {"lambda": mode.lam, "nu": mode.radial.nu, "A": mode.A, "B": mode.B,
                 "sigma": mode.sigma, "alpha": mode.alpha, "mass": mode.mass,
                 "C": mode.C_norm, "W": mode.W},
        "domain": {"tau0": dom.tau0, "theta0": dom.theta0, "n_tau": dom.n_tau,
                   "n_theta": dom.n_theta, "tau_min": dom.tau_min},
        "fold": fold,
        "summary": {
            "passed": sum(r.status == "passed" for r in results),
            "failed": sum(r.status == "failed" for r in results),
            "skipped": sum(r.status == "skipped" for r in results),
        },
        "checks": [r.as_dict() for r in results],
    }


def report_json(mode: ModeSpec, dom: DomainSpec, results: Sequence[CheckResult]) -> str:
    return json.dumps(report_dict(mode, dom, results), indent=2, allow_nan=True) + "\n"
