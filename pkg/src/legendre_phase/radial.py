"""Radial factor T(tau) of a separable hodograph solution.

T solves

    T'' + (1 - tau^2) (T'/tau - lam^2 T / tau^2) = 0

and is stored as a Frobenius series tau^nu * sum_s b_s tau^(2s) with
nu = +|lam| or -|lam|.  When lam is an integer or one of the roots
(1 +- sqrt(1 + 8j)) / 2 the series terminates and also has a closed
form tau^lam L_m^(lam)(tau^2 / 2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Optional, Sequence

import numpy as np

from .errors import (
    DegenerateBranchError,
    ExcludedBranchError,
    InvalidParameterError,
    SeriesTruncationError,
    SingularPointError,
)
from .specfun import LaguerrePoly, laguerre_at_zero, laguerre_deriv, laguerre_eval

# size, relative to its largest summand, below which 2s + nu - nu^2 counts as zero
_TERMINATION_RTOL = 1e-12


@dataclass(frozen=True)
class ClosedForm:
    """tau^power * L_degree^(upper)(tau^2/2), equal to ``scale`` times the series."""

    poly: LaguerrePoly
    power: float
    scale: float


@dataclass(frozen=True)
class RadialSolution:
    lam: float
    nu: float
    b0: float
    coeffs: tuple
    terminating: bool
    closed_form: Optional[ClosedForm] = None
    tail_bound: float = 0.0
    tau_max: Optional[float] = None

    def __post_init__(self):
        if not self.coeffs or self.coeffs[0] == 0 or self.b0 == 0:
            raise InvalidParameterError("leading coefficient b0 must be nonzero")
        if not math.isclose(abs(float(self.nu)), abs(float(self.lam)), rel_tol=0, abs_tol=1e-14):
            raise InvalidParameterError("indicial exponent must be +|lam| or -|lam|")

    @property
    def float_coeffs(self) -> np.ndarray:
        return np.array([float(b) for b in self.coeffs])

    @property
    def exact(self) -> bool:
        return isinstance(self.coeffs[0], Fraction)

    @property
    def n_nonzero(self) -> int:
        return sum(1 for b in self.coeffs if b != 0)

    @property
    def normalization(self) -> float:
        """c with closed form = c * series; 1 if no closed form is attached."""
        return self.closed_form.scale if self.closed_form else 1.0


@dataclass(frozen=True)
class LambdaJRoot:
    j: int
    sign: str
    value: float


def lambda_j_root(j: int, sign: str = "+") -> LambdaJRoot:
    """Root of 2j - lam^2 + lam = 0 for which the series has j + 1 terms."""
    if int(j) != j or j < 0:
        raise InvalidParameterError("j must be a nonnegative integer")
    sign = _parse_sign(sign)
    root = math.isqrt(1 + 8 * j)
    if root * root == 1 + 8 * j:
        value = float((1 + root) // 2 if sign == "+" else (1 - root) // 2)
    else:
        s = math.sqrt(1 + 8 * j)
        value = (1 + s) / 2 if sign == "+" else (1 - s) / 2
    return LambdaJRoot(int(j), sign, value)


def _parse_sign(branch) -> str:
    if branch in ("+", 1, +1.0, "plus"):
        return "+"
    if branch in ("-", -1, -1.0, "minus"):
        return "-"
    raise InvalidParameterError(f"branch must be '+' or '-', got {branch!r}")


def _is_integral(x) -> bool:
    return float(x).is_integer()


def build_series(
    lam,
    branch="+",
    b0=1.0,
    max_terms: int = 400,
    tail_tol: float = 1e-16,
    tau_max: float = 4.0,
    exact: bool = False,
    allow_excluded: bool = False,
) -> RadialSolution:
    """Generate b_0, b_1, ... from b_{s+1} = b_s (2s + nu - nu^2) / (4 (s+1) (s+nu+1)).

    A terminating series keeps its first zero coefficient.  For a
    non-terminating one, terms are added until the geometric bound on the
    remaining tail at ``tau_max`` falls below ``tail_tol`` times the largest
    non-constant term.  ``exact`` uses rational arithmetic when ``lam`` is rational.
    ``allow_excluded`` admits nu = -1/2 (solution singular at tau = 0).
    """
    sign = _parse_sign(branch)
    if b0 == 0:
        raise InvalidParameterError("b0 must be nonzero")
    if max_terms < 1:
        raise InvalidParameterError("max_terms must be positive")

    if 0 < abs(float(lam)) < 1e-300:
        # b_s for s >= 1 scale with nu and would underflow into subnormals
        raise InvalidParameterError("0 < |lam| < 1e-300 is below the usable float range")

    use_exact = exact and (isinstance(lam, Rational) or _is_integral(lam))
    if use_exact:
        lam_q = Fraction(lam) if isinstance(lam, Rational) else Fraction(int(lam))
        nu = abs(lam_q) if sign == "+" else -abs(lam_q)
        b = Fraction(b0)
    else:
        nu = abs(float(lam)) if sign == "+" else -abs(float(lam))
        b = float(b0)

    if nu == Fraction(-1, 2):
        if not allow_excluded:
            raise ExcludedBranchError("nu = -1/2 gives a solution singular at tau = 0")

    lam_out = float(lam)
    if nu == 0:
        return RadialSolution(lam_out, 0.0, float(b0), (b,), True, tau_max=tau_max)

    # in float mode nu - nu^2 is formed exactly from the float nu, so each
    # step b_s -> b_{s+1} is correctly rounded even when 2s + nu - nu^2 cancels
    nu_q = nu if use_exact else Fraction(nu)
    c_q = nu_q - nu_q * nu_q
    c = c_q if use_exact else float(c_q)
    coeffs = [b]
    tau2 = float(tau_max) ** 2
    # the tail is compared with the largest non-constant term: for small nu the
    # constant b0 term dominates T but contributes only O(nu) to its derivatives
    max_term = 0.0
    # ratios |b_{s+1}/b_s| tau^2 are decreasing from here on
    s_mono = math.ceil(abs(float(c)) + abs(float(nu)) + 2)
    tail = math.inf
    for s in range(max_terms):
        num_q = 2 * s + c_q
        den_q = 4 * (s + 1) * (s + nu_q + 1)
        num, den = (num_q, den_q) if use_exact else (float(num_q), float(den_q))
        if den == 0 or abs(float(s + nu + 1)) < 1e-14:
            raise DegenerateBranchError(f"denominator s + nu + 1 vanishes at s = {s} (nu = {float(nu)})")
        if num == 0 or (not use_exact and abs(num) <= _TERMINATION_RTOL * max(2 * s, abs(nu), nu * nu)):
            coeffs.append(Fraction(0) if use_exact else 0.0)
            return RadialSolution(lam_out, float(nu), float(b0), tuple(coeffs), True, tau_max=tau_max)
        b = b * num / den
        coeffs.append(b)
        term = abs(float(b)) * tau2 ** (s + 1)
        max_term = max(max_term, term)
        if s + 1 >= s_mono:
            q = abs(float(2 * (s + 1) + c)) * tau2 / (4 * (s + 2) * abs(float(s + 2 + nu)))
            if q < 1:
                tail = term * q / (1 - q)
                if tail <= tail_tol * max_term:
                    return RadialSolution(
                        lam_out, float(nu), float(b0), tuple(coeffs), False,
                        tail_bound=tail / max_term, tau_max=tau_max,
                    )
    raise SeriesTruncationError(
        f"tail bound {tail / max_term:.3e} above {tail_tol:.1e} after {max_terms} terms"
    )


def _falling(x, k: int):
    out = 1
    for i in range(k):
        out = out * (x - i)
    return out


def _check_tau(tau):
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0) or not np.all(np.isfinite(tau)):
        raise InvalidParameterError("tau must be finite and nonnegative")
    return tau


def _series_deriv(sol: RadialSolution, tau, k: int):
    tau = _check_tau(tau)
    # exact falling factorials matter for the vanishing ones (e.g. nu = 2, k = 3)
    nu = Fraction(sol.nu).limit_denominator(10**9) if sol.exact else sol.nu
    cs = [b * _falling(nu + 2 * s, k) for s, b in enumerate(sol.coeffs)]
    cf = np.array([float(x) for x in cs])
    t2 = tau * tau
    acc = np.zeros_like(tau)
    for cval in cf[::-1]:
        acc = acc * t2 + cval
    zero = tau == 0
    if not np.any(zero):
        return (tau ** (sol.nu - k) * acc)[()]
    # at the origin only the tau^0 term survives; negative powers are singular
    at_zero = 0.0
    for s, cval in enumerate(cf):
        e = sol.nu + 2 * s - k
        if cval == 0:
            continue
        if e < 0:
            raise SingularPointError(f"T^({k}) is unbounded at tau = 0 (nu = {sol.nu})")
        if e == 0:
            at_zero += cval
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(zero, at_zero, np.abs(tau) ** (sol.nu - k) * acc)
    return out[()]


def _pow_term(coef, tau, p):
    if coef == 0:
        return 0.0
    if np.any(tau == 0) and p < 0:
        raise SingularPointError("closed form unbounded at tau = 0")
    return coef * tau ** p


def _closed_deriv(sol: RadialSolution, tau, k: int):
    cf = sol.closed_form
    if cf is None:
        raise InvalidParameterError("solution has no closed form")
    tau = _check_tau(tau)
    lam = cf.power
    t = tau * tau / 2
    g = [laguerre_eval(cf.poly, t)] + [laguerre_deriv(cf.poly, t, j) for j in (1, 2, 3)]
    if k == 0:
        out = _pow_term(1.0, tau, lam) * g[0]
    elif k == 1:
        out = _pow_term(lam, tau, lam - 1) * g[0] + _pow_term(1.0, tau, lam + 1) * g[1]
    elif k == 2:
        out = (_pow_term(lam * (lam - 1), tau, lam - 2) * g[0]
               + _pow_term(2 * lam + 1, tau, lam) * g[1]
               + _pow_term(1.0, tau, lam + 2) * g[2])
    else:
        out = (_pow_term(lam * (lam - 1) * (lam - 2), tau, lam - 3) * g[0]
               + _pow_term(3 * lam * lam, tau, lam - 1) * g[1]
               + _pow_term(3 * (lam + 1), tau, lam + 1) * g[2]
               + _pow_term(1.0, tau, lam + 3) * g[3])
    return np.asarray(out)[()]


def eval_T_deriv(sol: RadialSolution, tau, k: int = 0, form: str = "auto"):
    """k-th derivative (k = 0..3) of T.

    ``form`` is "series" (Horner in tau^2), "closed" (the Laguerre form, which
    is c times the series) or "auto": the closed form divided by c when one
    exists, else the series.  The Laguerre recurrence avoids the cancellation
    of the alternating series at large tau.
    """
    if k not in (0, 1, 2, 3):
        raise InvalidParameterError("derivative order must be 0..3")
    if form == "auto":
        cf = sol.closed_form
        if cf is not None and cf.scale != 0:
            return (np.asarray(_closed_deriv(sol, tau, k)) / cf.scale)[()]
        return _series_deriv(sol, tau, k)
    if form == "series":
        return _series_deriv(sol, tau, k)
    if form == "closed":
        return _closed_deriv(sol, tau, k)
    raise InvalidParameterError(f"unknown form {form!r}")


def eval_T(sol: RadialSolution, tau, form: str = "auto"):
    return eval_T_deriv(sol, tau, 0, form)


def eval_T_prime(sol: RadialSolution, tau, form: str = "auto"):
    return eval_T_deriv(sol, tau, 1, form)


def closed_form_integer(n: int, b0=1.0, exact: bool = True) -> RadialSolution:
    """T_n = tau^n L_{n(n-1)/2}^(n)(tau^2/2) for the periodic modes lam = n."""
    if int(n) != n or n < 0:
        raise InvalidParameterError("n must be a positive integer")
    if n == 0:
        raise InvalidParameterError("n = 0 is the degenerate mode; use build_series(0) instead")
    n = int(n)
    sol = build_series(n, "+", b0, exact=exact)
    m = n * (n - 1) // 2
    cf = ClosedForm(LaguerrePoly(m, n), float(n), laguerre_at_zero(m, n) / float(b0))
    return _with_closed(sol, cf)


def closed_form_lambda_j(j: int, sign="+", b0=1.0) -> RadialSolution:
    """T_j = tau^lam_j L_j^(lam_j)(tau^2/2) with lam_j = (1 +- sqrt(1+8j))/2."""
    root = lambda_j_root(j, sign)
    lam = root.value
    if lam == 0:
        sol = build_series(0, "+", b0)
    else:
        sol = build_series(abs(lam), "+" if lam > 0 else "-", b0)
        sol = RadialSolution(lam, sol.nu, sol.b0, sol.coeffs, sol.terminating,
                             tail_bound=sol.tail_bound, tau_max=sol.tau_max)
    cf = ClosedForm(LaguerrePoly(root.j, lam), lam, laguerre_at_zero(root.j, lam) / float(b0))
    return _with_closed(sol, cf)


def _with_closed(sol: RadialSolution, cf: ClosedForm) -> RadialSolution:
    return RadialSolution(sol.lam, sol.nu, sol.b0, sol.coeffs, sol.terminating, cf,
                          sol.tail_bound, sol.tau_max)


def ode_terms(sol: RadialSolution, tau, form: str = "auto"):
    """The three summands T'', (1-tau^2) T'/tau and -(1-tau^2) lam^2 T/tau^2."""
    tau = np.asarray(tau, dtype=float)
    if np.any(tau <= 0):
        raise InvalidParameterError("ode residual needs tau > 0")
    T = eval_T_deriv(sol, tau, 0, form)
    T1 = eval_T_deriv(sol, tau, 1, form)
    T2 = eval_T_deriv(sol, tau, 2, form)
    a = 1 - tau * tau
    return T2, a * T1 / tau, -a * sol.lam ** 2 * T / tau ** 2


def ode_residual(sol: RadialSolution, tau, scaled: bool = False, form: str = "auto"):
    """Residual of the radial equation.

    ``scaled`` divides by the largest of |T''|, |T'|/tau and lam^2 |T|/tau^2,
    the summands before the factor 1 - tau^2 (which vanishes at tau = 1).
    """
    terms = ode_terms(sol, tau, form)
    res = terms[0] + terms[1] + terms[2]
    if scaled:
        tau = np.asarray(tau, dtype=float)
        T = eval_T_deriv(sol, tau, 0, form)
        T1 = eval_T_deriv(sol, tau, 1, form)
        scale = np.maximum.reduce([np.abs(terms[0]), np.abs(T1 / tau), np.abs(sol.lam ** 2 * T / tau ** 2)])
        res = np.where(scale > 0, res / np.where(scale > 0, scale, 1.0), 0.0)
    return np.asarray(res)[()]


def tabulate(sol: RadialSolution, taus: Sequence[float], normalized: bool = True):
    """Rows (tau, T, T') on a grid.

    With ``normalized`` T is in the b0 normalisation (closed form / c);
    otherwise the raw closed form is used when one exists.
    """
    taus = np.asarray(taus, dtype=float)
    form = "auto" if normalized or sol.closed_form is None else "closed"
    return taus, eval_T(sol, taus, form), eval_T_prime(sol, taus, form)
