"""Generalized Laguerre polynomials L_n^(g)(t) with real upper parameter."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError


@dataclass(frozen=True)
class LaguerrePoly:
    degree: int
    upper: float

    def __post_init__(self):
        if int(self.degree) != self.degree or self.degree < 0:
            raise InvalidParameterError(f"degree must be a nonnegative integer, got {self.degree!r}")
        object.__setattr__(self, "degree", int(self.degree))
        object.__setattr__(self, "upper", float(self.upper))

    def __call__(self, t):
        return laguerre_eval(self, t)


def laguerre_eval(p: LaguerrePoly, t):
    """Evaluate L_n^(g)(t) by the ascending three-term recurrence in degree.

    Accepts scalars or numpy arrays for ``t``.
    """
    n, g = p.degree, p.upper
    t = np.asarray(t, dtype=float)
    prev = np.ones_like(t)
    if n == 0:
        return prev[()]
    cur = 1.0 + g - t
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + g - t) * cur - (k + g) * prev) / (k + 1)
    return cur[()]


def laguerre_deriv(p: LaguerrePoly, t, k: int):
    """k-th derivative via d^k/dt^k L_n^(g) = (-1)^k L_{n-k}^(g+k).

    Past the degree the derivative is identically zero.
    """
    if k < 1:
        raise InvalidParameterError("derivative order must be positive")
    if k > p.degree:
        return np.zeros_like(np.asarray(t, dtype=float))[()]
    sign = -1.0 if k % 2 else 1.0
    return sign * laguerre_eval(LaguerrePoly(p.degree - k, p.upper + k), t)


def laguerre_at_zero(n: int, g: float) -> float:
    """L_n^(g)(0) = C(n + g, n), written as a finite product.

    The product form equals Gamma(n+g+1) / (Gamma(n+1) Gamma(g+1)) and stays
    finite for negative non-integer g.
    """
    value = 1.0
    for i in range(1, n + 1):
        value *= (g + i) / i
    return value
