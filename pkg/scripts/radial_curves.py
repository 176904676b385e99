"""Tabulate T(tau) on [0, 4] for the integer, lambda_j and half-integer families.

Writes one CSV per curve (columns tau, T, T_prime) into --out.
"""
import argparse
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from legendre_phase.cli import RADIAL_COLUMNS, write_csv
from legendre_phase.radial import build_series, closed_form_integer, closed_form_lambda_j, tabulate


@dataclass
class CurveConfig:
    tau_max: float = 4.0
    n_points: int = 401
    tau_min_singular: float = 0.05  # start for nu < 1, where T' is unbounded at 0
    digits: int = 17


def curves():
    for n in range(1, 7):
        yield f"integer_n{n}", closed_form_integer(n)
    for j in (1, 2, 4, 5):
        yield f"lambda_j{j}_plus", closed_form_lambda_j(j, "+")
    for j in (2, 4, 5):
        yield f"lambda_j{j}_minus", closed_form_lambda_j(j, "-")
    for lam in (0.5, 1.5, 2.5, 3.5):
        yield f"half_plus_{lam:g}", build_series(lam, "+", tail_tol=1e-16)
        yield f"half_minus_{lam:g}", build_series(lam, "-", tail_tol=1e-16, allow_excluded=True)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="out/radial")
    ap.add_argument("--raw", action="store_true", help="raw Laguerre normalisation instead of b0 = 1")
    args = ap.parse_args()
    cfg = CurveConfig()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, sol in curves():
        lo = 0.0 if sol.nu >= 1 or sol.nu == 0 else cfg.tau_min_singular
        taus = np.linspace(lo, cfg.tau_max, cfg.n_points)
        t, T, T1 = tabulate(sol, taus, normalized=not args.raw)
        (out / f"{name}.csv").write_text(write_csv(RADIAL_COLUMNS, {"tau": t, "T": T, "T_prime": T1}, cfg.digits))
        inner = T[1:]  # skip tau = 0, where T vanishes for nu > 0
        zeros = t[2:][np.sign(inner[1:]) != np.sign(inner[:-1])]
        print(f"{name:22s} nu={sol.nu:+.6f} terms={len(sol.coeffs):3d} sign changes near {np.round(zeros, 3).tolist()}")


if __name__ == "__main__":
    main()
