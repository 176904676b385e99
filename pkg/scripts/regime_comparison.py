"""|Q| / T_kin for the n=2 mode in the regimes sigma = |alpha| and sigma = 10|alpha|.

Two conventions are printed.  At fixed b0 the ratio is independent of
sigma/|alpha|: the map dilates by |alpha|/sigma and Q picks up exactly the
compensating factor.  At fixed physical size |alpha| b0 / sigma the ratio
falls as (|alpha|/sigma)^2.
"""
import argparse

import numpy as np

from legendre_phase.errors import SingularPotentialError
from legendre_phase.fields import energies, quantum_potential_analytic
from legendre_phase.modes import ModeSpec
from legendre_phase.radial import closed_form_integer


def ratio(mode, tau, theta):
    try:
        Q = float(quantum_potential_analytic(mode, tau, theta))
    except SingularPotentialError:
        return float("nan")
    return abs(Q) / float(energies(mode, tau, theta, Q)[0])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--theta", type=float, default=0.0)
    ap.add_argument("--n", type=int, default=2)
    args = ap.parse_args()
    base = closed_form_integer(args.n)
    print(f"n={args.n} theta={args.theta}")
    print(f"{'tau':>6} {'fixed b0, s=|a|':>16} {'fixed b0, s=10|a|':>18} {'fixed size, s=10|a|':>20}")
    for tau in np.round(np.linspace(0.1, 1.5, 15), 3):
        r1 = ratio(ModeSpec(base, sigma=1.0), tau, args.theta)
        r10 = ratio(ModeSpec(base, sigma=10.0), tau, args.theta)
        r10s = ratio(ModeSpec(base, sigma=10.0).with_b0(10.0), tau, args.theta)
        print(f"{tau:6.3f} {r1:16.6g} {r10:18.6g} {r10s:20.6g}")


if __name__ == "__main__":
    main()
