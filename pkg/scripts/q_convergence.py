"""Convergence of the finite-difference quantum potential towards the analytic one."""
import argparse

import numpy as np

from legendre_phase.chart import forward_map
from legendre_phase.fields import natural_length, quantum_potential_analytic, quantum_potential_fd
from legendre_phase.modes import ModeSpec
from legendre_phase.radial import closed_form_integer


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--sigma", type=float, default=1.0)
    ap.add_argument("--tau", type=float, default=0.5)
    ap.add_argument("--theta", type=float, default=0.9)
    args = ap.parse_args()
    mode = ModeSpec(closed_form_integer(args.n), sigma=args.sigma)
    p = forward_map(mode, args.tau, args.theta)
    qa = float(quantum_potential_analytic(mode, args.tau, args.theta))
    L = natural_length(mode)
    print(f"analytic Q = {qa:.15g}")
    prev = None
    for rel in (1e-1, 5e-2, 2e-2, 1e-2, 5e-3, 2.5e-3, 1e-3, 5e-4):
        h = rel * L
        err = abs(quantum_potential_fd(mode, p.x, p.y, h, (args.tau, args.theta)) - qa) / abs(qa)
        order = "" if prev is None else f"  order {np.log(prev[1] / err) / np.log(prev[0] / h):.2f}"
        print(f"h = {rel:8.1e} L  rel err {err:.3e}{order}")
        prev = (h, err)


if __name__ == "__main__":
    main()
