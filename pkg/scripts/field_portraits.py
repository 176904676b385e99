"""Export mapped field grids and fold reports for the n=2 and n=3 modes.

Covers the folded disks of radius 2 and their single-valued restrictions
(the disk of radius 0.8 for n=2, the half-disk sector for n=3).
"""
import argparse
import json
import math
from pathlib import Path

from legendre_phase.chart import DomainSpec, fold_scan
from legendre_phase.cli import MAP_COLUMNS, write_csv
from legendre_phase.fields import field_grid
from legendre_phase.modes import ModeSpec
from legendre_phase.radial import closed_form_integer

CASES = [
    ("n2_disk2", 2, DomainSpec(2.0, 2 * math.pi)),
    ("n2_disk08", 2, DomainSpec(0.8, 2 * math.pi)),
    ("n3_disk2", 3, DomainSpec(2.0, 2 * math.pi)),
    ("n3_sector08", 3, DomainSpec(0.8, math.pi)),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="out/fields")
    ap.add_argument("--sigma", type=float, default=1.0)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, n, dom in CASES:
        mode = ModeSpec(closed_form_integer(n), sigma=args.sigma)
        TAU, THETA = dom.mesh()
        grid = field_grid(mode, TAU, THETA)
        (out / f"{name}.csv").write_text(write_csv(MAP_COLUMNS, grid, 17))
        r = fold_scan(mode, dom)
        (out / f"{name}_fold.json").write_text(json.dumps(
            {"has_fold": r.has_fold, "suggested_tau0": r.suggested_tau0,
             "fold_points": [list(p) for p in r.fold_points]}, indent=1))
        print(f"{name:12s} fold={r.has_fold!s:5s} fold points={len(r.fold_points):4d} "
              f"suggested tau0={r.suggested_tau0:.4f} min|jac_inv|={r.min_abs_jac_inv:.3e}")


if __name__ == "__main__":
    main()
