"""Command-line front end: radial tables, field maps, fold scans and verification reports.

Configuration is one JSON document with ``mode``, ``domain``, ``series`` and
``output`` blocks.  Exit codes: 0 ok, 1 config error, 2 unmappable mode,
3 strict verification failure.
"""
from __future__ import annotations

import argparse
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence

import numpy as np

from . import verify
from .chart import DomainSpec, check_mappable, fold_scan
from .errors import LegendrePhaseError, UnmappableModeError
from .fields import field_grid
from .modes import ModeSpec
from .radial import (
    build_series,
    closed_form_integer,
    closed_form_lambda_j,
    tabulate,
)

log = logging.getLogger("legendre_phase")

EXIT_OK, EXIT_CONFIG, EXIT_UNMAPPABLE, EXIT_STRICT = 0, 1, 2, 3

MAP_COLUMNS = ("tau", "theta", "x", "y", "phi", "speed", "f", "Q", "U", "T_kin", "e_chi", "jac_inv")
RADIAL_COLUMNS = ("tau", "T", "T_prime")
LAMBDA_KINDS = {"integer": "n", "lambda_j_plus": "j", "lambda_j_minus": "j", "real": "lambda"}


class ConfigError(Exception):
    pass


@dataclass
class ModeBlock:
    lambda_kind: str = "integer"
    n: Optional[int] = None
    j: Optional[int] = None
    lam: Optional[float] = None
    A: float = 1.0
    B: float = 0.0
    C1: float = 1.0
    C2: float = 0.0
    b0: float = 1.0
    sigma: float = 1.0
    alpha_abs: float = 1.0
    mass: float = 1.0
    C_norm: float = 1.0
    W: float = 0.0
    alpha_sign: int = -1


@dataclass
class DomainBlock:
    tau0: float = 0.8
    theta0: float = 2 * math.pi
    n_tau: int = 50
    n_theta: int = 200
    tau_min: Optional[float] = None


@dataclass
class SeriesBlock:
    max_terms: int = 400
    tail_tol: float = 1e-16
    tau_max: float = 4.0


@dataclass
class OutputBlock:
    format: str = "csv"
    path: Optional[str] = None
    precision: int = 17


@dataclass
class RunConfig:
    mode: ModeBlock = field(default_factory=ModeBlock)
    domain: DomainBlock = field(default_factory=DomainBlock)
    series: SeriesBlock = field(default_factory=SeriesBlock)
    output: OutputBlock = field(default_factory=OutputBlock)


def _block(cls, raw: Any, name: str, rename: Dict[str, str] = None):
    if raw is None:
        return cls()
    if not isinstance(raw, dict):
        raise ConfigError(f"'{name}' block must be an object")
    rename = rename or {}
    kwargs = {}
    known = set(cls.__dataclass_fields__)
    for key, value in raw.items():
        key = rename.get(key, key)
        if key not in known:
            raise ConfigError(f"unknown key '{key}' in '{name}' block")
        kwargs[key] = value
    return cls(**kwargs)


def _number(value, name, integer=False, allow_none=False):
    if value is None and allow_none:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} must be a number")
    if integer and int(value) != value:
        raise ConfigError(f"{name} must be an integer")
    if not math.isfinite(value):
        raise ConfigError(f"{name} must be finite")
    return int(value) if integer else float(value)


def parse_config(raw: Any) -> RunConfig:
    """Validate a decoded JSON document into a RunConfig."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    extra = set(raw) - {"mode", "domain", "series", "output"}
    if extra:
        raise ConfigError(f"unknown top-level keys: {sorted(extra)}")
    try:
        m = _block(ModeBlock, raw.get("mode"), "mode", {"lambda": "lam"})
        d = _block(DomainBlock, raw.get("domain"), "domain")
        s = _block(SeriesBlock, raw.get("series"), "series")
        o = _block(OutputBlock, raw.get("output"), "output")
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc

    if m.lambda_kind not in LAMBDA_KINDS:
        raise ConfigError(f"lambda_kind must be one of {sorted(LAMBDA_KINDS)}")
    given = [k for k, v in (("n", m.n), ("j", m.j), ("lambda", m.lam)) if v is not None]
    want = LAMBDA_KINDS[m.lambda_kind]
    if given != [want]:
        raise ConfigError(f"lambda_kind '{m.lambda_kind}' needs exactly the key '{want}', got {given}")
    if m.n is not None:
        m.n = _number(m.n, "n", integer=True)
        if m.n < 0:
            raise ConfigError("n must be non-negative")
    if m.j is not None:
        m.j = _number(m.j, "j", integer=True)
        if m.j < 0:
            raise ConfigError("j must be non-negative")
    if m.lam is not None:
        m.lam = _number(m.lam, "lambda")
    for name in ("A", "B", "C1", "C2", "b0", "sigma", "alpha_abs", "mass", "C_norm", "W"):
        setattr(m, name, _number(getattr(m, name), name))
    m.alpha_sign = _number(m.alpha_sign, "alpha_sign", integer=True)

    d.tau0 = _number(d.tau0, "tau0")
    d.theta0 = _number(d.theta0, "theta0")
    d.n_tau = _number(d.n_tau, "n_tau", integer=True)
    d.n_theta = _number(d.n_theta, "n_theta", integer=True)
    d.tau_min = _number(d.tau_min, "tau_min", allow_none=True)

    s.max_terms = _number(s.max_terms, "max_terms", integer=True)
    s.tail_tol = _number(s.tail_tol, "tail_tol")
    s.tau_max = _number(s.tau_max, "tau_max")
    if s.max_terms < 1 or not s.tail_tol > 0 or not s.tau_max > 0:
        raise ConfigError("series block needs max_terms >= 1, tail_tol > 0, tau_max > 0")

    if o.format not in ("csv", "json"):
        raise ConfigError("output.format must be csv or json")
    o.precision = _number(o.precision, "precision", integer=True)
    if not 1 <= o.precision <= 17:
        raise ConfigError("output.precision must lie in 1..17")
    return RunConfig(m, d, s, o)


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON: {exc}") from exc
    return parse_config(raw)


def build_mode(cfg: RunConfig) -> ModeSpec:
    m, s = cfg.mode, cfg.series
    series_kw = dict(max_terms=s.max_terms, tail_tol=s.tail_tol, tau_max=s.tau_max)
    degenerate = None
    if m.lambda_kind == "integer":
        if m.n == 0:
            radial = build_series(0, "+", m.b0)
        else:
            radial = closed_form_integer(m.n, m.b0)
    elif m.lambda_kind in ("lambda_j_plus", "lambda_j_minus"):
        radial = closed_form_lambda_j(m.j, "+" if m.lambda_kind == "lambda_j_plus" else "-", m.b0)
    else:
        # a negative real lambda selects the exponent nu = lambda < 0
        branch = "-" if m.lam < 0 else "+"
        radial = build_series(abs(m.lam), branch, m.b0, allow_excluded=True, **series_kw)
    if radial.lam == 0:
        degenerate = (m.C1, m.C2)
    return ModeSpec(radial, A=m.A, B=m.B, degenerate=degenerate, sigma=m.sigma,
                    alpha_abs=m.alpha_abs, mass=m.mass, C_norm=m.C_norm, W=m.W,
                    alpha_sign=m.alpha_sign)


def build_domain(cfg: RunConfig) -> DomainSpec:
    d = cfg.domain
    return DomainSpec(d.tau0, d.theta0, d.n_tau, d.n_theta, d.tau_min)


# ---- formatting ------------------------------------------------------------------


def _fmt(x: float, digits: int) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.{digits}g}"


def write_csv(columns: Sequence[str], data: Dict[str, np.ndarray], digits: int) -> str:
    arrays = [np.asarray(data[c], dtype=float).ravel() for c in columns]
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for row in zip(*arrays):
        buf.write(",".join(_fmt(v, digits) for v in row) + "\n")
    return buf.getvalue()


def write_json_table(columns: Sequence[str], data: Dict[str, np.ndarray], digits: int) -> str:
    arrays = [np.asarray(data[c], dtype=float).ravel() for c in columns]
    rows = [[float(_fmt(v, digits)) for v in row] for row in zip(*arrays)]
    return json.dumps({"columns": list(columns), "rows": rows}) + "\n"


def _table(cfg: RunConfig, columns, data) -> str:
    digits = cfg.output.precision
    if cfg.output.format == "json":
        return write_json_table(columns, data, digits)
    return write_csv(columns, data, digits)


# ---- commands --------------------------------------------------------------------


def cmd_radial(cfg: RunConfig, normalize_cn: bool = False) -> str:
    """Table of T and T' on the domain's tau grid.

    Without ``normalize_cn`` the Laguerre closed form is tabulated when one
    exists; with it, the closed form divided by c_n (the b0 series).
    """
    mode = build_mode(cfg)
    taus = build_domain(cfg).taus()
    t, T, T1 = tabulate(mode.radial, taus, normalized=normalize_cn)
    return _table(cfg, RADIAL_COLUMNS, {"tau": t, "T": T, "T_prime": T1})


def cmd_map(cfg: RunConfig) -> str:
    mode = build_mode(cfg)
    check_mappable(mode)
    TAU, THETA = build_domain(cfg).mesh()
    return _table(cfg, MAP_COLUMNS, field_grid(mode, TAU, THETA))


def cmd_fold(cfg: RunConfig) -> str:
    mode = build_mode(cfg)
    check_mappable(mode)
    r = fold_scan(mode, build_domain(cfg))
    doc = {
        "has_fold": r.has_fold,
        "single_valued": r.single_valued,
        "suggested_tau0": r.suggested_tau0,
        "min_abs_jac_inv": r.min_abs_jac_inv,
        "fold_points": [[t, h] for t, h in r.fold_points],
    }
    return json.dumps(doc, indent=2) + "\n"


def cmd_verify(cfg: RunConfig):
    """(report text, any_failed)."""
    mode = build_mode(cfg)
    dom = build_domain(cfg)
    results = verify.run_suite(mode, dom)
    return verify.report_json(mode, dom, results), any(r.failed for r in results)


def _emit(text: str, out: Optional[str], cfg: RunConfig) -> None:
    path = out or cfg.output.path
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="legendre-phase", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=("radial", "map", "verify", "fold"))
    p.add_argument("--config", required=True, help="JSON run configuration")
    p.add_argument("--out", help="output file (default: output.path or stdout)")
    p.add_argument("--strict", action="store_true", help="verify: exit 3 if any check failed")
    p.add_argument("--normalize-cn", action="store_true",
                   help="radial: divide the Laguerre form by c_n (the b0 series)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        cfg = load_config(args.config)
        if args.command == "radial":
            text = cmd_radial(cfg, args.normalize_cn)
        elif args.command == "map":
            text = cmd_map(cfg)
        elif args.command == "fold":
            text = cmd_fold(cfg)
        else:
            text, failed = cmd_verify(cfg)
            _emit(text, args.out, cfg)
            if failed:
                log.warning("verification reported failed checks")
                if args.strict:
                    return EXIT_STRICT
            return EXIT_OK
    except UnmappableModeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNMAPPABLE
    except (ConfigError, LegendrePhaseError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    _emit(text, args.out, cfg)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
