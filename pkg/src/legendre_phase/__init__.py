"""Exact stationary solutions of a nonlinear phase equation via the hodograph transform.

Radial Frobenius/Laguerre solutions (``radial``), separable hodograph modes
(``modes``), the inverse map to the physical plane (``chart``), physical fields
(``fields``) and an orchestrated verification suite (``verify``).
"""
from .chart import DomainSpec, FoldReport, MapPoint, fold_scan, forward_map, invert_map
from .errors import (
    DegenerateBranchError,
    ExcludedBranchError,
    InvalidParameterError,
    InversionError,
    LegendrePhaseError,
    NearFoldError,
    SeriesTruncationError,
    SingularPointError,
    SingularPotentialError,
    UnmappableModeError,
)
from .modes import ModeSpec
from .radial import (
    RadialSolution,
    build_series,
    closed_form_integer,
    closed_form_lambda_j,
    eval_T,
    eval_T_prime,
    lambda_j_root,
)
from .specfun import LaguerrePoly, laguerre_eval
from .verify import CheckResult, run_suite

__version__ = "0.1.0"
