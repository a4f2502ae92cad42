"""Conjugate periods and holomorphic extendibility on circle domains."""

import os

if "CONJP_THREADS" in os.environ:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(_var, os.environ["CONJP_THREADS"])

from .geometry import (  # noqa: E402
    BoundaryGrid,
    BoundarySamples,
    Circle,
    CircleDomain,
    annulus,
    boundary_grid,
    contour_integral,
    make_domain,
)
from .expr import eval_expr, parse_expr, sample_boundary  # noqa: E402
from .harmonic import (  # noqa: E402
    HarmonicRep,
    conjugate_periods,
    eval_harmonic,
    harmonic_measure,
    normal_derivative,
    period_pairing,
    solve_dirichlet,
    w_field,
)
from .extendibility import (  # noqa: E402
    ExtendibilityReport,
    Verdict,
    cauchy_transform,
    extendibility_test,
    reconstruct_extension,
)

__version__ = "0.1.0"

__all__ = [
    "BoundaryGrid", "BoundarySamples", "Circle", "CircleDomain", "annulus", "boundary_grid",
    "contour_integral", "make_domain", "eval_expr", "parse_expr", "sample_boundary",
    "HarmonicRep", "conjugate_periods", "eval_harmonic", "harmonic_measure", "normal_derivative",
    "period_pairing", "solve_dirichlet", "w_field", "ExtendibilityReport", "Verdict",
    "cauchy_transform", "extendibility_test", "reconstruct_extension",
]
