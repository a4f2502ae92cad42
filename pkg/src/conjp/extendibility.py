"""Holomorphic extendibility of boundary data by conjugate-period sweeps.

For boundary data ``Phi`` and each test function ``g`` from a finite family
holomorphic on the closed domain, the harmonic extension of ``Re(g Phi)`` has
hole periods ``Re int_bD g Phi i W_j dz``. ``Phi`` extends holomorphically iff
all of them vanish (for all ``g`` in the closed span). The Cauchy transform of
``Phi`` at points off the closed domain is computed alongside as the classical
cross-check.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import expr as ex
from .analytic import AnalyticEvaluator, cauchy_evaluator
from .errors import AllFieldsTinyAtPoint, NotCertifiedExtendible, ProbeTooCloseToBoundary
from .geometry import BoundaryGrid, BoundarySamples, CircleDomain, contour_integral, ring
from .harmonic import HarmonicRep, harmonic_measures, period_pairing

DEFAULT_PTEST = 12


class Verdict(str, enum.Enum):
    EXTENDS = "EXTENDS"
    NOT_EXTENDS = "NOT_EXTENDS"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class Tolerances:
    accept: float = 1e-7
    reject: float = 1e-4
    dirichlet: float = 1e-9
    probe_distance: float = 0.05  # fraction of the outer radius

    def __post_init__(self):
        if not (self.accept > 0 and self.reject > 0 and self.dirichlet > 0):
            raise ValueError("tolerances must be positive")
        if self.accept > self.reject:
            raise ValueError(f"tol_accept {self.accept} exceeds tol_reject {self.reject}")

    def scale(self, dirichlet_residual: float) -> float:
        return max(1.0, dirichlet_residual / self.dirichlet)


@dataclass(frozen=True)
class TestFamily:
    """Finite stand-in for the algebra of functions holomorphic on the closed domain."""

    __test__ = False  # not a pytest class

    names: tuple[str, ...]
    exprs: tuple[ex.Expr, ...]
    p_test: int

    def __len__(self):
        return len(self.names)

    def filtered(self, keep: Callable[[str], bool]) -> "TestFamily":
        pairs = [(n, e) for n, e in zip(self.names, self.exprs) if keep(n)]
        return TestFamily(tuple(n for n, _ in pairs), tuple(e for _, e in pairs), self.p_test)


def test_family(domain: CircleDomain, p_test: int = DEFAULT_PTEST) -> TestFamily:
    """Laurent generators ``g`` together with ``i g``.

    The algebra is complex, and for real ``Phi`` the pairing of ``Re(g Phi)``
    alone is blind to ``Im(g Phi)``; the ``i g`` members supply it.
    """
    o = domain.outer
    gens = [ex.zpow(n, o.center, o.radius) for n in range(p_test + 1)]
    for k in range(len(domain.holes)):
        gens += [ex.runge(domain, k, n) for n in range(1, p_test + 1)]
    names, exprs = [], []
    for e in gens:
        t = ex.to_text(e)
        t = "1" if t == "1.0" else t
        names += [t, "i" if t == "1" else f"i*{t}"]
        exprs += [e, ex.BinOp("*", ex.Const(1j), e)]
    return TestFamily(tuple(names), tuple(exprs), p_test)


test_family.__test__ = False


@dataclass(frozen=True, eq=False)
class PeriodFields:
    """Harmonic measures of all circles and the W fields of the holes, on one grid."""

    grid: BoundaryGrid
    measures: tuple[HarmonicRep, ...]
    W: tuple[AnalyticEvaluator, ...]

    @property
    def dirichlet_residual(self) -> float:
        return max(h.boundary_residual for h in self.measures)


def period_fields(domain: CircleDomain, grid: BoundaryGrid, degree: int | None = None) -> PeriodFields:
    hs = harmonic_measures(domain, grid, degree)
    return PeriodFields(grid, tuple(hs), tuple(h.derivative() for h in hs[:-1]))


def cauchy_transform(grid: BoundaryGrid, samples, z, min_distance: float | None = None):
    """``(1/2 pi i) int_bD f(zeta)/(zeta - z) dzeta`` by trapezoidal quadrature."""
    v = samples.values if isinstance(samples, BoundarySamples) else np.asarray(samples)
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    if min_distance is None:
        min_distance = 0.05 * grid.domain.outer.radius
    d = grid.domain.boundary_distance(zz)
    if np.any(d < min_distance):
        warnings.warn(ProbeTooCloseToBoundary(
            f"probe at distance {d.min():.3g} < {min_distance:.3g} from the boundary"), stacklevel=2)
    integrand = v[None, :] / (grid.nodes[None, :] - zz[:, None])
    out = contour_integral(grid, integrand) / (2j * np.pi)
    return complex(out[0]) if np.ndim(z) == 0 else out


def probe_points(domain: CircleDomain) -> tuple[np.ndarray, list[str]]:
    """Hole centres, 8-point rings at half of each hole radius, 8-point ring at twice the outer radius."""
    pts, labels = [], []
    for k, h in enumerate(domain.holes):
        pts.append(np.array([h.center]))
        labels.append(f"hole{k}:center")
        pts.append(ring(h.center, 0.5 * h.radius, 8))
        labels += [f"hole{k}:ring{i}" for i in range(8)]
    o = domain.outer
    pts.append(ring(o.center, 2 * o.radius, 8))
    labels += [f"exterior:ring{i}" for i in range(8)]
    return np.concatenate(pts), labels


def _verdict(value: float, accept: float, reject: float) -> Verdict:
    if value < accept:
        return Verdict.EXTENDS
    if value > reject:
        return Verdict.NOT_EXTENDS
    return Verdict.INCONCLUSIVE


@dataclass
class ExtendibilityReport:
    rho: np.ndarray  # shape (len(family), m-1)
    family_names: tuple[str, ...]
    probes: np.ndarray
    probe_labels: list[str]
    cauchy_residuals: np.ndarray
    period_verdict: Verdict
    cauchy_verdict: Verdict
    verdict: Verdict
    witness: dict
    tolerances: Tolerances
    tol_scale: float
    dirichlet_residual: float
    p_test: int

    @property
    def max_period(self) -> float:
        return float(np.max(np.abs(self.rho), initial=0.0))

    @property
    def max_cauchy(self) -> float:
        return float(np.max(np.abs(self.cauchy_residuals), initial=0.0))

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "period_verdict": self.period_verdict.value,
            "cauchy_verdict": self.cauchy_verdict.value,
            "witness": self.witness,
            "p_test": self.p_test,
            "family": list(self.family_names),
            "rho": {"rows": len(self.family_names), "cols": int(self.rho.shape[1]),
                    "row_major": [float(x) for x in self.rho.ravel()]},
            "max_period": self.max_period,
            "probes": [{"label": lab, "z": [float(p.real), float(p.imag)],
                        "residual": [float(c.real), float(c.imag)]}
                       for lab, p, c in zip(self.probe_labels, self.probes, self.cauchy_residuals)],
            "max_cauchy": self.max_cauchy,
            "tolerances": {"accept": self.tolerances.accept, "reject": self.tolerances.reject,
                           "dirichlet": self.tolerances.dirichlet, "scale": self.tol_scale},
            "dirichlet_residual": self.dirichlet_residual,
        }


def period_sweep(grid: BoundaryGrid, phi: np.ndarray, family: TestFamily,
                 W: tuple[AnalyticEvaluator, ...]) -> np.ndarray:
    rho = np.empty((len(family), len(W)))
    for a, e in enumerate(family.exprs):
        data = np.real(ex.eval_expr(e, grid.nodes) * phi)
        for j, w in enumerate(W):
            rho[a, j] = period_pairing(grid, data, w)
    return rho


def extendibility_test(domain: CircleDomain, grid: BoundaryGrid, phi, family: TestFamily | None = None,
                       tolerances: Tolerances | None = None, fields: PeriodFields | None = None,
                       degree: int | None = None) -> ExtendibilityReport:
    tol = tolerances or Tolerances()
    family = family or test_family(domain)
    fields = fields or period_fields(domain, grid, degree)
    v = phi.values if isinstance(phi, BoundarySamples) else np.asarray(phi, dtype=complex)
    res = fields.dirichlet_residual
    scale = tol.scale(res)
    accept, reject = tol.accept * scale, tol.reject * scale

    rho = period_sweep(grid, v, family, fields.W)
    probes, labels = probe_points(domain)
    cres = cauchy_transform(grid, v, probes, min_distance=tol.probe_distance * domain.outer.radius)

    pmax = float(np.max(np.abs(rho), initial=0.0))
    cmax = float(np.max(np.abs(cres)))
    pv = _verdict(pmax, accept, reject)
    cv = _verdict(cmax, accept, reject)
    verdict = pv if pv == cv else Verdict.INCONCLUSIVE

    ia, ij = np.unravel_index(np.argmax(np.abs(rho)), rho.shape) if rho.size else (0, 0)
    period_w = {"kind": "period", "g": family.names[ia], "name": f"g={family.names[ia]}",
                "j": int(ij), "value": float(rho[ia, ij]) if rho.size else 0.0}
    ip = int(np.argmax(np.abs(cres)))
    probe_w = {"kind": "probe", "label": labels[ip], "z": [float(probes[ip].real), float(probes[ip].imag)],
               "value": float(abs(cres[ip]))}
    if verdict == Verdict.NOT_EXTENDS or pv == Verdict.NOT_EXTENDS:
        witness = period_w
    elif cv == Verdict.NOT_EXTENDS:
        witness = probe_w
    else:
        witness = period_w if pmax / accept >= cmax / accept else probe_w

    return ExtendibilityReport(rho, family.names, probes, labels, cres, pv, cv, verdict, witness,
                               tol, scale, res, family.p_test)


def reconstruct_extension(domain: CircleDomain, grid: BoundaryGrid, phi, z, *,
                          report: ExtendibilityReport | None = None,
                          fields: PeriodFields | None = None, j: int | None = None,
                          tiny: float = 1e-10):
    """Interior values of the holomorphic extension of ``phi`` as ``H_j/W_j``.

    ``H_j`` is the Cauchy integral of ``phi W_j``. Unless ``j`` is given, each
    point uses the field with the largest ``|W_j(z)|``; the fields have no common
    zero in the domain, so this never divides by (near) zero.
    """
    fields = fields or period_fields(domain, grid)
    v = phi.values if isinstance(phi, BoundarySamples) else np.asarray(phi, dtype=complex)
    if report is None:
        report = extendibility_test(domain, grid, v, fields=fields)
    if report.verdict != Verdict.EXTENDS:
        raise NotCertifiedExtendible(f"extendibility verdict is {report.verdict.value}")
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    Wz = np.array([w(zz) for w in fields.W])  # (m-1, npts)
    if j is None:
        pick = np.argmax(np.abs(Wz), axis=0)
    else:
        pick = np.full(zz.shape, j)
    wsel = Wz[pick, np.arange(zz.size)]
    if np.any(np.abs(wsel) < tiny):
        raise AllFieldsTinyAtPoint(f"|W_j(z)| < {tiny} at z={zz[np.argmin(np.abs(wsel))]}")
    out = np.empty(zz.shape, dtype=complex)
    for jj in np.unique(pick):
        H = cauchy_evaluator(grid, v * fields.W[jj](grid.nodes))
        sel = pick == jj
        out[sel] = H(zz[sel]) / wsel[sel]
    return complex(out[0]) if np.ndim(z) == 0 else out.reshape(np.shape(z))


def random_rational(domain: CircleDomain, rng: np.random.Generator, n_exterior: int = 2) -> ex.Expr:
    """Random member of A(bD): poles at hole centres and at 2-4x the outer radius.

    Terms are scaled to have modulus at most about 1 on the boundary.
    """
    o = domain.outer

    def coef():
        c = rng.uniform(-1, 1, 2)
        return ex.Const(complex(c[0], c[1]))

    terms: list[ex.Expr] = [coef()]
    for k in range(len(domain.holes)):
        for n in range(1, int(rng.integers(1, 4)) + 1):
            terms.append(ex.BinOp("*", coef(), ex.runge(domain, k, n)))
    for _ in range(n_exterior):
        rad = o.radius * rng.uniform(2, 4)
        p = o.center + rad * np.exp(1j * rng.uniform(0, 2 * np.pi))
        base = ex.BinOp("/", ex.Const(complex(rad - o.radius)), ex.BinOp("-", ex.Var(), ex.Const(complex(p))))
        n = int(rng.integers(1, 3))
        terms.append(ex.BinOp("*", coef(), base if n == 1 else ex.Pow(base, n)))
    e = terms[0]
    for t in terms[1:]:
        e = ex.BinOp("+", e, t)
    return e
