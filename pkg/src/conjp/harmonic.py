"""Dirichlet problems on circle domains with explicit conjugate periods.

A real harmonic function on an m-connected circle domain is represented as

    u(z) = a0 + sum_k beta_k ln|z - c_k|
              + Re[ sum_p alpha_out[p] ((z - c_m)/r_m)^p + sum_{k,p} alpha_k[p] (r_k/(z - c_k))^p ]

with ``k`` over holes. Only the logarithms have multivalued conjugates, so the
conjugate period along a counter-clockwise loop around hole ``k`` is exactly
``2 pi beta_k``. This is the sign convention for every period in the package.
"""

from __future__ import annotations

import warnings
import weakref
from dataclasses import dataclass

import numpy as np

from .analytic import AnalyticEvaluator, find_zeros
from .errors import IllConditioned, NonRealPairing, PointNotInterior, ResidualTooLarge
from .geometry import BoundaryGrid, BoundarySamples, CircleDomain, contour_integral, real_boundary_sum

DEFAULT_DEGREE = 32
DEFAULT_NODES = 256
TOL_DIRICHLET = 1e-9
COND_LIMIT = 1e13
RCOND = 1e-12
PAIRING_IMAG_TOL = 1e-10


def n_unknowns(m: int, degree: int) -> int:
    return m + 2 * degree * m


def default_degree(m: int, n: int) -> int:
    """Largest degree <= 32 leaving at least two nodes per real unknown."""
    p = (m * n // 2 - m) // (2 * m)
    return min(DEFAULT_DEGREE, p)


@dataclass(frozen=True, eq=False)
class HarmonicRep:
    domain: CircleDomain
    a0: float
    beta: np.ndarray
    outer: np.ndarray
    holes: tuple[np.ndarray, ...]
    degree: int
    boundary_residual: float
    cond: float

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        o = self.domain.outer
        w = (z - o.center) / o.radius
        acc = np.zeros(z.shape, dtype=complex)
        for c in self.outer[::-1]:
            acc = (acc + c) * w
        u = self.a0 + acc.real
        for h, b, coef in zip(self.domain.holes, self.beta, self.holes):
            s = h.radius / (z - h.center)
            acc = np.zeros(z.shape, dtype=complex)
            for c in coef[::-1]:
                acc = (acc + c) * s
            u = u + b * np.log(np.abs(z - h.center)) + acc.real
        return u

    def derivative(self) -> AnalyticEvaluator:
        """Complex derivative of the analytic completion ``u + i u*``."""
        o = self.domain.outer
        p = np.arange(1, self.degree + 1)
        outer = p * self.outer / o.radius
        holes = []
        for h, b, coef in zip(self.domain.holes, self.beta, self.holes):
            c = np.zeros(self.degree + 1, dtype=complex)
            c[0] = b / h.radius
            c[1:] = -p * coef / h.radius
            holes.append(c)
        return AnalyticEvaluator(self.domain, outer, tuple(holes))


class DirichletSolver:
    """Least-squares fit of the representation above on one grid.

    Columns are equilibrated to unit norm and the system is solved through an
    SVD, truncating relative singular values below ``RCOND``.
    """

    _cache: "weakref.WeakKeyDictionary[BoundaryGrid, dict]" = weakref.WeakKeyDictionary()

    def __init__(self, grid: BoundaryGrid, degree: int):
        dom = grid.domain
        nunk = n_unknowns(dom.m, degree)
        if degree < 4:
            raise ValueError(f"degree must be >= 4, got {degree}")
        if grid.size < 2 * nunk:
            raise ValueError(
                f"{grid.size} nodes cannot support {nunk} unknowns; lower the degree or refine the grid"
            )
        self.grid = grid
        self.degree = degree
        z = grid.nodes
        cols = [np.ones(z.size)]
        for h in dom.holes:
            cols.append(np.log(np.abs(z - h.center)))
        o = dom.outer
        w = (z - o.center) / o.radius
        powers = [w ** p for p in range(1, degree + 1)]
        for h in dom.holes:
            s = h.radius / (z - h.center)
            powers += [s ** p for p in range(1, degree + 1)]
        for b in powers:
            cols.append(b.real)
            cols.append(-b.imag)
        A = np.column_stack(cols)
        self.scale = np.linalg.norm(A, axis=0)
        self.A = A
        u, s, vt = np.linalg.svd(A / self.scale, full_matrices=False)
        self.cond = float(s[0] / s[-1])
        if self.cond > COND_LIMIT:
            raise IllConditioned(f"equilibrated condition number {self.cond:.3g}")
        keep = s > RCOND * s[0]
        self._u, self._s, self._vt = u[:, keep], s[keep], vt[keep]

    @classmethod
    def for_grid(cls, grid: BoundaryGrid, degree: int) -> "DirichletSolver":
        per = cls._cache.setdefault(grid, {})
        if degree not in per:
            per[degree] = cls(grid, degree)
        return per[degree]

    def solve(self, data, tol: float = TOL_DIRICHLET) -> HarmonicRep:
        if isinstance(data, BoundarySamples):
            data = data.values
        data = np.asarray(data)
        if np.iscomplexobj(data):
            if np.max(np.abs(data.imag), initial=0) > 1e-12 * max(1.0, np.max(np.abs(data))):
                raise ValueError("Dirichlet data must be real")
            data = data.real
        x = self._vt.T @ ((self._u.T @ data) / self._s) / self.scale
        resid = float(np.max(np.abs(self.A @ x - data)))
        if resid > tol:
            warnings.warn(ResidualTooLarge(f"Dirichlet fit residual {resid:.3g} exceeds {tol:.3g}"),
                          stacklevel=3)
        dom = self.grid.domain
        m1, P = dom.m - 1, self.degree
        a0 = float(x[0])
        beta = x[1 : 1 + m1].copy()
        cx = x[1 + m1 :]
        alpha = cx[0::2] + 1j * cx[1::2]
        outer = alpha[:P].copy()
        holes = tuple(alpha[P * (k + 1) : P * (k + 2)].copy() for k in range(m1))
        return HarmonicRep(dom, a0, beta, outer, holes, P, resid, self.cond)


def solve_dirichlet(domain: CircleDomain, grid: BoundaryGrid, data, degree: int | None = None,
                    tol: float = TOL_DIRICHLET) -> HarmonicRep:
    if grid.domain != domain:
        raise ValueError("grid does not belong to this domain")
    degree = default_degree(domain.m, grid.n) if degree is None else degree
    return DirichletSolver.for_grid(grid, degree).solve(data, tol)


def eval_harmonic(rep: HarmonicRep, z):
    z = np.asarray(z, dtype=complex)
    if not np.all(rep.domain.contains(z, margin=1e-12)):
        raise PointNotInterior("evaluation point is not in the open domain")
    return rep(z)


def harmonic_measure(domain: CircleDomain, grid: BoundaryGrid, j: int, degree: int | None = None) -> HarmonicRep:
    """Harmonic function equal to 1 on circle ``j`` and 0 on the others.

    ``j`` is 0-based in domain order: holes ``0 .. m-2``, outer ``m-1``.
    """
    if not 0 <= j < domain.m:
        raise IndexError(f"circle index {j} out of range for m={domain.m}")
    return solve_dirichlet(domain, grid, (grid.circle_index == j).astype(float), degree)


def harmonic_measures(domain, grid, degree=None) -> list[HarmonicRep]:
    return [harmonic_measure(domain, grid, j, degree) for j in range(domain.m)]


def w_field(domain: CircleDomain, grid: BoundaryGrid, j: int, degree: int | None = None) -> AnalyticEvaluator:
    """Derivative of the analytic completion of the harmonic measure of hole ``j``."""
    if not 0 <= j < domain.m - 1:
        raise IndexError(f"W fields are indexed by holes 0..{domain.m - 2}, got {j}")
    return harmonic_measure(domain, grid, j, degree).derivative()


def w_fields(domain, grid, degree=None) -> list[AnalyticEvaluator]:
    return [w_field(domain, grid, j, degree) for j in range(domain.m - 1)]


def conjugate_periods(rep: HarmonicRep) -> np.ndarray:
    """Conjugate periods along counter-clockwise loops around each hole."""
    return 2 * np.pi * np.asarray(rep.beta)


def period_pairing(grid: BoundaryGrid, phi, W: AnalyticEvaluator, imag_tol: float = PAIRING_IMAG_TOL) -> float:
    """``int_bD phi i W dz`` for real ``phi``.

    With the boundary positively oriented this is the counter-clockwise
    conjugate period of the harmonic extension of ``phi`` around the hole that
    ``W`` belongs to. ``i W dz`` is real on the boundary, so a visible imaginary
    part means an orientation or solver defect.
    """
    v = phi.values if isinstance(phi, BoundarySamples) else np.asarray(phi)
    if np.iscomplexobj(v) and np.max(np.abs(v.imag)) > 0:
        raise ValueError("period_pairing needs real boundary data")
    val = contour_integral(grid, v.real * 1j * W(grid.nodes))
    if abs(val.imag) > imag_tol * max(1.0, np.max(np.abs(v))):
        raise NonRealPairing(f"imaginary part {val.imag:.3g} of a real pairing")
    return val.real


def normal_derivative(rep: HarmonicRep, grid: BoundaryGrid) -> BoundarySamples:
    """Outward normal derivative of ``rep`` at the grid nodes."""
    fp = rep.derivative()(grid.nodes)
    return BoundarySamples(grid, np.real(fp * grid.normals))


def flux_pairing(grid: BoundaryGrid, phi, h: HarmonicRep) -> float:
    """``int_bD phi dh/dn ds`` with the outward normal."""
    v = phi.values if isinstance(phi, BoundarySamples) else np.asarray(phi)
    return float(real_boundary_sum(grid, np.real(v) * normal_derivative(h, grid).values))


def flux_period(grid: BoundaryGrid, phi, h: HarmonicRep) -> float:
    """Counter-clockwise conjugate period from the flux route.

    A counter-clockwise loop around a hole runs against the boundary's positive
    orientation, hence the sign flip relative to :func:`flux_pairing`.
    """
    return -flux_pairing(grid, phi, h)


def period_matrix(grid: BoundaryGrid, measures: list[HarmonicRep]) -> np.ndarray:
    """``P[j, k] = int_bD h_j dh_k/dn ds`` over all circles; symmetric by Green's identity."""
    m = len(measures)
    P = np.empty((m, m))
    for k, hk in enumerate(measures):
        dn = normal_derivative(hk, grid).values
        for j in range(m):
            P[j, k] = real_boundary_sum(grid, (grid.circle_index == j) * dn)
    return P


def three_route_periods(domain, grid, phi, measures=None, degree=None) -> dict:
    """Hole periods of the harmonic extension of ``phi`` by three independent routes."""
    if measures is None:
        measures = harmonic_measures(domain, grid, degree)
    rep = solve_dirichlet(domain, grid, phi, degree)
    ws = [h.derivative() for h in measures[:-1]]
    return {
        "coefficients": conjugate_periods(rep),
        "contour": np.array([period_pairing(grid, phi, W) for W in ws]),
        "flux": np.array([flux_period(grid, phi, h) for h in measures[:-1]]),
        "residual": rep.boundary_residual,
    }


def w_zero_count(W: AnalyticEvaluator, shrink: float = 0.02) -> int:
    return find_zeros(W, W.derivative, W.domain, shrink).count


def random_smooth_data(grid: BoundaryGrid, rng: np.random.Generator, degree: int = 5,
                       decay: float = 0.5) -> np.ndarray:
    """Real trigonometric polynomial on each circle, coefficients uniform in [-1, 1] times ``decay^n``."""
    c = rng.uniform(-1, 1, size=(grid.domain.m, 2, degree + 1)) * decay ** np.arange(degree + 1)
    k, th = grid.circle_index, grid.theta
    return sum(c[k, 0, n] * np.cos(n * th) + c[k, 1, n] * np.sin(n * th) for n in range(degree + 1))
