"""Szegő and Garabedian kernels of circle domains.

The Szegő kernel ``S(., a)`` comes from the Kerzman–Stein integral equation

    S_a - A S_a = C_a   on bD,

with ``A`` the kernel of ``C - C*`` (``C`` the Cauchy transform as an operator
on arclength ``L^2(bD)``) and ``C_a(z) = conj(K(a, z))`` the conjugated Cauchy
kernel. ``A`` is smooth and skew-hermitian; on a circle it vanishes identically
for points of the same circle, so the Nyström matrix has a zero diagonal.

The Garabedian kernel follows from the boundary identity
``L(z, a) = i conj(S(z, a)) conj(T(z))``; its residue at ``a`` is ``1/(2 pi)``.
"""

from __future__ import annotations

import warnings
import weakref
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .analytic import AnalyticEvaluator, cauchy_evaluator, find_zeros
from .errors import (
    CommonZeroFound,
    PointNotInterior,
    ResidueCheckFailed,
    SolveFailed,
    UnderResolved,
    WrongZeroCount,
    ZeroNearBoundary,
)
from .geometry import BoundaryGrid, CircleDomain, contour_integral, ring

ZERO_SHRINK = 0.02
BASE_ANGLE = np.pi / 7
BASE_FACTORS = (0.85, 0.9, 0.95)
RESIDUE = 1 / (2 * np.pi)
ZERO_POINT_DISTANCE = 0.005
RESOLUTION_WARN = 1e-8


def cauchy_kernel_matrix(grid: BoundaryGrid) -> np.ndarray:
    """``K[i, j] = (1/2 pi i) T_j / (z_j - z_i)`` off the diagonal, zero on it."""
    z = grid.nodes
    d = z[None, :] - z[:, None]
    np.fill_diagonal(d, 1.0)
    K = grid.tangents[None, :] / d / (2j * np.pi)
    np.fill_diagonal(K, 0.0)
    return K


def kerzman_stein_matrix(grid: BoundaryGrid) -> np.ndarray:
    K = cauchy_kernel_matrix(grid)
    A = K - K.conj().T
    # same-circle blocks cancel analytically; keep only the rounding-free zeros
    for s in grid.slices:
        A[s, s] = 0.0
    return A


class KerzmanStein:
    """Factorized Nyström system for one grid; solves for any base point."""

    _cache: "weakref.WeakKeyDictionary[BoundaryGrid, KerzmanStein]" = weakref.WeakKeyDictionary()

    def __init__(self, grid: BoundaryGrid):
        self.grid = grid
        self.A = kerzman_stein_matrix(grid)
        sw = np.sqrt(grid.weights)
        self.sqrt_w = sw
        B = sw[:, None] * self.A * sw[None, :]
        M = np.eye(grid.size) - B
        self.lu = scipy.linalg.lu_factor(M)
        if not np.all(np.isfinite(self.lu[0])) or np.min(np.abs(np.diag(self.lu[0]))) < 1e-12:
            raise SolveFailed("Kerzman-Stein system is singular")

    @classmethod
    def for_grid(cls, grid: BoundaryGrid) -> "KerzmanStein":
        ks = cls._cache.get(grid)
        if ks is None:
            ks = cls._cache[grid] = cls(grid)
        return ks

    def rhs(self, a: complex) -> np.ndarray:
        g = self.grid
        return np.conj(g.tangents / (g.nodes - a) / (2j * np.pi))

    def solve(self, a: complex) -> np.ndarray:
        y = scipy.linalg.lu_solve(self.lu, self.sqrt_w * self.rhs(a))
        return y / self.sqrt_w


@dataclass(frozen=True, eq=False)
class KernelField:
    kind: str
    grid: BoundaryGrid
    a: complex
    boundary: np.ndarray
    evaluator: AnalyticEvaluator
    checks: dict = field(default_factory=dict)

    def __call__(self, z):
        return self.evaluator(z)

    def derivative(self, z):
        return self.evaluator.derivative(z)


def _check_base_point(domain: CircleDomain, a: complex, frac: float = 0.02):
    if not domain.contains(np.array([a]), frac * domain.outer.radius)[0]:
        raise PointNotInterior(f"base point {a} must lie in the domain, at least "
                               f"{frac} x outer radius from the boundary")


def resolution_estimate(grid: BoundaryGrid, a: complex) -> float:
    """Predicted boundary error for base point ``a``: ``max_k q_k^N``.

    ``q_k`` is the geometric decay rate of the Fourier modes of ``1/(z - a)``
    on circle ``k``; the observed Nyström error follows ``q^N`` closely.
    """
    est = 0.0
    for c in grid.domain.circles:
        q = abs(a - c.center) / c.radius
        q = q if q < 1 else 1 / q
        est = max(est, q ** grid.n)
    return float(est)


def kerzman_stein_solve(domain: CircleDomain, grid: BoundaryGrid, a: complex,
                        min_distance: float = 0.02) -> KernelField:
    """Szegő kernel ``z -> S(z, a)``: boundary values and interior evaluator.

    ``a`` must keep ``min_distance`` (relative to the outer radius) from the
    boundary; closer points need finer grids to resolve ``C_a``.
    """
    a = complex(a)
    _check_base_point(domain, a, min_distance)
    est = resolution_estimate(grid, a)
    if est > RESOLUTION_WARN:
        warnings.warn(UnderResolved(f"base point {a} needs a finer grid than N={grid.n} "
                                    f"(predicted error {est:.2g})"), stacklevel=2)
    vals = KerzmanStein.for_grid(grid).solve(a)
    if not np.all(np.isfinite(vals)):
        raise SolveFailed("non-finite Szegő boundary values")
    return KernelField("szego", grid, a, vals, cauchy_evaluator(grid, vals), {"resolution": est})


def base_point(domain: CircleDomain, factor: float = BASE_FACTORS[0], angle: float = BASE_ANGLE) -> complex:
    o = domain.outer
    return o.center + factor * o.radius * np.exp(1j * angle)


def reproducing_error(S: KernelField, f) -> float:
    """``|<f, S(., a)> - f(a)|`` with the arclength inner product on the boundary."""
    g = S.grid
    ip = np.sum(f(g.nodes) * np.conj(S.boundary) * g.weights)
    return float(abs(ip - f(np.array([S.a]))[0]))


@dataclass
class SzegoZeros:
    points: np.ndarray
    margins: np.ndarray  # |S'| at each zero
    a: complex
    winding: float


def szego_zeros(domain: CircleDomain, grid: BoundaryGrid, a: complex | None = None,
                field: KernelField | None = None, shrink: float = ZERO_SHRINK) -> SzegoZeros:
    """The ``m - 1`` zeros of ``z -> S(z, a)`` in the domain."""
    if field is None:
        field = kerzman_stein_solve(domain, grid, base_point(domain) if a is None else a)
    rep = find_zeros(field, field.derivative, domain, shrink)
    if rep.count != domain.m - 1:
        raise WrongZeroCount(rep.count, domain.m - 1)
    if not np.all(domain.contains(rep.zeros)):
        raise ZeroNearBoundary(f"Newton refinement left the domain: {rep.zeros}")
    if rep.count > 1:
        dist = np.abs(rep.zeros[:, None] - rep.zeros[None, :]) + np.eye(rep.count)
        if dist.min() < 1e-8:
            raise WrongZeroCount(rep.count - 1, domain.m - 1)
    return SzegoZeros(rep.zeros, np.abs(rep.derivatives), field.a, rep.winding)


def szego_zeros_ladder(domain: CircleDomain, grid: BoundaryGrid,
                       factors=BASE_FACTORS) -> tuple[KernelField, SzegoZeros]:
    """Move the base point towards the outer circle until exactly ``m - 1`` simple zeros show up."""
    last = None
    for f in factors:
        S = kerzman_stein_solve(domain, grid, base_point(domain, f))
        try:
            return S, szego_zeros(domain, grid, field=S)
        except (WrongZeroCount, ZeroNearBoundary) as err:
            last = err
    raise last


def garabedian_field(domain: CircleDomain, grid: BoundaryGrid, S: KernelField,
                     tol: float = 1e-5) -> KernelField:
    """``z -> L(z, a)`` from the Szegő kernel with the same base point."""
    a = S.a
    Lb = 1j * np.conj(S.boundary) * np.conj(grid.tangents)
    res_contour = contour_integral(grid, Lb) / (2j * np.pi)
    if abs(res_contour - RESIDUE) > tol:
        raise ResidueCheckFailed(f"boundary residue {res_contour} != 1/(2 pi)")
    pole = RESIDUE / (grid.nodes - a)
    ev = cauchy_evaluator(grid, Lb - pole)
    ev = AnalyticEvaluator(ev.domain, ev.outer, ev.holes, ((a, RESIDUE),))
    zr = ring(a, 1e-3, 16)
    res_ring = complex(np.mean((zr - a) * ev(zr)))
    if abs(res_ring - RESIDUE) > tol:
        raise ResidueCheckFailed(f"ring residue {res_ring} != 1/(2 pi)")
    # the regular part must itself extend holomorphically: no Cauchy mass outside
    o = domain.outer
    probes = np.concatenate([ring(o.center, 2 * o.radius, 8)] + [np.array([h.center]) for h in domain.holes])
    ext = contour_integral(grid, (Lb - pole)[None, :] / (grid.nodes[None, :] - probes[:, None])) / (2j * np.pi)
    checks = {"residue_contour": res_contour, "residue_ring": res_ring,
              "regular_part_exterior_cauchy": float(np.max(np.abs(ext)))}
    return KernelField("garabedian", grid, a, Lb, ev, checks)


def garabedian_from_point(domain, grid, a, min_distance: float = 0.02) -> KernelField:
    return garabedian_field(domain, grid, kerzman_stein_solve(domain, grid, a, min_distance))


def garabedian_no_zero_margin(L: KernelField, points) -> float:
    """``min |(z - a) L(z, a)|`` over sample points; positive means no zero there."""
    return float(np.min(np.abs((points - L.a) * L(points))))


def _fit_residual(target: np.ndarray, basis: np.ndarray, w: np.ndarray) -> float:
    sw = np.sqrt(w)
    B = basis * sw[:, None]
    t = target * sw
    c, *_ = np.linalg.lstsq(B, t, rcond=None)
    return float(np.linalg.norm(B @ c - t) / np.linalg.norm(t))


@dataclass
class SpanReport:
    w_onto_kernels: np.ndarray
    kernels_onto_w: np.ndarray
    control: float | None

    @property
    def max_w_onto_kernels(self) -> float:
        return float(self.w_onto_kernels.max())

    @property
    def max_kernels_onto_w(self) -> float:
        return float(self.kernels_onto_w.max())


def kernel_products(domain, grid, S: KernelField, zeros: SzegoZeros) -> np.ndarray:
    """Boundary values of ``L(z, a_k) S(z, a)`` for each Szegő zero ``a_k``; shape (m-1, nodes)."""
    rows = []
    for ak in zeros.points:
        # Szegő zeros sit close to the holes when a is close to the outer circle
        L = garabedian_from_point(domain, grid, ak, min_distance=ZERO_POINT_DISTANCE)
        rows.append(L.boundary * S.boundary)
    return np.array(rows)


def span_check(domain: CircleDomain, grid: BoundaryGrid, S: KernelField, zeros: SzegoZeros,
               W: list[AnalyticEvaluator], control: bool = True) -> SpanReport:
    """Least-squares fits between ``span{W_j}`` and ``span{L(., a_k) S(., a)}`` on the boundary."""
    G = kernel_products(domain, grid, S, zeros)
    Wb = np.array([w(grid.nodes) for w in W])
    wts = grid.weights
    fwd = np.array([_fit_residual(Wb[j], G.T, wts) for j in range(len(W))])
    back = np.array([_fit_residual(G[k], Wb.T, wts) for k in range(G.shape[0])])
    ctrl = _fit_residual(Wb[0], S.boundary[:, None], wts) if control else None
    return SpanReport(fwd, back, ctrl)


@dataclass
class CommonZeroReport:
    zeros: list[np.ndarray]
    margin: float  # min over the lattice of max_j |W_j|
    min_field_modulus: float  # min over the lattice and j of |W_j|
    zero_set_distance: float  # min distance between zeros of different fields
    cross_values: list[np.ndarray]  # max_{k != j} |W_k| at the zeros of W_j


def interior_lattice(domain: CircleDomain, n: int = 80, margin: float = 0.01) -> np.ndarray:
    o = domain.outer
    x = np.linspace(-1, 1, n)
    Z = o.center + o.radius * (x[None, :] + 1j * x[:, None])
    Z = Z.ravel()
    return Z[domain.contains(Z, margin * o.radius)]


def common_zero_check(domain: CircleDomain, grid: BoundaryGrid, W: list[AnalyticEvaluator],
                      lattice_n: int = 80, tol: float = 1e-8) -> CommonZeroReport:
    zs = [find_zeros(w, w.derivative, domain, ZERO_SHRINK).zeros for w in W]
    cross = []
    for j, zj in enumerate(zs):
        others = [np.abs(W[k](zj)) for k in range(len(W)) if k != j]
        cv = np.max(others, axis=0) if others else np.zeros(zj.shape)
        if np.any(cv < tol):
            raise CommonZeroFound(f"W fields vanish together near {zj[np.argmin(cv)]}")
        cross.append(cv)
    pts = interior_lattice(domain, lattice_n)
    mods = np.array([np.abs(w(pts)) for w in W])
    dist = np.inf
    for i in range(len(zs)):
        for k in range(i + 1, len(zs)):
            if zs[i].size and zs[k].size:
                dist = min(dist, float(np.min(np.abs(zs[i][:, None] - zs[k][None, :]))))
    return CommonZeroReport(zs, float(mods.max(axis=0).min()), float(mods.min()), dist, cross)
