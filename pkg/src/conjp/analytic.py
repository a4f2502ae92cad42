"""Single-valued holomorphic functions on circle domains, and their zeros.

Every function holomorphic on a neighbourhood of a closed circle domain splits
as ``F_out + sum_k F_k`` with ``F_out`` holomorphic in the outer disc and
``F_k`` holomorphic outside hole ``k`` and vanishing at infinity. We store the
truncated expansions in scaled variables::

    F_out(z) = sum_{p>=0} outer[p] * ((z - c_m)/r_m)^p
    F_k(z)   = sum_{p>=1} holes[k][p-1] * (r_k/(z - c_k))^p

plus optional explicit simple poles inside the domain.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly

from .geometry import BoundaryGrid, CircleDomain, shrunk_contour


@dataclass(frozen=True, eq=False)
class AnalyticEvaluator:
    domain: CircleDomain
    outer: np.ndarray
    holes: tuple[np.ndarray, ...]
    poles: tuple[tuple[complex, complex], ...] = field(default=())  # (location, residue)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        o = self.domain.outer
        out = npoly.polyval((z - o.center) / o.radius, self.outer)
        for h, c in zip(self.domain.holes, self.holes):
            s = h.radius / (z - h.center)
            out = out + s * npoly.polyval(s, c)
        for a, res in self.poles:
            out = out + res / (z - a)
        return out

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        o = self.domain.outer
        out = npoly.polyval((z - o.center) / o.radius, npoly.polyder(self.outer)) / o.radius
        if np.ndim(out) == 0 and np.ndim(z):
            out = np.full(z.shape, complex(out))
        for h, c in zip(self.domain.holes, self.holes):
            s = h.radius / (z - h.center)
            # d/dz s^p = -(p/r) s^(p+1)
            p = np.arange(1, c.size + 1)
            out = out - s * s * npoly.polyval(s, p * c) / h.radius
        for a, res in self.poles:
            out = out - res / (z - a) ** 2
        return out

    def __add__(self, other: "AnalyticEvaluator") -> "AnalyticEvaluator":
        def pad_add(a, b):
            n = max(a.size, b.size)
            return np.pad(a, (0, n - a.size)) + np.pad(b, (0, n - b.size))

        return AnalyticEvaluator(
            self.domain,
            pad_add(self.outer, other.outer),
            tuple(pad_add(a, b) for a, b in zip(self.holes, other.holes)),
            self.poles + other.poles,
        )

    def scaled(self, c: complex) -> "AnalyticEvaluator":
        return AnalyticEvaluator(
            self.domain, c * self.outer, tuple(c * h for h in self.holes),
            tuple((a, c * r) for a, r in self.poles),
        )

    def boundary_values(self, grid: BoundaryGrid) -> np.ndarray:
        return self(grid.nodes)


def cauchy_evaluator(grid: BoundaryGrid, values) -> AnalyticEvaluator:
    """Interior evaluator of the Cauchy integral of boundary values.

    On each circle the Cauchy integral picks out Fourier modes: the
    non-negative ones on the outer circle and the negative ones on each hole.
    Computing them with the FFT keeps the evaluator accurate right up to the
    boundary, where direct quadrature of ``1/(zeta - z)`` degrades.
    """
    values = np.asarray(values, dtype=complex)
    n = grid.n
    half = n // 2
    coeffs = [np.fft.fft(values[s]) / n for s in grid.slices]
    holes = tuple(c[n - 1 : n - half : -1].copy() for c in coeffs[:-1])  # modes -1 .. -(n/2-1)
    outer = coeffs[-1][:half].copy()
    return AnalyticEvaluator(grid.domain, outer, holes)


@dataclass
class ZeroReport:
    count: int
    zeros: np.ndarray
    derivatives: np.ndarray
    winding: float


def winding_count(f, domain: CircleDomain, shrink: float = 0.02, n: int = 2048) -> tuple[int, float]:
    """Number of zeros minus poles of ``f`` inside the shrunken boundary contour.

    Phase increments between consecutive samples are summed per circle; ``n`` is
    raised until every increment stays below ``pi/4``.
    """
    while True:
        zc, _, slices = shrunk_contour(domain, shrink, n)
        fz = f(zc)
        total = 0.0
        ok = True
        for k, s in enumerate(slices):
            v = fz[s]
            outer = k == domain.m - 1
            # nodes run counter-clockwise; holes are traversed clockwise
            steps = np.angle(np.roll(v, -1) / v)
            if np.max(np.abs(steps)) > np.pi / 4:
                ok = False
                break
            total += steps.sum() * (1 if outer else -1)
        if ok or n >= 1 << 16:
            w = total / (2 * np.pi)
            return int(round(w)), w
        n *= 2


def find_zeros(f, df, domain: CircleDomain, shrink: float = 0.02, n: int = 2048,
               newton_tol: float = 1e-14, max_newton: int = 50) -> ZeroReport:
    """Count zeros of a holomorphic ``f`` inside the shrunken contour, then locate them.

    The count comes from the argument principle. Locations come from the power
    sums ``(1/2 pi i) \\oint z^p f'/f dz`` turned into a polynomial by Newton's
    identities, each root polished by Newton iteration on ``f``.
    """
    count, w = winding_count(f, domain, shrink, n)
    if count <= 0:
        return ZeroReport(max(count, 0), np.zeros(0, complex), np.zeros(0, complex), w)
    zc, dz, _ = shrunk_contour(domain, shrink, max(n, 4096))
    c0 = domain.outer.center
    r0 = domain.outer.radius
    t = (zc - c0) / r0
    q = df(zc) / f(zc) * dz / (2j * np.pi)
    s = np.array([np.sum(t ** p * q) for p in range(1, count + 1)])
    # Newton's identities: e_k from power sums
    e = [1.0 + 0j]
    for k in range(1, count + 1):
        acc = sum((-1) ** (i - 1) * e[k - i] * s[i - 1] for i in range(1, k + 1))
        e.append(acc / k)
    poly = [(-1) ** k * e[k] for k in range(count + 1)]  # monic, highest degree first
    roots = c0 + r0 * np.roots(poly)
    polished = []
    for z0 in roots:
        zk = complex(z0)
        for _ in range(max_newton):
            step = complex(f(np.array([zk]))[0] / df(np.array([zk]))[0])
            zk -= step
            if abs(step) < newton_tol * max(1.0, abs(zk)):
                break
        polished.append(zk)
    zs = np.array(polished)
    return ZeroReport(count, zs, np.asarray(df(zs)), w)
