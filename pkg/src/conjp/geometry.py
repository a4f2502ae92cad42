"""Circle domains, boundary grids and trapezoidal contour quadrature.

A circle domain is the bounded region inside one outer circle and outside
``m - 1`` pairwise disjoint hole circles. Circles are stored holes first,
outer last, so hole ``k`` has index ``k`` (0-based) and the outer circle has
index ``m - 1``.

The boundary is positively oriented: the outer circle runs counter-clockwise,
every hole clockwise. Tangents stored on a :class:`BoundaryGrid` already carry
that orientation, so ``dz = tangent * weight``.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    GridMismatch,
    HoleOutsideOuter,
    NTooSmall,
    OverlappingCircles,
    TooFewBoundaryComponents,
)

MIN_NODES = 16


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))


@dataclass(frozen=True)
class CircleDomain:
    holes: tuple[Circle, ...]
    outer: Circle

    @property
    def m(self) -> int:
        return len(self.holes) + 1

    @property
    def circles(self) -> tuple[Circle, ...]:
        return self.holes + (self.outer,)

    def contains(self, z, margin: float = 0.0):
        """Boolean mask of points at distance > ``margin`` from the closure complement."""
        z = np.asarray(z, dtype=complex)
        inside = np.abs(z - self.outer.center) < self.outer.radius - margin
        for h in self.holes:
            inside &= np.abs(z - h.center) > h.radius + margin
        return inside

    def boundary_distance(self, z):
        z = np.asarray(z, dtype=complex)
        d = np.abs(np.abs(z - self.outer.center) - self.outer.radius)
        for h in self.holes:
            d = np.minimum(d, np.abs(np.abs(z - h.center) - h.radius))
        return d

    def to_dict(self) -> dict:
        def circ(c):
            return {"center": [c.center.real, c.center.imag], "radius": c.radius}

        return {"outer": circ(self.outer), "holes": [circ(h) for h in self.holes]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _as_circle(item) -> Circle:
    if isinstance(item, Circle):
        return item
    if isinstance(item, dict):
        c = item["center"]
        center = complex(c[0], c[1]) if isinstance(c, (list, tuple)) else complex(c)
        return Circle(center, item["radius"])
    center, radius = item
    if isinstance(center, (list, tuple)):
        center = complex(center[0], center[1])
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    return Circle(complex(center), float(radius))


def make_domain(circles: Iterable) -> CircleDomain:
    """Validate a list of circles and build the circle domain they bound.

    Each item is a ``Circle``, a ``(center, radius)`` pair or a JSON-style dict.
    The outer circle is the one of largest radius; every other circle must sit
    strictly inside it and the holes must be pairwise disjoint (closed discs).
    """
    circs = [_as_circle(c) for c in circles]
    if len(circs) < 2:
        raise TooFewBoundaryComponents(
            f"a circle domain needs m >= 2 boundary circles, got {len(circs)}"
        )
    io = max(range(len(circs)), key=lambda i: circs[i].radius)
    outer = circs[io]
    holes = tuple(c for i, c in enumerate(circs) if i != io)
    for k, h in enumerate(holes):
        if abs(h.center - outer.center) + h.radius >= outer.radius:
            raise HoleOutsideOuter(f"hole {k} {h} is not strictly inside the outer circle {outer}")
    for i in range(len(holes)):
        for j in range(i + 1, len(holes)):
            a, b = holes[i], holes[j]
            if abs(a.center - b.center) <= a.radius + b.radius:
                raise OverlappingCircles(f"holes {i} and {j} intersect")
    return CircleDomain(holes=holes, outer=outer)


def domain_from_dict(d: dict) -> CircleDomain:
    return make_domain([d["outer"], *d.get("holes", [])])


def load_domain(path) -> CircleDomain:
    with open(path) as fh:
        return domain_from_dict(json.load(fh))


def annulus(R: float) -> CircleDomain:
    return make_domain([(0.0, 1.0), (0.0, R)])


@dataclass(frozen=True, eq=False)
class BoundaryGrid:
    """Equispaced trapezoidal nodes on every boundary circle.

    Arrays are concatenated circle by circle in domain order (holes, then outer);
    ``slices[k]`` selects circle ``k``.
    """

    domain: CircleDomain
    n: int
    theta: np.ndarray
    nodes: np.ndarray
    tangents: np.ndarray
    weights: np.ndarray
    circle_index: np.ndarray
    sigma: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.nodes.size

    @property
    def slices(self) -> list[slice]:
        return [slice(k * self.n, (k + 1) * self.n) for k in range(self.domain.m)]

    @property
    def normals(self) -> np.ndarray:
        """Unit normals pointing out of the domain."""
        return -1j * self.tangents

    @property
    def dz(self) -> np.ndarray:
        return self.tangents * self.weights

    def same_as(self, other: "BoundaryGrid") -> bool:
        return other is self or (
            other.domain == self.domain and other.n == self.n
        )


def boundary_grid(domain: CircleDomain, n: int) -> BoundaryGrid:
    if n < MIN_NODES:
        raise NTooSmall(f"need at least {MIN_NODES} nodes per circle, got {n}")
    if n % 2:
        raise NTooSmall(f"node count per circle must be even, got {n}")
    th = 2 * np.pi * np.arange(n) / n
    e = np.exp(1j * th)
    thetas, nodes, tangents, weights, idx, sig = [], [], [], [], [], []
    for k, c in enumerate(domain.circles):
        s = 1 if k == domain.m - 1 else -1
        thetas.append(th)
        nodes.append(c.center + c.radius * e)
        tangents.append(s * 1j * e)
        weights.append(np.full(n, 2 * np.pi * c.radius / n))
        idx.append(np.full(n, k))
        sig.append(s)
    return BoundaryGrid(
        domain=domain,
        n=n,
        theta=np.concatenate(thetas),
        nodes=np.concatenate(nodes),
        tangents=np.concatenate(tangents),
        weights=np.concatenate(weights),
        circle_index=np.concatenate(idx),
        sigma=np.array(sig),
    )


@dataclass(frozen=True, eq=False)
class BoundarySamples:
    grid: BoundaryGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.shape != (self.grid.size,):
            raise GridMismatch(f"{v.size} values for a grid of {self.grid.size} nodes")
        object.__setattr__(self, "values", v)

    @property
    def real(self) -> "BoundarySamples":
        return BoundarySamples(self.grid, self.values.real.copy())

    def __mul__(self, other):
        o = other.values if isinstance(other, BoundarySamples) else other
        return BoundarySamples(self.grid, self.values * o)

    __rmul__ = __mul__


def _values_on(grid: BoundaryGrid, samples) -> np.ndarray:
    if isinstance(samples, BoundarySamples):
        if not samples.grid.same_as(grid):
            raise GridMismatch("samples were taken on a different grid")
        return samples.values
    v = np.asarray(samples)
    if v.shape[-1:] != (grid.size,):
        raise GridMismatch(f"{v.shape[-1]} values for a grid of {grid.size} nodes")
    return v


def contour_integral(grid: BoundaryGrid, samples) -> complex:
    """Trapezoidal approximation of the integral of ``samples`` over the boundary.

    Summation is per circle (numpy pairwise) then over circles in domain order,
    which makes the result independent of thread count. A 2-D ``samples`` array
    integrates each row.
    """
    f = _values_on(grid, samples) * grid.dz
    parts = [np.sum(f[..., s], axis=-1) for s in grid.slices]
    total = parts[0]
    for p in parts[1:]:
        total = total + p
    return total if np.ndim(total) else complex(total)


def real_boundary_sum(grid: BoundaryGrid, values) -> float:
    """Arclength-weighted sum of real node values, same fixed order as above."""
    f = _values_on(grid, values) * grid.weights
    total = 0.0
    for s in grid.slices:
        total = total + np.sum(f[..., s], axis=-1)
    return total


# CSV of boundary samples: circle_index,theta,re,im


def write_samples_csv(path, samples: BoundarySamples) -> None:
    g = samples.grid
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["circle_index", "theta", "re", "im"])
        for k, th, v in zip(g.circle_index, g.theta, samples.values):
            v = complex(v)
            w.writerow([int(k), repr(float(th)), repr(v.real), repr(v.imag)])


def read_samples_csv(path, domain: CircleDomain) -> BoundarySamples:
    """Read samples written by :func:`write_samples_csv` onto a fresh grid.

    The file must hold the same equispaced node count on every circle, listed in
    domain order; otherwise :class:`GridMismatch` is raised.
    """
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise GridMismatch("empty samples file")
    ks = np.array([int(r["circle_index"]) for r in rows])
    th = np.array([float(r["theta"]) for r in rows])
    vals = np.array([complex(float(r["re"]), float(r["im"])) for r in rows])
    if len(rows) % domain.m:
        raise GridMismatch(f"{len(rows)} rows do not split over {domain.m} circles")
    grid = boundary_grid(domain, len(rows) // domain.m)
    if not (np.array_equal(ks, grid.circle_index) and np.allclose(th, grid.theta, atol=1e-12)):
        raise GridMismatch("sample nodes are not the equispaced grid in domain order")
    return BoundarySamples(grid, vals)


def sample_function(grid: BoundaryGrid, f) -> BoundarySamples:
    return BoundarySamples(grid, np.asarray(f(grid.nodes), dtype=complex))


def ring(center: complex, radius: float, n: int, phase: float = 0.0) -> np.ndarray:
    return center + radius * np.exp(1j * (phase + 2 * np.pi * np.arange(n) / n))


def interior_points(domain: CircleDomain, count: int, rng: np.random.Generator,
                    margin: float = 0.02) -> np.ndarray:
    """Uniform random points of the domain at distance > ``margin`` from the boundary."""
    out: list[complex] = []
    o = domain.outer
    while len(out) < count:
        z = o.center + o.radius * (rng.uniform(-1, 1, 4 * count) + 1j * rng.uniform(-1, 1, 4 * count))
        out.extend(z[domain.contains(z, margin)].tolist())
    return np.array(out[:count])


def shrunk_contour(domain: CircleDomain, shrink: float, n: int) -> tuple[np.ndarray, np.ndarray, Sequence[slice]]:
    """Nodes and ``dz`` of the positively oriented boundary pulled into the domain.

    The outer circle shrinks by the factor ``1 - shrink``, every hole grows by
    ``1 + shrink``.
    """
    th = 2 * np.pi * np.arange(n) / n
    e = np.exp(1j * th)
    zs, dzs = [], []
    for k, c in enumerate(domain.circles):
        outer = k == domain.m - 1
        r = c.radius * (1 - shrink if outer else 1 + shrink)
        s = 1 if outer else -1
        zs.append(c.center + r * e)
        dzs.append(s * 1j * e * (2 * np.pi * r / n))
    slices = [slice(k * n, (k + 1) * n) for k in range(domain.m)]
    return np.concatenate(zs), np.concatenate(dzs), slices
