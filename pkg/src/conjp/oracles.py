"""Closed-form ground truth on the annulus ``R < |z| < 1``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import TruncationInsufficient

SERIES_TERM_TOL = 1e-14


def example_coefficient(R: float, n: int) -> float:
    """Coefficient of ``z^(n-1) - z^(1-n)`` in the harmonic extension of ``Re(z^n conj z)``."""
    if n == 1:
        raise ValueError("the coefficient is undefined for n = 1")
    return (R ** (n + 1) - R ** (n - 1)) / (R ** (n - 1) - R ** (1 - n))


@dataclass(frozen=True)
class AnnulusCase:
    R: float
    n: int
    u: Callable
    conjugate: Callable
    period: float
    coefficient: float | None


def annulus_example(R: float, n: int) -> AnnulusCase:
    """Harmonic extension of ``Re(z^n conj z)`` from the boundary of the annulus.

    For ``n != 1`` the extension is the real part of a single-valued
    holomorphic function, so the period is zero. For ``n = 1`` the data is
    ``|z|^2`` and the extension is radial, ``1 + (R^2 - 1) ln|z| / ln R``.
    """
    if not 0 < R < 1:
        raise ValueError(f"need 0 < R < 1, got {R}")
    if n != 1:
        C = example_coefficient(R, n)

        def F(z):
            z = np.asarray(z, dtype=complex)
            return C * (z ** (n - 1) - z ** (1 - n)) + z ** (n - 1)

        return AnnulusCase(R, n, lambda z: F(z).real, lambda z: F(z).imag, 0.0, C)

    b = (R * R - 1) / np.log(R)

    def u(z):
        return 1 + b * np.log(np.abs(np.asarray(z, dtype=complex)))

    def conj(z):
        # principal branch; jumps by 2 pi b across the negative axis
        return b * np.angle(np.asarray(z, dtype=complex))

    return AnnulusCase(R, 1, u, conj, 2 * np.pi * b, None)


def _cmul(ar, ai, br, bi):
    # written out in real arithmetic so that conj(x) conj(y) == conj(x y) holds bit for bit
    return ar * br - ai * bi, ar * bi + ai * br


def _powers(wr, wi, M):
    out_r, out_i = [], []
    pr, pi_ = np.ones_like(wr), np.zeros_like(wi)
    for _ in range(M):
        pr, pi_ = _cmul(pr, pi_, wr, wi)
        out_r.append(pr)
        out_i.append(pi_)
    return np.stack(out_r, axis=-1), np.stack(out_i, axis=-1)


def _szego_terms(R, z, a, M):
    """Terms of the series; S(z, a) = conj(S(a, z)) holds exactly, not just to rounding.

    Negative powers are written as ``(R^2/(z conj a))^k / (2 pi R (1 + R^(2k-1)))``
    so that no intermediate overflows for large ``M``.
    """
    n = np.arange(-M, M + 1)
    k = np.arange(1, M + 1)
    z = np.asarray(z, dtype=complex)
    a = complex(a)
    wr, wi = _cmul(z.real, z.imag, a.real, -a.imag)
    s = R * R / (wr * wr + wi * wi)
    pos_r, pos_i = _powers(wr, wi, M)
    neg_r, neg_i = _powers(wr * s, -wi * s, M)
    pos_n = 2 * np.pi * (1 + R ** (2.0 * k + 1))
    neg_n = 2 * np.pi * R * (1 + R ** (2.0 * k - 1))
    one = np.ones(z.shape + (1,))
    tr = np.concatenate([(neg_r / neg_n)[..., ::-1], one / (2 * np.pi * (1 + R)), pos_r / pos_n], axis=-1)
    ti = np.concatenate([(neg_i / neg_n)[..., ::-1], 0 * one, pos_i / pos_n], axis=-1)
    return n, tr + 1j * ti


def annulus_szego_series(R: float, z, a, M: int = 400) -> complex:
    """Szegő kernel of the annulus from its orthonormal monomial basis.

    ``sum_{|n| <= M} (z conj a)^n / (2 pi (1 + R^(2n+1)))``; the norm of ``z^n``
    on the boundary with arclength measure is ``2 pi (1 + R^(2n+1))``.
    """
    if M < 50:
        raise ValueError("truncation M must be at least 50")
    z_arr = np.asarray(z, dtype=complex)
    n, t = _szego_terms(R, z_arr, a, M)
    last = np.max(np.abs(t[..., [0, -1]]))
    if last > SERIES_TERM_TOL:
        raise TruncationInsufficient(f"last series term {last:.3g} exceeds {SERIES_TERM_TOL}")
    # add from the small tails inward, real and imaginary parts separately
    order = np.argsort(-np.abs(n), kind="stable")
    s = t[..., order].real.sum(axis=-1) + 1j * t[..., order].imag.sum(axis=-1)
    return complex(s) if z_arr.ndim == 0 else s


def annulus_szego_tail_bound(R: float, z, a, M: int = 400) -> float:
    """Geometric bound on the neglected terms ``|n| > M``."""
    q_pos = np.max(np.abs(np.asarray(z) * np.conj(a)))
    q_neg = R * R / np.min(np.abs(np.asarray(z) * np.conj(a)))
    bound = 0.0
    for q, scale in ((q_pos, 1.0), (q_neg, 1.0 / R)):
        if q >= 1:
            return float("inf")
        bound += scale * q ** (M + 1) / (1 - q) / (2 * np.pi)
    return float(bound)


def szego_series_zero(R: float, a: complex, M: int = 400) -> complex:
    """Zero of ``z -> S(z, a)`` on the annulus, from the series alone.

    For real positive ``a`` the zero lies on the negative axis; it is bracketed
    by bisection there and polished by Newton on the series. For general ``a``
    the problem rotates: ``S(z, a) = S(z e^{-it}, |a|)`` with ``t = arg a``.
    """
    t = np.angle(a)
    r = abs(a)

    def f(x):
        return annulus_szego_series(R, x, r, M).real

    lo, hi = -1.0, -R
    grid = np.linspace(lo, hi, 401)[1:-1]
    vals = annulus_szego_series(R, grid, r, M).real
    idx = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]
    if idx.size != 1:
        raise ArithmeticError(f"expected one sign change on the negative axis, found {idx.size}")
    x0, x1 = grid[idx[0]], grid[idx[0] + 1]
    for _ in range(60):
        xm = 0.5 * (x0 + x1)
        if np.sign(f(xm)) == np.sign(f(x0)):
            x0 = xm
        else:
            x1 = xm
    x = 0.5 * (x0 + x1)
    n = np.arange(-M, M + 1)
    for _ in range(5):
        # derivative of the series in z: sum n t_n / z
        _, terms = _szego_terms(R, x, r, M)
        x -= f(x) / (np.sum(n * terms.real) / x)
    return complex(x * np.exp(1j * t))
