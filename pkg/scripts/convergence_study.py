"""How the main quantities converge with the number of nodes per circle.

For each N: Dirichlet residual of the harmonic measures, error of the n = 1
annulus period, Szegő boundary error against the series, span residual, and
the same quantities' worst case on the 3-connected domain where no closed
form exists (three-route spread and span residual).
"""

import argparse
import warnings

import numpy as np

from conjp import harmonic as H
from conjp import kernels as K
from conjp.errors import ConjpError
from conjp.extendibility import period_fields
from conjp.geometry import annulus, boundary_grid, make_domain
from conjp.oracles import annulus_szego_series

R = 0.5
D3 = make_domain([(0, 1), (-0.08 + 0.03j, 0.15), (0.45 - 0.2j, 0.15)])


def annulus_row(n):
    d = annulus(R)
    g = boundary_grid(d, n)
    f = period_fields(d, g)
    phi = np.abs(g.nodes) ** 2
    exact = 2 * np.pi * (R * R - 1) / np.log(R)
    per = abs(H.period_pairing(g, phi, f.W[0]) - exact)
    S = K.kerzman_stein_solve(d, g, K.base_point(d))
    szego = np.max(np.abs(S.boundary - annulus_szego_series(R, g.nodes, S.a)))
    try:
        Z = K.szego_zeros(d, g, field=S)
        sp = K.span_check(d, g, S, Z, list(f.W), control=False)
        span = max(sp.max_w_onto_kernels, sp.max_kernels_onto_w)
    except ConjpError as err:
        span = type(err).__name__
    return f.dirichlet_residual, per, szego, span


def d3_row(n):
    g = boundary_grid(D3, n)
    f = period_fields(D3, g)
    rng = np.random.default_rng(1)
    spread = 0.0
    try:
        for _ in range(5):
            r = H.three_route_periods(D3, g, H.random_smooth_data(g, rng), list(f.measures))
            v = np.array([r["coefficients"], r["contour"], r["flux"]])
            spread = max(spread, float(np.max(v.max(axis=0) - v.min(axis=0))))
    except ConjpError as err:
        spread = type(err).__name__
    try:
        S, Z = K.szego_zeros_ladder(D3, g)
        sp = K.span_check(D3, g, S, Z, list(f.W), control=False)
        span = max(sp.max_w_onto_kernels, sp.max_kernels_onto_w)
    except ConjpError as err:
        span = type(err).__name__
    return f.dirichlet_residual, spread, span


def fmt(x):
    return f"{x:>12.2e}" if isinstance(x, float) else f"{x[:15]:>16}"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, nargs="+", default=[32, 64, 128, 256, 512])
    args = ap.parse_args()
    warnings.simplefilter("ignore")

    print("annulus R = 0.5")
    print(f"{'N':>5}{'dirichlet':>12}{'period err':>12}{'szego err':>12}{'span':>12}")
    for n in args.nodes:
        print(f"{n:>5}" + "".join(fmt(x) for x in annulus_row(n)))
    print("\n3-connected domain")
    print(f"{'N':>5}{'dirichlet':>12}{'3-route':>12}{'span':>12}")
    for n in args.nodes:
        print(f"{n:>5}" + "".join(fmt(x) for x in d3_row(n)))


if __name__ == "__main__":
    main()
