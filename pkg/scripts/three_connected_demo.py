"""End-to-end run on a 3-connected circle domain.

Harmonic measures and W fields, verdicts for a few boundary functions,
reconstruction of an extendible one, Szegő zeros, the span identity and the
no-common-zero margin.
"""

import argparse
import json

import numpy as np

from conjp import kernels as K
from conjp.expr import eval_expr, parse_expr, sample_boundary
from conjp.extendibility import extendibility_test, period_fields, reconstruct_extension
from conjp.geometry import boundary_grid, interior_points, load_domain, make_domain

DEFAULT = [(0, 1), (-0.08 + 0.03j, 0.15), (0.45 - 0.2j, 0.15)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--domain", help="domain JSON; default: the asymmetric 3-connected test domain")
    ap.add_argument("--nodes", type=int, default=256)
    args = ap.parse_args()

    d = load_domain(args.domain) if args.domain else make_domain(DEFAULT)
    g = boundary_grid(d, args.nodes)
    f = period_fields(d, g)
    print("domain:", json.dumps(d.to_dict()))
    print(f"Dirichlet residual of the harmonic measures: {f.dirichlet_residual:.1e}")
    for j, w in enumerate(f.W):
        print(f"  min |W_{j + 1}| on the boundary: {np.min(np.abs(w(g.nodes))):.4f}")

    c1 = d.holes[0].center
    texts = ["conj(z)", "z^2", f"1/(z-({c1.real}+{c1.imag}i))", "re(z)"]
    for text in texts:
        rep = extendibility_test(d, g, sample_boundary(parse_expr(text), g), fields=f)
        print(f"{text:>28}: {rep.verdict.value:<12} max period {rep.max_period:.1e}, "
              f"max Cauchy {rep.max_cauchy:.1e}, witness {rep.witness.get('name', rep.witness.get('label'))}")

    e = parse_expr(texts[2])
    z = interior_points(d, 5, np.random.default_rng(0))
    v = reconstruct_extension(d, g, eval_expr(e, g.nodes), z, fields=f)
    print("reconstruction error at 5 interior points:", float(np.max(np.abs(v - eval_expr(e, z)))))

    S, Z = K.szego_zeros_ladder(d, g)
    print(f"Szegő base point {S.a:.4f}; zeros {np.round(Z.points, 4)}; |S'| {np.round(Z.margins, 4)}")
    sp = K.span_check(d, g, S, Z, list(f.W))
    print(f"span residuals: W onto kernels {sp.max_w_onto_kernels:.1e}, kernels onto W "
          f"{sp.max_kernels_onto_w:.1e}, control {sp.control:.2f}")
    cz = K.common_zero_check(d, g, list(f.W))
    print(f"zeros of W_j: {[np.round(zs, 4).tolist() for zs in cz.zeros]}; "
          f"min over lattice of max_j |W_j| = {cz.margin:.4f}")


if __name__ == "__main__":
    main()
