"""Command-line front end.

Commands: ``verify``, ``test``, ``solve``, ``kernels``, ``dump``. Exit codes:
0 success / EXTENDS, 1 failure or bad configuration, 2 NOT_EXTENDS,
3 INCONCLUSIVE.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from dataclasses import dataclass

import numpy as np

from . import expr as ex
from .errors import ConfigError, ConjpError
from .extendibility import (
    DEFAULT_PTEST,
    Tolerances,
    Verdict,
    extendibility_test,
    period_fields,
    random_rational,
    reconstruct_extension,
    test_family,
)
from .geometry import (
    CircleDomain,
    annulus,
    boundary_grid,
    load_domain,
    read_samples_csv,
)
from .harmonic import (
    DEFAULT_NODES,
    conjugate_periods,
    random_smooth_data,
    solve_dirichlet,
    three_route_periods,
)
from . import kernels as kn

SCHEMA_VERSION = "1.0"
EXIT_CODES = {Verdict.EXTENDS: 0, Verdict.NOT_EXTENDS: 2, Verdict.INCONCLUSIVE: 3}

VERIFY_TOL = 1e-8
SPAN_TOL = 1e-5
RESIDUE_TOL = 1e-5
N_RANDOM_PHI = 50
N_RANDOM_DATA = 20

_complex = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "conjp report",
    "type": "object",
    "required": ["schema_version", "command", "config"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {"enum": ["verify", "test", "solve", "kernels"]},
        "config": {"type": "object"},
    },
    "allOf": [
        {"if": {"properties": {"command": {"const": "test"}}},
         "then": {"required": ["verdict", "witness", "rho", "probes", "max_period", "max_cauchy"],
                  "properties": {"verdict": {"enum": [v.value for v in Verdict]}}}},
        {"if": {"properties": {"command": {"const": "verify"}}},
         "then": {"required": ["passed", "checks", "seed"],
                  "properties": {"passed": {"type": "boolean"},
                                 "checks": {"type": "array", "items": {
                                     "type": "object", "required": ["name", "passed"]}}}}},
        {"if": {"properties": {"command": {"const": "solve"}}},
         "then": {"required": ["coefficients", "residual", "periods"]}},
        {"if": {"properties": {"command": {"const": "kernels"}}},
         "then": {"required": ["a", "zeros", "margins", "garabedian"],
                  "properties": {"a": _complex, "zeros": {"type": "array", "items": _complex}}}},
    ],
}


@dataclass
class RunConfig:
    command: str
    domain_path: str | None = None
    phi: str | None = None
    phi_samples: str | None = None
    nodes: int = DEFAULT_NODES
    degree: int | None = None
    ptest: int = DEFAULT_PTEST
    tol_accept: float = 1e-7
    tol_reject: float = 1e-4
    seed: int = 0
    json_path: str | None = None
    a: str | None = None
    lattice: int = 50
    out: str | None = None

    def validate(self, need_phi: bool = False) -> None:
        if self.phi is not None and self.phi_samples is not None:
            raise ConfigError("give exactly one of --phi and --phi-samples")
        if need_phi and self.phi is None and self.phi_samples is None:
            raise ConfigError("this command needs --phi or --phi-samples")
        if self.nodes % 2 or self.nodes < 16:
            raise ConfigError(f"--nodes must be even and >= 16, got {self.nodes}")
        if not (self.tol_accept > 0 and self.tol_reject > 0):
            raise ConfigError("tolerances must be positive")
        if self.tol_accept > self.tol_reject:
            raise ConfigError(f"--tol-accept {self.tol_accept} exceeds --tol-reject {self.tol_reject}")

    def as_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items()}

    def load_domain(self) -> CircleDomain:
        return annulus(0.5) if self.domain_path is None else load_domain(self.domain_path)

    def tolerances(self) -> Tolerances:
        return Tolerances(accept=self.tol_accept, reject=self.tol_reject)


def _c(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _phi_samples(cfg: RunConfig, domain: CircleDomain):
    if cfg.phi_samples is not None:
        s = read_samples_csv(cfg.phi_samples, domain)
        return s.grid, s
    grid = boundary_grid(domain, cfg.nodes)
    return grid, ex.sample_boundary(ex.parse_expr(cfg.phi), grid)


def _emit(cfg: RunConfig, report: dict) -> None:
    text = json.dumps(report, indent=2, sort_keys=True)
    if cfg.json_path:
        with open(cfg.json_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _header(cfg: RunConfig, command: str) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, "config": cfg.as_dict()}


def cmd_test(cfg: RunConfig) -> int:
    cfg.validate(need_phi=True)
    domain = cfg.load_domain()
    grid, phi = _phi_samples(cfg, domain)
    fam = test_family(domain, cfg.ptest)
    rep = extendibility_test(domain, grid, phi, fam, cfg.tolerances(),
                             fields=period_fields(domain, grid, cfg.degree))
    _emit(cfg, {**_header(cfg, "test"), **rep.to_dict()})
    return EXIT_CODES[rep.verdict]


def cmd_solve(cfg: RunConfig) -> int:
    cfg.validate(need_phi=True)
    domain = cfg.load_domain()
    grid, phi = _phi_samples(cfg, domain)
    rep = solve_dirichlet(domain, grid, phi.values, cfg.degree)
    report = {
        **_header(cfg, "solve"),
        "coefficients": {
            "a0": rep.a0,
            "beta": rep.beta.tolist(),
            "outer": [_c(c) for c in rep.outer],
            "holes": [[_c(c) for c in h] for h in rep.holes],
            "degree": rep.degree,
        },
        "residual": rep.boundary_residual,
        "condition": rep.cond,
        "periods": conjugate_periods(rep).tolist(),
    }
    _emit(cfg, report)
    return 0


def cmd_kernels(cfg: RunConfig) -> int:
    cfg.validate()
    domain = cfg.load_domain()
    grid = boundary_grid(domain, cfg.nodes)
    if cfg.a is not None:
        S = kn.kerzman_stein_solve(domain, grid, ex.parse_constant(cfg.a))
        Z = kn.szego_zeros(domain, grid, field=S)
    else:
        S, Z = kn.szego_zeros_ladder(domain, grid)
    L = kn.garabedian_field(domain, grid, S)
    report = {
        **_header(cfg, "kernels"),
        "a": _c(S.a),
        "S_aa": _c(S(np.array([S.a]))[0]),
        "zeros": [_c(z) for z in Z.points],
        "margins": Z.margins.tolist(),
        "winding": Z.winding,
        "reproducing_error": max(kn.reproducing_error(S, np.ones_like), kn.reproducing_error(S, lambda z: z)),
        "garabedian": {k: (_c(v) if isinstance(v, complex) else v) for k, v in L.checks.items()},
    }
    _emit(cfg, report)
    return 0


def _fmt(x) -> str:
    return repr(float(x))


def cmd_dump_fields(cfg: RunConfig) -> int:
    cfg.validate()
    domain = cfg.load_domain()
    grid = boundary_grid(domain, cfg.nodes)
    fields = period_fields(domain, grid, cfg.degree)
    o = domain.outer
    t = np.linspace(-1, 1, cfg.lattice)
    pts = (o.center + o.radius * (t[None, :] + 1j * t[:, None])).ravel()
    inside = domain.contains(pts, 1e-9)
    zin = pts[inside]
    hs = [h(zin) for h in fields.measures]
    ws = [np.abs(w(zin)) for w in fields.W]
    rec = None
    if cfg.phi is not None or cfg.phi_samples is not None:
        g2, phi = _phi_samples(cfg, domain)
        f2 = fields if g2.same_as(grid) else period_fields(domain, g2, cfg.degree)
        rep = extendibility_test(domain, g2, phi, tolerances=cfg.tolerances(), fields=f2)
        if rep.verdict == Verdict.EXTENDS:
            rec = reconstruct_extension(domain, g2, phi, zin, report=rep, fields=f2)
        else:
            print(f"phi not certified extendible ({rep.verdict.value}); reconstruction left empty",
                  file=sys.stderr)
    header = ["x", "y", "in_domain"] + [f"h_{j + 1}" for j in range(domain.m)]
    header += [f"absW_{j + 1}" for j in range(domain.m - 1)] + ["phi_re", "phi_im"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    k = 0
    for z, ok in zip(pts, inside):
        row = [_fmt(z.real), _fmt(z.imag), "1" if ok else "0"]
        if ok:
            row += [_fmt(h[k]) for h in hs] + [_fmt(a[k]) for a in ws]
            row += [_fmt(rec[k].real), _fmt(rec[k].imag)] if rec is not None else ["", ""]
            k += 1
        else:
            row += [""] * (len(header) - 3)
        w.writerow(row)
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return 0


def _check(name: str, passed: bool, **margins) -> dict:
    return {"name": name, "passed": bool(passed), **margins}


def cmd_verify_proposition(cfg: RunConfig) -> int:
    cfg.validate()
    domain = cfg.load_domain()  # raises before any numerics for m < 2
    grid = boundary_grid(domain, cfg.nodes)
    tol = cfg.tolerances()
    fields = period_fields(domain, grid, cfg.degree)
    fam = test_family(domain, cfg.ptest)
    rng = np.random.default_rng(cfg.seed)
    checks = []

    # forward direction: members of A(bD) have vanishing periods and Cauchy residuals
    pmax = cmax = 0.0
    for _ in range(N_RANDOM_PHI):
        e = random_rational(domain, rng)
        rep = extendibility_test(domain, grid, ex.sample_boundary(e, grid), fam, tol, fields)
        pmax, cmax = max(pmax, rep.max_period), max(cmax, rep.max_cauchy)
    checks.append(_check("forward_direction", pmax < VERIFY_TOL and cmax < VERIFY_TOL,
                         max_period=pmax, max_cauchy=cmax, count=N_RANDOM_PHI))

    # reverse direction: conj(z - c) does not extend, with an explicit witness
    counter = []
    for c in [domain.outer.center] + [h.center for h in domain.holes]:
        e = ex.conj_shift(c)
        rep = extendibility_test(domain, grid, ex.sample_boundary(e, grid), fam, tol, fields)
        counter.append({"phi": ex.to_text(e), "verdict": rep.verdict.value, "witness": rep.witness,
                        "max_cauchy": rep.max_cauchy})
    checks.append(_check("counterexample", all(c["verdict"] == "NOT_EXTENDS" for c in counter),
                         cases=counter, witness_period=counter[0]["witness"]["value"]))

    # three routes to the same hole periods
    disc = 0.0
    for _ in range(N_RANDOM_DATA):
        phi = random_smooth_data(grid, rng)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            r = three_route_periods(domain, grid, phi, list(fields.measures))
        v = np.array([r["coefficients"], r["contour"], r["flux"]])
        disc = max(disc, float(np.max(v.max(axis=0) - v.min(axis=0))))
    checks.append(_check("three_route_periods", disc < VERIFY_TOL, max_discrepancy=disc, count=N_RANDOM_DATA))

    # kernels: Szegő zeros, Garabedian residue, span identity, no common zero
    try:
        S, Z = kn.szego_zeros_ladder(domain, grid)
        L = kn.garabedian_field(domain, grid, S)
        res_err = abs(L.checks["residue_ring"] - kn.RESIDUE)
        sp = kn.span_check(domain, grid, S, Z, list(fields.W))
        checks.append(_check("szego_zeros", len(Z.points) == domain.m - 1, count=len(Z.points),
                             zeros=[_c(z) for z in Z.points], margins=Z.margins.tolist(), a=_c(S.a)))
        checks.append(_check("garabedian_residue", res_err < RESIDUE_TOL, error=res_err))
        checks.append(_check("span_identity",
                             sp.max_w_onto_kernels < SPAN_TOL and sp.max_kernels_onto_w < SPAN_TOL,
                             w_onto_kernels=sp.max_w_onto_kernels, kernels_onto_w=sp.max_kernels_onto_w,
                             control=sp.control))
    except ConjpError as err:
        checks.append(_check("kernels", False, error=f"{type(err).__name__}: {err}"))
    try:
        cz = kn.common_zero_check(domain, grid, list(fields.W))
        checks.append(_check("no_common_zero", cz.margin > 0, margin=cz.margin,
                             zeros=[[_c(z) for z in zs] for zs in cz.zeros]))
    except ConjpError as err:
        checks.append(_check("no_common_zero", False, error=f"{type(err).__name__}: {err}"))

    passed = all(c["passed"] for c in checks)
    report = {**_header(cfg, "verify"), "seed": cfg.seed, "passed": passed, "checks": checks,
              "dirichlet_residual": fields.dirichlet_residual}
    _emit(cfg, report)
    if not passed:
        first = next(c["name"] for c in checks if not c["passed"])
        print(f"verify: check failed: {first}", file=sys.stderr)
        return 1
    return 0


COMMANDS = {
    "verify": cmd_verify_proposition,
    "test": cmd_test,
    "solve": cmd_solve,
    "kernels": cmd_kernels,
    "dump": cmd_dump_fields,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="conjp", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--domain", dest="domain_path", help="domain JSON (default: annulus R=0.5)")
        sp.add_argument("--nodes", type=int, default=DEFAULT_NODES, help="nodes per circle (even)")
        sp.add_argument("--degree", type=int, default=None, help="Laurent degree of the Dirichlet fit")
        sp.add_argument("--tol-accept", type=float, default=1e-7)
        sp.add_argument("--tol-reject", type=float, default=1e-4)
        sp.add_argument("--json", dest="json_path", help="write the JSON report here instead of stdout")

    def phi_args(sp):
        sp.add_argument("--phi", help="boundary function expression, e.g. 'conj(z)'")
        sp.add_argument("--phi-samples", "--data", dest="phi_samples",
                        help="CSV with columns circle_index,theta,re,im")

    sp = sub.add_parser("verify", help="run the full check pipeline on a domain")
    common(sp)
    sp.add_argument("--ptest", type=int, default=DEFAULT_PTEST)
    sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("test", help="extendibility verdict for boundary data")
    common(sp)
    phi_args(sp)
    sp.add_argument("--ptest", type=int, default=DEFAULT_PTEST)

    sp = sub.add_parser("solve", help="Dirichlet solve with conjugate periods")
    common(sp)
    phi_args(sp)

    sp = sub.add_parser("kernels", help="Szegő zeros and Garabedian checks")
    sp.add_argument("kind", nargs="?", default="szego", choices=["szego"])
    common(sp)
    sp.add_argument("--a", help="base point, e.g. '0.85*exp(i*pi/7)'")

    sp = sub.add_parser("dump", help="CSV of h_j, |W_j| and reconstructed phi on a lattice")
    common(sp)
    phi_args(sp)
    sp.add_argument("--lattice", type=int, default=50)
    sp.add_argument("--out", help="CSV path (default stdout)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    cfg = RunConfig(**fields)
    try:
        return COMMANDS[args.command](cfg)
    except ConjpError as err:
        print(f"conjp {args.command}: {type(err).__name__}: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
