
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conjp import extendibility as X
from conjp.errors import AllFieldsTinyAtPoint, NotCertifiedExtendible, ProbeTooCloseToBoundary
from conjp.expr import eval_expr, parse_expr, sample_boundary
from conjp.extendibility import Tolerances, Verdict
from conjp.geometry import interior_points

R = 0.5
WITNESS = 2 * np.pi * (R * R - 1) / np.log(R)


@pytest.fixture(scope="module")
def ann_fields(ann, ann_grid):
    return X.period_fields(ann, ann_grid)


@pytest.fixture(scope="module")
def d3_fields(d3, d3_grid):
    return X.period_fields(d3, d3_grid)


@pytest.fixture(scope="module")
def dex_fields(dex, dex_grid):
    return X.period_fields(dex, dex_grid)


def run(domain, grid, fields, text, **kw):
    phi = sample_boundary(parse_expr(text), grid)
    return X.extendibility_test(domain, grid, phi, fields=fields, **kw)


def test_family_members(ann, d3):
    fam = X.test_family(ann, 3)
    assert fam.names[::2] == ("1", "z", "z^2", "z^3", "0.5/z", "(0.5/z)^2", "(0.5/z)^3")
    assert fam.names[1::2] == ("i", "i*z", "i*z^2", "i*z^3", "i*0.5/z", "i*(0.5/z)^2", "i*(0.5/z)^3")
    assert len(X.test_family(d3, 12)) == 2 * (13 + 2 * 12)
    # names read back as the member they label
    z = np.array([0.7 + 0.1j])
    for name, e in zip(fam.names, fam.exprs):
        np.testing.assert_allclose(eval_expr(parse_expr(name), z), eval_expr(e, z), rtol=1e-15)


def test_cauchy_transform_constant(ann_grid):
    assert abs(X.cauchy_transform(ann_grid, np.ones(ann_grid.size), 0.1)) < 1e-14


def test_cauchy_transform_conj(ann_grid):
    phi = np.conj(ann_grid.nodes)
    assert X.cauchy_transform(ann_grid, phi, 2.0) == pytest.approx((R * R - 1) / 2, abs=1e-14)
    assert abs(X.cauchy_transform(ann_grid, phi, 0.0)) < 1e-14


def test_probe_warning(ann_grid):
    with pytest.warns(ProbeTooCloseToBoundary):
        X.cauchy_transform(ann_grid, np.ones(ann_grid.size), 1.01)


def test_probe_layout(d3):
    pts, labels = X.probe_points(d3)
    assert len(pts) == 2 * 9 + 8
    assert not d3.contains(pts).any()
    assert labels[0] == "hole0:center" and labels[-1] == "exterior:ring7"


def test_conj_annulus(ann, ann_grid, ann_fields):
    r = run(ann, ann_grid, ann_fields, "conj(z)")
    assert r.verdict == Verdict.NOT_EXTENDS
    assert r.witness["name"] == "g=z"
    assert r.witness["value"] == pytest.approx(WITNESS, rel=1e-10)
    assert r.period_verdict == r.cauchy_verdict


def test_conj_restricted_family(ann, ann_grid, ann_fields):
    fam = X.test_family(ann).filtered(lambda name: name not in ("z", "i*z"))
    r = run(ann, ann_grid, ann_fields, "conj(z)", family=fam)
    assert r.max_period < 1e-9
    # the Cauchy probes still see it
    assert r.cauchy_verdict == Verdict.NOT_EXTENDS
    assert r.verdict == Verdict.INCONCLUSIVE


@pytest.mark.parametrize("text", ["z^2", "1/z", "1/(z-0)"])
def test_extends_annulus(text, ann, ann_grid, ann_fields):
    r = run(ann, ann_grid, ann_fields, text)
    assert r.verdict == Verdict.EXTENDS
    assert r.max_period < 1e-9 and r.max_cauchy < 1e-9


@pytest.mark.parametrize("name", ["d3", "dex"])
def test_conj_three_connected(name, request):
    d = request.getfixturevalue(name)
    g = request.getfixturevalue(name + "_grid")
    f = request.getfixturevalue(name + "_fields")
    r = run(d, g, f, "conj(z)")
    assert r.verdict == Verdict.NOT_EXTENDS
    assert r.witness["kind"] == "period"


@pytest.mark.parametrize("k", [0, 1])
@pytest.mark.parametrize("name", ["d3", "dex"])
def test_conj_shift_per_hole(name, k, request):
    d = request.getfixturevalue(name)
    g = request.getfixturevalue(name + "_grid")
    f = request.getfixturevalue(name + "_fields")
    c = d.holes[k].center
    phi = np.conj(g.nodes - c)
    r = X.extendibility_test(d, g, phi, fields=f)
    assert r.verdict == Verdict.NOT_EXTENDS
    assert abs(r.witness["value"]) > 1e-2


def test_d3_extends(d3, d3_grid, d3_fields):
    texts = ["z^2", "1/z"] + [f"1/(z-({h.center.real}+{h.center.imag}i))" for h in d3.holes]
    for t in texts:
        r = run(d3, d3_grid, d3_fields, t)
        assert r.verdict == Verdict.EXTENDS, t
        assert r.max_period < 1e-8 and r.max_cauchy < 1e-8


@pytest.mark.parametrize("text", ["im(z^3)", "re(z^-2)", "re(z)"])
def test_real_data_caught_by_periods(text, ann, ann_grid, ann_fields):
    # real boundary data needs the i*g members to expose a failing period
    r = run(ann, ann_grid, ann_fields, text)
    assert r.period_verdict == Verdict.NOT_EXTENDS
    assert r.verdict == Verdict.NOT_EXTENDS


def test_one_over_z_when_origin_in_domain(dex, dex_grid, dex_fields):
    # 0 lies in this domain, so 1/z has a pole inside and cannot extend
    assert dex.contains(np.array([0j]))[0]
    r = run(dex, dex_grid, dex_fields, "1/z")
    assert r.verdict == Verdict.NOT_EXTENDS


def test_dex_hole_poles_extend(dex, dex_grid, dex_fields):
    for h in dex.holes:
        phi = 1 / (dex_grid.nodes - h.center)
        r = X.extendibility_test(dex, dex_grid, phi, fields=dex_fields)
        assert r.verdict == Verdict.EXTENDS


@pytest.mark.parametrize("name", ["ann", "d3"])
@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_forward_direction(name, seed, request):
    d = request.getfixturevalue(name)
    g = request.getfixturevalue(name + "_grid")
    f = request.getfixturevalue(name + "_fields")
    e = X.random_rational(d, np.random.default_rng(seed))
    phi = eval_expr(e, g.nodes)
    r = X.extendibility_test(d, g, phi, fields=f)
    assert r.max_period < 1e-8
    assert r.max_cauchy < 1e-8
    assert r.verdict == Verdict.EXTENDS


def test_diagnostics_agree_on_examples(ann, ann_grid, ann_fields, d3, d3_grid, d3_fields):
    for d, g, f in ((ann, ann_grid, ann_fields), (d3, d3_grid, d3_fields)):
        for t in ["conj(z)", "z^2", "1/z", "re(z)", "z*conj(z)", "im(z^3)"]:
            r = run(d, g, f, t)
            assert r.period_verdict == r.cauchy_verdict, (t, r.period_verdict, r.cauchy_verdict)


def test_tolerance_scaling():
    t = Tolerances()
    assert t.scale(1e-12) == 1
    assert t.scale(1e-7) == pytest.approx(100)
    with pytest.raises(ValueError):
        Tolerances(accept=1e-3, reject=1e-4)
    with pytest.raises(ValueError):
        Tolerances(accept=-1)


def test_noise_is_inconclusive(ann, ann_grid, ann_fields):
    rng = np.random.default_rng(7)
    phi = ann_grid.nodes ** 2 + 1e-5 * (rng.standard_normal(ann_grid.size) + 1j * rng.standard_normal(ann_grid.size))
    r = X.extendibility_test(ann, ann_grid, phi, fields=ann_fields)
    assert r.verdict == Verdict.INCONCLUSIVE


def test_report_dict(ann, ann_grid, ann_fields):
    d = run(ann, ann_grid, ann_fields, "conj(z)").to_dict()
    assert d["verdict"] == "NOT_EXTENDS"
    assert d["rho"]["rows"] * d["rho"]["cols"] == len(d["rho"]["row_major"])
    assert len(d["probes"]) == 9 + 8


def test_reconstruct_one_over_z(ann, ann_grid, ann_fields):
    phi = 1 / ann_grid.nodes
    v = X.reconstruct_extension(ann, ann_grid, phi, 0.7, fields=ann_fields)
    assert abs(v - 1 / 0.7) < 1e-8


def test_reconstruct_square(ann, ann_grid, ann_fields):
    v = X.reconstruct_extension(ann, ann_grid, ann_grid.nodes ** 2, 0.6j, fields=ann_fields)
    assert v == pytest.approx(-0.36, abs=1e-10)


def test_reconstruct_hole_pole(d3, d3_grid, d3_fields, rng):
    c = d3.holes[0].center
    phi = 1 / (d3_grid.nodes - c)
    z = interior_points(d3, 30, rng)
    v = X.reconstruct_extension(d3, d3_grid, phi, z, fields=d3_fields)
    np.testing.assert_allclose(v, 1 / (z - c), atol=1e-8)


def test_reconstruct_refuses_uncertified(ann, ann_grid, ann_fields):
    with pytest.raises(NotCertifiedExtendible):
        X.reconstruct_extension(ann, ann_grid, np.conj(ann_grid.nodes), 0.7, fields=ann_fields)


def test_reconstruct_tiny_fields(d3, d3_grid, d3_fields):
    phi = d3_grid.nodes ** 2
    with pytest.raises(AllFieldsTinyAtPoint):
        X.reconstruct_extension(d3, d3_grid, phi, 0.5 + 0.5j, fields=d3_fields, tiny=1e6)


@pytest.mark.parametrize("name", ["ann", "d3"])
def test_reconstruction_near_boundary(name, request):
    d = request.getfixturevalue(name)
    g = request.getfixturevalue(name + "_grid")
    f = request.getfixturevalue(name + "_fields")
    e = X.random_rational(d, np.random.default_rng(3))
    phi = eval_expr(e, g.nodes)
    idx = np.arange(0, g.size, 7)
    radius = np.array([d.circles[k].radius for k in g.circle_index[idx]])
    gaps = []
    for t in (0.05, 5e-3, 5e-4, 5e-5, 5e-6):
        # pull each node t * radius into the domain along the inward normal
        z_in = g.nodes[idx] - t * radius * g.normals[idx]
        assert d.contains(z_in).all()
        v = X.reconstruct_extension(d, g, phi, z_in, fields=f)
        assert np.max(np.abs(v - eval_expr(e, z_in))) < 1e-8
        gaps.append(np.max(np.abs(v - phi[idx])))
    # boundary values are approached at the rate of the pull distance
    assert gaps[-1] < 1e-4
    assert all(a > 5 * b for a, b in zip(gaps, gaps[1:]))


def test_j_independence(d3, d3_grid, d3_fields, rng):
    e = X.random_rational(d3, np.random.default_rng(11))
    phi = eval_expr(e, d3_grid.nodes)
    z = interior_points(d3, 40, rng)
    Wz = np.array([w(z) for w in d3_fields.W])
    ok = np.all(np.abs(Wz) > 1e-6, axis=0)
    v0 = X.reconstruct_extension(d3, d3_grid, phi, z[ok], fields=d3_fields, j=0)
    v1 = X.reconstruct_extension(d3, d3_grid, phi, z[ok], fields=d3_fields, j=1)
    assert np.max(np.abs(v0 - v1)) < 1e-7
