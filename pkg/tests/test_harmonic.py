
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conjp import harmonic as H
from conjp.errors import NonRealPairing, PointNotInterior, ResidualTooLarge
from conjp.expr import parse_expr, sample_boundary
from conjp.geometry import boundary_grid, contour_integral, interior_points

R = 0.5
LN_R = np.log(R)


def test_inner_measure_closed_form(ann, ann_grid):
    h = H.harmonic_measure(ann, ann_grid, 0)
    assert h.boundary_residual < 1e-12
    assert H.eval_harmonic(h, np.sqrt(0.5)) == pytest.approx(0.5, abs=1e-12)
    assert H.eval_harmonic(h, 0.6) == pytest.approx(np.log(0.6) / LN_R, abs=1e-12)
    assert H.eval_harmonic(h, 0.6) == pytest.approx(0.736966, abs=1e-6)


def test_outer_measure_is_complement(ann, ann_grid, rng):
    h = H.harmonic_measure(ann, ann_grid, 1)
    z = interior_points(ann, 20, rng)
    np.testing.assert_allclose(h(z), 1 - np.log(np.abs(z)) / LN_R, atol=1e-12)


def test_re_z(ann, ann_grid, dex, dex_grid):
    rep = H.solve_dirichlet(ann, ann_grid, ann_grid.nodes.real)
    assert rep.boundary_residual < 1e-12
    assert np.all(rep.beta == pytest.approx(0, abs=1e-13))
    assert H.eval_harmonic(rep, 0.6 + 0.2j) == pytest.approx(0.6, abs=1e-12)
    np.testing.assert_allclose(H.conjugate_periods(rep), 0, atol=1e-12)
    # 0.3+0.4i sits on the inner circle of the annulus, but inside the 3-connected domain
    rep = H.solve_dirichlet(dex, dex_grid, dex_grid.nodes.real)
    assert H.eval_harmonic(rep, 0.3 + 0.4j) == pytest.approx(0.3, abs=1e-10)


def test_abs_squared_radial(ann, ann_grid, rng):
    rep = H.solve_dirichlet(ann, ann_grid, np.abs(ann_grid.nodes) ** 2)
    b = (R * R - 1) / LN_R
    assert rep.beta[0] == pytest.approx(b, rel=1e-12)
    z = interior_points(ann, 20, rng)
    np.testing.assert_allclose(rep(z), 1 + b * np.log(np.abs(z)), atol=1e-12)


def test_point_not_interior(ann, ann_grid):
    h = H.harmonic_measure(ann, ann_grid, 0)
    for z in (1.0, 0.5j, 0.1, 1.5):
        with pytest.raises(PointNotInterior):
            H.eval_harmonic(h, z)


def test_measure_periods(ann, ann_grid):
    h = H.harmonic_measure(ann, ann_grid, 0)
    p = H.conjugate_periods(h)
    assert p[0] == pytest.approx(2 * np.pi / LN_R, rel=1e-12)
    assert p[0] == pytest.approx(-9.06472, abs=1e-5)


def test_w_field_closed_form(ann, ann_grid, rng):
    W = H.w_field(ann, ann_grid, 0)
    z = interior_points(ann, 20, rng)
    np.testing.assert_allclose(W(z), 1 / (z * LN_R), rtol=1e-11)
    # counter-clockwise loop around the hole
    t = np.linspace(0, 2 * np.pi, 128, endpoint=False)
    zz = 0.75 * np.exp(1j * t)
    loop = np.sum(W(zz) * 1j * zz) * (2 * np.pi / 128)
    assert loop == pytest.approx(2j * np.pi / LN_R, rel=1e-12)
    outer = ann_grid.circle_index == 1
    assert np.min(np.abs(W(ann_grid.nodes[outer]))) >= 1 / abs(LN_R) - 1e-12


def test_w_field_index_range(ann, ann_grid):
    with pytest.raises(IndexError):
        H.w_field(ann, ann_grid, 1)


def test_pairing_constant_is_zero(d3, d3_grid):
    for W in H.w_fields(d3, d3_grid):
        assert abs(H.period_pairing(d3_grid, np.ones(d3_grid.size), W)) < 1e-12


def test_pairing_radial(ann, ann_grid):
    W = H.w_field(ann, ann_grid, 0)
    phi = np.abs(ann_grid.nodes) ** 2
    val = H.period_pairing(ann_grid, phi, W)
    assert val == pytest.approx(2 * np.pi * (R * R - 1) / LN_R, rel=1e-12)
    assert val == pytest.approx(6.798540212740795, rel=1e-12)
    rep = H.solve_dirichlet(ann, ann_grid, phi)
    assert val == pytest.approx(H.conjugate_periods(rep)[0], rel=1e-12)


def test_pairing_n2_vanishes(ann, ann_grid):
    W = H.w_field(ann, ann_grid, 0)
    phi = sample_boundary(parse_expr("re(z^2*conj(z))"), ann_grid).real
    assert abs(H.period_pairing(ann_grid, phi, W)) < 1e-10


def test_nonreal_pairing_detected(ann, ann_grid):
    W = H.w_field(ann, ann_grid, 0)
    # a W that is not real against dz signals a wrong field or orientation
    bad = W.scaled(1j)
    with pytest.raises(NonRealPairing):
        H.period_pairing(ann_grid, np.abs(ann_grid.nodes) ** 2, bad)


def test_normal_derivatives(ann, ann_grid, d3, d3_grid):
    h = H.harmonic_measure(ann, ann_grid, 0)
    dn = H.normal_derivative(h, ann_grid).values
    outer = ann_grid.circle_index == 1
    np.testing.assert_allclose(dn[outer], 1 / LN_R, rtol=1e-12)
    rep = H.solve_dirichlet(ann, ann_grid, ann_grid.nodes.real)
    np.testing.assert_allclose(H.normal_derivative(rep, ann_grid).values[outer],
                               np.cos(ann_grid.theta[outer]), atol=1e-12)
    for hj in H.harmonic_measures(d3, d3_grid):
        assert abs(H.flux_pairing(d3_grid, np.ones(d3_grid.size), hj)) < 1e-10


@pytest.mark.parametrize("name", ["ann", "d3", "dex"])
def test_partition_of_unity(name, request, rng):
    d = request.getfixturevalue(name)
    g = request.getfixturevalue(name + "_grid")
    hs = H.harmonic_measures(d, g)
    z = interior_points(d, 100, rng)
    assert np.max(np.abs(sum(h(z) for h in hs) - 1)) < 1e-9


def test_measures_between_zero_and_one(dex, dex_grid, rng):
    z = interior_points(dex, 50, rng)
    for h in H.harmonic_measures(dex, dex_grid):
        v = h(z)
        assert np.all((v > 0) & (v < 1))


@pytest.mark.parametrize("name", ["ann", "d3", "dex"])
def test_period_matrix_symmetric(name, request):
    d = request.getfixturevalue(name)
    g = request.getfixturevalue(name + "_grid")
    P = H.period_matrix(g, H.harmonic_measures(d, g))
    assert np.max(np.abs(P - P.T)) < 1e-8
    # rows sum to the flux of the constant 1
    assert np.max(np.abs(P.sum(axis=1))) < 1e-8


@pytest.mark.parametrize("name", ["ann", "d3", "dex"])
def test_w_no_zeros_on_boundary(name, request):
    d = request.getfixturevalue(name)
    g = request.getfixturevalue(name + "_grid")
    # the margin is small where the outer circle is far from hole j, but well clear of solver noise
    for W in H.w_fields(d, g):
        assert np.min(np.abs(W(g.nodes))) > 1e-4


def test_w_zero_free_for_m2(ann, ann_grid):
    assert H.w_zero_count(H.w_field(ann, ann_grid, 0)) == 0


def test_w_contour_integral_relation(d3, d3_grid):
    # W_j dz integrates to 2 pi i beta over bD only through the hole terms; over bD it vanishes
    for W in H.w_fields(d3, d3_grid):
        assert abs(contour_integral(d3_grid, W(d3_grid.nodes))) < 1e-11


@pytest.mark.parametrize("name", ["ann", "d3", "dex"])
@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_three_routes_agree(name, request, seed):
    d = request.getfixturevalue(name)
    g = request.getfixturevalue(name + "_grid")
    phi = H.random_smooth_data(g, np.random.default_rng(seed))
    r = H.three_route_periods(d, g, phi)
    assert np.max(np.abs(r["coefficients"] - r["contour"])) < 1e-8
    assert np.max(np.abs(r["coefficients"] - r["flux"])) < 1e-8
    assert np.max(np.abs(r["contour"] - r["flux"])) < 1e-8


def test_residual_too_large_warns(d3, d3_grid):
    # a kink on the boundary is not harmonic across bD
    phi = np.abs(np.sin(d3_grid.theta))
    with pytest.warns(ResidualTooLarge):
        rep = H.solve_dirichlet(d3, d3_grid, phi)
    assert rep.boundary_residual > 1e-9


def test_too_many_unknowns(ann):
    g = boundary_grid(ann, 32)
    with pytest.raises(ValueError):
        H.solve_dirichlet(ann, g, np.zeros(g.size), degree=32)


def test_default_degree():
    assert H.default_degree(2, 256) == 32
    assert H.default_degree(3, 256) == 32
    assert H.default_degree(2, 128) == 31
    assert H.default_degree(3, 128) == 31


def test_complex_data_rejected(ann, ann_grid):
    with pytest.raises(ValueError):
        H.solve_dirichlet(ann, ann_grid, ann_grid.nodes)


def test_deterministic(d3, d3_grid):
    phi = H.random_smooth_data(d3_grid, np.random.default_rng(1))
    a = H.solve_dirichlet(d3, d3_grid, phi)
    b = H.solve_dirichlet(d3, boundary_grid(d3, 256), phi)
    np.testing.assert_array_equal(a.beta, b.beta)
