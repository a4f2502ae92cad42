import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conjp.errors import GridMismatch, HoleOutsideOuter, NTooSmall, OverlappingCircles, TooFewBoundaryComponents
from conjp.geometry import (
    BoundarySamples,
    annulus,
    boundary_grid,
    contour_integral,
    domain_from_dict,
    load_domain,
    make_domain,
    read_samples_csv,
    sample_function,
    write_samples_csv,
)

from conftest import example_domain, three_connected


def test_make_domain_annulus():
    d = make_domain([(0, 1), (0, 0.5)])
    assert d.m == 2
    assert d.outer.radius == 1 and d.holes[0].radius == 0.5


def test_make_domain_three_connected():
    d = example_domain()
    assert d.m == 3
    assert d.outer.radius == 1


def test_outer_is_found_in_any_order():
    d = make_domain([(-0.4, 0.15), (0, 1), (0.45, 0.2)])
    assert d.outer.radius == 1
    assert [h.center for h in d.holes] == [-0.4, 0.45]


def test_hole_outside_outer():
    with pytest.raises(HoleOutsideOuter):
        make_domain([(0, 1), (0.9, 0.3)])


def test_overlapping_holes():
    with pytest.raises(OverlappingCircles):
        make_domain([(0, 1), (0.1, 0.2), (0.3, 0.2)])


def test_too_few_components():
    with pytest.raises(TooFewBoundaryComponents):
        make_domain([(0, 1)])


def test_nonpositive_radius():
    with pytest.raises(ValueError):
        make_domain([(0, 1), (0, -0.5)])


def test_json_round_trip(tmp_path):
    d = three_connected()
    p = tmp_path / "d.json"
    p.write_text(d.to_json())
    assert load_domain(p) == d
    raw = json.loads(d.to_json())
    assert set(raw) == {"outer", "holes"}
    assert domain_from_dict(raw) == d


def test_grid_sizes_and_signs():
    g = boundary_grid(annulus(0.5), 64)
    assert g.size == 128
    # hole first, outer last
    assert g.sigma[0] == -1 and g.sigma[-1] == 1


def test_grid_tangents_at_angle_zero():
    g = boundary_grid(annulus(0.5), 64)
    outer0 = np.nonzero((g.circle_index == 1) & (g.theta == 0))[0][0]
    hole0 = np.nonzero((g.circle_index == 0) & (g.theta == 0))[0][0]
    assert g.tangents[outer0] == pytest.approx(1j)
    assert g.tangents[hole0] == pytest.approx(-1j)


def test_odd_or_small_n():
    with pytest.raises(NTooSmall):
        boundary_grid(annulus(0.5), 8)
    with pytest.raises(NTooSmall):
        boundary_grid(annulus(0.5), 33)


def test_weights_sum_to_circumference():
    d = three_connected()
    g = boundary_grid(d, 96)
    for k, c in enumerate(d.circles):
        assert g.weights[g.circle_index == k].sum() == pytest.approx(2 * np.pi * c.radius, rel=1e-14)


def test_unit_circle_one_over_z():
    d = annulus(0.5)
    g = boundary_grid(d, 64)
    outer = g.circle_index == 1
    val = np.sum((1 / g.nodes * g.dz)[outer])
    assert abs(val - 2j * np.pi) < 1e-13


def test_one_over_z_whole_boundary_vanishes():
    g = boundary_grid(annulus(0.5), 64)
    assert abs(contour_integral(g, sample_function(g, lambda z: 1 / z))) < 1e-13


def test_conj_on_unit_circle():
    g = boundary_grid(annulus(0.5), 64)
    outer = g.circle_index == 1
    val = np.sum((np.conj(g.nodes) * g.dz)[outer])
    assert abs(val - 2j * np.pi) < 1e-13


def test_grid_mismatch():
    g = boundary_grid(annulus(0.5), 64)
    with pytest.raises(GridMismatch):
        contour_integral(g, np.ones(10))
    other = boundary_grid(annulus(0.5), 32)
    with pytest.raises(GridMismatch):
        contour_integral(g, BoundarySamples(other, np.ones(other.size)))


def test_super_algebraic_convergence():
    d = three_connected()
    z0 = d.holes[1].center
    errs = []
    for n in (32, 64):
        g = boundary_grid(d, n)
        # holomorphic on the closed domain: the hole and outer residues cancel
        errs.append(abs(contour_integral(g, 1 / (g.nodes - z0))))
    assert errs[0] / max(errs[1], 1e-300) > 1e2


def test_csv_round_trip(tmp_path):
    d = three_connected()
    g = boundary_grid(d, 32)
    s = sample_function(g, lambda z: z ** 2 + 1j / (z - d.holes[0].center))
    p = tmp_path / "s.csv"
    write_samples_csv(p, s)
    back = read_samples_csv(p, d)
    assert back.grid.same_as(g)
    np.testing.assert_array_equal(back.values, s.values)


def test_contains_and_distance():
    d = annulus(0.5)
    assert d.contains(np.array([0.75]))[0]
    assert not d.contains(np.array([0.25, 1.2])).any()
    assert d.boundary_distance(np.array([0.75]))[0] == pytest.approx(0.25)


exterior_pole = st.builds(
    lambda r, t: r * np.exp(1j * t),
    st.floats(1.5, 4.0), st.floats(0, 2 * np.pi),
)
hole_offset = st.builds(
    lambda r, t: r * np.exp(1j * t),
    st.floats(0, 0.1), st.floats(0, 2 * np.pi),
)


@settings(max_examples=40, deadline=None)
@given(p_out=exterior_pole, off=hole_offset, k=st.integers(0, 1), order=st.integers(1, 4))
def test_cauchy_theorem_for_rationals(p_out, off, k, order):
    d = three_connected()
    g = boundary_grid(d, 64)
    p_in = d.holes[k].center + off * d.holes[k].radius
    f = 1 / (g.nodes - p_out) + (0.1 / (g.nodes - p_in)) ** order
    assert abs(contour_integral(g, f)) < 1e-10


def test_summation_is_deterministic():
    d = three_connected()
    g = boundary_grid(d, 128)
    f = np.exp(g.nodes) / (g.nodes - 0.3j)
    assert contour_integral(g, f) == contour_integral(g, f.copy())
