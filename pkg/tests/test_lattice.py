import pytest
from hypothesis import given, strategies as st

from steadybounds.lattice import (
    SymmetryElement,
    adjacent_sites,
    boundary_orbits,
    chain,
    finite_chain,
    halo_region,
    orbit_map,
    rectangle,
    parse_cluster,
    square,
    square_point_group,
    stabilizer,
    symmetry_pairs_within,
    translation,
    window,
)


def test_window_ti_chain():
    assert window(chain(), 3) == (0, 1, 2)


def test_window_whole_finite_chain():
    assert window(finite_chain(5), 5) == (0, 1, 2, 3, 4)


def test_window_too_large():
    with pytest.raises(ValueError):
        window(finite_chain(4), 6)


@pytest.mark.parametrize("shape,n_adj,n_orbits,halo,stab", [
    ((1, 1), 4, 1, 2, 8),
    ((2, 2), 8, 1, 5, 8),
    ((2, 3), 10, 3, 9, 4),
])
def test_boundary_orbits(shape, n_adj, n_orbits, halo, stab):
    lat = square()
    cl = rectangle(*shape)
    assert len(adjacent_sites(cl, lat)) == n_adj
    orbits = boundary_orbits(cl, lat)
    assert len(orbits) == n_orbits
    assert sum(len(m) for _, m in orbits) == n_adj
    assert len(halo_region(cl, lat)) == halo
    assert len(stabilizer(cl, lat)) == stab


def test_single_site_halo_representative():
    assert halo_region(rectangle(1, 1), square()) == ((-1, 0), (0, 0))


def test_orbit_map_sends_boundary_sites_to_representatives():
    lat = square()
    cl = rectangle(2, 3)
    cset = set(cl)
    reps = {rep for rep, _ in boundary_orbits(cl, lat)}
    for b, g in orbit_map(cl, lat).items():
        assert g(b) in reps
        assert {g(s) for s in cl} == cset


def test_parse_cluster():
    assert parse_cluster("2x3") == rectangle(2, 3)
    with pytest.raises(ValueError):
        parse_cluster("2by3")


def test_lti_pair_in_window():
    lat = chain(reflection=False)
    pairs = symmetry_pairs_within(window(lat, 4), lat)
    shifts = {(g.shift, dom) for g, dom in pairs}
    assert ((1,), (0, 1, 2)) in shifts


def test_rotation_of_horizontal_pair_leaves_region():
    lat = square()
    reg = ((0, 0), (0, 1))
    rot = next(g for g in square_point_group() if g.label == "C4^1")
    for g, dom in symmetry_pairs_within(reg, lat):
        if g.linear == rot.linear:
            assert len(dom) < 2


def test_plus_center_is_fixed_by_point_group():
    center = (1, 1)
    plus = [(0, 1), (1, 0), (1, 1), (1, 2), (2, 1)]
    for p in square_point_group():
        g = p.with_shift((center[0] - p(center)[0], center[1] - p(center)[1]))
        assert g(center) == center
        assert {g(s) for s in plus} == set(plus)


elements = st.builds(
    lambda p, shift: p.with_shift(shift),
    st.sampled_from(square_point_group()),
    st.tuples(st.integers(-3, 3), st.integers(-3, 3)),
)
sites = st.tuples(st.integers(-5, 5), st.integers(-5, 5))


@given(elements, elements, sites)
def test_composition_and_inverse(g, h, s):
    assert (g @ h)(s) == g(h(s))
    assert g.inverse()(g(s)) == s


@given(st.integers(-10, 10), st.integers(-4, 4))
def test_chain_translation(s, t):
    assert translation(t)(s) == s + t
