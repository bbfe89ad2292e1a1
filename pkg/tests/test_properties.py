"""Randomized properties on small regions, tilings and lattice curves."""
import itertools

import numpy as np
from hypothesis import HealthCheck, assume, given, settings, strategies as st

from domino_helicity.homology import boundary_charge, is_same_flux, rotation_chain
from domino_helicity.linkhel import linking_number, tabulate, writhe
from domino_helicity.region import RegionError, make_box, make_region
from domino_helicity.tiling import (Tiling, apply_flip, apply_trit, enumerate_tilings, list_flips,
                                    list_trits)

from oracles import count_matchings, gauss_linking, same_flux

SETTINGS = settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def small_regions(draw):
    dims = draw(st.tuples(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3)))
    cells = list(itertools.product(*map(range, dims)))
    removed = set(draw(st.lists(st.sampled_from(cells), max_size=4, unique=True)))
    keep = [c for c in cells if c not in removed]
    assume(len(keep) >= 2)
    try:
        return make_region(keep)
    except RegionError:
        assume(False)


def _pairs(t: Tiling):
    return [d.cells for d in t.dominoes]


@SETTINGS
@given(small_regions())
def test_tiling_count_matches_oracle(region):
    assert len(enumerate_tilings(region)) == count_matchings(region.cells)


@st.composite
def box_tilings(draw):
    dims = draw(st.sampled_from([(2, 2, 2), (3, 2, 2), (3, 3, 2), (4, 2, 2)]))
    ts = _tilings(dims)
    return ts[draw(st.integers(0, len(ts) - 1))]


_CACHE = {}


def _tilings(dims):
    if dims not in _CACHE:
        _CACHE[dims] = enumerate_tilings(make_box(*dims))
    return _CACHE[dims]


@SETTINGS
@given(box_tilings(), st.data())
def test_moves_are_involutions_and_keep_flux(t, data):
    flips = list_flips(t)
    if flips:
        f = data.draw(st.sampled_from(flips))
        s = apply_flip(t, f)
        assert s != t and apply_flip(s, f.reverse()) == t
        assert is_same_flux(s, t)
        assert same_flux(_pairs(s), _pairs(t), t.region.cells, t.region.wrap)
    trits = list_trits(t)
    if trits:
        r = data.draw(st.sampled_from(trits))
        s = apply_trit(t, r)
        assert apply_trit(s, r.reverse()) == t
        assert is_same_flux(s, t)
        back = [x for x in list_trits(s) if x.cells == r.cells]
        assert back and back[0].sign == -r.sign


@SETTINGS
@given(box_tilings())
def test_rotation_boundary_is_tiling_independent(t):
    assert rotation_chain(t).boundary(t.region.sharp) == boundary_charge(t.region)


def _rect(corner, u, du, v, dv):
    pts = []
    for a, b in ((0, 0), (du, 0), (du, dv), (0, dv)):
        p = list(corner)
        p[u] += a
        p[v] += b
        pts.append(p)
    return np.array(pts)


@st.composite
def rect_pairs(draw):
    """A rectangle in z = 0 and a perpendicular one in x = const nearby.

    Corners of the first sit on even coordinates, of the second on odd ones,
    so the curves are disjoint; about half the draws are linked.
    """
    w, h = (draw(st.integers(1, 3)) * 2 for _ in range(2))
    a = _rect((0, 0, 0), 0, w, 1, h)
    x = draw(st.integers(0, w // 2 - 1)) * 2 + 1
    y0 = draw(st.integers(-2, h // 2 + 1)) * 2 - 1
    z0 = draw(st.sampled_from((-1, -3)))
    b = _rect((x, y0, z0), 1, draw(st.integers(1, 3)) * 2, 2, draw(st.integers(1, 3)) * 2)
    perm = draw(st.permutations(range(3)))
    signs = np.array(draw(st.tuples(*[st.sampled_from((1, -1))] * 3)))
    a, b = a[:, perm] * signs, b[:, perm] * signs
    if draw(st.booleans()):
        a = a[::-1]
    return a, b


@SETTINGS
@given(rect_pairs())
def test_linking_matches_integral(pair):
    a, b = pair
    lk = linking_number(a, b)
    assert lk == linking_number(b, a)
    assert lk == -linking_number(a[::-1], b)
    assert abs(gauss_linking(a, b) - lk) < 1e-6


@SETTINGS
@given(rect_pairs(), st.tuples(*[st.integers(-3, 3)] * 3))
def test_linking_is_translation_invariant(pair, v):
    a, b = pair
    shift = np.array(v) * 2
    assert linking_number(a + shift, b + shift) == linking_number(a, b)


@SETTINGS
@given(rect_pairs())
def test_planar_curves_have_zero_writhe(pair):
    a, b = pair
    assert writhe(a) == 0
    L = tabulate([a, b])
    assert L.entries[0][1] == L.entries[1][0] == linking_number(a, b)
