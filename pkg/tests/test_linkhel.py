from fractions import Fraction

import numpy as np
import pytest

from domino_helicity.fixtures import auto_shell, load_fixture
from domino_helicity.linkhel import (HelicityValue, LinkingError, TabulationMatrix, check_disjoint,
                                     gauss_integral_oracle, helicity, helicity_units, linking_number,
                                     perturbed_framing, projection_directions, relative_helicity,
                                     self_linking, tabulate, writhe)
from domino_helicity.pipes import assemble_curves
from domino_helicity.verify import HOPF, UNLINK

from oracles import gauss_linking, gauss_writhe

SQUARE = np.array([[0, 0, 0], [2, 0, 0], [2, 2, 0], [0, 2, 0]])


def trefoil_like():
    # a knotted lattice curve with nonzero writhe (right-handed trefoil on a grid)
    pts = [(0, 0, 0), (4, 0, 0), (4, 4, 0), (2, 4, 0), (2, 4, 2), (2, 1, 2), (6, 1, 2), (6, 3, 2),
           (6, 3, 0), (6, 6, 0), (1, 6, 0), (1, 6, 1), (1, 2, 1), (3, 2, 1), (3, 2, -1), (0, 2, -1), (0, 0, -1)]
    return np.array(pts)


def test_hopf_and_unlink():
    assert abs(linking_number(*HOPF)) == 1
    assert linking_number(*UNLINK) == 0


def test_symmetry_and_reversal():
    a, b = HOPF
    assert linking_number(a, b) == linking_number(b, a)
    assert linking_number(a[::-1], b) == -linking_number(a, b)
    assert linking_number(a[::-1], b[::-1]) == linking_number(a, b)


def test_projection_independence():
    a, b = HOPF
    vals = {linking_number(a, b, d) for d in projection_directions()[:5]}
    assert len(vals) == 1


def test_agrees_with_independent_gauss_integral():
    a, b = HOPF
    assert round(gauss_linking(a, b)) == linking_number(a, b)
    assert abs(gauss_integral_oracle(a, b) - linking_number(a, b)) < 1e-6


def test_intersecting_curves_rejected():
    with pytest.raises(LinkingError):
        linking_number(SQUARE, SQUARE + [1, 0, 0])


def test_planar_curve_has_zero_writhe():
    assert writhe(SQUARE) == 0
    assert self_linking(SQUARE) == 0
    assert self_linking(SQUARE, framing=(0, 0, 1)) == 0


def test_writhe_matches_gauss_writhe():
    c = trefoil_like()
    check_disjoint([c])
    assert abs(float(writhe(c)) - gauss_writhe(c)) < 0.02


def test_fixture_writhes_match_integral(hexfx):
    curves = assemble_curves(hexfx.region, hexfx.tilings["t0"], hexfx.shell()).curves
    L = tabulate(curves)
    for i, c in enumerate(curves):
        assert abs(float(L.entries[i][i]) - gauss_writhe(c)) < 0.02


def test_fixture_links_match_integral(box332):
    curves = assemble_curves(box332.region, box332.tilings["t0"], box332.shell()).curves
    L = tabulate(curves)
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            assert round(gauss_linking(curves[i], curves[j])) == L.entries[i][j]


def test_mirror_negates_writhe():
    c = trefoil_like()
    m = c * np.array([1, 1, -1])
    assert writhe(m) == -writhe(c)


def test_helicity_units_from_matrix():
    L = TabulationMatrix([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(-1)]])
    assert helicity_units(L) == 4
    assert helicity_units(L, [2, 1]) == 4 + 8 - 1


def test_helicity_value_arithmetic():
    a = HelicityValue(Fraction(-18))
    b = HelicityValue(Fraction(18))
    assert (b - a).units == 36 and (b - a).value == 1
    with pytest.raises(LinkingError):
        _ = a - HelicityValue(Fraction(1), Fraction(1, 3))


def test_hex_helicity(hexfx):
    h0 = helicity(assemble_curves(hexfx.region, hexfx.tilings["t0"], hexfx.shell()))
    h1 = helicity(assemble_curves(hexfx.region, hexfx.tilings["t1"], hexfx.shell()))
    assert (h0.units, h1.units) == (-18, 18)


def test_relative_helicity_needs_same_shell(hexfx):
    a = assemble_curves(hexfx.region, hexfx.tilings["t1"], hexfx.shell())
    b = assemble_curves(hexfx.region, hexfx.tilings["t0"], hexfx.shell())
    assert relative_helicity(a, b).units == 36
    c = assemble_curves(hexfx.region, hexfx.tilings["t0"], auto_shell(hexfx.region))
    with pytest.raises(LinkingError):
        relative_helicity(a, c)


def test_perturbed_framing_shifts_diagonal(hexfx):
    curves = assemble_curves(hexfx.region, hexfx.tilings["t0"], hexfx.shell()).curves
    L = tabulate(curves)
    with perturbed_framing(1):
        Lp = tabulate(curves)
    assert all(Lp.entries[i][i] == L.entries[i][i] + 1 for i in range(L.n))
    assert tabulate(curves).entries == L.entries
