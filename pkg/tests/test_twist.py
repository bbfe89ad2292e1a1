import pytest

from domino_helicity.fixtures import load_fixture
from domino_helicity.tiling import enumerate_tilings, move_graph
from domino_helicity.twist import TwistError, cross_check, twist_bfs, twist_via_helicity


def test_box221_twist(box221):
    table = twist_bfs(box221.region, box221.tilings["t0"])
    assert table.histogram() == {0: 2}


def test_hex_twist(hexfx):
    table = twist_bfs(hexfx.region, hexfx.tilings["t0"])
    assert table[hexfx.tilings["t1"]] == 1
    assert twist_via_helicity(hexfx.tilings["t1"], hexfx.tilings["t0"], hexfx.shell()) == 1


def test_box332_twist_histogram(box332, box332_tilings):
    table = twist_bfs(box332.region, box332.tilings["vertical"], graph=move_graph(box332_tilings))
    assert table.histogram() == {-1: 1, 0: 227, 1: 1}
    assert table[box332.tilings["t0"]] == -1


def test_box332_t0_via_helicity(box332):
    assert twist_via_helicity(box332.tilings["t0"], box332.tilings["vertical"], box332.shell()) == -1


def test_cross_check_hex(hexfx):
    rep = cross_check(hexfx.region, hexfx.tilings["t0"], hexfx.shell())
    assert rep.ok and rep.histogram() == {0: 1, 1: 1}
    assert "histogram" in rep.format()


def test_twist_rejects_nonzero_relative_flux():
    fx = load_fixture("cube-hole-13-5")
    with pytest.raises(TwistError):
        twist_bfs(fx.region, fx.tilings["matching"], tilings=[fx.tilings["matching"]])


def test_base_must_be_enumerated(hexfx, box221):
    with pytest.raises(TwistError):
        twist_bfs(hexfx.region, hexfx.tilings["t0"], tilings=enumerate_tilings(box221.region))


def test_different_flux_classes_rejected():
    fx = load_fixture("annulus-4-4-2")
    ts = enumerate_tilings(fx.region)
    from domino_helicity.homology import is_same_flux
    other = next(t for t in ts if not is_same_flux(t, ts[0]))
    with pytest.raises(TwistError):
        twist_via_helicity(other, ts[0], None)
