"""Named example regions with their stored tilings and shells."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

from .pipes import Mirror, PipeError, STEPS, Shell, route_shell, square_point, symmetric_shell
from .region import Color, Region, make_box, make_region
from .tiling import Tiling, enumerate_tilings, find_tiling, list_trits


class FixtureError(KeyError):
    pass


@dataclass
class Fixture:
    name: str
    region: Region
    tilings: dict = field(default_factory=dict)     # label -> Tiling
    mirror: Optional[Mirror] = None                 # symmetry used by the stored shell
    shell_builder: Optional[Callable[[Region], Shell]] = None
    note: str = ""

    def shell(self) -> Shell:
        if self.shell_builder is None:
            raise FixtureError(f"fixture {self.name!r} has no stored shell")
        return _shell_cache(self.name)


# ----------------------------------------------------------------------
# regions

def hex_region() -> Region:
    """The 2x2x2 cube without two opposite corner cubes on a diagonal."""
    return make_region(c for c in itertools.product(range(2), repeat=3)
                       if c not in ((1, 1, 0), (0, 0, 1)))


def annulus(n: int = 4, height: int = 2, hole: int = 2) -> Region:
    lo = (n - hole) // 2
    return make_region(c for c in itertools.product(range(n), range(n), range(height))
                       if not (lo <= c[0] < lo + hole and lo <= c[1] < lo + hole))


def cube_with_hole(n: int, hole: int) -> Region:
    """``[0,n]^3`` minus a centered (or nearly centered) cube of side ``hole``."""
    lo = (n - hole) // 2
    return make_region(c for c in itertools.product(range(n), repeat=3)
                       if not all(lo <= x < lo + hole for x in c))


def torus(n: int = 6) -> Region:
    return make_region(itertools.product(range(n), repeat=3), wrap=(n, n, n))


# ----------------------------------------------------------------------
# tilings

# The tiling of the 4x4x2 box with dominoes [0,1]x[0,2]x[0,1],
# [0,2]x[0,1]x[1,2], [1,2]x[1,2]x[0,2] and no flips (it is the only one).
RIGID_442_PAIRS = (
    ((0, 0, 0), (0, 1, 0)), ((0, 0, 1), (1, 0, 1)), ((0, 1, 1), (0, 2, 1)),
    ((0, 2, 0), (1, 2, 0)), ((0, 3, 0), (0, 3, 1)), ((1, 0, 0), (2, 0, 0)),
    ((1, 1, 0), (1, 1, 1)), ((1, 2, 1), (1, 3, 1)), ((1, 3, 0), (2, 3, 0)),
    ((2, 0, 1), (2, 1, 1)), ((2, 1, 0), (3, 1, 0)), ((2, 2, 0), (2, 2, 1)),
    ((2, 3, 1), (3, 3, 1)), ((3, 0, 0), (3, 0, 1)), ((3, 1, 1), (3, 2, 1)),
    ((3, 2, 0), (3, 3, 0)),
)

# Twist -1 tiling of the 3x3x2 box: it admits a trit and no flips.
BOX332_T0_PAIRS = (
    ((0, 0, 0), (0, 1, 0)), ((0, 1, 1), (0, 2, 1)), ((0, 2, 0), (1, 2, 0)),
    ((1, 0, 1), (0, 0, 1)), ((1, 1, 0), (1, 1, 1)), ((1, 2, 1), (2, 2, 1)),
    ((2, 0, 0), (1, 0, 0)), ((2, 1, 1), (2, 0, 1)), ((2, 2, 0), (2, 1, 0)),
)


def vertical_tiling(region: Region) -> Tiling:
    """All dominoes along z (the region must have even height columns)."""
    pairs = [(c, (c[0], c[1], c[2] + 1)) for c in region.sorted_cells if c[2] % 2 == 0]
    return Tiling.from_pairs(region, pairs)


def _hex_tilings(region: Region) -> dict:
    ts = enumerate_tilings(region)
    # t0 is the tiling whose trit is positive, so t0 -> t1 is a positive trit
    t0 = next(t for t in ts if list_trits(t)[0].sign > 0)
    t1 = next(t for t in ts if t != t0)
    return {"t0": t0, "t1": t1}


def _box221_tilings(region: Region) -> dict:
    ts = enumerate_tilings(region)
    return {"t0": ts[0], "t1": ts[1]}


# ----------------------------------------------------------------------
# shells

HEX_MIRROR = Mirror((1, 0, 2), (1, 1, 1), (0, 0, 0))            # x <-> y
BOX221_MIRROR = Mirror((0, 1, 2), (1, 1, -1), (0, 0, 4))         # z -> 1 - z
BOX332_MIRROR = Mirror((0, 1, 2), (1, 1, -1), (0, 0, 8))         # z -> 2 - z

# Pairing of the squares on the x > y side of the hex region: black square
# centers (quarter lattice) in the order they are matched to the white ones.
HEX_BLACK_ORDER = ((0, 6, 6), (2, 6, 8), (2, 8, 6), (0, 2, 2), (2, 4, 6))


def _hex_shell(region: Region) -> Shell:
    squares = {square_point(s): s for s in region.boundary_squares}
    upper = sorted(c for c in squares if HEX_MIRROR.side(c) > 0)
    whites = [c for c in upper if squares[c].color is Color.WHITE]
    pairing = list(zip(whites, HEX_BLACK_ORDER))[::-1]
    return symmetric_shell(region, HEX_MIRROR, margin=2, name="hex", pairing=pairing, steps=STEPS)


def _box221_shell(region: Region) -> Shell:
    return symmetric_shell(region, BOX221_MIRROR, margin=2, name="box-2-2-1")


def _box332_shell(region: Region) -> Shell:
    return symmetric_shell(region, BOX332_MIRROR, margin=2, name="box-3-3-2")


# ----------------------------------------------------------------------
# registry

def _build(name: str) -> Fixture:
    if name == "box-2-2-1":
        r = make_box(2, 2, 1)
        return Fixture(name, r, _box221_tilings(r), BOX221_MIRROR, _box221_shell)
    if name == "box-2-2-2":
        r = make_box(2, 2, 2)
        return Fixture(name, r, {"vertical": vertical_tiling(r)})
    if name == "box-3-3-2":
        r = make_box(3, 3, 2)
        t0 = Tiling.from_pairs(r, BOX332_T0_PAIRS)
        return Fixture(name, r, {"t0": t0, "vertical": vertical_tiling(r)}, BOX332_MIRROR,
                       _box332_shell)
    if name == "box-4-4-2":
        r = make_box(4, 4, 2)
        return Fixture(name, r, {"rigid": Tiling.from_pairs(r, RIGID_442_PAIRS),
                                 "vertical": vertical_tiling(r)})
    if name == "hex":
        r = hex_region()
        return Fixture(name, r, _hex_tilings(r), HEX_MIRROR, _hex_shell)
    if name == "annulus-4-4-2":
        r = annulus()
        return Fixture(name, r, {"vertical": vertical_tiling(r)})
    if name == "cube-hole-13-5":
        r = cube_with_hole(13, 5)
        return Fixture(name, r, {"matching": find_tiling(r)},
                       note="tiling from a maximum matching; its relative flux is nonzero")
    if name == "cube-hole-12-4":
        r = cube_with_hole(12, 4)
        return Fixture(name, r, {"matching": find_tiling(r)})
    if name == "torus-6":
        r = torus(6)
        pairs = [(c, (c[0] + 1, c[1], c[2])) for c in r.sorted_cells if c[0] % 2 == 0]
        return Fixture(name, r, {"x-bars": Tiling.from_pairs(r, pairs),
                                 "matching": find_tiling(r)})
    raise FixtureError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURE_NAMES)}")


FIXTURE_NAMES = ("box-2-2-1", "box-2-2-2", "box-3-3-2", "box-4-4-2", "hex",
                 "annulus-4-4-2", "cube-hole-13-5", "cube-hole-12-4", "torus-6")


@lru_cache(maxsize=None)
def load_fixture(name: str) -> Fixture:
    return _build(name)


@lru_cache(maxsize=None)
def _shell_cache(name: str) -> Shell:
    fx = load_fixture(name)
    return fx.shell_builder(fx.region)


def fixture_shell(region: Region) -> Shell:
    """Stored shell of the fixture whose region equals ``region``."""
    for name in ("box-2-2-1", "hex", "box-3-3-2"):
        if load_fixture(name).region == region:
            return load_fixture(name).shell()
    raise PipeError("no stored shell for this region; use the layered-auto strategy")


def auto_shell(region: Region, margin: int = 2) -> Shell:
    return route_shell(region, margin=margin)
