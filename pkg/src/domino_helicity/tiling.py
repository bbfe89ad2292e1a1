"""Domino tilings, flips, trits and the move graph."""
from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional

from .region import (AXES, Cell, Color, Region, RegionError, color_of,
                     make_region)

REFINE_SCALE = 5
DEFAULT_CELL_CAP = 64


class TilingError(ValueError):
    pass


class TooLarge(TilingError):
    """Enumeration refused because the region exceeds the cell cap."""


@dataclass(frozen=True, order=True)
class Domino:
    black: Cell
    white: Cell

    @property
    def cells(self) -> tuple[Cell, Cell]:
        return (self.black, self.white)


@dataclass(frozen=True)
class Flip:
    before: tuple[Domino, Domino]
    after: tuple[Domino, Domino]

    def reverse(self) -> "Flip":
        return Flip(self.after, self.before)

    @property
    def cells(self) -> frozenset:
        return frozenset(c for d in self.before for c in d.cells)


@dataclass(frozen=True)
class Trit:
    before: tuple[Domino, Domino, Domino]
    after: tuple[Domino, Domino, Domino]
    sign: int

    def reverse(self) -> "Trit":
        return Trit(self.after, self.before, -self.sign)

    @property
    def cells(self) -> frozenset:
        return frozenset(c for d in self.before for c in d.cells)


@dataclass(frozen=True, eq=False)
class Tiling:
    region: Region
    dominoes: tuple

    def __post_init__(self):
        object.__setattr__(self, "dominoes", tuple(sorted(self.dominoes)))

    @classmethod
    def from_pairs(cls, region: Region, pairs: Iterable) -> "Tiling":
        """Build from unordered cell pairs, validating coverage and colors."""
        doms = []
        for a, b in pairs:
            a, b = region.canon(a), region.canon(b)
            region.displacement(a, b)
            if color_of(a) is Color.WHITE:
                a, b = b, a
            if color_of(a) is not Color.BLACK or color_of(b) is not Color.WHITE:
                raise TilingError(f"cells {a}, {b} have the same color")
            doms.append(Domino(a, b))
        t = cls(region, tuple(doms))
        covered = [c for d in t.dominoes for c in d.cells]
        if len(covered) != len(set(covered)) or set(covered) != region.cells:
            raise TilingError("dominoes do not partition the region")
        return t

    @cached_property
    def key(self) -> tuple:
        return self.dominoes

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tiling):
            return NotImplemented
        return self.region == other.region and self.dominoes == other.dominoes

    def __hash__(self) -> int:
        return hash(self.dominoes)

    def __lt__(self, other: "Tiling") -> bool:
        return self.dominoes < other.dominoes

    @cached_property
    def partner(self) -> dict:
        out = {}
        for d in self.dominoes:
            out[d.black] = d.white
            out[d.white] = d.black
        return out

    def vector(self, d: Domino) -> Cell:
        """Unit vector from the black cell to the white cell."""
        return self.region.displacement(d.black, d.white)

    def replace(self, remove: Iterable[Domino], add: Iterable[Domino]) -> "Tiling":
        doms = set(self.dominoes)
        for d in remove:
            doms.remove(d)
        doms.update(add)
        return Tiling(self.region, tuple(doms))

    # ------------------------------------------------------------------
    def to_dict(self, region_ref=None) -> dict:
        return {
            "region": region_ref if region_ref is not None else self.region.to_dict(),
            "dominoes": [[list(d.black), list(d.white)] for d in self.dominoes],
        }

    def dumps(self, region_ref=None) -> str:
        return json.dumps(self.to_dict(region_ref))

    @classmethod
    def from_dict(cls, d: dict, region: Optional[Region] = None) -> "Tiling":
        if region is None:
            ref = d["region"]
            if not isinstance(ref, dict):
                raise TilingError("tiling references a region by name; pass it explicitly")
            region = Region.from_dict(ref)
        return cls.from_pairs(region, [(tuple(a), tuple(b)) for a, b in d["dominoes"]])

    @classmethod
    def loads(cls, s: str, region: Optional[Region] = None) -> "Tiling":
        return cls.from_dict(json.loads(s), region)


def cell_cap() -> int:
    return int(os.environ.get("DOMINO_HELICITY_CELL_CAP", DEFAULT_CELL_CAP))


# ----------------------------------------------------------------------
# enumeration

def enumerate_tilings(region: Region, cap: Optional[int] = None) -> list[Tiling]:
    """All tilings, by backtracking on the lexicographically first free cell."""
    cap = cell_cap() if cap is None else cap
    if len(region) > cap:
        raise TooLarge(f"region has {len(region)} cells, cap is {cap}")
    if len(region) % 2 or not region.is_balanced:
        return []
    order = region.sorted_cells
    nbrs = {c: region.neighbors(c) for c in order}
    free = set(order)
    chosen: list[tuple[Cell, Cell]] = []
    out = []

    def rec(i: int) -> None:
        while i < len(order) and order[i] not in free:
            i += 1
        if i == len(order):
            out.append(Tiling.from_pairs(region, chosen))
            return
        c = order[i]
        free.discard(c)
        for n in nbrs[c]:
            if n in free:
                free.discard(n)
                chosen.append((c, n))
                rec(i + 1)
                chosen.pop()
                free.add(n)
        free.add(c)

    rec(0)
    return sorted(out)


def find_tiling(region: Region, prefer: Optional[Iterable] = None) -> Tiling:
    """One tiling via maximum bipartite matching (no cell cap).

    ``prefer`` lists cell pairs to fix first; they must be compatible.
    """
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import maximum_bipartite_matching

    fixed = []
    used = set()
    for a, b in prefer or ():
        a, b = region.canon(a), region.canon(b)
        if a in used or b in used:
            raise TilingError(f"preferred dominoes overlap at {a} or {b}")
        region.displacement(a, b)
        used.update((a, b))
        fixed.append((a, b))
    blacks = [c for c in region.sorted_cells if color_of(c) is Color.BLACK and c not in used]
    whites = [c for c in region.sorted_cells if color_of(c) is Color.WHITE and c not in used]
    if len(blacks) != len(whites):
        raise TilingError("region is not balanced; no tiling exists")
    widx = {c: i for i, c in enumerate(whites)}
    ri, ci = [], []
    for i, b in enumerate(blacks):
        for n in region.neighbors(b):
            if n in widx:
                ri.append(i)
                ci.append(widx[n])
    graph = csr_matrix(([1] * len(ri), (ri, ci)), shape=(len(blacks), len(whites)))
    match = maximum_bipartite_matching(graph, perm_type="column")
    if (match < 0).any():
        raise TilingError("region admits no tiling")
    pairs = fixed + [(b, whites[j]) for b, j in zip(blacks, match)]
    return Tiling.from_pairs(region, pairs)


# ----------------------------------------------------------------------
# flips

def list_flips(t: Tiling) -> list[Flip]:
    reg = t.region
    doms = set(t.dominoes)
    seen = set()
    out = []
    for d in t.dominoes:
        v = t.vector(d)
        axis = next(a for a in AXES if v[a])
        for u in AXES:
            if u == axis:
                continue
            step = [0, 0, 0]
            step[u] = 1
            b2 = reg.canon(tuple(x + s for x, s in zip(d.black, step)))
            w2 = reg.canon(tuple(x + s for x, s in zip(d.white, step)))
            if b2 not in reg.cells or w2 not in reg.cells:
                continue
            # the shifted cells have swapped colors
            e = Domino(w2, b2)
            if e not in doms:
                continue
            pair = frozenset((d, e))
            if pair in seen:
                continue
            seen.add(pair)
            after = tuple(sorted((Domino(d.black, b2), Domino(w2, d.white))))
            out.append(Flip(tuple(sorted((d, e))), after))
    return sorted(out, key=lambda f: f.before)


def apply_flip(t: Tiling, f: Flip) -> Tiling:
    if not all(d in set(t.dominoes) for d in f.before):
        raise TilingError("flip not applicable")
    return t.replace(f.before, f.after)


# ----------------------------------------------------------------------
# trits

# Global orientation constant of the trit sign; see trit_chirality.
TRIT_SIGN_CONVENTION = 1


def _ring(corner: Cell, miss: Cell) -> list[Cell]:
    """The six cells of a 2x2x2 block minus two opposite cells, in cyclic order.

    ``miss`` is the offset of one missing cell (the other is its opposite).
    The order walks the hexagonal adjacency cycle.
    """
    offs = [o for o in itertools.product((0, 1), repeat=3)
            if o != miss and o != tuple(1 - v for v in miss)]
    ring = [offs[0]]
    while len(ring) < 6:
        last = ring[-1]
        for o in offs:
            if o not in ring and sum(abs(a - b) for a, b in zip(o, last)) == 1:
                ring.append(o)
                break
    return [tuple(c + o for c, o in zip(corner, r)) for r in ring]


def trit_chirality(dominoes: Iterable[tuple[Cell, Cell]], center2: Cell, axis2: Cell) -> int:
    """Circulation sense (+1/-1) of black-to-white vectors around an axis.

    Positions are doubled coordinates of cell centers (unwrapped);
    ``axis2`` points from the missing black cell to the missing white cell.
    """
    total = 0
    for b, w in dominoes:
        m = [(2 * x + 1 + 2 * y + 1) for x, y in zip(b, w)]  # 2 * doubled midpoint
        r = [mi - 2 * ci for mi, ci in zip(m, center2)]
        v = [y - x for x, y in zip(b, w)]
        cross = (r[1] * v[2] - r[2] * v[1], r[2] * v[0] - r[0] * v[2], r[0] * v[1] - r[1] * v[0])
        total += sum(c * a for c, a in zip(cross, axis2))
    return 1 if total > 0 else -1


def _trit_candidates(reg: Region):
    """Yield (corner, missing-offset) for every 2x2x2 block meeting the region."""
    corners = set()
    for c in reg.cells:
        for o in itertools.product((0, -1), repeat=3):
            corners.add(tuple(a + b for a, b in zip(c, o)))
    misses = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
    for corner in sorted(corners):
        for miss in misses:
            yield corner, miss


def list_trits(t: Tiling) -> list[Trit]:
    reg = t.region
    doms = set(t.dominoes)
    out = []
    seen = set()
    for corner, miss in _trit_candidates(reg):
        ring = _ring(corner, miss)
        canon = [reg.canon(c) for c in ring]
        if len(set(canon)) < 6 or any(c not in reg.cells for c in canon):
            continue
        if t.partner[canon[0]] == canon[1]:
            match, other = ((0, 1), (2, 3), (4, 5)), ((1, 2), (3, 4), (5, 0))
        else:
            match, other = ((1, 2), (3, 4), (5, 0)), ((0, 1), (2, 3), (4, 5))
        if any(t.partner[canon[i]] != canon[j] for i, j in match):
            continue
        key = frozenset(canon)
        if key in seen:
            continue
        seen.add(key)

        def doms(pairs):
            out = []
            for i, j in pairs:
                a, b = canon[i], canon[j]
                out.append(Domino(a, b) if color_of(a) is Color.BLACK else Domino(b, a))
            return out

        before, after = doms(match), doms(other)
        sign = _trit_sign(ring, before, after, corner, miss, reg)
        out.append(Trit(tuple(sorted(before)), tuple(sorted(after)), sign))
    return sorted(out, key=lambda r: r.before)


def _trit_sign(ring, before, after, corner, miss, reg) -> int:
    unwrap = {reg.canon(c): c for c in ring}
    opp = tuple(1 - v for v in miss)
    m1 = tuple(c + o for c, o in zip(corner, miss))
    m2 = tuple(c + o for c, o in zip(corner, opp))
    mb, mw = (m1, m2) if color_of(m1) is Color.BLACK else (m2, m1)
    axis2 = tuple(b - a for a, b in zip(mb, mw))
    center2 = tuple(2 * c + 2 for c in corner)
    chi_before = trit_chirality([(unwrap[d.black], unwrap[d.white]) for d in before],
                                center2, axis2)
    return TRIT_SIGN_CONVENTION * chi_before


def apply_trit(t: Tiling, r: Trit) -> Tiling:
    if not all(d in set(t.dominoes) for d in r.before):
        raise TilingError("trit not applicable")
    return t.replace(r.before, r.after)


# ----------------------------------------------------------------------
# move graph

@dataclass
class MoveGraph:
    tilings: list
    flip_edges: list = field(default_factory=list)      # (i, j), i < j
    trit_edges: list = field(default_factory=list)      # (i, j): positive trit i -> j

    def neighbors(self, i: int) -> list[tuple[int, int, str]]:
        """(neighbor, twist increment, kind) for every edge at ``i``."""
        out = []
        for a, b in self.flip_edges:
            if a == i:
                out.append((b, 0, "flip"))
            elif b == i:
                out.append((a, 0, "flip"))
        for a, b in self.trit_edges:
            if a == i:
                out.append((b, 1, "trit"))
            elif b == i:
                out.append((a, -1, "trit"))
        return out

    @cached_property
    def adjacency(self) -> list[list[tuple[int, int, str]]]:
        adj = [[] for _ in self.tilings]
        for a, b in self.flip_edges:
            adj[a].append((b, 0, "flip"))
            adj[b].append((a, 0, "flip"))
        for a, b in self.trit_edges:
            adj[a].append((b, 1, "trit"))
            adj[b].append((a, -1, "trit"))
        return adj


def move_graph(tilings: list[Tiling]) -> MoveGraph:
    tilings = sorted(tilings)
    if tilings and any(t.region != tilings[0].region for t in tilings):
        raise TilingError("tilings of different regions")
    index = {t.dominoes: i for i, t in enumerate(tilings)}
    g = MoveGraph(tilings)
    for i, t in enumerate(tilings):
        for f in list_flips(t):
            j = index.get(apply_flip(t, f).dominoes)
            if j is not None and i < j:
                g.flip_edges.append((i, j))
        for r in list_trits(t):
            if r.sign < 0:
                continue
            j = index.get(apply_trit(t, r).dominoes)
            if j is not None:
                g.trit_edges.append((i, j))
    g.flip_edges.sort()
    g.trit_edges.sort()
    return g


# ----------------------------------------------------------------------
# refinement

def refine_region(region: Region) -> Region:
    k = REFINE_SCALE
    cells = [(k * x + i, k * y + j, k * z + l) for (x, y, z) in region.cells
             for i, j, l in itertools.product(range(k), repeat=3)]
    wrap = tuple(k * w if w else None for w in region.wrap)
    return make_region(cells, wrap=wrap, validate=False)


def refine_tiling(t: Tiling, region: Optional[Region] = None) -> Tiling:
    """Each domino becomes 125 smaller dominoes parallel to it."""
    k = REFINE_SCALE
    fine = region if region is not None else refine_region(t.region)
    pairs = []
    for d in t.dominoes:
        v = t.vector(d)
        axis = next(a for a in AXES if v[a])
        lo = list(d.black)
        lo[axis] += min(0, v[axis])
        # the 2-cell bar occupies 2k fine cells along the axis, k across
        for off in itertools.product(range(k), repeat=3):
            base = [k * lo[a] + off[a] for a in AXES]
            base[axis] = k * lo[axis] + 2 * off[axis]
            a = tuple(base)
            b = list(base)
            b[axis] += 1
            pairs.append((fine.canon(a), fine.canon(b)))
    return Tiling.from_pairs(fine, pairs)


# ----------------------------------------------------------------------
# rendering

def render(t: Tiling) -> str:
    """Floor-by-floor ASCII drawing, lowest floor first.

    Within a floor, ``y`` grows upward and ``x`` to the right.  Walls are
    drawn between cells of different dominoes.  A vertical domino shows
    ``#`` in its lower square and leaves its upper square blank (``.``).
    """
    reg = t.region
    (x0, y0, z0), (x1, y1, z1) = reg.bounds
    floors = []
    for z in range(z0, z1):
        lines = [f"z = {z}"]
        for y in range(y1 - 1, y0 - 1, -1):
            top = "+"
            row = "|"
            for x in range(x0, x1):
                c = (x, y, z)
                above = reg.canon((x, y + 1, z))
                if c in reg.cells and (above not in reg.cells or t.partner[c] != above):
                    top += "---+"
                elif c not in reg.cells and above in reg.cells:
                    top += "---+"
                else:
                    top += "   +"
                if c not in reg.cells:
                    body = "   "
                else:
                    p = t.partner[c]
                    dz = reg.displacement(c, p)[2]
                    body = " # " if dz == 1 else (" . " if dz == -1 else "   ")
                right = reg.canon((x + 1, y, z))
                if c in reg.cells and right in reg.cells and t.partner[c] == right:
                    sep = " "
                elif c in reg.cells or right in reg.cells:
                    sep = "|"
                else:
                    sep = " "
                row += body + sep
            lines.append(top)
            lines.append(row)
        bottom = "+"
        for x in range(x0, x1):
            bottom += "---+" if (x, y0, z) in reg.cells else "   +"
        lines.append(bottom)
        floors.append("\n".join(lines))
    return "\n\n".join(floors) + "\n"
