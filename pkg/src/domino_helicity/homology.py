"""Exact rational homology on the refined complex: flux, relative flux, sections.

A tiling is a 1-chain on the refined complex: each domino contributes the
two edges black center -> shared face center -> white center.  Flux
classes are computed by exact algebraic reduction of the boundary maps.
"""
from __future__ import annotations

import heapq
import os
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .region import AXES, Region, SharpComplex, color_of, Color
from .tiling import Tiling

DEFAULT_SHARP_CAP = 1_000_000


class HomologyError(ValueError):
    pass


def sharp_cap() -> int:
    return int(os.environ.get("DOMINO_HELICITY_SHARP_CAP", DEFAULT_SHARP_CAP))


# ----------------------------------------------------------------------
# chains

@dataclass(frozen=True)
class Chain:
    """Sparse rational chain on the refined complex of a region."""

    dim: int
    coeffs: tuple  # sorted ((cell, Fraction), ...), no zeros

    @classmethod
    def from_dict(cls, dim: int, d: dict) -> "Chain":
        return cls(dim, tuple(sorted((k, Fraction(v)) for k, v in d.items() if v)))

    @cached_property
    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def __add__(self, other: "Chain") -> "Chain":
        return self._combine(other, 1)

    def __sub__(self, other: "Chain") -> "Chain":
        return self._combine(other, -1)

    def __mul__(self, k) -> "Chain":
        k = Fraction(k)
        return Chain.from_dict(self.dim, {c: v * k for c, v in self.coeffs})

    __rmul__ = __mul__

    def __neg__(self) -> "Chain":
        return self * -1

    def _combine(self, other: "Chain", s: int) -> "Chain":
        if other.dim != self.dim:
            raise HomologyError("cannot add chains of different dimensions")
        d = dict(self.coeffs)
        for c, v in other.coeffs:
            d[c] = d.get(c, 0) + s * v
        return Chain.from_dict(self.dim, d)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def boundary(self, cx: SharpComplex) -> "Chain":
        d: dict = defaultdict(Fraction)
        for cell, v in self.coeffs:
            for face, s in cx.boundary_of(cell):
                d[face] += s * v
        return Chain.from_dict(self.dim - 1, d)

    def restrict(self, keep) -> "Chain":
        return Chain(self.dim, tuple((c, v) for c, v in self.coeffs if keep(c)))

    def to_list(self) -> list:
        """Structured export: (cell, numerator, denominator) triples."""
        return [[[list(p), m], v.numerator, v.denominator] for (p, m), v in self.coeffs]


def _center(c: Sequence[int]) -> tuple:
    return tuple(2 * v + 1 for v in c)


def domino_chain(t: Tiling) -> Chain:
    """Each domino as black center -> face center -> white center."""
    cx = t.region.sharp
    d: dict = defaultdict(Fraction)
    for dom in t.dominoes:
        v = t.vector(dom)
        b = _center(dom.black)
        f = tuple(x + y for x, y in zip(b, v))
        w = tuple(x + y for x, y in zip(f, v))
        for p, q in ((b, f), (f, w)):
            e, s = cx.edge(p, q)
            d[e] += s
    return Chain.from_dict(1, d)


def q1_chain(region: Region) -> Chain:
    """Center-to-face edges, added for black cubes and subtracted for white ones."""
    cx = region.sharp
    d: dict = defaultdict(Fraction)
    for c in region.sorted_cells:
        sign = 1 if color_of(c) is Color.BLACK else -1
        ctr = _center(c)
        for a in AXES:
            for s in (1, -1):
                q = list(ctr)
                q[a] += s
                e, o = cx.edge(ctr, q)
                d[e] += sign * o
    return Chain.from_dict(1, d)


def rotation_chain(t: Tiling) -> Chain:
    """The relative cycle 6t - q1."""
    return 6 * domino_chain(t) - q1_chain(t.region)


def boundary_charge(region: Region) -> Chain:
    """+1 at white boundary square centers, -1 at black ones."""
    cx = region.sharp
    d = {}
    for sq in region.boundary_squares:
        d[cx.vertex(sq.center)] = 1 if sq.color is Color.WHITE else -1
    return Chain.from_dict(0, d)


# ----------------------------------------------------------------------
# reduction

class Reduction:
    """Exact algebraic reduction of the (absolute or relative) refined complex.

    Boundary maps are reduced one degree at a time (3, then 2, then 1) by
    Gaussian pivots; each pivot removes a pair of cells and leaves a
    chain-equivalent complex.  Pivots are chosen Markowitz-style (shortest
    row, then shortest column), so rows with one entry, the algebraic form
    of elementary collapses, go first and fill-in stays small.  When every
    map is zero the surviving edges form a homology basis, and a cycle's
    coordinates are its carried coefficients on them.
    """

    def __init__(self, region: Region, relative: bool = False):
        cx = region.sharp
        total = sum(cx.count(k) for k in range(4))
        if total > sharp_cap():
            raise HomologyError(f"refined complex has {total} cells, above the cap {sharp_cap()}")
        self.region = region
        self.relative = relative
        alive = [set(cx.cells[k]) for k in range(4)]
        if relative:
            for k in range(3):
                alive[k] -= {c for c in cx.boundary_cells if bin(c[1]).count("1") == k}
        self.alive = alive
        # cols[k][cell] -> {face: coef}; rows[k][face] -> set(cells)
        cols = [None] + [dict() for _ in range(3)]
        rows = [None] + [defaultdict(set) for _ in range(3)]
        for k in (1, 2, 3):
            for cell in sorted(alive[k]):
                col = {}
                for face, s in cx.boundary_of(cell):
                    if face in alive[k - 1]:
                        col[face] = col.get(face, 0) + s
                col = {f: v for f, v in col.items() if v}
                cols[k][cell] = col
                for f in col:
                    rows[k][f].add(cell)
        self.cols, self.rows = cols, rows
        self.log: list = []   # ("drop", edge) | ("push", edge, lam, col)
        for k in (3, 2, 1):
            self._reduce(k)

    def _reduce(self, k: int) -> None:
        cols, rows = self.cols, self.rows
        heap = [(len(cs), r) for r, cs in rows[k].items() if cs]
        heapq.heapify(heap)
        while heap:
            n, a = heapq.heappop(heap)
            cs = rows[k].get(a)
            if not cs:
                continue
            if len(cs) != n:
                heapq.heappush(heap, (len(cs), a))
                continue
            b = min(cs, key=lambda c: (abs(cols[k][c][a]) != 1, len(cols[k][c]), c))
            colb = cols[k][b]
            lam = colb[a]
            if k == 2:
                self.log.append(("push", a, lam, dict(colb)))
            elif k == 1:
                self.log.append(("drop", b))
            for x in sorted(cs - {b}):
                colx = cols[k][x]
                m = _div(colx[a], lam)
                for f, v in colb.items():
                    nv = colx.get(f, 0) - m * v
                    if nv:
                        if f not in colx:
                            rows[k][f].add(x)
                        colx[f] = nv
                    elif f in colx:
                        del colx[f]
                        rows[k][f].discard(x)
                        heapq.heappush(heap, (len(rows[k][f]), f))
                for f in colb:
                    if f in colx:
                        heapq.heappush(heap, (len(rows[k][f]), f))
            self._remove(k, a, b)
            for f in colb:
                if f != a and rows[k].get(f):
                    heapq.heappush(heap, (len(rows[k][f]), f))

    def _remove(self, k: int, row, col) -> None:
        """Drop the pivot pair (row in C_{k-1}, col in C_k) from every map."""
        cols, rows = self.cols, self.rows
        for f in cols[k].pop(col):
            rows[k][f].discard(col)
        rows[k].pop(row, None)
        self.alive[k].discard(col)
        self.alive[k - 1].discard(row)
        if k + 1 <= 3:
            for cell in rows[k + 1].pop(col, ()):
                cols[k + 1][cell].pop(col, None)
        if k - 1 >= 1:
            for f in cols[k - 1].pop(row, {}):
                rows[k - 1][f].discard(row)

    def carry(self, z: Chain) -> dict:
        """Image of a 1-chain in the reduced complex (edge -> Fraction)."""
        if z.dim != 1:
            raise HomologyError("only 1-chains are carried")
        d = dict(z.coeffs)
        if self.relative:
            bnd = self.region.sharp.boundary_cells
            d = {c: v for c, v in d.items() if c not in bnd}
        for op in self.log:
            if op[0] == "push":
                _, e, lam, col = op
                x = d.get(e)
                if x:
                    m = Fraction(x) / lam
                    for f, a in col.items():
                        v = d.get(f, 0) - m * a
                        if v:
                            d[f] = v
                        else:
                            d.pop(f, None)
            else:
                d.pop(op[1], None)
        return d

    @cached_property
    def basis(self) -> list:
        """Surviving edges; one per dimension of first homology."""
        return sorted(self.alive[1])

    @property
    def betti1(self) -> int:
        return len(self.basis)

    def is_cycle(self, z: Chain) -> bool:
        bd = z.boundary(self.region.sharp)
        if self.relative:
            bnd = self.region.sharp.boundary_cells
            return all(c in bnd for c, _ in bd.coeffs)
        return not bd

    def coordinates(self, z: Chain) -> tuple:
        """Coordinates of the class of the (relative) cycle ``z``."""
        if not self.is_cycle(z):
            raise HomologyError("chain is not a cycle")
        d = self.carry(z)
        return tuple(Fraction(d.get(e, 0)) for e in self.basis)

    def bounds(self, z: Chain) -> bool:
        return all(c == 0 for c in self.coordinates(z))


def _div(x, lam):
    if lam == 1:
        return x
    if lam == -1:
        return -x
    return Fraction(x) / lam


@dataclass(frozen=True)
class FluxClass:
    """Coordinates of a homology class in a deterministic basis."""

    coords: tuple
    relative: bool = False

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __sub__(self, other: "FluxClass") -> "FluxClass":
        return FluxClass(tuple(a - b for a, b in zip(self.coords, other.coords)), self.relative)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


_REDUCTIONS: dict = {}


def reduction(region: Region, relative: bool = False) -> Reduction:
    key = (region, relative)
    if key not in _REDUCTIONS:
        _REDUCTIONS[key] = Reduction(region, relative)
    return _REDUCTIONS[key]


def h1_rank(region: Region) -> int:
    return reduction(region).betti1


def h1_rel_rank(region: Region) -> int:
    return reduction(region, relative=True).betti1


def flux_diff_class(t: Tiling, t0: Tiling) -> FluxClass:
    if t.region != t0.region:
        raise HomologyError("tilings belong to different regions")
    z = domino_chain(t) - domino_chain(t0)
    return FluxClass(reduction(t.region).coordinates(z))


def is_same_flux(t: Tiling, t0: Tiling) -> bool:
    return flux_diff_class(t, t0).is_zero


def rflux(t: Tiling) -> FluxClass:
    z = rotation_chain(t) * Fraction(1, 6)
    return FluxClass(reduction(t.region, relative=True).coordinates(z), relative=True)


def include_class(region: Region, z: Chain) -> FluxClass:
    """Image of an absolute cycle in relative homology."""
    return FluxClass(reduction(region, relative=True).coordinates(z), relative=True)


# ----------------------------------------------------------------------
# sections

@dataclass(frozen=True)
class Section:
    """Axis-aligned plane ``x[axis] = level`` (unit coordinates), optionally clipped.

    ``window`` is ((lo, hi), (lo, hi)) on the two remaining axes, in unit
    coordinates; ``None`` means the whole plane.  The level must avoid
    half-integers so that no refined vertex lies on the section.
    """

    axis: int
    level: Fraction
    window: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "level", Fraction(self.level))
        if (2 * self.level).denominator == 1:
            raise HomologyError("section level must avoid the refined lattice")

    def inside(self, p, scale: int) -> bool:
        """Whether point ``p`` (coordinates times ``scale``) lies in the window."""
        if self.window is None:
            return True
        others = [a for a in AXES if a != self.axis]
        return all(Fraction(lo) * scale <= p[a] <= Fraction(hi) * scale
                   for a, (lo, hi) in zip(others, self.window))


def chain_section_intersection(c: Chain, section: Section, cx: SharpComplex) -> Fraction:
    """Signed count of chain edges crossing the section, positive along the axis."""
    if c.dim != 1:
        raise HomologyError("sections are intersected with 1-chains")
    total = Fraction(0)
    lvl = 2 * section.level
    period = cx.period[section.axis]
    for (p, mask), v in c.coeffs:
        a = next(i for i in AXES if mask >> i & 1)
        if a != section.axis:
            continue
        lo = p[a]
        hits = lo < lvl < lo + 1
        if not hits and period:
            hits = lo < (lvl % period) < lo + 1
        if hits:
            mid = list(p)
            mid[a] = lvl
            if section.inside(mid, 2):
                total += v
    return total
