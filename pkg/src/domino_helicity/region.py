"""Cubiculated regions, their checkerboard coloring and the refined complex.

A region is a finite set of unit cubes of the integer lattice, optionally
wrapped periodically along some axes.  Cell ``(x, y, z)`` is the cube
``[x, x+1] x [y, y+1] x [z, z+1]``.

Half-integer geometry (centers of cubes, faces and edges) is stored in
*doubled* integer coordinates so that all arithmetic stays exact.
"""
from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Optional, Sequence

Cell = tuple[int, int, int]
Wrap = tuple[Optional[int], Optional[int], Optional[int]]

AXES = (0, 1, 2)
UNIT = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
REGION_FORMAT_VERSION = 1


class RegionError(ValueError):
    """Raised for invalid region input."""


class Color(Enum):
    BLACK = "black"
    WHITE = "white"

    def opposite(self) -> "Color":
        return Color.WHITE if self is Color.BLACK else Color.BLACK


def _add(a: Sequence[int], b: Sequence[int]) -> Cell:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


@dataclass(frozen=True)
class BoundarySquare:
    """A face of a region cell not shared with another region cell.

    ``side`` is +1 when the face is the upper face of ``cell`` along
    ``axis``.  ``center`` is in doubled coordinates.
    """

    cell: Cell
    axis: int
    side: int
    color: Color

    @property
    def center(self) -> Cell:
        c = [2 * v + 1 for v in self.cell]
        c[self.axis] += self.side
        return tuple(c)

    @property
    def outward(self) -> Cell:
        n = [0, 0, 0]
        n[self.axis] = self.side
        return tuple(n)


@dataclass(frozen=True, eq=False)
class Region:
    cells: frozenset
    wrap: Wrap = (None, None, None)
    color_convention: str = "even_black"

    # ------------------------------------------------------------------
    # basic geometry
    def canon(self, c: Sequence[int]) -> Cell:
        return tuple(v % w if w else v for v, w in zip(c, self.wrap))

    def __contains__(self, c) -> bool:
        return self.canon(c) in self.cells

    def __len__(self) -> int:
        return len(self.cells)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Region):
            return NotImplemented
        return (self.cells, self.wrap, self.color_convention) == (
            other.cells, other.wrap, other.color_convention)

    def __hash__(self) -> int:
        return hash((self.cells, self.wrap))

    @cached_property
    def sorted_cells(self) -> tuple:
        return tuple(sorted(self.cells))

    @cached_property
    def bounds(self) -> tuple[Cell, Cell]:
        """Inclusive min and exclusive max corner of the cell bounding box."""
        lo = tuple(min(c[a] for c in self.cells) for a in AXES)
        hi = tuple(max(c[a] for c in self.cells) + 1 for a in AXES)
        return lo, hi

    @property
    def is_wrapped(self) -> bool:
        return any(self.wrap)

    def neighbors(self, c: Cell) -> list[Cell]:
        """Region cells sharing a face with ``c``, in a fixed axis order."""
        out = []
        for a in AXES:
            for s in (1, -1):
                d = [0, 0, 0]
                d[a] = s
                n = self.canon(_add(c, d))
                if n in self.cells and n != c and n not in out:
                    out.append(n)
        return out

    def displacement(self, a: Cell, b: Cell) -> Cell:
        """Unit lattice vector from cell ``a`` to the adjacent cell ``b``."""
        for axis in AXES:
            for s in (1, -1):
                d = [0, 0, 0]
                d[axis] = s
                if self.canon(_add(a, d)) == b:
                    return tuple(d)
        raise RegionError(f"cells {a} and {b} are not adjacent")

    def color(self, c: Cell) -> Color:
        c = self.canon(c)
        if c not in self.cells:
            raise RegionError(f"cell {c} not in region")
        return color_of(c)

    @cached_property
    def color_counts(self) -> tuple[int, int]:
        black = sum(1 for c in self.cells if sum(c) % 2 == 0)
        return black, len(self.cells) - black

    @property
    def is_balanced(self) -> bool:
        b, w = self.color_counts
        return b == w

    # ------------------------------------------------------------------
    @cached_property
    def boundary_squares(self) -> tuple:
        out = []
        for c in self.sorted_cells:
            col = color_of(c)
            for a in AXES:
                for s in (-1, 1):
                    d = [0, 0, 0]
                    d[a] = s
                    if self.canon(_add(c, d)) not in self.cells:
                        out.append(BoundarySquare(c, a, s, col))
        return tuple(out)

    @cached_property
    def sharp(self) -> "SharpComplex":
        return SharpComplex(self)

    # ------------------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "version": REGION_FORMAT_VERSION,
            "cells": [list(c) for c in self.sorted_cells],
            "wrap": list(self.wrap),
            "color": self.color_convention,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "Region":
        if d.get("color", "even_black") != "even_black":
            raise RegionError(f"unsupported color convention {d['color']!r}")
        wrap = tuple(d.get("wrap") or (None, None, None))
        return make_region((tuple(c) for c in d["cells"]), wrap=wrap)

    @classmethod
    def loads(cls, s: str) -> "Region":
        return cls.from_dict(json.loads(s))


def color_of(c: Sequence[int]) -> Color:
    """Parity coloring: black iff x + y + z is even."""
    return Color.BLACK if (c[0] + c[1] + c[2]) % 2 == 0 else Color.WHITE


def make_box(L: int, M: int, N: int) -> Region:
    """The box ``[0, L] x [0, M] x [0, N]``."""
    if min(L, M, N) < 1:
        raise RegionError(f"box dimensions must be positive, got {(L, M, N)}")
    cells = itertools.product(range(L), range(M), range(N))
    return make_region(cells)


def make_region(cells: Iterable[Sequence[int]], wrap: Sequence = (None, None, None),
                validate: bool = True) -> Region:
    wrap = tuple(wrap) + (None,) * (3 - len(wrap))
    for w in wrap:
        if w is not None and (w <= 0 or w % 2):
            raise RegionError(f"wrap periods must be positive and even, got {w}")
    cellset = set()
    for c in cells:
        c = tuple(int(v) for v in c)
        for v, w in zip(c, wrap):
            if w is not None and not 0 <= v < w:
                raise RegionError(f"cell {c} not canonical for wrap {wrap}")
        cellset.add(c)
    if not cellset:
        raise RegionError("region has no cells")
    region = Region(frozenset(cellset), wrap)
    if validate:
        _check_connected(region)
        _check_regular(region)
    return region


def _check_connected(region: Region) -> None:
    start = region.sorted_cells[0]
    seen = {start}
    queue = deque([start])
    while queue:
        c = queue.popleft()
        for n in region.neighbors(c):
            if n not in seen:
                seen.add(n)
                queue.append(n)
    if len(seen) != len(region.cells):
        raise RegionError("region is disconnected")


def _check_regular(region: Region) -> None:
    """Reject edges around which the region cells meet only diagonally.

    Around a lattice edge there are four cube slots; the cubiculated-region
    assumption rules out the two-diagonal-cubes pattern (a non-manifold
    edge).  Singular vertices are tolerated.
    """
    seen = set()
    for c in region.cells:
        for axis in AXES:
            u, v = [a for a in AXES if a != axis]
            for du, dv in itertools.product((0, 1), repeat=2):
                corner = list(c)
                corner[u] += du
                corner[v] += dv
                key = (axis, region.canon(corner))
                if key in seen:
                    continue
                seen.add(key)
                slots = []
                for su, sv in itertools.product((-1, 0), repeat=2):
                    q = list(corner)
                    q[u] += su
                    q[v] += sv
                    slots.append(q in region)
                # slots order: (-1,-1), (-1,0), (0,-1), (0,0)
                if slots == [True, False, False, True] or slots == [False, True, True, False]:
                    raise RegionError(
                        f"non-manifold edge along axis {axis} at corner {tuple(corner)}")


# ----------------------------------------------------------------------
# the refined complex

SharpCell = tuple[tuple[int, int, int], int]   # (doubled min corner, axis bitmask)


def _dirs(mask: int) -> list[int]:
    return [a for a in AXES if mask >> a & 1]


@dataclass(eq=False)
class SharpComplex:
    """The subdivision in which every unit cube is split into eight.

    Cells are ``(p, mask)``: ``p`` is the doubled-coordinate min corner and
    ``mask`` selects the spanning axes, so ``popcount(mask)`` is the
    dimension.  Each cell list is sorted, giving reproducible indices.
    """

    region: Region
    cells: dict = field(init=False)
    index: list = field(init=False)
    boundary_cells: set = field(init=False)

    def __post_init__(self) -> None:
        reg = self.region
        period = tuple(2 * w if w else None for w in reg.wrap)
        self.period = period
        by_dim: list[set] = [set(), set(), set(), set()]
        for c in reg.cells:
            base = [2 * v for v in c]
            for mask in range(8):
                dirs = _dirs(mask)
                ranges = [range(2) if a in dirs else range(3) for a in AXES]
                for off in itertools.product(*ranges):
                    p = self.canon(_add(base, off))
                    by_dim[len(dirs)].add((p, mask))
        self.cells = {k: sorted(s) for k, s in enumerate(by_dim)}
        self.index = [{cell: i for i, cell in enumerate(self.cells[k])} for k in range(4)]

        bnd = set()
        for sq in reg.boundary_squares:
            base = [2 * v for v in sq.cell]
            base[sq.axis] += 1 + sq.side
            tang = [a for a in AXES if a != sq.axis]
            for mask in range(8):
                if mask >> sq.axis & 1:
                    continue
                dirs = _dirs(mask)
                for o in itertools.product(*[range(2) if a in dirs else range(3) for a in tang]):
                    p = list(base)
                    for a, v in zip(tang, o):
                        p[a] += v
                    bnd.add((self.canon(p), mask))
        self.boundary_cells = bnd

    def canon(self, p: Sequence[int]) -> Cell:
        return tuple(v % w if w else v for v, w in zip(p, self.period))

    def count(self, dim: int) -> int:
        return len(self.cells[dim])

    def boundary_of(self, cell: SharpCell) -> list[tuple[SharpCell, int]]:
        """Signed faces of a cell; standard cubical orientation."""
        p, mask = cell
        out = []
        for i, a in enumerate(_dirs(mask)):
            sub = mask & ~(1 << a)
            sign = -1 if i % 2 else 1
            q = list(p)
            q[a] += 1
            out.append(((self.canon(q), sub), sign))
            out.append(((p, sub), -sign))
        return out

    def boundary_matrix(self, dim: int) -> list[dict[int, int]]:
        """Columns of the boundary map C_dim -> C_{dim-1} as sparse dicts."""
        idx = self.index[dim - 1]
        cols = []
        for cell in self.cells[dim]:
            col: dict[int, int] = {}
            for face, s in self.boundary_of(cell):
                r = idx[face]
                v = col.get(r, 0) + s
                if v:
                    col[r] = v
                else:
                    col.pop(r, None)
            cols.append(col)
        return cols

    def is_boundary_cell(self, cell: SharpCell) -> bool:
        return cell in self.boundary_cells

    def vertex(self, p: Sequence[int]) -> SharpCell:
        return (self.canon(p), 0)

    def edge(self, p: Sequence[int], q: Sequence[int]) -> tuple[SharpCell, int]:
        """The ♯-edge between adjacent doubled points, with orientation sign."""
        d = [b - a for a, b in zip(p, q)]
        axis = next(a for a in AXES if d[a])
        if d[axis] == 1:
            return (self.canon(p), 1 << axis), 1
        return (self.canon(q), 1 << axis), -1
