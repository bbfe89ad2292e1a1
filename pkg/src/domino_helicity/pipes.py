"""Five-pipe curves inside dominoes, isolating shells and curve assembly.

Curve geometry lives on the quarter lattice: a vertex ``(X, Y, Z)`` stands
for the point ``(X/4, Y/4, Z/4)``.
"""
from __future__ import annotations

import itertools
import json
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .region import AXES, BoundarySquare, Color, Region, color_of
from .tiling import Domino, Tiling

Q = 4  # quarter-lattice scale

# The five arcs of the reference domino [0,2]x[0,1]x[0,1], black cube at the
# origin, oriented from black to white.
REFERENCE_ARCS = (
    ((0, 2, 2), (8, 2, 2)),
    ((2, 0, 2), (2, 1, 2), (6, 1, 2), (6, 0, 2)),
    ((2, 2, 0), (2, 2, 1), (6, 2, 1), (6, 2, 0)),
    ((2, 4, 2), (2, 3, 2), (6, 3, 2), (6, 4, 2)),
    ((2, 2, 4), (2, 2, 3), (6, 2, 3), (6, 2, 4)),
)

# Closed loop added in six-pipe mode: out along the axis, back after a U-turn.
REFERENCE_LOOP = ((1, 1, 1), (7, 1, 1), (7, 1, 3), (1, 1, 3))


class PipeError(ValueError):
    pass


def rotation_for(v: Sequence[int]) -> np.ndarray:
    """Orientation-preserving rotation taking +x to the unit vector ``v``."""
    v = tuple(int(c) for c in v)
    table = {
        (1, 0, 0): ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
        (-1, 0, 0): ((-1, 0, 0), (0, -1, 0), (0, 0, 1)),
        (0, 1, 0): ((0, -1, 0), (1, 0, 0), (0, 0, 1)),
        (0, -1, 0): ((0, 1, 0), (-1, 0, 0), (0, 0, 1)),
        (0, 0, 1): ((0, 0, -1), (0, 1, 0), (1, 0, 0)),
        (0, 0, -1): ((0, 0, 1), (0, 1, 0), (-1, 0, 0)),
    }
    return np.array(table[v], dtype=np.int64)


@dataclass(frozen=True)
class PipeArc:
    """Directed polyline from an entry face center to an exit face center."""

    points: tuple  # quarter-lattice vertices
    kind: str = "domino"

    @property
    def start(self) -> tuple:
        return self.points[0]

    @property
    def end(self) -> tuple:
        return self.points[-1]


def _place(points, black: Sequence[int], v: Sequence[int]) -> tuple:
    R = rotation_for(v)
    center = np.array([2, 2, 2])
    origin = Q * np.asarray(black) + center
    out = []
    for p in points:
        q = R @ (np.asarray(p) - center) + origin
        out.append(tuple(int(x) for x in q))
    return tuple(out)


def domino_pipes(d: Domino, v: Optional[Sequence[int]] = None) -> list[PipeArc]:
    """The five arcs of a domino, in unwrapped coordinates anchored at the black cell."""
    if v is None:
        v = tuple(w - b for b, w in zip(d.black, d.white))
    return [PipeArc(_place(a, d.black, v)) for a in REFERENCE_ARCS]


def six_pipe_loop(d: Domino, v: Optional[Sequence[int]] = None) -> tuple:
    """Closed loop running along the domino axis and back, linking nothing."""
    if v is None:
        v = tuple(w - b for b, w in zip(d.black, d.white))
    return _place(REFERENCE_LOOP, d.black, v)


def six_pipe_arcs(d: Domino, v: Optional[Sequence[int]] = None) -> tuple[list[PipeArc], tuple]:
    return domino_pipes(d, v), six_pipe_loop(d, v)


# ----------------------------------------------------------------------
# shells

@dataclass
class Shell:
    """Directed pipes outside the region, white boundary square to black one."""

    pipes: list                     # list of PipeArc (kind="shell")
    name: str = "shell"
    region_key: Optional[int] = None

    def endpoints(self) -> tuple[set, set]:
        return {p.start for p in self.pipes}, {p.end for p in self.pipes}

    def to_dict(self) -> dict:
        return {"name": self.name,
                "pipes": [[list(p) for p in pipe.points] for pipe in self.pipes]}

    @classmethod
    def from_dict(cls, d: dict) -> "Shell":
        return cls([PipeArc(tuple(tuple(p) for p in pts), "shell") for pts in d["pipes"]],
                   d.get("name", "shell"))


def square_point(sq: BoundarySquare) -> tuple:
    """Quarter-lattice center of a boundary square."""
    return tuple(2 * c for c in sq.center)


def empty_shell() -> Shell:
    return Shell([], "empty")


def validate_shell(region: Region, shell: Shell) -> None:
    """Check endpoint usage, colors, and that pipes stay outside the region."""
    whites = {square_point(s) for s in region.boundary_squares if s.color is Color.WHITE}
    blacks = {square_point(s) for s in region.boundary_squares if s.color is Color.BLACK}
    starts = [p.start for p in shell.pipes]
    ends = [p.end for p in shell.pipes]
    if sorted(starts) != sorted(whites) or len(set(starts)) != len(starts):
        raise PipeError("shell pipes must start once at every white boundary square")
    if sorted(ends) != sorted(blacks) or len(set(ends)) != len(ends):
        raise PipeError("shell pipes must end once at every black boundary square")
    solid = _SolidTest(region)
    for pipe in shell.pipes:
        pts = pipe.points
        for a, b in zip(pts, pts[1:]):
            n = max(abs(x - y) for x, y in zip(a, b))
            for k in range(1, 2 * n):
                # midpoints and lattice points strictly inside the segment
                m = tuple(Fraction(x * (2 * n - k) + y * k, 2 * n) for x, y in zip(a, b))
                if solid.contains(m):
                    raise PipeError(f"shell pipe enters the region near {m}")


class _SolidTest:
    """Membership in the closed region for quarter-lattice points."""

    def __init__(self, region: Region):
        self.region = region

    def contains(self, p) -> bool:
        cand = []
        for x in p:
            x = Fraction(x) / Q
            f = x.numerator // x.denominator
            cand.append({f, f - 1} if x == f else {f})
        return any(c in self.region for c in itertools.product(*cand))


def build_shell(region: Region, strategy: str = "layered-auto", margin: int = 2) -> Shell:
    if not region.boundary_squares:
        return empty_shell()
    if strategy == "builtin-fixture":
        from .fixtures import fixture_shell
        return fixture_shell(region)
    if strategy in ("layered-auto", "routed"):
        return route_shell(region, margin=margin)
    raise PipeError(f"unknown shell strategy {strategy!r}")


STEPS = tuple(tuple(s if i == a else 0 for i in AXES) for a in AXES for s in (1, -1))


class _Space:
    """Free quarter-lattice points around a region, inside a margin box."""

    def __init__(self, region: Region, margin: int):
        if region.is_wrapped:
            raise PipeError("shell routing needs an unwrapped region")
        lo, hi = region.bounds
        self.lo = tuple(Q * (v - margin) for v in lo)
        self.hi = tuple(Q * (v + margin) for v in hi)
        self.solid = _SolidTest(region)
        self.used: set = set()
        self.stubs: dict = {}
        for sq in region.boundary_squares:
            c = square_point(sq)
            out = tuple(x + n for x, n in zip(c, sq.outward))
            self.stubs[c] = out
            self.used.add(out)

    def free(self, p) -> bool:
        return (all(a <= x <= b for x, a, b in zip(p, self.lo, self.hi))
                and p not in self.used and not self.solid.contains(p))


def _bfs(src, goal, ok, steps=STEPS):
    """Shortest lattice path from ``src`` to the first point satisfying ``goal``."""
    prev = {src: None}
    queue = deque([src])
    while queue:
        p = queue.popleft()
        if goal(p):
            path = []
            while p is not None:
                path.append(p)
                p = prev[p]
            return path[::-1]
        for s in steps:
            q = (p[0] + s[0], p[1] + s[1], p[2] + s[2])
            if q not in prev and (ok(q) or goal(q)):
                prev[q] = p
                queue.append(q)
    return None


def route_shell(region: Region, margin: int = 2, pairing=None) -> Shell:
    """Greedy lattice router in the complement of the region.

    Boundary squares are paired greedily (nearest opposite color first,
    unless ``pairing`` is given as a list of (white, black) squares); each
    pipe leaves its square along the outward normal and follows a shortest
    quarter-lattice path that avoids the closed region and earlier pipes.
    """
    whites = [s for s in region.boundary_squares if s.color is Color.WHITE]
    blacks = [s for s in region.boundary_squares if s.color is Color.BLACK]
    if len(whites) != len(blacks):
        raise PipeError("unbalanced boundary colors; no isolating shell exists")
    space = _Space(region, margin)
    if pairing is None:
        pairing = _greedy_pairing(whites, blacks)
    pipes = []
    for w, b in pairing:
        cw, cb = square_point(w), square_point(b)
        src, dst = space.stubs[cw], space.stubs[cb]
        space.used.discard(src)
        space.used.discard(dst)
        path = _bfs(src, lambda p: p == dst, space.free)
        if path is None:
            raise PipeError(f"routing failed for {w} -> {b}; try a larger margin "
                            "(no shell exists at all when the relative flux is nonzero)")
        space.used.update(path)
        pipes.append(PipeArc(_compress((cw,) + tuple(path) + (cb,)), "shell"))
    return Shell(pipes, "layered-auto")


def _greedy_pairing(whites, blacks):
    pairs = []
    free = list(blacks)
    for w in whites:
        cw = np.array(w.center)
        best = min(free, key=lambda b: (int(np.abs(np.array(b.center) - cw).sum()), b.center))
        free.remove(best)
        pairs.append((w, best))
    return pairs


@dataclass(frozen=True)
class Mirror:
    """Lattice reflection ``p -> signs * p[perm] + offset`` on quarter-lattice points."""

    perm: tuple
    signs: tuple
    offset: tuple

    def __call__(self, p) -> tuple:
        return tuple(s * p[k] + o for k, s, o in zip(self.perm, self.signs, self.offset))

    def linear(self, v) -> tuple:
        return tuple(s * v[k] for k, s in zip(self.perm, self.signs))

    @cached_property
    def normal(self) -> tuple:
        for v in itertools.product((-1, 0, 1), repeat=3):
            if any(v) and self.linear(v) == tuple(-x for x in v):
                return v
        raise PipeError("not a reflection")

    @cached_property
    def plane_steps(self) -> tuple:
        # axis steps and (1, +-1, 0)-type diagonals only
        return tuple(v for v in itertools.product((-1, 0, 1), repeat=3)
                     if 0 < sum(map(abs, v)) <= 2 and (sum(map(abs, v)) == 1 or v[2] == 0)
                     and self.linear(v) == v)

    def side(self, p) -> int:
        """Signed offset of ``p`` from the mirror plane (0 on it)."""
        return sum((a - b) * n for a, b, n in zip(p, self(p), self.normal))

    def cell(self, c) -> tuple:
        """Image of the unit cube with min corner ``c``."""
        lo = self(tuple(Q * x for x in c))
        hi = self(tuple(Q * x + Q for x in c))
        return tuple(min(a, b) // Q for a, b in zip(lo, hi))

    def region(self, region: Region) -> Region:
        from .region import make_region
        return make_region([self.cell(c) for c in region.cells], validate=False)


def symmetric_shell(region: Region, mirror: Mirror, margin: int = 2, name: str = "symmetric",
                    pairing=None, steps: Sequence = STEPS) -> Shell:
    """Shell invariant under a reflection that preserves the region.

    Squares on the mirror plane are joined by pipes inside the plane.  When
    the reflection swaps colors, each other square is joined to its mirror
    image by a pipe that crosses the plane once; otherwise squares on one
    side are paired among themselves (greedily, or as given by ``pairing``,
    a list of (white, black) square centers on the positive side) and the
    pipes are copied across.  In
    both cases the curve systems of mirror-image tilings are mirror images,
    so their helicities are opposite.
    """
    if mirror.region(region) != region:
        raise PipeError("region is not symmetric under the mirror")
    space = _Space(region, margin)
    squares = {square_point(s): s for s in region.boundary_squares}
    for c in squares:
        if mirror(c) not in squares:
            raise PipeError("boundary squares are not mirror symmetric")
    fixed = sorted(c for c in squares if mirror(c) == c)
    upper = sorted(c for c in squares if mirror.side(c) > 0)
    pipes = []

    def route(src_sq, dst_pred, ok):
        src = space.stubs[src_sq]
        space.used.discard(src)
        path = _bfs(src, dst_pred, ok, steps)
        if path is None:
            raise PipeError("symmetric routing failed; try a larger margin")
        return path

    # in-plane pipes
    fw = [c for c in fixed if squares[c].color is Color.WHITE]
    fb = [c for c in fixed if squares[c].color is Color.BLACK]
    if len(fw) != len(fb):
        raise PipeError("unbalanced colors on the mirror plane")
    # few squares lie on the plane; try pairings until the routes fit
    def dist(pairs):
        return sum(sum(abs(x - y) for x, y in zip(w, b)) for w, b in pairs)

    options = sorted((list(zip(fw, perm)) for perm in itertools.permutations(fb)),
                     key=lambda pairs: (dist(pairs), pairs))
    saved = set(space.used)
    for pairs in options:
        space.used = set(saved)
        planar = []
        for w, b in pairs:
            src, dst = space.stubs[w], space.stubs[b]
            space.used -= {src, dst}
            path = _bfs(src, lambda p, dst=dst: p == dst,
                        lambda p: mirror(p) == p and space.free(p), mirror.plane_steps)
            if path is None:
                break
            space.used.update(path)
            planar.append(PipeArc(_compress((w,) + tuple(path) + (b,)), "shell"))
        else:
            pipes.extend(planar)
            break
    else:
        raise PipeError("no pairing of the squares on the mirror plane can be routed")

    def up(p):
        return mirror.side(p) > 0 and space.free(p)

    some = squares[upper[0]] if upper else None
    swaps = some is not None and squares[mirror(upper[0])].color is not some.color
    if swaps:
        for c in upper:
            path = route(c, lambda p: mirror.side(p) == 0 and space.free(p), up)
            space.used.update(path)
            half = (c,) + tuple(path)
            full = half + tuple(mirror(p) for p in reversed(half[:-1]))
            if squares[c].color is Color.BLACK:
                full = full[::-1]
            pipes.append(PipeArc(_compress(full), "shell"))
    else:
        uw = [c for c in upper if squares[c].color is Color.WHITE]
        ub = [c for c in upper if squares[c].color is Color.BLACK]
        if len(uw) != len(ub):
            raise PipeError("unbalanced colors on one side of the mirror")
        for w, b in pairing or _greedy_points(uw, ub):
            dst = space.stubs[b]
            space.used.discard(dst)
            path = route(w, lambda p: p == dst, up)
            space.used.update(path)
            pts = (w,) + tuple(path) + (b,)
            pipes.append(PipeArc(_compress(pts), "shell"))
            pipes.append(PipeArc(_compress(tuple(mirror(p) for p in pts)), "shell"))
    return Shell(pipes, name)


def refine_shell(region: Region, shell: Shell) -> Shell:
    """Shell for the refined region.

    Old pipes are scaled and end on the central small square of their
    boundary square.  The 24 small squares around it are joined in pairs
    along two concentric rings by short pipes hugging the face.
    """
    from .tiling import REFINE_SCALE as k
    pipes = [PipeArc(tuple(tuple(k * x for x in p) for p in pipe.points), "shell")
             for pipe in shell.pipes]
    for sq in region.boundary_squares:
        u, w = (a for a in AXES if a != sq.axis)
        center = tuple(2 * k * c for c in sq.center)   # quarter lattice of the refined region
        out = sq.outward
        for ring in (1, 2):
            cycle = _ring(ring)
            for a, b in zip(cycle[::2], cycle[1::2]):
                pts = []
                for i, j in (a, b):
                    p = list(center)
                    p[u] += 4 * i
                    p[w] += 4 * j
                    pts.append(tuple(p))
                lifted = [tuple(x + n for x, n in zip(p, out)) for p in pts]
                arc = (pts[0], lifted[0], lifted[1], pts[1])
                small = tuple((c - 2) // 4 for c in _inner(pts[0], out))
                if color_of(small) is Color.BLACK:
                    arc = arc[::-1]
                pipes.append(PipeArc(arc, "shell"))
    return Shell(pipes, shell.name + "-refined")


def _ring(r: int) -> list:
    """Grid positions at Chebyshev distance ``r``, in cyclic order."""
    side = [(i, -r) for i in range(-r, r)] + [(r, j) for j in range(-r, r)]
    return side + [(-i, -j) for i, j in side]


def _inner(p, out) -> tuple:
    """Quarter-lattice center of the small cube just inside a face center."""
    return tuple(x - 2 * n for x, n in zip(p, out))


def section_crossings(polylines: Sequence, axis: int, level: Fraction,
                      period: Optional[int] = None, closed: bool = False) -> int:
    """Signed count of crossings of the plane ``x[axis] = level`` (unit coordinates).

    ``period`` (unit coordinates) repeats the plane periodically.
    """
    lvl = Fraction(level) * Q
    total = 0
    for pts in polylines:
        pts = [tuple(p) for p in pts]
        segs = list(zip(pts, pts[1:] + pts[:1])) if closed else list(zip(pts, pts[1:]))
        for a, b in segs:
            lo, hi = a[axis], b[axis]
            if lo == hi:
                continue
            sign = 1 if hi > lo else -1
            lo, hi = min(lo, hi), max(lo, hi)
            if lvl in (lo, hi):
                raise PipeError("section passes through a curve vertex")
            if period:
                per = Q * period
                n = math.floor((hi - lvl) / per) - math.ceil((lo - lvl) / per) + 1
            else:
                n = int(lo < lvl < hi)
            total += sign * n
    return total


def section_flux(t: Tiling, axis: int, level, phi=Fraction(1, 6), six_pipe: bool = True) -> Fraction:
    """Flux of the domino pipes through a full axis-aligned plane section."""
    arcs = [a.points for a in tiling_arcs(t)]
    period = t.region.wrap[axis]
    n = section_crossings(arcs, axis, level, period)
    if six_pipe:
        loops = [six_pipe_loop(d, t.vector(d)) for d in t.dominoes]
        n += section_crossings(loops, axis, level, period, closed=True)
    return Fraction(phi) * n


def _greedy_points(ws, bs):
    free = list(bs)
    out = []
    for w in ws:
        best = min(free, key=lambda b: (sum(abs(x - y) for x, y in zip(w, b)), b))
        free.remove(best)
        out.append((w, best))
    return out


def _compress(points) -> tuple:
    pts = [tuple(p) for p in points]
    out = [pts[0]]
    for p in pts[1:]:
        if p == out[-1]:
            continue
        if len(out) >= 2:
            a, b = np.array(out[-2]), np.array(out[-1])
            if not np.cross(b - a, np.array(p) - b).any() and np.dot(b - a, np.array(p) - b) > 0:
                out[-1] = p
                continue
        out.append(p)
    return tuple(out)


# ----------------------------------------------------------------------
# curve systems

@dataclass
class CurveSystem:
    curves: list                       # closed curves as int arrays (quarter lattice)
    phi: Fraction = Fraction(1, 6)
    provenance: dict = field(default_factory=dict)
    loops: list = field(default_factory=list)   # six-pipe extra loops, if any

    def __len__(self) -> int:
        return len(self.curves)

    def to_dict(self) -> dict:
        return {
            "scale": Q,
            "phi": str(self.phi),
            "provenance": self.provenance,
            "curves": [[list(map(int, p)) for p in c] for c in self.curves],
            "loops": [[list(map(int, p)) for p in c] for c in self.loops],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "CurveSystem":
        return cls([np.array(c, dtype=np.int64) for c in d["curves"]], Fraction(d["phi"]),
                   d.get("provenance", {}),
                   [np.array(c, dtype=np.int64) for c in d.get("loops", [])])

    @classmethod
    def loads(cls, s: str) -> "CurveSystem":
        return cls.from_dict(json.loads(s))

    def reflected(self, axis_map: Sequence[int], signs: Sequence[int], offset: Sequence[int]) -> "CurveSystem":
        """Image under ``p -> signs * p[axis_map] + offset`` (quarter-lattice units)."""
        out = []
        for c in self.curves:
            c = np.asarray(c)
            out.append(c[:, list(axis_map)] * np.asarray(signs) + np.asarray(offset))
        return CurveSystem(out, self.phi, dict(self.provenance))


def tiling_arcs(t: Tiling) -> list[PipeArc]:
    arcs = []
    for d in t.dominoes:
        arcs.extend(domino_pipes(d, t.vector(d)))
    return arcs


def assemble_curves(region: Region, t: Tiling, shell: Shell, phi=Fraction(1, 6),
                    six_pipe: bool = False) -> CurveSystem:
    """Join domino arcs and shell pipes end to start into closed curves."""
    if t.region != region:
        raise PipeError("tiling belongs to a different region")
    wrap = tuple(Q * w if w else None for w in region.wrap)

    def canon(p):
        return tuple(x % w if w else x for x, w in zip(p, wrap))

    pieces = tiling_arcs(t) + list(shell.pipes)
    by_start = {}
    for k, piece in enumerate(pieces):
        s = canon(piece.start)
        if s in by_start:
            raise PipeError(f"two pieces start at {s}")
        by_start[s] = k
    ends = [canon(p.end) for p in pieces]
    if sorted(ends) != sorted(by_start):
        missing = set(ends) ^ set(by_start)
        raise PipeError(f"dangling endpoints: {sorted(missing)[:4]}")
    seen = [False] * len(pieces)
    curves = []
    for k0 in range(len(pieces)):
        if seen[k0]:
            continue
        pts = []
        k = k0
        shift = np.zeros(3, dtype=np.int64)
        while not seen[k]:
            seen[k] = True
            piece = pieces[k]
            arr = np.asarray(piece.points, dtype=np.int64)
            if pts:
                # unwrap so consecutive pieces meet exactly
                delta = np.asarray(pts[-1]) - (arr[0] + shift)
                shift = shift + delta
            pts.extend(tuple(int(x) for x in p + shift) for p in arr)
            k = by_start[canon(piece.end)]
        if k != k0:
            raise PipeError("curve assembly did not close")
        curves.append(_close(pts))
    loops = []
    if six_pipe:
        loops = [np.array(six_pipe_loop(d, t.vector(d)), dtype=np.int64) for d in t.dominoes]
    return CurveSystem(curves, Fraction(phi), {"tiling": [[list(d.black), list(d.white)] for d in t.dominoes],
                                               "shell": shell.name}, loops)


def _close(pts) -> np.ndarray:
    from .linkhel import simplify
    if tuple(pts[0]) == tuple(pts[-1]):
        pts = pts[:-1]
    return simplify(pts)
