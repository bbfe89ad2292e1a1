"""Linking numbers, self-linking and helicity of closed polygonal curves.

Curves are integer vertex arrays (any common scale); the last vertex joins
back to the first.  All crossing tests are exact integer arithmetic.

Self-linking is the writhe of the core curve, the average linking number of
the core with its push-offs over every direction cell of the sphere.  For
curves whose segments point along the coordinate axes or along the
diagonals ``(1, +-1, 0)`` the directional writhe is constant on each of the
16 congruent cells cut out by the planes ``x=0, y=0, z=0, x=y, x=-y``, so
the average is an exact multiple of 1/16.  It is the self-helicity of a thin
flux tube whose field lines are transported without rotation.
"""
from __future__ import annotations

import itertools
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

MAX_DIRECTION_RETRIES = 64
PUSHOFF_SCALE = 64


class LinkingError(ValueError):
    pass


class DegenerateProjection(LinkingError):
    pass


def _segments(curve: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    p0 = np.asarray(curve, dtype=np.int64)
    p1 = np.roll(p0, -1, axis=0)
    return p0, p1 - p0


def simplify(curve) -> np.ndarray:
    """Drop repeated and collinear interior vertices of a closed polyline."""
    pts = [tuple(int(v) for v in p) for p in curve]
    out = []
    for p in pts:
        if not out or out[-1] != p:
            out.append(p)
    if len(out) > 1 and out[0] == out[-1]:
        out.pop()
    changed = True
    while changed and len(out) > 3:
        changed = False
        for i in range(len(out)):
            a, b, c = np.array(out[i - 1]), np.array(out[i]), np.array(out[(i + 1) % len(out)])
            u, v = b - a, c - b
            if not np.cross(u, v).any() and np.dot(u, v) > 0:
                out.pop(i)
                changed = True
                break
    return np.array(out, dtype=np.int64)


_rng_directions = None


def projection_directions() -> list[np.ndarray]:
    """Deterministic pseudo-random integer projection directions."""
    global _rng_directions
    if _rng_directions is None:
        rng = np.random.default_rng(20240229)
        dirs = []
        while len(dirs) < MAX_DIRECTION_RETRIES:
            d = rng.integers(-97, 98, size=3)
            if np.count_nonzero(d) == 3 and abs(d[0]) != abs(d[1]) and abs(d[1]) != abs(d[2]) \
                    and abs(d[0]) != abs(d[2]):
                dirs.append(d.astype(np.int64))
        _rng_directions = dirs
    return _rng_directions


def _crossings(a0, ea, b0, eb, d, ignore=None) -> np.ndarray:
    """Signed crossing indicator for every (segment of A, segment of B) pair.

    Returns an int array of shape (len(a0), len(b0)) holding +-1 where the
    projections along ``d`` cross, 0 elsewhere.  Raises
    DegenerateProjection if some pair meets at an endpoint in projection or
    overlaps collinearly.  Pairs flagged in ``ignore`` are skipped.
    """
    r = b0[None, :, :] - a0[:, None, :]
    ebxd = np.cross(eb, d)                       # (m, 3)
    dxea = np.cross(d, ea)                       # (n, 3)
    D = ea @ ebxd.T                              # det(ea, eb, d)
    Ns = np.einsum("nmk,mk->nm", r, ebxd)        # det(r, eb, d)
    Nu = -np.einsum("nmk,nk->nm", r, dxea)       # -det(ea, r, d)
    sgnD = np.sign(D)
    Ds, Nss, Nus = np.abs(D), Ns * sgnD, Nu * sgnD
    nz = Ds != 0
    keep = np.ones(D.shape, dtype=bool) if ignore is None else ~ignore
    s_open = (Nss > 0) & (Nss < Ds)
    u_open = (Nus > 0) & (Nus < Ds)
    s_closed = (Nss >= 0) & (Nss <= Ds)
    u_closed = (Nus >= 0) & (Nus <= Ds)
    edge = keep & nz & ((s_closed & u_closed) & ~(s_open & u_open))
    if edge.any():
        raise DegenerateProjection("vertex projects onto a segment")
    # parallel projections: collinear overlap is degenerate
    par = keep & ~nz
    if par.any():
        coll = par & (np.einsum("nmk,nk->nm", r, dxea) == 0)
        if coll.any():
            for i, j in zip(*np.nonzero(coll)):
                if _projected_overlap(a0[i], ea[i], b0[j], eb[j], d):
                    raise DegenerateProjection("collinear overlap in projection")
    hit = keep & nz & s_open & u_open
    # lam = -det(ea, eb, r) / D ; a(s) = b(u) + lam d, positive lam: A is over
    eaxeb = np.cross(ea[:, None, :], eb[None, :, :])
    lam_num = -np.einsum("nmk,nmk->nm", r, eaxeb)
    over = np.sign(lam_num) * sgnD
    return np.where(hit, over * sgnD, 0).astype(np.int64)


def _projected_overlap(a0, ea, b0, eb, d) -> bool:
    d = d.astype(object)

    def proj(p):
        p = np.asarray(p, dtype=object)
        return p * int(d @ d) - d * int(p @ d)

    w = proj(ea)
    if not any(w):
        return True
    t = [int(proj(q) @ w) for q in (a0, a0 + ea)]
    u = [int(proj(q) @ w) for q in (b0, b0 + eb)]
    return max(min(t), min(u)) <= min(max(t), max(u))


def linking_matrix_raw(curves_a: Sequence[np.ndarray], curves_b: Sequence[np.ndarray],
                       d: np.ndarray, skip_same: bool = False) -> np.ndarray:
    """Twice the linking numbers between every curve of A and of B, along ``d``.

    With ``skip_same`` (A and B the same family) crossings of a curve with
    itself are not counted and the diagonal is zero.
    """
    segs_a = [_segments(c) for c in curves_a]
    segs_b = [_segments(c) for c in curves_b]
    ia = np.concatenate([np.full(len(s[0]), k) for k, s in enumerate(segs_a)])
    ib = np.concatenate([np.full(len(s[0]), k) for k, s in enumerate(segs_b)])
    a0 = np.concatenate([s[0] for s in segs_a])
    ea = np.concatenate([s[1] for s in segs_a])
    b0 = np.concatenate([s[0] for s in segs_b])
    eb = np.concatenate([s[1] for s in segs_b])
    out = np.zeros((len(curves_a), len(curves_b)), dtype=np.int64)
    chunk = max(1, 4_000_000 // max(1, len(b0)))
    for lo in range(0, len(a0), chunk):
        rows = ia[lo:lo + chunk]
        ignore = rows[:, None] == ib[None, :] if skip_same else None
        c = _crossings(a0[lo:lo + chunk], ea[lo:lo + chunk], b0, eb, d, ignore)
        blk = np.zeros((len(curves_a), len(b0)), dtype=np.int64)
        np.add.at(blk, rows, c)
        np.add.at(out.T, ib, blk.T)
    return out


def _robust(fn):
    last = None
    for d in projection_directions():
        try:
            return fn(d)
        except DegenerateProjection as exc:
            last = exc
    raise LinkingError(f"no generic projection direction found: {last}")


def crossing_sum(curves_a, curves_b, direction=None, skip_same=False) -> np.ndarray:
    """Sum of crossing signs between curve pairs (both over and under)."""
    if direction is not None:
        return linking_matrix_raw(curves_a, curves_b, np.asarray(direction, dtype=np.int64),
                                  skip_same)
    return _robust(lambda d: linking_matrix_raw(curves_a, curves_b, d, skip_same))


def linking_number(c1, c2, direction=None) -> int:
    """Gauss linking number of two disjoint closed polylines."""
    c1 = np.asarray(c1, dtype=np.int64)
    c2 = np.asarray(c2, dtype=np.int64)
    if curves_intersect(c1, c2):
        raise LinkingError("curves intersect")
    raw = int(crossing_sum([c1], [c2], direction)[0, 0])
    if raw % 2:
        raise LinkingError("odd crossing sum; curves are not closed or not disjoint")
    return raw // 2


# ----------------------------------------------------------------------
# writhe through push-offs

# One direction inside each of the 16 sphere cells, up to antipodes (8 cells).
WRITHE_DIRECTIONS = tuple(
    np.array(v, dtype=np.int64) for v in (
        (3, 1, 2), (1, 3, 2),        # x>0,y>0 : x>y / y>x  (z>0)
        (-3, 1, 2), (-1, 3, 2),      # x<0,y>0 : |x|>y / y>|x|
        (3, 1, -2), (1, 3, -2),
        (-3, 1, -2), (-1, 3, -2),
    ))


def pushoff(curve: np.ndarray, v: Sequence[int], scale: int = PUSHOFF_SCALE) -> tuple[np.ndarray, np.ndarray]:
    """Curve scaled by ``scale`` and its translate by ``v`` (same scale)."""
    c = np.asarray(curve, dtype=np.int64) * scale
    return c, c + np.asarray(v, dtype=np.int64)


def directional_writhe(curve, v, direction=None) -> int:
    """Linking number of the curve with its infinitesimal translate along ``v``."""
    c, c2 = pushoff(curve, v)
    raw = int(crossing_sum([c], [c2], direction)[0, 0])
    return raw // 2


def writhe(curve) -> Fraction:
    """Exact writhe as the average of the directional writhes over sphere cells."""
    curves = [np.asarray(curve, dtype=np.int64)]
    return writhes(curves)[0]


def writhes(curves: Sequence[np.ndarray]) -> list[Fraction]:
    _check_directions(curves)
    tot = np.zeros(len(curves), dtype=np.int64)
    for v in WRITHE_DIRECTIONS:
        base = [np.asarray(c, dtype=np.int64) * PUSHOFF_SCALE for c in curves]
        shifted = [b + v for b in base]
        raw = _robust(lambda d: _diag_raw(base, shifted, d))
        tot += raw
    # each raw entry is twice a directional writhe; 8 cells
    return [Fraction(int(t), 16) for t in tot]


def _diag_raw(base, shifted, d) -> np.ndarray:
    return np.array([linking_matrix_raw([b], [s], d)[0, 0] for b, s in zip(base, shifted)],
                    dtype=np.int64)


_ALLOWED = {tuple(v) for v in itertools.product((-1, 0, 1), repeat=3)
            if sum(map(abs, v)) == 1 or (v[2] == 0 and abs(v[0]) == abs(v[1]) == 1)}


def _check_directions(curves) -> None:
    for c in curves:
        p0, e = _segments(c)
        for v in e:
            g = np.gcd.reduce(np.abs(v))
            if g == 0 or tuple(int(x) for x in v // g) not in _ALLOWED:
                raise LinkingError(f"segment direction {tuple(v)} not supported for writhe")


# ----------------------------------------------------------------------
# disjointness

def curves_intersect(c1, c2) -> bool:
    """Exact test whether two closed polylines share a point."""
    a0, ea = _segments(c1)
    b0, eb = _segments(c2)
    return bool(_segment_hits(a0, ea, b0, eb).any())


def _segment_hits(a0, ea, b0, eb) -> np.ndarray:
    """Pairwise exact segment intersection test (closed segments)."""
    r = b0[None, :, :] - a0[:, None, :]
    n = np.cross(ea[:, None, :], eb[None, :, :])            # (n, m, 3)
    coplanar = np.einsum("nmk,nmk->nm", r, n) == 0
    nn = np.einsum("nmk,nmk->nm", n, n)
    # non-parallel coplanar: solve via cross products
    # s = ((r x eb) . n) / |n|^2 ; u = ((r x ea) . n) / |n|^2
    rxeb = np.cross(r, eb[None, :, :])
    rxea = np.cross(r, ea[:, None, :])
    s_num = np.einsum("nmk,nmk->nm", rxeb, n)
    u_num = np.einsum("nmk,nmk->nm", rxea, n)
    hit = coplanar & (nn > 0) & (s_num >= 0) & (s_num <= nn) & (u_num >= 0) & (u_num <= nn)
    par = coplanar & (nn == 0)
    if par.any():
        for i, j in zip(*np.nonzero(par)):
            if _collinear_overlap(a0[i], ea[i], b0[j], eb[j]):
                hit[i, j] = True
    return hit


def _collinear_overlap(a0, ea, b0, eb) -> bool:
    r = b0 - a0
    if np.cross(r, ea).any():
        return False
    w = ea if ea.any() else eb
    t = sorted([0, int(ea @ w)])
    u = sorted([int(r @ w), int((r + eb) @ w)])
    return max(t[0], u[0]) <= min(t[1], u[1])


def check_disjoint(curves: Sequence[np.ndarray]) -> None:
    """Raise unless the closed curves are simple and pairwise disjoint."""
    segs = [_segments(np.asarray(c, dtype=np.int64)) for c in curves]
    idx = np.concatenate([np.full(len(s[0]), k) for k, s in enumerate(segs)])
    pos = np.concatenate([np.arange(len(s[0])) for s in segs])
    size = np.array([len(s[0]) for s in segs])[idx]
    a0 = np.concatenate([s[0] for s in segs])
    ea = np.concatenate([s[1] for s in segs])
    lo = np.minimum(a0, a0 + ea)
    hi = np.maximum(a0, a0 + ea)
    n = len(a0)
    chunk = max(1, 4_000_000 // max(1, n))
    for start in range(0, n, chunk):
        sl = slice(start, start + chunk)
        # bounding boxes first, exact tests on the survivors
        near = np.all((lo[sl, None, :] <= hi[None, :, :]) & (lo[None, :, :] <= hi[sl, None, :]), axis=2)
        ii, jj = np.nonzero(near)
        ii = ii + start
        keep = ii < jj
        ii, jj = ii[keep], jj[keep]
        same = idx[ii] == idx[jj]
        gap = (pos[ii] - pos[jj]) % size[ii]
        adjacent = same & ((gap == 1) | (gap == size[ii] - 1))
        ii, jj = ii[~adjacent], jj[~adjacent]
        if not len(ii):
            continue
        hit = _pair_hits(a0[ii], ea[ii], a0[jj], ea[jj])
        for i, j in zip(ii[hit], jj[hit]):
            if idx[i] != idx[j]:
                raise LinkingError(f"curves {idx[i]} and {idx[j]} intersect")
            raise LinkingError(f"curve {idx[i]} intersects itself")


def _pair_hits(a0, ea, b0, eb) -> np.ndarray:
    """Exact intersection test for aligned arrays of segment pairs."""
    r = b0 - a0
    n = np.cross(ea, eb)
    coplanar = np.einsum("nk,nk->n", r, n) == 0
    nn = np.einsum("nk,nk->n", n, n)
    s_num = np.einsum("nk,nk->n", np.cross(r, eb), n)
    u_num = np.einsum("nk,nk->n", np.cross(r, ea), n)
    hit = coplanar & (nn > 0) & (s_num >= 0) & (s_num <= nn) & (u_num >= 0) & (u_num <= nn)
    for k in np.nonzero(coplanar & (nn == 0))[0]:
        hit[k] = _collinear_overlap(a0[k], ea[k], b0[k], eb[k])
    return hit


# ----------------------------------------------------------------------

@dataclass
class TabulationMatrix:
    """Symmetric matrix: linking numbers off the diagonal, self-linking on it."""

    entries: list  # list of rows of Fraction

    @property
    def n(self) -> int:
        return len(self.entries)

    def total(self) -> Fraction:
        return sum((x for row in self.entries for x in row), Fraction(0))

    def is_integral(self) -> bool:
        return all(Fraction(x).denominator == 1 for row in self.entries for x in row)

    def as_int(self) -> list[list[int]]:
        if not self.is_integral():
            raise LinkingError("tabulation matrix has non-integer entries")
        return [[int(x) for x in row] for row in self.entries]

    def nontrivial(self) -> list[int]:
        return [i for i, row in enumerate(self.entries) if any(x != 0 for x in row)]

    def restrict(self, idx: Sequence[int]) -> "TabulationMatrix":
        return TabulationMatrix([[self.entries[i][j] for j in idx] for i in idx])

    def format(self) -> str:
        cells = [[str(x) for x in row] for row in self.entries]
        w = max((len(c) for row in cells for c in row), default=1)
        return "\n".join(" ".join(c.rjust(w) for c in row) for row in cells)


# Added to every self-linking number; nonzero only in negative-control runs.
_SLK_SHIFT = 0


@contextmanager
def perturbed_framing(shift: int = 1):
    """Temporarily add ``shift`` full twists to the framing of every curve."""
    global _SLK_SHIFT
    old, _SLK_SHIFT = _SLK_SHIFT, shift
    try:
        yield
    finally:
        _SLK_SHIFT = old


def tabulate(curves: Sequence[np.ndarray]) -> TabulationMatrix:
    curves = [np.asarray(c, dtype=np.int64) for c in curves]
    n = len(curves)
    raw = crossing_sum(curves, curves, skip_same=True)
    sl = [w + _SLK_SHIFT for w in writhes(curves)]
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(sl[i])
            else:
                if raw[i, j] % 2:
                    raise LinkingError("odd crossing sum between distinct curves")
                row.append(Fraction(int(raw[i, j]) // 2))
        rows.append(row)
    return TabulationMatrix(rows)


def helicity_units(L: TabulationMatrix, fluxes: Optional[Sequence[Fraction]] = None) -> Fraction:
    """Helicity from a tabulation matrix.

    With ``fluxes`` omitted every curve carries unit flux, and the result is
    in units of the common flux squared.
    """
    n = L.n
    f = [Fraction(1)] * n if fluxes is None else [Fraction(x) for x in fluxes]
    h = Fraction(0)
    for i in range(n):
        h += L.entries[i][i] * f[i] * f[i]
        for j in range(i + 1, n):
            h += 2 * L.entries[i][j] * f[i] * f[j]
    return h


@dataclass(frozen=True)
class HelicityValue:
    """Helicity as an exact multiple of the squared common flux."""

    units: Fraction
    phi: Fraction = Fraction(1, 6)

    @property
    def value(self) -> Fraction:
        return self.units * self.phi ** 2

    def __sub__(self, other: "HelicityValue") -> "HelicityValue":
        if self.phi != other.phi:
            raise LinkingError("helicities use different fluxes")
        return HelicityValue(self.units - other.units, self.phi)

    def __str__(self) -> str:
        return f"{self.units}*phi^2 = {self.value}"


def self_linking(curve, framing: Optional[Sequence[int]] = None) -> Fraction:
    """Self-linking number of a closed polyline.

    With ``framing`` given (a constant offset vector, blackboard style) this
    is the integer linking number of the curve with its push-off.  Without
    it, the writhe is returned, which is the framing-free self-linking used
    throughout the helicity computations.
    """
    if framing is None:
        return writhe(curve)
    v = np.asarray(framing, dtype=np.int64)
    c, c2 = pushoff(curve, v)
    if curves_intersect(c, c2):
        raise LinkingError("degenerate framing: push-off meets the curve")
    return Fraction(directional_writhe(curve, v))


def tabulation_matrix(sys) -> TabulationMatrix:
    return tabulate(sys.curves)


def helicity(sys, L: Optional[TabulationMatrix] = None) -> HelicityValue:
    """Helicity of a curve system in which every curve carries the flux ``sys.phi``."""
    if L is None:
        L = tabulation_matrix(sys)
    return HelicityValue(helicity_units(L), Fraction(sys.phi))


def relative_helicity(sys_a, sys_b) -> HelicityValue:
    """Helicity difference of two systems sharing one shell."""
    sa = sys_a.provenance.get("shell")
    sb = sys_b.provenance.get("shell")
    if sa != sb:
        raise LinkingError(f"systems use different shells ({sa!r} vs {sb!r})")
    return helicity(sys_a) - helicity(sys_b)


def gauss_integral_oracle(c1, c2, samples: int = 16) -> float:
    """Floating-point Gauss linking integral.

    The inner integral over each straight segment of ``c2`` is done in
    closed form; the outer one uses Gauss-Legendre nodes on each segment of
    ``c1``.  Meant for validating :func:`linking_number`, not for exact work.
    """
    x, w = np.polynomial.legendre.leggauss(samples)
    t, w = (x + 1) / 2, w / 2
    a0, ea = (s.astype(float) for s in _segments(c1))
    b0, eb = (s.astype(float) for s in _segments(c2))
    pts = (a0[:, None, :] + t[None, :, None] * ea[:, None, :]).reshape(-1, 3)
    tangents = np.repeat(ea, samples, axis=0)
    weights = np.tile(w, len(a0))
    field_ = np.zeros_like(pts)
    for A, E in zip(b0, eb):
        L = np.linalg.norm(E)
        e = E / L
        r = pts - A
        q = r @ e
        rho2 = np.einsum("ij,ij->i", r, r) - q * q
        off = rho2 > 1e-12 * L * L      # points on the segment's line feel no field
        rho2 = np.where(off, rho2, 1.0)
        prim = lambda s: (s - q) / (rho2 * np.sqrt(rho2 + (s - q) ** 2))
        field_ += np.cross(e, r) * np.where(off, prim(L) - prim(0.0), 0.0)[:, None]
    return float(np.sum(weights * np.einsum("ij,ij->i", tangents, field_)) / (4 * np.pi))
