"""End-to-end checks of the reference example values.

Each check returns a :class:`CheckResult`; :func:`run_all` runs them in
order.  The checks share one cache of helicity computations.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .fixtures import FIXTURE_NAMES, auto_shell, load_fixture
from .homology import chain_section_intersection, flux_diff_class, rflux, rotation_chain, Section
from .linkhel import (gauss_integral_oracle, helicity, linking_number, tabulate)
from .pipes import assemble_curves, section_flux
from .tiling import enumerate_tilings, list_flips, list_trits, move_graph
from .twist import twist_bfs

PHI = Fraction(1, 6)

HEX_MATRIX = [[-2] * 3 for _ in range(3)]
BOX332_MATRIX = [
    [0, 0, -1, -1, -1, -1, -1],
    [0, 0, 0, 0, 0, 0, -1],
    [-1, 0, -1, -1, -1, -1, -1],
    [-1, 0, -1, -1, -1, -1, -1],
    [-1, 0, -1, -1, -1, -1, -1],
    [-1, 0, -1, -1, -1, -1, -1],
    [-1, -1, -1, -1, -1, -1, 0],
]


@dataclass
class CheckResult:
    number: int
    name: str
    ok: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        mark = "PASS" if self.ok else "FAIL"
        return f"[{mark}] {self.number:>2}. {self.name}: {self.detail} ({self.seconds:.1f}s)"


class _Cache:
    def __init__(self):
        self.tilings = {}
        self.graphs = {}
        self.hel = {}
        self.shells = {}

    def all_tilings(self, name):
        if name not in self.tilings:
            self.tilings[name] = enumerate_tilings(load_fixture(name).region)
        return self.tilings[name]

    def graph(self, name):
        if name not in self.graphs:
            self.graphs[name] = move_graph(self.all_tilings(name))
        return self.graphs[name]

    def shell(self, name, kind):
        key = (name, kind)
        if key not in self.shells:
            fx = load_fixture(name)
            self.shells[key] = fx.shell() if kind == "fixture" else auto_shell(fx.region)
        return self.shells[key]

    def helicity(self, name, t, kind="fixture"):
        key = (name, kind, t)
        if key not in self.hel:
            sys = assemble_curves(t.region, t, self.shell(name, kind), PHI)
            self.hel[key] = helicity(sys).units
        return self.hel[key]


def _check(number, name):
    def deco(fn):
        fn.number, fn.title = number, name
        return fn
    return deco


@_check(1, "tiling counts")
def check_counts(c: _Cache):
    want = {"box-2-2-1": 2, "hex": 2, "box-3-3-2": 229}
    got = {k: len(c.all_tilings(k)) for k in want}
    return got == want, ", ".join(f"{k}={v}" for k, v in got.items())


@_check(2, "move structure")
def check_moves(c: _Cache):
    g221 = c.graph("box-2-2-1")
    ghex = c.graph("hex")
    hexfx = load_fixture("hex")
    i0 = ghex.tilings.index(hexfx.tilings["t0"])
    i1 = ghex.tilings.index(hexfx.tilings["t1"])
    t0 = load_fixture("box-3-3-2").tilings["t0"]
    ok = (g221.flip_edges == [(0, 1)] and not g221.trit_edges
          and ghex.trit_edges == [(i0, i1)] and not ghex.flip_edges
          and not list_flips(t0) and len(list_trits(t0)) > 0)
    return ok, (f"2x2x1 flips {g221.flip_edges}; hex positive trit {ghex.trit_edges}; "
                f"3x3x2 t0 has {len(list_flips(t0))} flips, {len(list_trits(t0))} trits")


def _match_up_to_order(M, target) -> bool:
    n = len(target)
    if len(M) != n:
        return False
    return any(all(M[p[i]][p[j]] == target[i][j] for i in range(n) for j in range(n))
               for p in itertools.permutations(range(n)))


@_check(3, "tabulation matrices")
def check_matrices(c: _Cache):
    out = []
    ok = True
    for name, target in (("hex", HEX_MATRIX), ("box-3-3-2", BOX332_MATRIX)):
        fx = load_fixture(name)
        t = fx.tilings["t0"]
        L = tabulate(assemble_curves(fx.region, t, fx.shell(), PHI).curves)
        sub = L.restrict(L.nontrivial())
        good = sub.is_integral() and _match_up_to_order(sub.as_int() if sub.is_integral() else [], target)
        ok &= good
        diag = [str(sub.entries[i][i]) for i in range(sub.n)]
        out.append(f"{name}: {sub.n} nontrivial curves, diagonal [{' '.join(diag)}], "
                   f"{'matches' if good else 'differs'}")
    return ok, "; ".join(out)


@_check(4, "helicity values")
def check_values(c: _Cache):
    want = [("hex", "t0", -18), ("hex", "t1", 18), ("box-3-3-2", "t0", -36),
            ("box-3-3-2", "vertical", 0), ("box-2-2-1", "t0", 0), ("box-2-2-1", "t1", 0)]
    got = [(n, k, c.helicity(n, load_fixture(n).tilings[k])) for n, k, _ in want]
    ok = all(g[2] == w[2] for g, w in zip(got, want))
    return ok, ", ".join(f"{n}/{k}={v}phi^2" for n, k, v in got)


@_check(5, "helicity against twist on the 3x3x2 box")
def check_sweep(c: _Cache):
    fx = load_fixture("box-3-3-2")
    g = c.graph("box-3-3-2")
    table = twist_bfs(fx.region, fx.tilings["vertical"], graph=g)
    bad = 0
    for i, t in enumerate(g.tilings):
        h = c.helicity("box-3-3-2", t)
        # with phi = 1/6, 36 phi^2 = 1: the helicity value is the twist
        if h * PHI ** 2 != table.values[i] or h != 36 * table.values[i]:
            bad += 1
    return bad == 0, f"{len(g.tilings) - bad}/{len(g.tilings)} tilings satisfy Hel = 36 phi^2 Tw; " \
                     f"twist histogram {table.histogram()}"


@_check(6, "flip and trit steps")
def check_steps(c: _Cache):
    g = c.graph("box-3-3-2")
    h = [c.helicity("box-3-3-2", t) for t in g.tilings]
    flips = [h[j] - h[i] for i, j in g.flip_edges]
    trits = [h[j] - h[i] for i, j in g.trit_edges]
    ok = all(d == 0 for d in flips) and all(d == 36 for d in trits)
    return ok, (f"{len(flips)} flip edges with differences {sorted(map(str, set(flips)))}, "
                f"{len(trits)} trit edges with differences {sorted(map(str, set(trits)))} (phi^2)")


@_check(7, "shell independence")
def check_shells(c: _Cache):
    out = []
    ok = True
    for name in ("box-2-2-1", "hex", "box-3-3-2"):
        ts = c.all_tilings(name)
        a = [c.helicity(name, t, "fixture") for t in ts]
        b = [c.helicity(name, t, "auto") for t in ts]
        same = all(x - a[0] == y - b[0] for x, y in zip(a, b))
        ok &= same
        out.append(f"{name}: offset {b[0] - a[0]}, differences {'equal' if same else 'DIFFER'}")
    return ok, "; ".join(out)


@_check(8, "relative flux")
def check_rflux(c: _Cache):
    boxes = [t for n in ("box-2-2-1", "box-3-3-2") for t in c.all_tilings(n)]
    boxes.append(load_fixture("box-4-4-2").tilings["rigid"])
    box_ok = all(rflux(t).is_zero for t in boxes)
    hole0 = rflux(load_fixture("cube-hole-12-4").tilings["matching"])
    hole1 = rflux(load_fixture("cube-hole-13-5").tilings["matching"])
    ann = enumerate_tilings(load_fixture("annulus-4-4-2").region)
    classes = {flux_diff_class(t, ann[0]).coords for t in ann}
    ann_rel = all(rflux(t).is_zero for t in ann)
    ok = box_ok and hole0.is_zero and not hole1.is_zero and len(classes) >= 2 and ann_rel
    return ok, (f"{len(boxes)} box tilings zero: {box_ok}; 12^3-4^3: {hole0}; 13^3-5^3: {hole1}; "
                f"annulus: {len(classes)} flux classes, relative flux zero: {ann_rel}")


def _levels(lo, hi):
    span = [Fraction(k) + Fraction(3, 5) for k in range(lo, hi)]
    return span[:1] + span[len(span) // 2:len(span) // 2 + 1] + span[-1:]


@_check(9, "rotation class through sections")
def check_sections(c: _Cache):
    tested = 0
    bad = []
    for name in FIXTURE_NAMES:
        fx = load_fixture(name)
        lo, hi = fx.region.bounds
        for label, t in fx.tilings.items():
            chain = rotation_chain(t)
            for axis in range(3):
                for lvl in _levels(lo[axis], hi[axis]):
                    s = Section(axis, lvl)
                    lhs = section_flux(t, axis, lvl, PHI, six_pipe=True)
                    rhs = PHI * chain_section_intersection(chain, s, fx.region.sharp)
                    tested += 1
                    if lhs != rhs:
                        bad.append(f"{name}/{label} axis {axis} level {lvl}: {lhs} vs {rhs}")
    return not bad, f"{tested - len(bad)}/{tested} sections agree" + (f"; {bad[0]}" if bad else "")


HOPF = (np.array([[0, 0, 0], [2, 0, 0], [2, 2, 0], [0, 2, 0]]),
        np.array([[1, 1, -1], [1, 1, 1], [1, 3, 1], [1, 3, -1]]))
UNLINK = (np.array([[0, 0, 0], [2, 0, 0], [2, 2, 0], [0, 2, 0]]),
          np.array([[5, 0, 0], [7, 0, 0], [7, 2, 0], [5, 2, 0]]))


@_check(10, "linking oracle")
def check_oracle(c: _Cache):
    pairs = [HOPF, UNLINK]
    for name in ("box-2-2-1", "hex", "box-3-3-2"):
        fx = load_fixture(name)
        for t in fx.tilings.values():
            curves = assemble_curves(fx.region, t, fx.shell(), PHI).curves
            pairs.extend(itertools.combinations(curves, 2))
    worst = 0.0
    bad = 0
    for a, b in pairs:
        exact = linking_number(a, b)
        approx = gauss_integral_oracle(a, b)
        worst = max(worst, abs(approx - exact))
        if abs(approx - exact) >= 0.5 or round(approx) != exact:
            bad += 1
    return bad == 0, f"{len(pairs)} pairs, max |exact - integral| = {worst:.2e}"


@_check(11, "mirror antisymmetry")
def check_mirror(c: _Cache):
    fx = load_fixture("hex")
    sys = assemble_curves(fx.region, fx.tilings["t0"], fx.shell(), PHI)
    m = fx.mirror
    refl = sys.reflected(m.perm, m.signs, m.offset)
    h0, h1 = helicity(sys).units, helicity(refl).units
    return h1 == -h0, f"Hel(t0) = {h0} phi^2, Hel(mirror) = {h1} phi^2"


CHECKS: tuple[Callable, ...] = (check_counts, check_moves, check_matrices, check_values, check_sweep,
                                check_steps, check_shells, check_rflux, check_sections,
                                check_oracle, check_mirror)


def run_all(only=None, echo=None) -> list[CheckResult]:
    cache = _Cache()
    results = []
    for fn in CHECKS:
        if only and fn.number not in only:
            continue
        t = time.perf_counter()
        try:
            ok, detail = fn(cache)
        except Exception as exc:  # a crash is a failed check, reported with its message
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        r = CheckResult(fn.number, fn.title, bool(ok), detail, time.perf_counter() - t)
        results.append(r)
        if echo:
            echo(r.line())
    return results
