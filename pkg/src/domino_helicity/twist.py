"""Twist of tilings: by signed trits on the move graph, and through helicity."""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .homology import is_same_flux, rflux
from .linkhel import helicity
from .pipes import Shell, assemble_curves
from .region import Region
from .tiling import MoveGraph, Tiling, enumerate_tilings, move_graph, render


class TwistError(ValueError):
    pass


@dataclass
class TwistTable:
    tilings: list          # Tiling objects, indexed like ``values``
    values: dict           # tiling index -> int
    base: int

    def __getitem__(self, t: Tiling) -> int:
        return self.values[self.tilings.index(t)]

    def histogram(self) -> dict:
        return dict(sorted(Counter(self.values.values()).items()))


def _check_rflux(base: Tiling) -> None:
    if not rflux(base).is_zero:
        raise TwistError("base tiling has nonzero relative flux; only integer twists are supported")


def twist_bfs(region: Region, base: Tiling, tilings: Optional[list] = None,
              graph: Optional[MoveGraph] = None) -> TwistTable:
    """Twist of every tiling in the flux class of ``base``.

    Flips keep the twist and a trit of sign s adds s.  Every move-graph edge
    inside the class is checked, so an inconsistent cycle is reported.
    """
    _check_rflux(base)
    if graph is None:
        graph = move_graph(enumerate_tilings(region) if tilings is None else tilings)
    tilings = graph.tilings
    index = {t: i for i, t in enumerate(tilings)}
    if base not in index:
        raise TwistError("base tiling is not among the tilings")
    b = index[base]
    klass = {i for i, t in enumerate(tilings) if is_same_flux(t, base)}
    adj: dict = {i: [] for i in klass}
    for i, j in graph.flip_edges:
        if i in klass and j in klass:
            adj[i].append((j, 0))
            adj[j].append((i, 0))
    for i, j in graph.trit_edges:      # positive trit from i to j
        if i in klass and j in klass:
            adj[i].append((j, 1))
            adj[j].append((i, -1))
    values = {b: 0}
    queue = deque([b])
    while queue:
        i = queue.popleft()
        for j, s in adj[i]:
            if j not in values:
                values[j] = values[i] + s
                queue.append(j)
            elif values[j] != values[i] + s:
                raise TwistError(f"signed trits around a cycle through tilings {i}, {j} do not cancel")
    if len(values) != len(klass):
        raise TwistError(f"flux class splits into move components ({len(values)} of {len(klass)} "
                         "tilings reached); a refinement would be needed")
    return TwistTable(tilings, values, b)


def twist_via_helicity(t: Tiling, base: Tiling, shell: Shell, phi=Fraction(1, 6),
                       base_helicity=None) -> int:
    """Helicity difference in units of 36 phi^2; must be an integer."""
    if not is_same_flux(t, base):
        raise TwistError("tilings are in different flux classes")
    _check_rflux(base)
    h = helicity(assemble_curves(t.region, t, shell, phi))
    hb = base_helicity if base_helicity is not None else helicity(assemble_curves(base.region, base, shell, phi))
    q = (h - hb).units / 36
    if q.denominator != 1:
        raise TwistError(f"helicity difference {h - hb} is not a multiple of 36 phi^2")
    return int(q)


@dataclass
class CrossCheckRow:
    index: int
    twist_bfs: int
    twist_hel: int
    hel_units: Fraction


@dataclass
class CrossCheck:
    rows: list
    base: int

    @property
    def ok(self) -> bool:
        return all(r.twist_bfs == r.twist_hel for r in self.rows)

    def histogram(self) -> dict:
        return dict(sorted(Counter(r.twist_bfs for r in self.rows).items()))

    def format(self) -> str:
        lines = ["id  tw_bfs  tw_hel  Hel/phi^2"]
        for r in self.rows:
            lines.append(f"{r.index:<3} {r.twist_bfs:>6}  {r.twist_hel:>6}  {r.hel_units}")
        lines.append("histogram: " + ", ".join(f"{k}: {v}" for k, v in self.histogram().items()))
        return "\n".join(lines)


def cross_check(region: Region, base: Tiling, shell: Shell, phi=Fraction(1, 6),
                tilings: Optional[list] = None, graph: Optional[MoveGraph] = None) -> CrossCheck:
    """Compare both twist computations on every tiling of the class of ``base``."""
    table = twist_bfs(region, base, tilings, graph)
    hb = helicity(assemble_curves(region, base, shell, phi))
    rows = []
    for i in sorted(table.values):
        t = table.tilings[i]
        h = helicity(assemble_curves(region, t, shell, phi))
        q = (h - hb).units / 36
        if q.denominator != 1:
            raise TwistError(f"tiling {i}: helicity difference {h - hb} is not a multiple of 36 phi^2")
        rows.append(CrossCheckRow(i, table.values[i], int(q), h.units))
    report = CrossCheck(rows, table.base)
    bad = [r for r in rows if r.twist_bfs != r.twist_hel]
    if bad:
        r = bad[0]
        raise TwistError(f"twist mismatch on tiling {r.index} (bfs {r.twist_bfs}, helicity "
                         f"{r.twist_hel}):\n{render(table.tilings[r.index])}")
    return report
