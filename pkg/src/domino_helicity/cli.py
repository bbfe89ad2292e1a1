"""Command-line entry point: ``domino-helicity <command> ...``."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .fixtures import FIXTURE_NAMES, FixtureError, load_fixture
from .homology import HomologyError, flux_diff_class, rflux
from .linkhel import LinkingError, helicity, perturbed_framing, tabulate
from .pipes import CurveSystem, PipeError, assemble_curves, build_shell, empty_shell
from .region import Region, RegionError
from .tiling import Tiling, TilingError, TooLarge, enumerate_tilings, move_graph, render
from .twist import TwistError, twist_bfs, twist_via_helicity

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_REGION = 3
EXIT_TILING = 4
EXIT_CAP = 5
EXIT_PIPES = 6
EXIT_LINKING = 7
EXIT_HOMOLOGY = 8
EXIT_TWIST = 9

# most specific first: TooLarge is a TilingError
_ERRORS = ((TooLarge, EXIT_CAP), (FixtureError, EXIT_REGION), (RegionError, EXIT_REGION),
           (TilingError, EXIT_TILING), (PipeError, EXIT_PIPES), (LinkingError, EXIT_LINKING),
           (HomologyError, EXIT_HOMOLOGY), (TwistError, EXIT_TWIST))


class UsageError(Exception):
    pass


def _phi(s: str) -> Fraction:
    try:
        v = Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {s!r}")
    if v <= 0:
        raise argparse.ArgumentTypeError("phi must be positive")
    return v


def _load_region(args) -> tuple[Region, object]:
    if args.builtin:
        fx = load_fixture(args.builtin)
        return fx.region, fx
    return Region.loads(Path(args.region).read_text()), None


def _pick_tiling(spec: str, region: Region, fx, tilings=None) -> Tiling:
    """A fixture label, ``#k`` (index in the sorted enumeration) or a JSON file."""
    if fx is not None and spec in fx.tilings:
        return fx.tilings[spec]
    if spec.startswith("#"):
        ts = tilings if tilings is not None else enumerate_tilings(region)
        k = int(spec[1:])
        if not 0 <= k < len(ts):
            raise UsageError(f"tiling index {k} out of range (0..{len(ts) - 1})")
        return ts[k]
    path = Path(spec)
    if path.exists():
        return Tiling.loads(path.read_text(), region)
    labels = ", ".join(fx.tilings) if fx is not None else "none"
    raise UsageError(f"unknown tiling {spec!r} (fixture labels: {labels}; or #index, or a file)")


def _shell(region: Region, fx, strategy: str, margin: int):
    if not region.boundary_squares:
        return empty_shell()
    if strategy == "builtin-fixture" and (fx is None or fx.shell_builder is None):
        raise UsageError("this region has no stored shell; use --shell layered-auto")
    return build_shell(region, strategy, margin)


def _default_base(fx, tilings):
    if fx is not None:
        for label in ("vertical", "t0"):
            if label in fx.tilings:
                return fx.tilings[label]
        if fx.tilings:
            return next(iter(fx.tilings.values()))
    return tilings[0]


# ----------------------------------------------------------------------
# commands

def cmd_enumerate(args) -> int:
    region, _ = _load_region(args)
    ts = enumerate_tilings(region)
    if args.out:
        data = {"region": region.to_dict(), "tilings": [t.to_dict(region_ref=0)["dominoes"] for t in ts]}
        Path(args.out).write_text(json.dumps(data))
    print(len(ts))
    return EXIT_OK


def cmd_invariants(args) -> int:
    region, fx = _load_region(args)
    shell = base_hel = table = None
    need_all = args.tiling == "all" or args.base.startswith("#") or args.tiling.startswith("#")
    tilings = enumerate_tilings(region) if need_all else None
    if args.base:
        base = _pick_tiling(args.base, region, fx, tilings)
    elif fx is not None and fx.tilings:
        base = _default_base(fx, [])
    else:
        base = enumerate_tilings(region)[0]
    targets = tilings if args.tiling == "all" else [_pick_tiling(args.tiling, region, fx, tilings)]
    for k, t in enumerate(targets):
        if len(targets) > 1:
            print(f"== tiling #{k}")
        flux = flux_diff_class(t, base)
        print(f"flux vs base: {flux}")
        print(f"relative flux: {rflux(t)}")
        if region.is_wrapped:
            print("helicity: not computed (curves on a wrapped region are not closed in space)")
            continue
        shell = shell or _shell(region, fx, args.shell, args.margin)
        sys_ = assemble_curves(region, t, shell, args.phi)
        L = tabulate(sys_.curves)
        hel = helicity(sys_, L)
        if flux.is_zero and rflux(base).is_zero:
            if base_hel is None:
                base_hel = helicity(assemble_curves(region, base, shell, args.phi))
                if args.tiling == "all" or args.twist_bfs:
                    table = twist_bfs(region, base, tilings)
            tw = twist_via_helicity(t, base, shell, args.phi, base_helicity=base_hel)
            print(f"twist (helicity): {tw}")
            if table is not None:
                print(f"twist (trits): {table[t]}")
        print(f"helicity: {hel.units}*phi^2 = {hel.value} (phi = {args.phi})")
        sub = L.restrict(L.nontrivial())
        print(f"tabulation matrix ({sub.n} nontrivial of {L.n} curves):")
        if sub.n:
            print(sub.format())
    return EXIT_OK


def cmd_moves(args) -> int:
    region, fx = _load_region(args)
    ts = enumerate_tilings(region)
    g = move_graph(ts)
    print(f"tilings: {len(ts)}")
    print(f"flip edges: {len(g.flip_edges)}")
    print(f"positive trit edges: {len(g.trit_edges)}")
    for i, j in g.trit_edges[:args.show]:
        print(f"  trit #{i} -> #{j}")
    base = _default_base(fx, ts)
    if rflux(base).is_zero:
        try:
            print(f"twist histogram (base #{ts.index(base)}): {twist_bfs(region, base, graph=g).histogram()}")
        except TwistError as exc:
            print(f"twist: {exc}")
    return EXIT_OK


def cmd_render(args) -> int:
    region, fx = _load_region(args)
    sys.stdout.write(render(_pick_tiling(args.tiling, region, fx)))
    return EXIT_OK


def _obj(sys_: CurveSystem) -> str:
    lines = ["# closed polylines; coordinates in lattice units"]
    n = 0
    polys = [("curve", c) for c in sys_.curves] + [("loop", c) for c in sys_.loops]
    for k, (kind, c) in enumerate(polys):
        lines.append(f"o {kind}{k}")
        for p in c:
            lines.append("v " + " ".join(repr(int(x) / 4) for x in p))   # quarters are exact
        idx = [str(n + i + 1) for i in range(len(c))]
        lines.append("l " + " ".join(idx + idx[:1]))
        n += len(c)
    return "\n".join(lines) + "\n"


def cmd_export_curves(args) -> int:
    region, fx = _load_region(args)
    t = _pick_tiling(args.tiling, region, fx)
    shell = _shell(region, fx, args.shell, args.margin)
    sys_ = assemble_curves(region, t, shell, args.phi, six_pipe=args.six_pipe)
    text = sys_.dumps() if args.format == "json" else _obj(sys_)
    if args.out:
        Path(args.out).write_text(text)
        print(f"{len(sys_.curves)} curves written to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    from .verify import run_all
    only = set(args.only) if args.only else None
    if args.perturb_framing:
        with perturbed_framing(1):
            results = run_all(only, echo=print)
    else:
        results = run_all(only, echo=print)
    failed = [r for r in results if not r.ok]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_VERIFY if failed else EXIT_OK


# ----------------------------------------------------------------------

def _region_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--builtin", choices=FIXTURE_NAMES, help="built-in example region")
    g.add_argument("--region", metavar="FILE", help="region JSON file")


def _shell_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--shell", choices=("builtin-fixture", "layered-auto"), default="builtin-fixture")
    p.add_argument("--margin", type=int, default=2, help="router margin in lattice units")
    p.add_argument("--phi", type=_phi, default=Fraction(1, 6), help="flux per curve, e.g. 1/6")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="domino-helicity",
                                 description="Flux, twist and helicity of 3D domino tilings.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="count (and optionally save) all tilings")
    _region_args(p)
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("invariants", help="flux, relative flux, twist, helicity, tabulation matrix")
    _region_args(p)
    _shell_args(p)
    p.add_argument("--tiling", default="t0", help="fixture label, #index, file, or 'all'")
    p.add_argument("--base", default="", help="base tiling for flux and twist")
    p.add_argument("--twist-bfs", action="store_true", help="also compute twist from signed trits")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("moves", help="flip/trit move graph summary")
    _region_args(p)
    p.add_argument("--show", type=int, default=10, help="trit edges to list")
    p.set_defaults(func=cmd_moves)

    p = sub.add_parser("render", help="ASCII floors of a tiling")
    _region_args(p)
    p.add_argument("--tiling", default="t0")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("export-curves", help="write the closed flux curves")
    _region_args(p)
    _shell_args(p)
    p.add_argument("--tiling", default="t0")
    p.add_argument("--format", choices=("json", "obj"), default="json")
    p.add_argument("--six-pipe", action="store_true", help="include the extra loop per domino")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_export_curves)

    p = sub.add_parser("verify-paper", help="run the reference-value checks")
    p.add_argument("--only", type=int, nargs="*", help="check numbers to run")
    p.add_argument("--perturb-framing", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify_paper)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except tuple(e for e, _ in _ERRORS) as exc:
        code = next(c for e, c in _ERRORS if isinstance(exc, e))
        print(f"error: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
