"""Relative flux: a base-free invariant that sees the holes of a region.

For a box it is always zero.  For a cube with a cubical cavity the relative
homology is one-dimensional and the flux through a surface around the hole
can be nonzero, depending on the sizes.  When it is nonzero no set of
external pipes can close up the flux curves.

Run: python demos/04_relative_flux.py   (about ten seconds)
"""
from domino_helicity import rflux
from domino_helicity.fixtures import load_fixture
from domino_helicity.pipes import PipeError, route_shell

for name in ("cube-hole-12-4", "cube-hole-13-5"):
    fx = load_fixture(name)
    t = fx.tilings["matching"]
    print(f"{name}: {len(fx.region)} cubes, relative flux {rflux(t)}")

fx = load_fixture("cube-hole-13-5")
try:
    route_shell(fx.region)
except PipeError as exc:
    print("routing a shell fails:", exc)

# An annulus has tilings in different flux classes, all with zero relative flux.
from domino_helicity import enumerate_tilings
from domino_helicity.homology import flux_diff_class

ann = load_fixture("annulus-4-4-2").region
ts = enumerate_tilings(ann)
classes = {}
for t in ts:
    classes.setdefault(flux_diff_class(t, ts[0]).coords, []).append(t)
print(f"\nannulus: {len(ts)} tilings in {len(classes)} flux classes:",
      {k: len(v) for k, v in classes.items()})
