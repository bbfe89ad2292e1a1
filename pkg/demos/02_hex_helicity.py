"""Flux curves and helicity of the two tilings of the hex region.

Each domino becomes five short arcs running from its black cube to its white
cube.  Pipes outside the region close the arcs up into curves; the helicity is
read off the linking numbers and writhes of those curves.

Run: python demos/02_hex_helicity.py
"""
from fractions import Fraction

from domino_helicity import assemble_curves, helicity, tabulate
from domino_helicity.fixtures import load_fixture

PHI = Fraction(1, 6)

fx = load_fixture("hex")
shell = fx.shell()
print(f"stored shell: {len(shell.pipes)} pipes")

for label in ("t0", "t1"):
    sys_ = assemble_curves(fx.region, fx.tilings[label], shell, PHI)
    L = tabulate(sys_.curves)
    keep = L.nontrivial()
    print(f"\n{label}: {len(sys_.curves)} curves, {len(keep)} of them linked or twisted")
    print(L.restrict(keep).format())
    print("helicity:", helicity(sys_, L))

# Reflecting through the plane x = y swaps the two tilings and negates helicity.
sys0 = assemble_curves(fx.region, fx.tilings["t0"], shell, PHI)
m = fx.mirror
print("\nmirror image of t0:", helicity(sys0.reflected(m.perm, m.signs, m.offset)))
