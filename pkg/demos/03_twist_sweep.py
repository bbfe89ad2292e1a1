"""Twist against helicity on every tiling of the 3x3x2 box.

The twist is found twice: by walking the move graph (flips add 0, a trit adds
its sign) and by dividing the helicity difference from the vertical tiling by
36 phi^2.  With phi = 1/6 the two agree tiling by tiling.

Run: python demos/03_twist_sweep.py   (about half a minute)
"""
from fractions import Fraction

from domino_helicity.fixtures import auto_shell, load_fixture
from domino_helicity.twist import cross_check

fx = load_fixture("box-3-3-2")
base = fx.tilings["vertical"]

rep = cross_check(fx.region, base, fx.shell(), Fraction(1, 6))
print("stored shell:", "agree" if rep.ok else "disagree", rep.histogram())

# Any other shell changes helicities by a constant, so twists are unchanged.
rep2 = cross_check(fx.region, base, auto_shell(fx.region), Fraction(1, 6))
print("routed shell:", "agree" if rep2.ok else "disagree", rep2.histogram())

for r in rep.rows:
    if r.twist_bfs:
        print(f"tiling #{r.index}: twist {r.twist_bfs:+d}, helicity {r.hel_units} phi^2")
