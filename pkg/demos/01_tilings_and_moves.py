"""Counting tilings of small boxes and looking at the two local moves.

Run: python demos/01_tilings_and_moves.py
"""
from domino_helicity import enumerate_tilings, list_flips, list_trits, make_box, move_graph, render
from domino_helicity.fixtures import load_fixture

# A 2x2x1 slab has two tilings, related by rotating a pair of parallel dominoes.
slab = make_box(2, 2, 1)
ts = enumerate_tilings(slab)
print(f"2x2x1: {len(ts)} tilings")
print(render(ts[0]))
print("flips available:", list_flips(ts[0]))

# The 2x2x2 cube minus two opposite corners is filled by three mutually
# orthogonal dominoes in exactly two ways; those differ by a trit.
hexfx = load_fixture("hex")
t0 = hexfx.tilings["t0"]
trit = list_trits(t0)[0]
print(f"\nhex region: trit of sign {trit.sign:+d} takes t0 to t1")

# The 3x3x2 box: 229 tilings.  Almost all moves are flips; a handful are trits.
box = make_box(3, 3, 2)
g = move_graph(enumerate_tilings(box))
print(f"\n3x3x2: {len(g.tilings)} tilings, {len(g.flip_edges)} flip edges, "
      f"{len(g.trit_edges)} trit edges")
stuck = [t for t in g.tilings if not list_flips(t)]
print(f"tilings admitting no flip: {len(stuck)}")
print(render(stuck[0]))
