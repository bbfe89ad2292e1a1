"""Flux, twist and helicity invariants of three-dimensional domino tilings."""
from .region import Color, Region, make_box, make_region
from .tiling import (Domino, Flip, Tiling, Trit, apply_flip, apply_trit, enumerate_tilings,
                     find_tiling, list_flips, list_trits, move_graph, refine_region,
                     refine_tiling, render)
from .homology import (Chain, FluxClass, Section, boundary_charge, chain_section_intersection,
                       domino_chain, flux_diff_class, h1_rank, h1_rel_rank, is_same_flux, q1_chain,
                       rflux, rotation_chain)
from .pipes import (CurveSystem, PipeArc, Shell, assemble_curves, build_shell, domino_pipes,
                    refine_shell, six_pipe_arcs)
from .linkhel import (HelicityValue, TabulationMatrix, helicity, linking_number,
                      relative_helicity, self_linking, tabulate, tabulation_matrix, writhe)
from .twist import TwistTable, cross_check, twist_bfs, twist_via_helicity
from .fixtures import FIXTURE_NAMES, load_fixture

__version__ = "0.1.0"
