"""Reduction compilers and gadget transforms."""

from .output import ReductionOutput
from .reach import (
    reduce_reach_to_reconfig_reversible,
    reduce_reach_to_traversal_distant_opening,
    reduce_reach_to_traversal_reversible_interacting,
)
from .sources import CnfFormula, DigraphInstance, parse_dimacs, parse_edge_list
from .transforms import (
    apply_shadow_reduction,
    apply_verified_reduction,
    collapse_non_true_2_tunnel,
    collapse_system,
    full_shadow,
    shadow_gadget,
    verified_gadget,
)
from .traversal import (
    reduce_3sat_to_traversal,
    reduce_hampath_directed,
    reduce_hampath_spiral,
    reduce_hampath_undir_close,
    reduce_stcon_to_traversal,
)
