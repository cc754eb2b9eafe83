"""Zeta functions of weakly locally ∞-transitive and (P)-closed tree actions.

Everything is computed from a finite weighted quotient graph or a local
action diagram. Integer s gives exact rational answers; any other s is
evaluated in complex floating point.
"""

from .euler_ihara import (chi_at, ihara_reciprocal, is_unimodular, transition_weight,
                          verify_chi_reciprocal, verify_ihara_ratio)
from .graph_core import GraphError, Path, WeightedGraph, load_graph, make_graph, validate_graph
from .lad import (LocalActionDiagram, full_symmetric_diagram, load_lad, sl2_diagram,
                  validate_lad, wlit_companion, zeta_pclosed, zeta_pclosed_series)
from .perm_groups import PermGroup, Permutation
from .weighted_paths import SettingError, dirichlet_coefficients_wlit, setting_gamma_ok
from .zeta_wlit import (HypothesisError, PoleError, ZetaValue, verify_splitting, zeta_det,
                        zeta_reciprocal, zeta_series)

__version__ = "0.1.0"

__all__ = [
    "GraphError", "HypothesisError", "LocalActionDiagram", "Path", "PermGroup", "Permutation",
    "PoleError", "SettingError", "WeightedGraph", "ZetaValue", "chi_at", "dirichlet_coefficients_wlit",
    "full_symmetric_diagram", "ihara_reciprocal", "is_unimodular", "load_graph", "load_lad",
    "make_graph", "setting_gamma_ok", "sl2_diagram", "transition_weight", "validate_graph",
    "validate_lad", "verify_splitting", "verify_chi_reciprocal", "verify_ihara_ratio", "wlit_companion",
    "zeta_det", "zeta_pclosed", "zeta_pclosed_series", "zeta_reciprocal", "zeta_series",
]
