"""Numerical tools for discriminating bipartite quantum states with
positive-partial-transpose measurements, entanglement resources and
majorization-based LOCC tests."""

from . import discrim, errors, hssh, jsonio, linalg, multicopy, povm, sdp, states, symmetry
from .discrim import (
    FeasibilityReport,
    ThresholdResult,
    cost_threshold_bisection,
    perfect_ppt_feasibility,
    unambiguous_pair_ppt,
    unambiguous_ppt_value,
)
from .errors import PptError
from .hssh import EnsembleSpec, catalysis_transform_check, hssh_detect, three_bell_lower_bound
from .multicopy import lemma8_witness_check, unambiguous_multicopy_value
from .povm import Construction, Povm, thm15_povm, thm16_povm, thm19_povm, three_bell_povm, verify_povm, is_ppt_povm
from .space import BipartiteSpace
from .states import DensityOperator, DiscriminationInstance, PureState

__version__ = "0.1.0"

__all__ = [
    "discrim",
    "errors",
    "hssh",
    "jsonio",
    "linalg",
    "multicopy",
    "povm",
    "sdp",
    "states",
    "symmetry",
    "FeasibilityReport",
    "ThresholdResult",
    "cost_threshold_bisection",
    "perfect_ppt_feasibility",
    "unambiguous_pair_ppt",
    "unambiguous_ppt_value",
    "PptError",
    "EnsembleSpec",
    "catalysis_transform_check",
    "hssh_detect",
    "three_bell_lower_bound",
    "lemma8_witness_check",
    "unambiguous_multicopy_value",
    "Construction",
    "Povm",
    "thm15_povm",
    "thm16_povm",
    "thm19_povm",
    "three_bell_povm",
    "verify_povm",
    "is_ppt_povm",
    "BipartiteSpace",
    "DensityOperator",
    "DiscriminationInstance",
    "PureState",
]
