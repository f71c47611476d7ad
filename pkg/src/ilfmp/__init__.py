"""Veltman and simplified Veltman semantics for sublogics of IL.

Formulas, two frame semantics with model checking and frame-condition
checks, the chain and trace model constructions, bounded countermodel
search, and a command-line front end.
"""

from .errors import (
    ArityError,
    AssociativityError,
    BoundError,
    FormulaSyntaxError,
    PreconditionError,
    UnknownWorld,
)
from .formula import axiom_instance, parse, scheme, to_text
from .simplified import LogicId, classify, s_check_condition, s_forces, s_forces_alt, s_valid_in_frame
from .veltman import check_condition, forces, valid_in_frame, validate_frame
from .constructions import construct_sv, construct_sv2, construct_svil, reduce_il, strengthen
from .decision import (
    SearchResult,
    check_derivability_facts,
    enumerate_simplified_frames,
    enumerate_veltman_frames,
    find_countermodel,
)

__version__ = "0.1.0"
