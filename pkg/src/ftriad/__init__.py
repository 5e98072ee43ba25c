"""Frobenius algebras, qutrit entanglement classes and string-diagram synthesis."""

from .algebra import CFA, builtin, check_axioms, classify_algebra, derived_maps, induce_algebra, induce_state
from .catalog import catalog
from .diagram import Diagram, evaluate, normalize_fgraph, parse_diagram, spider_signature
from .entanglement import LocalOperation, apply_local, classify_state, maximality_witness
from .ket import PureState, parse_ket
from .synthesis import Trio, matrix_to_diagram, state_to_diagram
from .tensor_core import ToleranceConfig

__version__ = "0.1.0"

__all__ = [
    "CFA", "Diagram", "LocalOperation", "PureState", "ToleranceConfig", "Trio",
    "apply_local", "builtin", "catalog", "check_axioms", "classify_algebra", "classify_state",
    "derived_maps", "evaluate", "induce_algebra", "induce_state", "matrix_to_diagram",
    "maximality_witness", "normalize_fgraph", "parse_diagram", "parse_ket", "spider_signature",
    "state_to_diagram",
]
