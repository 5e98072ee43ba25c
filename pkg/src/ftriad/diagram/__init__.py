"""String diagrams: construction, text syntax, evaluation and spider rewriting."""

from ..ket import parse_ket
from .core import Builder, Diagram, Generator, Node
from .evaluate import as_matrix, as_state, evaluate
from .export import to_dot, to_dsl
from .parse import parse_diagram
from .spider import (Component, SpiderSignature, normalize_fgraph, random_fgraph,
                     spider_normal_form, spider_signature)

__all__ = [
    "Builder", "Component", "Diagram", "Generator", "Node", "SpiderSignature",
    "as_matrix", "as_state", "evaluate", "normalize_fgraph", "parse_diagram", "parse_ket",
    "random_fgraph", "spider_normal_form", "spider_signature", "to_dot", "to_dsl",
]
