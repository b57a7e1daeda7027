"""Iterated Independent Model graphs: generation and exact analysis."""

from ._kernels import BACKEND
from .errors import (
    BudgetExceededError,
    ChoiceLengthError,
    ConvergenceError,
    EdgeListParseError,
    GraphError,
    IIMError,
    IsolatedVertexError,
    PreconditionError,
    SizeLimitError,
    ValidationError,
)
from .generator import (
    ChoiceSequence,
    CopyKind,
    IIMGraph,
    LevelChoice,
    enumerate_iim,
    iim_generate,
    iim_step,
    sample_iim,
)
from .graph import Graph, VertexSet, graph_new, induced_subgraph, parse_edge_list, to_edge_list
from .reports import VerificationReport
from .seeds import named_seed
from .verify import Options, verify

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BudgetExceededError",
    "ChoiceLengthError",
    "ChoiceSequence",
    "ConvergenceError",
    "CopyKind",
    "EdgeListParseError",
    "Graph",
    "GraphError",
    "IIMError",
    "IIMGraph",
    "IsolatedVertexError",
    "LevelChoice",
    "Options",
    "PreconditionError",
    "SizeLimitError",
    "ValidationError",
    "VerificationReport",
    "VertexSet",
    "enumerate_iim",
    "graph_new",
    "iim_generate",
    "iim_step",
    "induced_subgraph",
    "named_seed",
    "parse_edge_list",
    "sample_iim",
    "to_edge_list",
    "verify",
]
