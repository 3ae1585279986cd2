from denjoypy import (
    classes,
    exceptions,
    numba_tools,
    oracle,
    parser,
    plotting,
    shared,
    solvers,
)
from denjoypy.classes import GapSequence, RotationNumber
from denjoypy.parser.parse_specs import parse_alpha, parse_model

__version__ = "0.1.0"
__all__ = [
    "RotationNumber",
    "GapSequence",
    "parse_alpha",
    "parse_model",
    "classes",
    "exceptions",
    "numba_tools",
    "oracle",
    "parser",
    "plotting",
    "shared",
    "solvers",
]
