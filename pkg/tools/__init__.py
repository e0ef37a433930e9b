"""Operations on functions, relations and constraints."""

from .clones import clone_tool
from .galois import galois_tool
from .minors import minor_tool
from .oracle import oracle_tool
from .partials import partials_tool
from .satisfaction import satisfaction_tool
from .substitution import substitution_tool

__all__ = [
    "clone_tool",
    "galois_tool",
    "minor_tool",
    "oracle_tool",
    "partials_tool",
    "satisfaction_tool",
    "substitution_tool",
]
