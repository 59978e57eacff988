"""Partial traces, partial transpose and determinantal inequalities for block matrices."""
from partrace.matkernel import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
