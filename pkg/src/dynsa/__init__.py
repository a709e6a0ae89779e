"""Dynamic suffix array over an editable text.

The main entry point is :class:`DynText`, which supports insertions,
deletions and block swaps of the text together with ``sa``, ``isa``,
``access`` and ``count`` queries.
"""

from __future__ import annotations

from .sa_engine import DynText, RefineState, UnsupportedOperation

__all__ = ["DynText", "RefineState", "UnsupportedOperation"]
__version__ = "0.1.0"
