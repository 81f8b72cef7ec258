"""Computational engine for lifting mod-p Galois representations through
truncated Witt vectors."""
from __future__ import annotations

__version__ = "0.1.0"
