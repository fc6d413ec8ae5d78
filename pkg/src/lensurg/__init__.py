"""Exact invariants and surgery obstructions for L(p,1) -> L(q,2)."""
__version__ = "0.1.0"
