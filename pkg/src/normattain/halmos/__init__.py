"""Canonical decomposition of a pair of orthogonal projections."""

from normattain.halmos.decomposition import (
    HalmosDecomposition,
    assemble,
    decompose,
    extract_symbol,
    model_of,
    reconstruct,
)

__all__ = ["HalmosDecomposition", "assemble", "decompose", "extract_symbol", "model_of", "reconstruct"]
