"""Symbol calculus for W*(P,Q): spectral models, elements, phi/omega/psi and the norm."""

from normattain.symbol.element import (
    SUBSPACES,
    PointTable,
    SymbolMatrix,
    SymbolSample,
    WStarElement,
    add,
    adjoint,
    build_element,
    identity,
    multiply,
    norm,
    sample_symbol,
    scale,
    symbol_at,
)
from normattain.symbol.model import (
    Atom,
    ClosedInterval,
    EssentialComponent,
    LimitPoint,
    MeasureClass,
    SpectralModel,
)

__all__ = [
    "SUBSPACES",
    "Atom",
    "ClosedInterval",
    "EssentialComponent",
    "LimitPoint",
    "MeasureClass",
    "PointTable",
    "SpectralModel",
    "SymbolMatrix",
    "SymbolSample",
    "WStarElement",
    "add",
    "adjoint",
    "build_element",
    "identity",
    "multiply",
    "norm",
    "sample_symbol",
    "scale",
    "symbol_at",
]
