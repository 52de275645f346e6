"""Additive bases of integer intervals and cyclic groups: build, verify, search, bound."""
from ._jit import USE_JIT
from .sumsets import (
    CoverageReport,
    CyclicBasis,
    DomainError,
    IntegerBasis,
    RepresentationTable,
    coverage,
    cyclic_coverage,
    cyclic_representation,
    iterated_sumset,
    representation_count,
    representation_table,
)

__version__ = "0.1.0"

__all__ = [
    "USE_JIT",
    "CoverageReport",
    "CyclicBasis",
    "DomainError",
    "IntegerBasis",
    "RepresentationTable",
    "coverage",
    "cyclic_coverage",
    "cyclic_representation",
    "iterated_sumset",
    "representation_count",
    "representation_table",
]
