"""Exact classification engine for families of abelian covers of P^1."""

from covertab.cover import (
    CoverDatum,
    canonical_key,
    genus,
    group_structure,
    is_isomorphic,
    parse_datum,
    row_span,
    validate_datum,
)
from covertab.errors import CovertabError

__version__ = "0.1.0"

__all__ = [
    "CoverDatum",
    "CovertabError",
    "canonical_key",
    "genus",
    "group_structure",
    "is_isomorphic",
    "parse_datum",
    "row_span",
    "validate_datum",
    "__version__",
]
