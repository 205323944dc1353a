"""Deciding virtual solvability and related properties of finitely generated
matrix groups over infinite fields, through congruence images."""

__version__ = "0.1.0"

from .decision import (  # noqa: E402
    Analysis,
    Decision,
    decide,
    explore_basis,
    is_abelian_by_finite,
    is_central_by_finite,
    is_completely_reducible_sf,
    is_nilpotent_by_finite,
    is_solvable,
    is_solvable_by_finite,
)
from .fields import QQ, AlgFunctionField, FunctionField, NumberField, finite_field  # noqa: E402
from .io import load_corpus, parse_group  # noqa: E402
from .matrix import Matrix  # noqa: E402

__all__ = [
    "Analysis", "Decision", "decide", "explore_basis", "is_abelian_by_finite", "is_central_by_finite",
    "is_completely_reducible_sf", "is_nilpotent_by_finite", "is_solvable", "is_solvable_by_finite",
    "QQ", "AlgFunctionField", "FunctionField", "NumberField", "finite_field", "Matrix", "load_corpus", "parse_group",
]
