"""Exponential-time ground-truth deciders for small instances."""

from .cplanar import is_embedding_c_planar, oracle_uclp
from .drawings import (
    DEFAULT_BUDGET,
    Budget,
    BudgetExceeded,
    LevelDrawing,
    enumerate_level_drawings,
    oracle_is_level_planar,
    oracle_level_planar_embeddings,
    rotations_from_drawing,
)
from .yclp import (
    YclpCertificate,
    check_drawing_y_cl,
    oracle_yclp,
    verify_yclp_certificate,
)

__all__ = [
    "DEFAULT_BUDGET",
    "Budget",
    "BudgetExceeded",
    "LevelDrawing",
    "YclpCertificate",
    "check_drawing_y_cl",
    "enumerate_level_drawings",
    "is_embedding_c_planar",
    "oracle_is_level_planar",
    "oracle_level_planar_embeddings",
    "oracle_uclp",
    "oracle_yclp",
    "rotations_from_drawing",
    "verify_yclp_certificate",
]
