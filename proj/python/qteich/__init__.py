"""Local representations of quantum Teichmueller space at roots of unity."""

from ._qteich import (
    DomainError,
    InputError,
    LocalRep,
    QParams,
    Triangulation,
    classify,
    closed_path_residual,
    flip_weights,
    generator_count,
    geometric_flip_weights,
    mapping_class_invariant,
    peripheral_load,
    relation_residual,
    rep_from_weights,
    roundtrip_weights,
    sigma_matrix,
    total_load_check,
    transport,
    validate,
)

__all__ = [
    "DomainError",
    "InputError",
    "LocalRep",
    "QParams",
    "Triangulation",
    "classify",
    "closed_path_residual",
    "flip_weights",
    "generator_count",
    "geometric_flip_weights",
    "mapping_class_invariant",
    "peripheral_load",
    "relation_residual",
    "rep_from_weights",
    "roundtrip_weights",
    "sigma_matrix",
    "total_load_check",
    "transport",
    "validate",
]
