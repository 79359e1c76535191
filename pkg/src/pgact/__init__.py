"""Partial actions of finite groupoids on finite-dimensional algebras.

Exact linear algebra over the rationals or a prime field drives every
construction: globalization, the partial skew groupoid ring, invariants and
traces, and Galois coordinate systems.
"""
from .action import PartialAction, is_global, restrict, standing_hypotheses, verify_partial_action
from .algebra import Algebra, LinMap
from .errors import (
    AxiomError, DomainError, InstanceError, InternalConsistencyError, PgactError, PreconditionError,
    StructuralError,
)
from .galois import (
    find_galois, invariants, invariants_iso, galois_characterization, trace, trace_image, transfer_to_global,
    transfer_to_partial, verify_galois,
)
from .globalize import Globalization, build_globalization, can_globalize, equivalence, verify_globalization
from .groupoid import Groupoid, verify_groupoid
from .linalg import Field, Subspace
from .report import VerificationReport
from .skewring import SkewRing, corners, morita_context_global

__all__ = [
    "Algebra", "AxiomError", "DomainError", "Field", "Globalization", "Groupoid", "InstanceError",
    "InternalConsistencyError", "LinMap", "PartialAction", "PgactError", "PreconditionError",
    "SkewRing", "StructuralError", "Subspace", "VerificationReport", "build_globalization",
    "can_globalize", "corners", "equivalence", "find_galois", "invariants", "invariants_iso",
    "is_global", "morita_context_global", "restrict", "standing_hypotheses", "galois_characterization", "trace",
    "trace_image", "transfer_to_global", "transfer_to_partial", "verify_galois", "verify_globalization",
    "verify_groupoid", "verify_partial_action",
]
