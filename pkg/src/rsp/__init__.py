"""Refined solvable presentations of polycyclic groups.

Collection to normal form, determinant-based and overlap-based consistency
checks, and generators for consistent test presentations.
"""

from .collector import (Collector, InverseConjugateTable, SubPresentation,
                        derive_inverse_conjugates, derive_table, restrict)
from .consistency import (ConsistencyReport, DeltaMap, InducedMatrix, apply_delta,
                          check_automorphism, check_overlap, check_solvable,
                          compare_methods, det_check, induced_matrix)
from .corpus import (ExtensionSpec, FiniteCentral, InfiniteCyclic, extend,
                     extend_finite_central, extend_infinite, family, mutate, random_tower)
from .errors import (CollectionError, ExtensionError, InverseDerivationError,
                     MissingInverse, PresentationSyntaxError,
                     PresentationValidationError, RSPError, StepLimitExceeded)
from .presentation import RefinedPresentation, parse, serialize, validate

__version__ = "0.1.0"

__all__ = [
    "Collector", "InverseConjugateTable", "SubPresentation", "derive_inverse_conjugates",
    "derive_table", "restrict", "ConsistencyReport", "DeltaMap", "InducedMatrix",
    "apply_delta", "check_automorphism", "check_overlap", "check_solvable",
    "compare_methods", "det_check", "induced_matrix", "ExtensionSpec", "FiniteCentral",
    "InfiniteCyclic", "extend", "extend_finite_central", "extend_infinite", "family",
    "mutate", "random_tower", "CollectionError", "ExtensionError",
    "InverseDerivationError", "MissingInverse", "PresentationSyntaxError",
    "PresentationValidationError", "RSPError", "StepLimitExceeded", "RefinedPresentation",
    "parse", "serialize", "validate",
]
