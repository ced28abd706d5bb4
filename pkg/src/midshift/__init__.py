"""Certification toolkit for moment infinitely divisible weighted shifts.

Shifts are described by their squared weights, evaluated exactly (rationals
and radicals) wherever possible. Sequence properties are certified up to
explicit order and index bounds; transforms, completions and Berger measures
build new shifts from old ones.
"""

__version__ = "0.1.0"

from .certify import (Certificate, HankelMatrix, ImplicationViolation, InternalConsistencyError,
                      certify_che, certify_k_hyponormal, certify_mid, certify_n_contractive,
                      diagram_check, flatness_rigidity_check, hankel)
from .completion import (GapCompletion, agler_subshift_completion, che_three_weight_test,
                         gap_ratio, stampfli_completion, trivial_completion)
from .measures import BergerMeasure, moment_match, shift_from_measure, two_atomic
from .scalar import DomainError, Radical, radical, sqrt
from .seq_core import Property, PropertyVerdict, Sequence, forward_diff, log_diff, test_property
from .shift_model import (WeightedShift, agler, agler_family, backstep, bergman, dirichlet, geom2,
                          is_flat, moments, normalize, quotient_shift, reciprocal, scale,
                          schur_power, schur_product, shift_from_moments, subshift, unweighted)
from .spec_lang import ParseError, build_shift, format_spec, parse_shift_spec
from .transforms import (InverseATResult, NonConverged, agler_preimage, aluthge, aluthge_iter,
                         aluthge_q, inverse_aluthge)

__all__ = [
    "__version__", "Certificate", "HankelMatrix", "ImplicationViolation",
    "InternalConsistencyError", "certify_che", "certify_k_hyponormal", "certify_mid",
    "certify_n_contractive", "diagram_check", "flatness_rigidity_check", "hankel",
    "GapCompletion", "agler_subshift_completion", "che_three_weight_test", "gap_ratio",
    "stampfli_completion", "trivial_completion", "BergerMeasure", "moment_match",
    "shift_from_measure", "two_atomic", "DomainError", "Radical", "radical", "sqrt", "Property",
    "PropertyVerdict", "Sequence", "forward_diff", "log_diff", "test_property", "WeightedShift",
    "agler", "agler_family", "backstep", "bergman", "dirichlet", "geom2", "is_flat", "moments",
    "normalize", "quotient_shift", "reciprocal", "scale", "schur_power", "schur_product",
    "shift_from_moments", "subshift", "unweighted", "ParseError", "build_shift", "format_spec",
    "parse_shift_spec", "InverseATResult", "NonConverged", "agler_preimage", "aluthge",
    "aluthge_iter", "aluthge_q", "inverse_aluthge",
]
