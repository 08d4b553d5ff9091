"""Qudit quantum Reed-Muller codes with transversal cubic phase gates and
their magic-state distillation performance."""

from .code import PauliOperator, QRMCode, build_code, logical_class_of_z_error, syndrome, z_distance
from .distill import (
    AcceptedEnumerator,
    DistillationOutcome,
    accepted_enumerator,
    distill_map,
    gamma,
    threshold,
)
from .errors import CapacityError, ConsistencyError, ParameterError, PrecisionError
from .field_poly import Polynomial, PrimeField, interpolate, reduce_flt
from .gates import max_transversal_degree, mu_equivalence_classes, transversality_check

__version__ = "0.1.0"
