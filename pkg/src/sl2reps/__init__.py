"""Representations of punctured surface groups into SL(2, R).

Toolkit: 2x2 matrix classification, lifts to the universal cover,
Toledo / Euler / signature invariants, explicit and random
representations, component censuses and a cohomological signature oracle.
"""

from .census import admissible_labels, audit, count_components, signature_range, verify_by_sampling
from .cohomology import direct_signature, oracle_report, restricted_h1
from .errors import Sl2Error
from .invariants import invariant_record, relative_euler, signature, toledo
from .kernels import BACKEND
from .mat2 import Mat2, classify
from .reps import SurfaceRep, sample

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Mat2",
    "Sl2Error",
    "SurfaceRep",
    "admissible_labels",
    "audit",
    "classify",
    "count_components",
    "direct_signature",
    "invariant_record",
    "oracle_report",
    "relative_euler",
    "restricted_h1",
    "sample",
    "signature",
    "signature_range",
    "toledo",
    "verify_by_sampling",
]
