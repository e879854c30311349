"""Numerical toolkit for quantifying decoherence in open quantum systems.

Natural units (hbar = k_B = 1). Composite spaces use Kronecker ordering with
the first factor as the slow index.
"""

__version__ = "0.1.0"

from . import config, envmodels, histories, qbm, qstate, quantify, wigner
from .errors import (
    DecolabError,
    DimensionError,
    GridError,
    IndexRangeError,
    InvalidStateError,
    NotHermitianError,
    NumericalGuardError,
    SingularPlanError,
    StabilityError,
    ValidationError,
)
from .quantify import DecoherenceReport, decoherence_gap, halo_sweep
from .wigner import SpatialGrid, WignerField, negativity_volume, wigner_transform
