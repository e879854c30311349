"""Discrete system + apparatus + environment models."""

from .measurement import (
    DephasingEnvironment,
    MeasurementChain,
    Reduction,
    controlled_rotation,
    dephase,
    dephase_closed_form,
    pre_measurement,
    schmidt_coefficients,
    von_neumann_reduce,
)
from .recurrence import FiniteBath, coherence_at, coherence_closed_form, finite_bath_recurrence
from .tomography import (
    MeasurementRecord,
    PipelinePoint,
    TomographyPlan,
    TomographyResult,
    decoherence_detection_pipeline,
    pauli_plan,
    project_to_density_matrix,
    reconstruct_state,
    simulate_measurements,
)
