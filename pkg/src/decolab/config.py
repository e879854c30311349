"""Global numerical tolerances.

Every validator in the package reads its thresholds from ``TOL``. Replace
fields with :func:`dataclasses.replace` and :func:`set_tolerances` if a
study needs different limits; defaults are the documented contract.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-10
    trace: float = 1e-10
    psd: float = 1e-9
    idempotent: float = 1e-10
    orthonormal: float = 1e-10
    state_norm: float = 1e-10
    probability: float = 1e-10
    # treated as exact zeros inside entropy sums
    eigen_zero: float = 1e-12
    # expectation values: allowed imaginary residue before discarding
    imag_residue: float = 1e-10
    # grid objects (wavefunctions, rho(x, x'), Wigner fields)
    grid_norm: float = 1e-8
    grid_hermitian: float = 1e-8
    wigner_norm: float = 1e-6
    wigner_imag: float = 1e-8
    edge_decay: float = 1e-12
    # "I - S << 1" made concrete; reported, never enforced
    gap_threshold: float = 0.01
    offdiag_denominator: float = 1e-12
    # Kramers evolution positivity watch
    positivity_floor: float = -1e-4


TOL = Tolerances()


def set_tolerances(**changes: float) -> Tolerances:
    """Replace fields of the global tolerance set and return the new value."""
    global TOL
    TOL = replace(TOL, **changes)
    return TOL


def reset_tolerances() -> Tolerances:
    global TOL
    TOL = Tolerances()
    return TOL
