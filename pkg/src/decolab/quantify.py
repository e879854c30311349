"""Basis-relative decoherence measures.

The central quantity is the *decoherence gap* ``I[p] - S[rho]`` between the
Shannon entropy of the diagonal of ``rho`` in a basis and the von Neumann
entropy of ``rho``. It is nonnegative and vanishes exactly when ``rho`` is
diagonal in that basis (it equals the relative entropy between ``rho`` and
its dephased version). All entropies are in nats.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace

import numpy as np

from . import config
from . import qstate
from .errors import DimensionError, ValidationError


@dataclass(frozen=True)
class DecoherenceReport:
    basis_label: str
    gap: float
    shannon: float
    von_neumann: float
    max_offdiag_ratio: float | None  # None: undefined, some diagonal entry vanishes
    raw_offdiag_ratio: float | None = None
    threshold: float = 0.01
    epsilon: float | None = None  # halo perturbation size, when applicable

    @property
    def approximately_diagonal(self) -> bool:
        """Whether the gap is below the configured threshold (informational only)."""
        return self.gap <= self.threshold

    def to_dict(self) -> dict:
        d = asdict(self)
        d["approximately_diagonal"] = self.approximately_diagonal
        return d


def _check_dims(rho: np.ndarray, basis: np.ndarray) -> None:
    if rho.shape != basis.shape:
        raise DimensionError(f"state dim {rho.shape[0]} does not match basis dim {basis.shape[0]}")


def in_basis(rho, basis) -> np.ndarray:
    """Matrix elements ``<i|rho|j>`` for basis columns ``|i>``."""
    basis = np.asarray(basis, dtype=complex)
    return basis.conj().T @ np.asarray(rho, dtype=complex) @ basis


def as_probability_vector(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    tol = config.TOL.probability
    if p.ndim != 1 or p.size < 1:
        raise ValidationError("probability vector must be 1-D and non-empty")
    if np.any(p < 0) or abs(p.sum() - 1.0) > tol:
        raise ValidationError("probabilities must be nonnegative and sum to 1")
    return p


def diagonal_distribution(rho, basis) -> np.ndarray:
    rho = qstate.as_density_matrix(rho)
    basis = qstate.as_basis(basis)
    _check_dims(rho, basis)
    p = np.real(np.einsum("ki,kl,li->i", basis.conj(), rho, basis))
    if np.any(p < -config.TOL.psd):
        raise ValidationError(f"diagonal entry {p.min():.3e} is negative beyond tolerance")
    p = np.clip(p, 0.0, None)
    return p / p.sum()


def shannon_information(p) -> float:
    p = as_probability_vector(p)
    nz = p[p > 0]
    return float(-np.sum(nz * np.log(nz)))


def _entropy_of_spectrum(w: np.ndarray) -> float:
    w = w[w > config.TOL.eigen_zero]
    return float(-np.sum(w * np.log(w)))


def von_neumann_entropy(rho) -> float:
    rho = qstate.as_density_matrix(rho)
    return _entropy_of_spectrum(np.linalg.eigvalsh(rho))


def offdiag_ratio(rho, basis) -> float | None:
    """``max_{i != j} |rho_ij| / sqrt(rho_ii rho_jj)``; ``None`` when a diagonal entry vanishes."""
    rho = qstate.as_density_matrix(rho)
    basis = qstate.as_basis(basis)
    _check_dims(rho, basis)
    m = in_basis(rho, basis)
    d = np.real(np.diagonal(m))
    if m.shape[0] == 1:
        return 0.0
    if np.any(d < config.TOL.offdiag_denominator):
        return None
    r = np.abs(m) / np.sqrt(np.outer(d, d))
    np.fill_diagonal(r, 0.0)
    return float(r.max())


def raw_offdiag_ratio(rho, basis) -> float | None:
    """The unsymmetrized ``max_{i != j} |rho_ij / rho_ii|`` (verbose output only)."""
    m = in_basis(rho, basis)
    d = np.real(np.diagonal(m))
    if m.shape[0] == 1:
        return 0.0
    if np.any(d < config.TOL.offdiag_denominator):
        return None
    r = np.abs(m) / d[:, None]
    np.fill_diagonal(r, 0.0)
    return float(r.max())


def decoherence_gap(rho, basis, label: str = "basis") -> DecoherenceReport:
    rho = qstate.as_density_matrix(rho)
    basis = qstate.as_basis(basis)
    _check_dims(rho, basis)
    shannon = shannon_information(diagonal_distribution(rho, basis))
    vn = von_neumann_entropy(rho)
    return DecoherenceReport(
        basis_label=label,
        gap=shannon - vn,
        shannon=shannon,
        von_neumann=vn,
        max_offdiag_ratio=offdiag_ratio(rho, basis),
        raw_offdiag_ratio=raw_offdiag_ratio(rho, basis),
        threshold=config.TOL.gap_threshold,
    )


# --------------------------------------------------------------------------
# halo of nearby bases


def _unit_generator(dim: int, rng: np.random.Generator) -> np.ndarray:
    k = qstate.random_hermitian(dim, rng)
    return k / np.max(np.abs(np.linalg.eigvalsh(k)))


def halo_bases(basis, radius: float, samples: int, seed: int) -> list[tuple[float, np.ndarray]]:
    """Perturbed bases ``U exp(i eps K)``, K Gaussian-Hermitian with unit operator norm.

    ``eps`` is uniform on ``[0, radius]``. Sample ``k`` draws from its own
    child of ``SeedSequence(seed)``, so the result does not depend on
    evaluation order.
    """
    if radius < 0:
        raise ValidationError("halo radius must be nonnegative")
    basis = qstate.as_basis(basis)
    dim = basis.shape[0]
    out = []
    for child in np.random.SeedSequence(seed).spawn(samples):
        rng = np.random.default_rng(child)
        k = _unit_generator(dim, rng)
        eps = radius * rng.uniform()
        out.append((eps, basis @ qstate.propagator(k, -eps)))
    return out


def halo_sweep(rho, basis, radius: float, samples: int, seed: int, workers: int = 1) -> list[DecoherenceReport]:
    rho = qstate.as_density_matrix(rho)
    bases = halo_bases(basis, radius, samples, seed)
    _check_dims(rho, bases[0][1] if bases else np.asarray(basis))

    def one(item):
        i, (eps, b) = item
        return replace(decoherence_gap(rho, b, label=f"halo[{i}]"), epsilon=eps)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, enumerate(bases)))
    return [one(item) for item in enumerate(bases)]


def reports_csv(reports: list[DecoherenceReport], seed: int) -> str:
    """Seed comment line, then sample_index, epsilon, gap, shannon, von_neumann, max_offdiag_ratio."""
    buf = io.StringIO()
    buf.write(f"# seed={seed}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["sample_index", "epsilon", "gap", "shannon", "von_neumann", "max_offdiag_ratio"])
    for i, r in enumerate(reports):
        ratio = "undefined" if r.max_offdiag_ratio is None else repr(r.max_offdiag_ratio)
        w.writerow([i, repr(r.epsilon), repr(r.gap), repr(r.shannon), repr(r.von_neumann), ratio])
    return buf.getvalue()


def halo_csv(rho, basis, radius: float, samples: int, seed: int, workers: int = 1) -> str:
    return reports_csv(halo_sweep(rho, basis, radius, samples, seed, workers), seed)
