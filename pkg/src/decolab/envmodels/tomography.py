"""Ensemble state estimation as an operational decoherence detector.

A plan lists Hermitian observables that together span operator space.
Each observable is measured on ``shots`` fresh copies of the state; the
empirical expectations are inverted linearly through the frame of the
observables and the result is projected onto the nearest density matrix in
Frobenius norm.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field

import numpy as np

from .. import qstate
from ..errors import DimensionError, SingularPlanError, ValidationError
from ..quantify import decoherence_gap

_EIG_MERGE = 1e-9


@dataclass(frozen=True, eq=False)
class TomographyPlan:
    observables: tuple
    shots_per_observable: int | None  # None: infinite-shot (exact expectations)
    seed: int = 0
    labels: tuple = ()

    def __post_init__(self):
        obs = tuple(qstate.as_hermitian(a) for a in self.observables)
        if not obs:
            raise ValidationError("a plan needs at least one observable")
        dim = obs[0].shape[0]
        if any(a.shape[0] != dim for a in obs):
            raise DimensionError("plan observables must share one dimension")
        if self.shots_per_observable is not None and self.shots_per_observable < 1:
            raise ValidationError("shots per observable must be positive")
        object.__setattr__(self, "observables", obs)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(len(obs))))

    @property
    def dim(self) -> int:
        return self.observables[0].shape[0]

    def frame(self) -> np.ndarray:
        """Rows ``r_a`` with ``Tr(rho A_a) = r_a . vec(rho)`` (row-major vec)."""
        return np.array([a.T.ravel() for a in self.observables])

    def check_spanning(self) -> np.ndarray:
        f = self.frame()
        gram = f.conj().T @ f
        rank = np.linalg.matrix_rank(gram, tol=1e-10 * max(1.0, np.abs(gram).max()))
        if rank < self.dim**2:
            raise SingularPlanError(
                f"observables span a {rank}-dimensional operator subspace, need {self.dim ** 2}"
            )
        return f

    def with_shots(self, shots: int | None, seed: int | None = None) -> "TomographyPlan":
        return TomographyPlan(self.observables, shots, self.seed if seed is None else seed, self.labels)

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "observables": [qstate.to_json(a) for a in self.observables],
            "shots_per_observable": self.shots_per_observable,
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TomographyPlan":
        return cls(
            tuple(qstate.from_json(o) for o in obj["observables"]),
            obj.get("shots_per_observable"),
            int(obj.get("seed", 0)),
            tuple(obj.get("labels", ())),
        )


def pauli_plan(n_qubits: int, shots: int | None, seed: int = 0) -> TomographyPlan:
    """All ``4**n`` Pauli strings, identity included."""
    paulis = {"I": qstate.PAULI_I, "X": qstate.PAULI_X, "Y": qstate.PAULI_Y, "Z": qstate.PAULI_Z}
    labels, ops = [], []
    for word in itertools.product("IXYZ", repeat=n_qubits):
        labels.append("".join(word))
        ops.append(qstate.tensor(*(paulis[c] for c in word)))
    return TomographyPlan(tuple(ops), shots, seed, tuple(labels))


def _spectral_projectors(a: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
    w, v = np.linalg.eigh(a)
    groups = [[0]]
    for i in range(1, len(w)):
        if w[i] - w[groups[-1][0]] > _EIG_MERGE:
            groups.append([i])
        else:
            groups[-1].append(i)
    values = np.array([w[g].mean() for g in groups])
    projs = [v[:, g] @ v[:, g].conj().T for g in groups]
    return values, projs


@dataclass
class MeasurementRecord:
    """Outcome table: per observable, its distinct eigenvalues and counts."""

    eigenvalues: list
    counts: list  # integer counts, or exact probabilities in infinite-shot mode
    shots: int | None
    seed: int
    labels: tuple = field(default_factory=tuple)

    def expectations(self) -> np.ndarray:
        out = []
        for ev, c in zip(self.eigenvalues, self.counts):
            c = np.asarray(c, dtype=float)
            out.append(float(ev @ c / c.sum()))
        return np.array(out)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# seed={self.seed} shots={self.shots}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["observable", "eigenvalue", "count"])
        for label, ev, c in zip(self.labels, self.eigenvalues, self.counts):
            for e, n in zip(ev, c):
                w.writerow([label, repr(float(e)), int(n) if self.shots is not None else repr(float(n))])
        return buf.getvalue()


def outcome_probabilities(rho, plan: TomographyPlan) -> tuple[list, list]:
    values, probs = [], []
    for a in plan.observables:
        ev, projs = _spectral_projectors(a)
        p = np.clip(np.array([np.trace(rho @ pr).real for pr in projs]), 0.0, None)
        values.append(ev)
        probs.append(p / p.sum())
    return values, probs


def simulate_measurements(rho, plan: TomographyPlan, seed: int | None = None) -> MeasurementRecord:
    """Draw ``shots`` outcomes per observable; exact probabilities when shots is None.

    Observable ``a`` draws from child ``a`` of ``SeedSequence(seed)``.
    """
    rho = qstate.as_density_matrix(rho, plan.dim)
    seed = plan.seed if seed is None else seed
    values, probs = outcome_probabilities(rho, plan)
    if plan.shots_per_observable is None:
        counts = probs
    else:
        children = np.random.SeedSequence(seed).spawn(len(probs))
        counts = [np.random.default_rng(c).multinomial(plan.shots_per_observable, p) for c, p in zip(children, probs)]
    return MeasurementRecord(values, counts, plan.shots_per_observable, seed, plan.labels)


def project_to_density_matrix(a: np.ndarray) -> np.ndarray:
    """Nearest unit-trace PSD matrix in Frobenius norm.

    The eigenvalues are projected onto the probability simplex, which
    amounts to shifting them by a common constant and clipping at zero.
    """
    a = (a + a.conj().T) / 2
    w, v = np.linalg.eigh(a)
    u = np.sort(w)[::-1]
    css = np.cumsum(u) - 1.0
    k = np.nonzero(u - css / np.arange(1, len(u) + 1) > 0)[0][-1]
    shift = css[k] / (k + 1)
    lam = np.clip(w - shift, 0.0, None)
    return (v * lam) @ v.conj().T


@dataclass
class TomographyResult:
    rho: np.ndarray
    linear_estimate: np.ndarray
    diagnostics: dict


def reconstruct_state(record: MeasurementRecord, plan: TomographyPlan, reference=None) -> TomographyResult:
    f = plan.check_spanning()
    e = record.expectations()
    vec, *_ = np.linalg.lstsq(f, e.astype(complex), rcond=None)
    lin = vec.reshape(plan.dim, plan.dim)
    lin = (lin + lin.conj().T) / 2
    rho = project_to_density_matrix(lin)
    diag = {
        "min_linear_eigenvalue": float(np.linalg.eigvalsh(lin)[0]),
        "linear_trace": float(np.trace(lin).real),
        "projection_distance": float(np.linalg.norm(rho - lin)),
    }
    if reference is not None:
        diag["trace_distance"] = qstate.trace_distance(rho, reference)
    return TomographyResult(rho, lin, diag)


def _resample(record: MeasurementRecord, rng: np.random.Generator) -> MeasurementRecord:
    counts = []
    for c in record.counts:
        c = np.asarray(c)
        counts.append(rng.multinomial(int(c.sum()), c / c.sum()))
    return MeasurementRecord(record.eigenvalues, counts, record.shots, record.seed, record.labels)


@dataclass(frozen=True)
class PipelinePoint:
    t: float
    gap_estimate: float
    gap_error: float
    gap_exact: float | None


def decoherence_detection_pipeline(states, plan: TomographyPlan, basis, bootstrap: int = 100,
                                   seed: int | None = None) -> list[PipelinePoint]:
    """Estimate the decoherence gap over time from simulated measurement data.

    ``states`` yields ``(t, rho)`` pairs. At each time the measurements are
    simulated, the state reconstructed and its gap in ``basis`` computed;
    the error bar is the standard deviation over ``bootstrap`` multinomial
    resamples of the counts. Time index ``i`` uses child ``i`` of
    ``SeedSequence(seed)``.
    """
    seed = plan.seed if seed is None else seed
    states = list(states)
    children = np.random.SeedSequence(seed).spawn(len(states))
    out = []
    for (t, rho), child in zip(states, children):
        meas_seed, boot_seed = child.spawn(2)
        record = simulate_measurements(rho, plan, seed=int(meas_seed.generate_state(1)[0]))
        est = decoherence_gap(reconstruct_state(record, plan).rho, basis).gap
        err = 0.0
        if plan.shots_per_observable is not None and bootstrap > 0:
            rng = np.random.default_rng(boot_seed)
            gaps = [decoherence_gap(reconstruct_state(_resample(record, rng), plan).rho, basis).gap
                    for _ in range(bootstrap)]
            err = float(np.std(gaps, ddof=1))
        out.append(PipelinePoint(float(t), est, err, decoherence_gap(rho, basis).gap))
    return out


def pipeline_csv(points: list[PipelinePoint], seed: int) -> str:
    buf = io.StringIO()
    buf.write(f"# seed={seed}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "gap_estimate", "gap_error", "gap_exact"])
    for p in points:
        w.writerow([repr(p.t), repr(p.gap_estimate), repr(p.gap_error), repr(p.gap_exact)])
    return buf.getvalue()
