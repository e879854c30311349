"""Decoherence functional for finite sets of histories.

A history picks one projector from the decomposition at each time
``t_1 < ... < t_n``. Its class operator is the time-ordered product of
Heisenberg-picture projectors,

    C_alpha = P_1(t_1) P_2(t_2) ... P_n(t_n),   P(t) = e^{iHt} P e^{-iHt},

and the decoherence functional is ``d(alpha, beta) = Tr(C_alpha^dag rho_0 C_beta)``,
so that ``d(alpha, alpha) = Tr(P_n(t_n)...P_1(t_1) rho_0 P_1(t_1)...P_n(t_n))``
is the usual sequential-measurement probability. Histories are enumerated
lexicographically over (time slot, projector index).
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import config, qstate
from .errors import DimensionError, IndexRangeError, ValidationError


@dataclass(frozen=True, eq=False)
class ProjectiveDecomposition:
    projectors: tuple

    def __post_init__(self):
        ps = tuple(qstate.as_projector(p) for p in self.projectors)
        if not ps:
            raise ValidationError("a decomposition needs at least one projector")
        dim = ps[0].shape[0]
        if any(p.shape[0] != dim for p in ps):
            raise DimensionError("projectors of a decomposition must share one dimension")
        tol = config.TOL.idempotent
        if np.max(np.abs(sum(ps) - np.eye(dim))) > tol:
            raise ValidationError("projectors are not exhaustive (do not sum to identity)")
        for i, j in itertools.combinations(range(len(ps)), 2):
            if np.max(np.abs(ps[i] @ ps[j])) > tol:
                raise ValidationError(f"projectors {i} and {j} are not mutually exclusive")
        object.__setattr__(self, "projectors", ps)

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    def __len__(self) -> int:
        return len(self.projectors)

    @classmethod
    def from_basis(cls, basis, groups: Sequence[Sequence[int]] | None = None) -> "ProjectiveDecomposition":
        """Projectors onto groups of basis columns; one per column by default."""
        basis = np.asarray(basis, dtype=complex)
        groups = [[i] for i in range(basis.shape[1])] if groups is None else groups
        return cls(tuple(basis[:, g] @ basis[:, g].conj().T for g in map(list, groups)))


@dataclass(frozen=True, eq=False)
class HistorySet:
    times: tuple
    decompositions: tuple
    hamiltonian: np.ndarray
    initial_state: np.ndarray

    def __post_init__(self):
        times = tuple(float(t) for t in self.times)
        if len(times) != len(self.decompositions) or not times:
            raise ValidationError("need one decomposition per time")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValidationError("times must be strictly increasing")
        dim = self.decompositions[0].dim
        if any(d.dim != dim for d in self.decompositions):
            raise DimensionError("all decompositions must act on the same space")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "decompositions", tuple(self.decompositions))
        object.__setattr__(self, "hamiltonian", qstate.as_hermitian(self.hamiltonian, dim))
        object.__setattr__(self, "initial_state", qstate.as_density_matrix(self.initial_state, dim))

    @property
    def dim(self) -> int:
        return self.decompositions[0].dim

    def histories(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(len(d)) for d in self.decompositions)))

    def check_index(self, alpha: Sequence[int]) -> tuple[int, ...]:
        alpha = tuple(int(a) for a in alpha)
        if len(alpha) != len(self.times):
            raise IndexRangeError(f"history {alpha} has {len(alpha)} choices, expected {len(self.times)}")
        for slot, (a, d) in enumerate(zip(alpha, self.decompositions)):
            if not 0 <= a < len(d):
                raise IndexRangeError(f"choice {a} at time slot {slot} outside 0..{len(d) - 1}")
        return alpha

    def heisenberg_projectors(self) -> list[list[np.ndarray]]:
        out = []
        for t, d in zip(self.times, self.decompositions):
            u = qstate.propagator(self.hamiltonian, t)
            out.append([u.conj().T @ p @ u for p in d.projectors])
        return out


def class_operator(hset: HistorySet, alpha: Sequence[int], _cache=None) -> np.ndarray:
    alpha = hset.check_index(alpha)
    hp = _cache if _cache is not None else hset.heisenberg_projectors()
    c = np.eye(hset.dim, dtype=complex)
    for slot, a in enumerate(alpha):
        c = c @ hp[slot][a]
    return c


def class_operator_chain(hset: HistorySet, alpha: Sequence[int]) -> np.ndarray:
    """Same operator built Schrodinger-style with increment propagators.

    ``C^dag = U(t_n)^dag P_n U(t_n - t_{n-1}) P_{n-1} ... P_1 U(t_1)``: alternate
    increment propagation with projection, then return to the initial time.
    Used to cross-check :func:`class_operator`.
    """
    alpha = hset.check_index(alpha)
    h = hset.hamiltonian
    c_dag = np.eye(hset.dim, dtype=complex)
    prev = 0.0
    for t, d, a in zip(hset.times, hset.decompositions, alpha):
        c_dag = d.projectors[a] @ qstate.propagator(h, t - prev) @ c_dag
        prev = t
    c_dag = qstate.propagator(h, -prev) @ c_dag
    return c_dag.conj().T


def decoherence_functional(hset: HistorySet, alpha: Sequence[int], beta: Sequence[int]) -> complex:
    ca = class_operator(hset, alpha)
    cb = class_operator(hset, beta)
    return complex(np.trace(ca.conj().T @ hset.initial_state @ cb))


def decoherence_table(hset: HistorySet) -> tuple[list[tuple[int, ...]], np.ndarray]:
    """All histories and the full matrix ``d[a, b]``."""
    hist = hset.histories()
    hp = hset.heisenberg_projectors()
    cs = np.array([class_operator(hset, h, hp) for h in hist])
    # d[a, b] = Tr(C_a^dag rho C_b) = sum_ij conj(C_a)_ji (rho C_b)_ji
    rc = np.einsum("ij,bjk->bik", hset.initial_state, cs)
    d = np.einsum("aji,bji->ab", cs.conj(), rc)
    return hist, d


@dataclass(frozen=True, eq=False)
class ConsistencyReport:
    epsilon: float
    max_offdiag: float
    consistent: bool
    histories: list
    defect_table: np.ndarray
    probabilities: np.ndarray | None
    mode: str = "absolute"

    def to_json(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "mode": self.mode,
            "max_offdiag": self.max_offdiag,
            "consistent": self.consistent,
            "histories": [list(h) for h in self.histories],
            "defect_table": {"re": self.defect_table.real.tolist(), "im": self.defect_table.imag.tolist()},
            "probabilities": None if self.probabilities is None else self.probabilities.tolist(),
        }

    def to_csv(self) -> str:
        labels = [history_label(h) for h in self.histories]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["alpha", "beta", "re", "im", "abs"])
        for i, a in enumerate(labels):
            for j, b in enumerate(labels):
                z = self.defect_table[i, j]
                w.writerow([a, b, repr(float(z.real)), repr(float(z.imag)), repr(float(abs(z)))])
        return buf.getvalue()


def history_label(alpha: Sequence[int]) -> str:
    return "-".join(str(a) for a in alpha)


def _offdiag_measure(d: np.ndarray, mode: str) -> float | None:
    off = np.abs(d - np.diag(np.diagonal(d)))
    if mode == "absolute":
        return float(off.max()) if off.size else 0.0
    if mode == "relative":
        diag = np.real(np.diagonal(d))
        mask = ~np.eye(len(d), dtype=bool) & (off > 0)
        if not np.any(mask):
            return 0.0
        denom = np.sqrt(np.abs(np.outer(diag, diag)))
        if np.any(denom[mask] == 0):
            return None
        return float(np.max(off[mask] / denom[mask]))
    raise ValidationError(f"unknown consistency mode {mode!r}")


def consistency_check(hset: HistorySet, epsilon: float = 1e-8, mode: str = "absolute") -> ConsistencyReport:
    """Tabulate ``d(alpha, beta)`` and decide consistency at threshold ``epsilon``.

    ``mode="relative"`` divides each off-diagonal by ``sqrt(d(a,a) d(b,b))``;
    when that is undefined (a vanishing diagonal paired with a nonzero
    off-diagonal) the set is reported inconsistent with ``max_offdiag = nan``.
    Since ``d`` is a Gram matrix, ``|d(a,b)|^2 <= d(a,a) d(b,b)`` and that
    case only arises from rounding.
    """
    if epsilon < 0:
        raise ValidationError("epsilon must be nonnegative")
    hist, d = decoherence_table(hset)
    m = _offdiag_measure(d, mode)
    consistent = m is not None and m <= epsilon
    probs = None
    if consistent:
        probs = np.clip(np.real(np.diagonal(d)), 0.0, None)
    return ConsistencyReport(
        epsilon=epsilon,
        max_offdiag=float("nan") if m is None else m,
        consistent=consistent,
        histories=hist,
        defect_table=d,
        probabilities=probs,
        mode=mode,
    )


def coarse_grain(d: np.ndarray, groups: Sequence[Sequence[int]]) -> np.ndarray:
    """Decoherence functional of merged histories: sum of the member entries."""
    g = np.zeros((len(groups), d.shape[0]))
    for i, members in enumerate(groups):
        g[i, list(members)] = 1.0
    return g @ d @ g.T


# --------------------------------------------------------------------------
# two-slit set-up (zero Hamiltonian)


def _two_slit_inputs(psi, slits: ProjectiveDecomposition, screen: ProjectiveDecomposition):
    if len(slits) != 2:
        raise ValidationError(f"two-slit set-up needs exactly 2 slit projectors, got {len(slits)}")
    if slits.dim != screen.dim:
        raise DimensionError("slit and screen decompositions act on different spaces")
    return qstate.as_state_vector(psi, slits.dim)


def two_slit_probabilities(psi, slits: ProjectiveDecomposition, screen: ProjectiveDecomposition) -> np.ndarray:
    """Table ``p[i, j] = <psi| P_i Q_j P_i |psi>`` (slit i, screen cell j)."""
    psi = _two_slit_inputs(psi, slits, screen)
    table = np.array(
        [[np.vdot(psi, p @ q @ p @ psi).real for q in screen.projectors] for p in slits.projectors]
    )
    return table


def screen_probabilities(psi, screen: ProjectiveDecomposition) -> np.ndarray:
    """``p(j) = <psi|Q_j|psi>`` with no slit measurement."""
    psi = np.asarray(psi, dtype=complex)
    return np.array([np.vdot(psi, q @ psi).real for q in screen.projectors])


def additivity_defect(psi, slits: ProjectiveDecomposition, screen: ProjectiveDecomposition, j: int) -> float:
    """``p(j) - sum_i p(i; j)``; equals ``2 Re <psi|P_1 Q_j P_2|psi>``."""
    if not 0 <= j < len(screen):
        raise IndexRangeError(f"screen index {j} outside 0..{len(screen) - 1}")
    table = two_slit_probabilities(psi, slits, screen)
    return float(screen_probabilities(psi, screen)[j] - table[:, j].sum())


def interference_term(psi, slits: ProjectiveDecomposition, screen: ProjectiveDecomposition, j: int) -> float:
    """``2 Re <psi|P_1 Q_j P_2|psi>``, the closed form of the additivity defect."""
    psi = _two_slit_inputs(psi, slits, screen)
    p1, p2 = slits.projectors
    return float(2 * np.vdot(psi, p1 @ screen.projectors[j] @ p2 @ psi).real)


def two_slit_history_set(psi, slits: ProjectiveDecomposition, screen: ProjectiveDecomposition,
                         t1: float = 1.0, t2: float = 2.0) -> HistorySet:
    """Two-time history set with zero Hamiltonian for the two-slit set-up."""
    psi = _two_slit_inputs(psi, slits, screen)
    dim = slits.dim
    return HistorySet((t1, t2), (slits, screen), np.zeros((dim, dim)), qstate.pure_state(psi))
