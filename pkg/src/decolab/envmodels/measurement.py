"""System + apparatus + environment measurement chain.

Composite ordering is system (slow index) then apparatus, then any
environment units, following :func:`decolab.qstate.tensor`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import null_space

from .. import qstate
from ..errors import DimensionError, ValidationError


@dataclass(frozen=True)
class MeasurementChain:
    system_dim: int
    apparatus_dim: int
    correlation_map: tuple  # system index i -> pointer index R_i
    initial_pointer: int = 0

    def __post_init__(self):
        cmap = tuple(int(r) for r in self.correlation_map)
        if len(cmap) != self.system_dim:
            raise ValidationError("correlation map needs one pointer index per system basis state")
        if len(set(cmap)) != len(cmap):
            raise ValidationError("correlation map must be injective")
        if any(not 0 <= r < self.apparatus_dim for r in cmap):
            raise ValidationError("pointer index outside the apparatus space")
        if not 0 <= self.initial_pointer < self.apparatus_dim:
            raise ValidationError("initial pointer index outside the apparatus space")
        object.__setattr__(self, "correlation_map", cmap)

    @property
    def dim(self) -> int:
        return self.system_dim * self.apparatus_dim

    def unitary(self) -> np.ndarray:
        """Controlled permutation ``sum_i |i><i| (x) Pi_i`` with ``Pi_i`` swapping R_0 and R_i."""
        da = self.apparatus_dim
        u = np.zeros((self.dim, self.dim), dtype=complex)
        for i, r in enumerate(self.correlation_map):
            perm = np.eye(da)
            perm[[self.initial_pointer, r]] = perm[[r, self.initial_pointer]]
            u[i * da:(i + 1) * da, i * da:(i + 1) * da] = perm
        return u


def pre_measurement(chain: MeasurementChain, psi) -> np.ndarray:
    """``(sum_i c_i |i>)|R_0> -> sum_i c_i |i>|R_i>``."""
    psi = qstate.as_state_vector(psi, chain.system_dim)
    start = qstate.tensor(psi, qstate.ket(chain.initial_pointer, chain.apparatus_dim))
    return chain.unitary() @ start


def schmidt_coefficients(state, dims: tuple[int, int]) -> np.ndarray:
    s = np.linalg.svd(np.asarray(state, dtype=complex).reshape(dims), compute_uv=False)
    return s[s > 1e-12]


class Reduction(NamedTuple):
    rho: np.ndarray
    leakage: float


def von_neumann_reduce(state, chain: MeasurementChain) -> Reduction:
    """Mixture ``sum_i |d_{i R_i}|^2 |i><i| (x) |R_i><R_i|`` over correlated pairs.

    Weight outside the correlated pairs is returned as ``leakage``; the
    mixture is renormalized over what remains.
    """
    d = np.asarray(qstate.as_state_vector(state, chain.dim)).reshape(chain.system_dim, chain.apparatus_dim)
    weights = np.array([abs(d[i, r]) ** 2 for i, r in enumerate(chain.correlation_map)])
    kept = weights.sum()
    if kept <= 0:
        raise ValidationError("state has no weight on correlated system-pointer pairs")
    rho = np.zeros((chain.dim, chain.dim), dtype=complex)
    for i, (r, w) in enumerate(zip(chain.correlation_map, weights)):
        idx = i * chain.apparatus_dim + r
        rho[idx, idx] = w / kept
    return Reduction(rho, float(max(0.0, 1.0 - kept)))


# --------------------------------------------------------------------------
# environment-induced dephasing


@dataclass(frozen=True)
class DephasingEnvironment:
    """``n_qubits`` environment units, each rotated by ``theta`` conditional on the pointer.

    For a two-state pointer the units are qubits whose states are ``|0>``
    and ``cos(theta)|0> + sin(theta)|1>``. For ``d > 2`` pointer states each
    unit is a d-level system whose conditional states have pairwise overlap
    ``cos(theta)`` (every pair of distinct pointer states is distinguished
    equally, i.e. pointer distance 1).
    """

    n_qubits: int
    theta: float

    def __post_init__(self):
        if self.n_qubits < 0:
            raise ValidationError("number of environment units must be nonnegative")
        if not 0 <= self.theta <= np.pi:
            raise ValidationError("theta must lie in [0, pi]")

    def overlap(self) -> float:
        return float(np.cos(self.theta))

    def suppression(self) -> float:
        """Closed-form factor ``cos(theta)^n`` on pointer off-diagonals."""
        return self.overlap() ** self.n_qubits


def conditional_states(pointer_dim: int, theta: float) -> np.ndarray:
    """Columns ``e_k`` with ``<e_j|e_k> = cos(theta)`` for ``j != k`` and ``e_0 = |0>``."""
    c = np.cos(theta)
    gram = (1 - c) * np.eye(pointer_dim) + c * np.ones((pointer_dim, pointer_dim))
    w, v = np.linalg.eigh(gram)
    if w[0] < -1e-12:
        raise ValidationError(f"overlap cos(theta) = {c:.3g} is not realizable for {pointer_dim} pointer states")
    e = np.sqrt(np.clip(w, 0, None))[:, None] * v.conj().T
    q, r = np.linalg.qr(e)
    r = r * np.sign(r[0, 0]) if r[0, 0] != 0 else r
    return r.astype(complex)


def _completion(e: np.ndarray) -> np.ndarray:
    """Unitary whose first column is the unit vector ``e``."""
    u = np.column_stack([e, null_space(e.conj()[None, :])])
    return u


def controlled_rotation(pointer_basis, theta: float, system_dim: int = 1) -> np.ndarray:
    """``sum_k 1_S (x) |a_k><a_k| (x) V_k`` acting on system (x) apparatus (x) unit."""
    basis = qstate.as_basis(pointer_basis)
    da = basis.shape[0]
    states = conditional_states(da, theta)
    du = states.shape[0]
    u = np.zeros((system_dim * da * du,) * 2, dtype=complex)
    for k in range(da):
        proj = np.outer(basis[:, k], basis[:, k].conj())
        u += qstate.tensor(np.eye(system_dim), proj, _completion(states[:, k]))
    return u


def _split_dims(rho: np.ndarray, pointer_basis: np.ndarray) -> tuple[int, int]:
    da = pointer_basis.shape[0]
    if rho.shape[0] % da:
        raise DimensionError(f"state dim {rho.shape[0]} is not a multiple of pointer dim {da}")
    return rho.shape[0] // da, da


def dephase(rho_sa, env: DephasingEnvironment, pointer_basis, method: str = "sequential") -> np.ndarray:
    """Attach the environment, apply conditional rotations, trace the environment out.

    ``method="sequential"`` handles one unit at a time
    (exact because the units start in a product state and never interact);
    ``method="joint"`` builds the full system+apparatus+environment state,
    which is only feasible for a handful of units.
    """
    rho = qstate.as_density_matrix(rho_sa)
    basis = qstate.as_basis(pointer_basis)
    ds, da = _split_dims(rho, basis)
    if env.n_qubits == 0 or env.theta == 0:
        return np.array(rho)
    u = controlled_rotation(basis, env.theta, ds)
    du = u.shape[0] // rho.shape[0]
    zero = np.zeros((du, du), dtype=complex)
    zero[0, 0] = 1.0
    if method == "sequential":
        out = np.array(rho)
        for _ in range(env.n_qubits):
            big = u @ qstate.tensor(out, zero) @ u.conj().T
            out = qstate.partial_trace(big, [ds * da, du], keep=[0])
        return out
    if method == "joint":
        n = env.n_qubits
        dsa = ds * da
        u4 = u.reshape(dsa, du, dsa, du)
        big = qstate.tensor(rho, *([zero] * n)).reshape([dsa] + [du] * n + [dsa] + [du] * n)
        m = n + 1
        for j in range(n):
            big = np.moveaxis(np.tensordot(u4, big, axes=([2, 3], [0, j + 1])), 1, j + 1)
            big = np.tensordot(big, u4.conj(), axes=([m, m + j + 1], [2, 3]))
            big = np.moveaxis(big, [2 * m - 2, 2 * m - 1], [m, m + j + 1])
        dim = dsa * du**n
        return qstate.partial_trace(big.reshape(dim, dim), [dsa] + [du] * n, keep=[0])
    raise ValidationError(f"unknown method {method!r}")


def dephase_closed_form(rho_sa, env: DephasingEnvironment, pointer_basis) -> np.ndarray:
    """Multiply pointer off-diagonal blocks by ``cos(theta)^n``."""
    rho = np.asarray(rho_sa, dtype=complex)
    basis = qstate.as_basis(pointer_basis)
    ds, da = _split_dims(rho, basis)
    full = qstate.tensor(np.eye(ds), basis)
    r = full.conj().T @ rho @ full
    mask = np.full((da, da), env.suppression(), dtype=complex)
    np.fill_diagonal(mask, 1.0)
    r = r * np.kron(np.ones((ds, ds)), mask)
    return full @ r @ full.conj().T
