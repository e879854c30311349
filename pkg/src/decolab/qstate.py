"""Finite-dimensional Hilbert-space algebra.

States and operators are plain ``numpy`` arrays of ``complex128``. The
``as_*`` helpers validate an array against the invariants of its role and
return a read-only copy, so validated values can be shared freely between
workers. Operations validate their inputs once at the boundary.

Composite systems use the Kronecker convention of :func:`numpy.kron`: in
``tensor(a, b)`` the first factor is the slow index, so the basis state
``|i>|j>`` sits at position ``i * dim(b) + j``. Every module follows it.

Units are natural throughout (hbar = k_B = 1).
"""

from __future__ import annotations

import string
from typing import Iterable, Sequence

import numpy as np

from . import config
from .errors import DimensionError, InvalidStateError, NotHermitianError, ValidationError

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.flags.writeable = False
    return a


def _max_abs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


# --------------------------------------------------------------------------
# validation


def as_operator(a, dim: int | None = None) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionError(f"operator must be a non-empty square matrix, got shape {a.shape}")
    if dim is not None and a.shape[0] != dim:
        raise DimensionError(f"expected dimension {dim}, got {a.shape[0]}")
    return _frozen(a)


def is_hermitian(a: np.ndarray, tol: float | None = None) -> bool:
    tol = config.TOL.hermitian if tol is None else tol
    return _max_abs(a - a.conj().T) <= tol


def as_hermitian(a, dim: int | None = None) -> np.ndarray:
    a = as_operator(a, dim)
    if not is_hermitian(a):
        raise NotHermitianError(f"operator is not Hermitian (defect {_max_abs(a - a.conj().T):.3e})")
    return a


def as_state_vector(v, dim: int | None = None) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if v.ndim != 1 or v.size < 1:
        raise DimensionError(f"state vector must be 1-D and non-empty, got shape {v.shape}")
    if dim is not None and v.size != dim:
        raise DimensionError(f"expected dimension {dim}, got {v.size}")
    norm = float(np.vdot(v, v).real)
    if abs(norm - 1.0) > config.TOL.state_norm:
        raise InvalidStateError(f"state vector norm^2 is {norm!r}, expected 1")
    return _frozen(v)


def as_density_matrix(rho, dim: int | None = None) -> np.ndarray:
    """Validate Hermiticity, unit trace and positivity of ``rho``."""
    rho = as_operator(rho, dim)
    tol = config.TOL
    if not is_hermitian(rho, tol.hermitian):
        raise InvalidStateError("density matrix is not Hermitian")
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol.trace:
        raise InvalidStateError(f"density matrix trace is {tr!r}, expected 1")
    lo = float(np.linalg.eigvalsh(rho)[0])
    if lo < -tol.psd:
        raise InvalidStateError(f"density matrix has negative eigenvalue {lo:.3e}")
    return rho


def as_projector(p, dim: int | None = None) -> np.ndarray:
    p = as_hermitian(p, dim)
    if _max_abs(p @ p - p) > config.TOL.idempotent:
        raise ValidationError("projector is not idempotent")
    return p


def projector_rank(p: np.ndarray) -> int:
    """Rank of a projector, which equals its trace (the coarse-graining degree)."""
    return int(round(float(np.trace(p).real)))


def as_basis(u, dim: int | None = None) -> np.ndarray:
    """Validate an orthonormal basis given as a matrix whose columns are the vectors."""
    u = as_operator(u, dim)
    if _max_abs(u.conj().T @ u - np.eye(u.shape[0])) > config.TOL.orthonormal:
        raise ValidationError("basis vectors are not orthonormal")
    return u


# --------------------------------------------------------------------------
# constructors


def ket(index: int, dim: int) -> np.ndarray:
    if not 0 <= index < dim:
        raise DimensionError(f"basis index {index} outside 0..{dim - 1}")
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def normalize(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    n = np.linalg.norm(v)
    if n == 0:
        raise InvalidStateError("cannot normalize the zero vector")
    return v / n


def pure_state(psi) -> np.ndarray:
    """Density matrix ``|psi><psi|``."""
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def projector_onto(vectors) -> np.ndarray:
    """Orthogonal projector onto the span of the given vectors (rows or a single vector)."""
    v = np.atleast_2d(np.asarray(vectors, dtype=complex))
    q, _ = np.linalg.qr(v.T)
    rank = np.linalg.matrix_rank(v)
    q = q[:, :rank]
    return q @ q.conj().T


def computational_basis(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def eigenbasis(a) -> np.ndarray:
    """Eigenvectors of a Hermitian operator as basis columns, ascending eigenvalues."""
    _, vecs = np.linalg.eigh(as_hermitian(a))
    return vecs


def maximally_mixed(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex) / dim


def random_state_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random state from a Ginibre matrix G: rho = G G^dag / Tr(G G^dag)."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return rho / np.trace(rho).real


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary (QR of a Ginibre matrix with phase fix)."""
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2


# --------------------------------------------------------------------------
# operations


def tensor(*ops) -> np.ndarray:
    """Kronecker product; the first factor is the slow index."""
    if not ops:
        raise ValueError("tensor() needs at least one factor")
    out = np.asarray(ops[0], dtype=complex)
    for b in ops[1:]:
        out = np.kron(out, np.asarray(b, dtype=complex))
    return out


def partial_trace(rho, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Reduced operator on the subsystems listed in ``keep``.

    ``dims`` gives the factor dimensions in tensor order. Kept factors are
    returned in ascending index order.
    """
    rho = np.asarray(rho, dtype=complex)
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims) or int(np.prod(dims)) != rho.shape[0] or rho.ndim != 2:
        raise DimensionError(f"subsystem dims {dims} inconsistent with operator shape {rho.shape}")
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise DimensionError(f"keep indices {keep} out of range for {len(dims)} subsystems")
    n = len(dims)
    if len(keep) == n:
        return rho.copy()
    letters = string.ascii_letters
    if 2 * n > len(letters):
        raise DimensionError("too many subsystems")
    row = list(letters[:n])
    col = [letters[n + i] if i in keep else row[i] for i in range(n)]
    out = [row[i] for i in keep] + [col[i] for i in keep]
    subscripts = "".join(row) + "".join(col) + "->" + "".join(out)
    red = np.einsum(subscripts, rho.reshape(dims + dims))
    d_keep = int(np.prod([dims[i] for i in keep])) if keep else 1
    return red.reshape(d_keep, d_keep)


def propagator(h, t: float) -> np.ndarray:
    """``exp(-i H t)`` by eigendecomposition of the Hermitian generator."""
    h = as_hermitian(h)
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def evolve_unitary(rho, h, t: float) -> np.ndarray:
    """Schrodinger evolution ``exp(-iHt) rho exp(+iHt)``."""
    rho = as_density_matrix(rho)
    u = propagator(as_hermitian(h, rho.shape[0]), t)
    return u @ rho @ u.conj().T


def heisenberg(op, h, t: float) -> np.ndarray:
    """Heisenberg-picture operator ``exp(iHt) A exp(-iHt)``."""
    u = propagator(h, t)
    return u.conj().T @ np.asarray(op, dtype=complex) @ u


def expectation(rho, a) -> float:
    """``Tr(rho A)`` for Hermitian ``A``; the imaginary residue is checked then dropped."""
    rho = as_density_matrix(rho)
    a = as_hermitian(a, rho.shape[0])
    val = np.trace(rho @ a)
    if abs(val.imag) > config.TOL.imag_residue:
        raise NotHermitianError(f"expectation has imaginary part {val.imag:.3e}")
    return float(val.real)


def trace_distance(a, b) -> float:
    w = np.linalg.eigvalsh(np.asarray(a, dtype=complex) - np.asarray(b, dtype=complex))
    return 0.5 * float(np.sum(np.abs(w)))


def purity(rho) -> float:
    rho = np.asarray(rho, dtype=complex)
    return float(np.real(np.trace(rho @ rho)))


# --------------------------------------------------------------------------
# serialization


def to_json(a) -> dict:
    """``{"dim": n, "re": [...], "im": [...]}`` with row-major flattening.

    Works for operators (n*n entries) and state vectors (n entries).
    """
    a = np.asarray(a, dtype=complex)
    return {"dim": int(a.shape[0]), "re": a.real.ravel().tolist(), "im": a.imag.ravel().tolist()}


def from_json(obj: dict) -> np.ndarray:
    dim = int(obj["dim"])
    flat = np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)
    if flat.size == dim:
        return flat
    if flat.size == dim * dim:
        return flat.reshape(dim, dim)
    raise DimensionError(f"JSON payload has {flat.size} entries, incompatible with dim {dim}")
