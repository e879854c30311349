"""Phase-space (Wigner) representation of grid-sampled states.

Positions live on a uniform grid ``x_k = x_min + k*dx`` (``k = 0..n-1``).
The Wigner function

    W(q, p) = (1/2pi) \\int dy exp(-i p y) rho(q + y/2, q - y/2)

is evaluated at ``q = x_k`` with the relative coordinate sampled at
``y = 2 m dx``, so both arguments of ``rho`` stay on grid points and no
interpolation is needed. The momentum axis that pairs with that step is

    p_j = j * dp,  dp = pi / (n dx),  j = -n/2 .. n/2 - 1.

Pairs ``(q + y/2, q - y/2)`` falling outside the box are taken as zero
(no periodic wrap): on a torus, wrapped pairs create ghost images of the
state near the box edges. With this rule each same-parity grid pair is
counted once and the normalization and position marginal are exact.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import config
from .errors import GridError, InvalidStateError, ValidationError


@dataclass(frozen=True)
class SpatialGrid:
    n: int
    x_min: float
    x_max: float

    def __post_init__(self):
        if self.n < 16 or self.n & (self.n - 1):
            raise GridError(f"grid size must be a power of two >= 16, got {self.n}")
        if not self.x_max > self.x_min:
            raise GridError("x_max must exceed x_min")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n)

    @property
    def dp(self) -> float:
        """Momentum spacing of the Wigner grid."""
        return math.pi / (self.n * self.dx)

    @property
    def p(self) -> np.ndarray:
        return self.dp * np.arange(-self.n // 2, self.n // 2)

    @property
    def k(self) -> np.ndarray:
        """Wavenumbers conjugate to ``x`` in FFT order (for propagators)."""
        return 2 * np.pi * np.fft.fftfreq(self.n, d=self.dx)


@dataclass(frozen=True)
class CatStateParams:
    sigma: float
    L: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValidationError("sigma must be positive")
        if self.L < 0:
            raise ValidationError("separation L must be nonnegative")


@dataclass(frozen=True, eq=False)
class GridWavefunction:
    grid: SpatialGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if v.shape != (self.grid.n,):
            raise GridError(f"expected {self.grid.n} samples, got shape {v.shape}")
        norm = float(np.sum(np.abs(v) ** 2) * self.grid.dx)
        if abs(norm - 1.0) > config.TOL.grid_norm:
            raise InvalidStateError(f"wavefunction norm is {norm!r}, expected 1")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def density_matrix(self) -> "GridDensityMatrix":
        return GridDensityMatrix(self.grid, np.outer(self.values, self.values.conj()))


@dataclass(frozen=True, eq=False)
class GridDensityMatrix:
    """``rho(x_k, x_l)`` sampled on the grid; trace is ``sum_k rho_kk dx``."""

    grid: SpatialGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        n = self.grid.n
        if v.shape != (n, n):
            raise GridError(f"expected {n}x{n} samples, got shape {v.shape}")
        if np.max(np.abs(v - v.conj().T)) > config.TOL.grid_hermitian:
            raise InvalidStateError("grid density matrix is not Hermitian")
        tr = self.trace_of(v)
        if abs(tr - 1.0) > config.TOL.grid_norm:
            raise InvalidStateError(f"grid density matrix trace is {tr!r}, expected 1")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def trace_of(self, v: np.ndarray) -> float:
        return float(np.real(np.trace(v)) * self.grid.dx)

    @property
    def trace(self) -> float:
        return self.trace_of(self.values)

    @property
    def position_density(self) -> np.ndarray:
        return np.real(np.diagonal(self.values)).copy()

    def as_matrix(self) -> np.ndarray:
        """Unit-trace finite matrix ``rho_kl dx`` for spectral diagnostics."""
        return self.values * self.grid.dx

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.as_matrix())[0])

    @staticmethod
    def mixture(weights, states) -> "GridDensityMatrix":
        states = list(states)
        grid = states[0].grid
        if any(s.grid != grid for s in states):
            raise GridError("mixture components live on different grids")
        vals = sum(w * s.values for w, s in zip(weights, states))
        return GridDensityMatrix(grid, vals)


@dataclass(frozen=True, eq=False)
class WignerField:
    grid: SpatialGrid
    values: np.ndarray  # shape (n_q, n_p), real
    meta: dict = field(default_factory=dict)

    @property
    def q(self) -> np.ndarray:
        return self.grid.x

    @property
    def p(self) -> np.ndarray:
        return self.grid.p

    @property
    def dq(self) -> float:
        return self.grid.dx

    @property
    def dp(self) -> float:
        return self.grid.dp

    def total(self) -> float:
        return float(np.sum(self.values) * self.dq * self.dp)

    def position_marginal(self) -> np.ndarray:
        return np.sum(self.values, axis=1) * self.dp

    def momentum_marginal(self) -> np.ndarray:
        return np.sum(self.values, axis=0) * self.dq

    def purity(self) -> float:
        """``2 pi * sum W^2 dq dp``; equals Tr(rho^2) up to grid error."""
        return float(2 * np.pi * np.sum(self.values**2) * self.dq * self.dp)

    def to_csv(self) -> str:
        g = self.grid
        buf = io.StringIO()
        buf.write(
            f"# n={g.n} q_min={g.x_min!r} dq={g.dx!r} "
            f"p_min={float(g.p[0])!r} dp={g.dp!r}\n"
        )
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["q", "p", "W"])
        qq, pp = np.meshgrid(self.q, self.p, indexing="ij")
        for q, p, val in zip(qq.ravel(), pp.ravel(), self.values.ravel()):
            w.writerow([repr(float(q)), repr(float(p)), repr(float(val))])
        return buf.getvalue()

    def to_json(self) -> dict:
        g = self.grid
        return {
            "n": g.n,
            "x_min": g.x_min,
            "x_max": g.x_max,
            "dq": g.dx,
            "p_min": float(g.p[0]),
            "dp": g.dp,
            "values": self.values.ravel().tolist(),
        }

    @staticmethod
    def from_json(obj: dict) -> "WignerField":
        grid = SpatialGrid(int(obj["n"]), float(obj["x_min"]), float(obj["x_max"]))
        vals = np.asarray(obj["values"], dtype=float).reshape(grid.n, grid.n)
        return WignerField(grid, vals)


def read_wigner_csv(text: str) -> tuple[dict, np.ndarray]:
    """Parse :meth:`WignerField.to_csv` output into (metadata, rows[q, p, W])."""
    lines = text.splitlines()
    meta = {}
    for tok in lines[0].lstrip("# ").split():
        k, v = tok.split("=")
        meta[k] = int(v) if k == "n" else float(v)
    rows = np.loadtxt(io.StringIO("\n".join(lines[2:])), delimiter=",", ndmin=2)
    return meta, rows


# --------------------------------------------------------------------------
# states


def gaussian_wavefunction(grid: SpatialGrid, center: float = 0.0, sigma: float = 1.0, p0: float = 0.0) -> GridWavefunction:
    """``exp(-(x-c)^2 / 2 sigma^2 + i p0 x)``, renormalized on the grid."""
    x = grid.x
    v = np.exp(-((x - center) ** 2) / (2 * sigma**2) + 1j * p0 * x)
    return GridWavefunction(grid, v / np.sqrt(np.sum(np.abs(v) ** 2) * grid.dx))


def oscillator_eigenfunction(k: int, grid: SpatialGrid, center: float = 0.0) -> np.ndarray:
    """Harmonic-oscillator eigenfunction (M = omega = 1) by the stable three-term recursion."""
    x = grid.x - center
    prev = np.zeros_like(x)
    cur = np.pi**-0.25 * np.exp(-(x**2) / 2)
    for j in range(k):
        prev, cur = cur, np.sqrt(2.0 / (j + 1)) * x * cur - np.sqrt(j / (j + 1)) * prev
    return cur


def cat_state_wavefunction(params: CatStateParams, grid: SpatialGrid) -> GridWavefunction:
    """Superposition of two Gaussians of width sigma centred at 0 and L."""
    s, L = params.sigma, params.L
    if grid.x_min > -4 * s or grid.x_max < L + 4 * s:
        raise GridError(f"grid [{grid.x_min}, {grid.x_max}] must span at least [{-4 * s}, {L + 4 * s}]")
    x = grid.x
    v = np.exp(-(x**2) / (2 * s**2)) + np.exp(-((x - L) ** 2) / (2 * s**2))
    v = v / np.sqrt(np.sum(v**2) * grid.dx)
    return GridWavefunction(grid, v.astype(complex))


def incoherent_mixture(params: CatStateParams, grid: SpatialGrid) -> GridDensityMatrix:
    """Equal mixture of the two displaced Gaussians composing the cat state."""
    a = gaussian_wavefunction(grid, 0.0, params.sigma).density_matrix()
    b = gaussian_wavefunction(grid, params.L, params.sigma).density_matrix()
    return GridDensityMatrix.mixture([0.5, 0.5], [a, b])


def cat_wigner_oracle(params: CatStateParams, q, p):
    """Closed-form Wigner function of the normalized two-Gaussian cat state.

    Derived by doing the Gaussian integral over the relative coordinate
    directly; each cross term |g_a><g_b| contributes
    (sigma/sqrt(pi)) exp(-(q-(a+b)/2)^2/sigma^2 - sigma^2 p^2 + i p (b-a)).
    """
    s, L = params.sigma, params.L
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    pre = np.exp(-(s * p) ** 2) / (2 * np.pi * (1 + np.exp(-(L**2) / (4 * s**2))))
    humps = np.exp(-(q**2) / s**2) + np.exp(-((q - L) ** 2) / s**2)
    fringe = 2 * np.exp(-((q - L / 2) ** 2) / s**2) * np.cos(L * p)
    return pre * (humps + fringe)


def mixture_wigner_oracle(params: CatStateParams, q, p):
    """Closed-form Wigner function of :func:`incoherent_mixture` (the classical humps)."""
    s, L = params.sigma, params.L
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    return np.exp(-(s * p) ** 2) / (2 * np.pi) * (np.exp(-(q**2) / s**2) + np.exp(-((q - L) ** 2) / s**2))


def interference_amplitude(params: CatStateParams) -> float:
    """Largest magnitude of the oracle's fringe term, attained at (L/2, 0)."""
    s, L = params.sigma, params.L
    return float(2 / (2 * np.pi * (1 + np.exp(-(L**2) / (4 * s**2)))))


# --------------------------------------------------------------------------
# transform and measures


def _check_edges(values: np.ndarray) -> None:
    edge = max(
        np.max(np.abs(values[0])), np.max(np.abs(values[-1])),
        np.max(np.abs(values[:, 0])), np.max(np.abs(values[:, -1])),
    )
    if edge > config.TOL.edge_decay:
        raise GridError(f"state has not decayed at the box edge (|rho| = {edge:.3e}); enlarge the grid")


def wigner_transform(rho: GridDensityMatrix | GridWavefunction, check_edges: bool = True) -> WignerField:
    if isinstance(rho, GridWavefunction):
        rho = rho.density_matrix()
    grid = rho.grid
    n, dx = grid.n, grid.dx
    vals = rho.values
    if check_edges:
        _check_edges(vals)
    k = np.arange(n)[:, None]
    m = np.arange(n)[None, :]
    m = np.where(m < n // 2, m, m - n)  # FFT ordering: m = 0..n/2-1, -n/2..-1
    a, b = k + m, k - m
    inside = (a >= 0) & (a < n) & (b >= 0) & (b < n)
    f = np.where(inside, vals[np.clip(a, 0, n - 1), np.clip(b, 0, n - 1)], 0.0)
    spectrum = np.fft.fftshift(np.fft.fft(f, axis=1), axes=1) * (dx / np.pi)
    imag = float(np.max(np.abs(spectrum.imag)))
    if imag > config.TOL.wigner_imag:
        raise InvalidStateError(f"Wigner transform has imaginary residue {imag:.3e}")
    W = WignerField(grid, spectrum.real.copy())
    total = W.total()
    if abs(total - 1.0) > config.TOL.wigner_norm:
        raise ValidationError(f"Wigner function normalization {total!r} off by more than tolerance")
    marg = np.max(np.abs(W.position_marginal() - rho.position_density))
    if marg > config.TOL.wigner_norm:
        raise ValidationError(f"Wigner position marginal off by {marg:.3e}")
    return W


def negativity_volume(W: WignerField) -> float:
    """Total negative mass ``sum (|W| - W)/2 dq dp``."""
    return float(np.sum(np.abs(W.values) - W.values) / 2 * W.dq * W.dp)


def interference_peak(W: WignerField, params: CatStateParams) -> float:
    """Largest |W - classical humps| in the window ``|q - L/2| <= sigma``.

    The humps are the Wigner function of the equal incoherent mixture of the
    two Gaussians, so a mixture scores zero and a fresh cat scores the
    fringe amplitude.
    """
    q, p = W.q, W.p
    win = np.abs(q - params.L / 2) <= params.sigma
    if not np.any(win):
        raise GridError("interference window contains no grid points")
    qq, pp = np.meshgrid(q[win], p, indexing="ij")
    resid = W.values[win] - mixture_wigner_oracle(params, qq, pp)
    return float(np.max(np.abs(resid)))
