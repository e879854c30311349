"""Quantum Brownian motion in the ohmic, high-temperature Markov limit.

The reduced density matrix ``rho(x, x')`` of a particle of mass M obeys

    d rho/dt = -i[H, rho] - i gamma [x, {p, rho}] - 2 M gamma T [x, [x, rho]]

(natural units, hbar = k_B = 1). On the position grid the double
commutator is the pointwise factor ``-(x - x')^2`` and the dissipation term
is ``-gamma (x - x')(d/dx - d/dx') rho``.

:func:`kramers_evolve` integrates it with a symmetric (Strang) splitting:
exact kinetic half-steps in momentum space, exact potential/decoherence
phases and factors in position space, and an RK2 step of the centered
finite-difference dissipation term in the middle.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field
from typing import Iterable

import numpy as np

from . import config
from .errors import GridError, NumericalGuardError, StabilityError, ValidationError
from .wigner import (
    CatStateParams,
    GridDensityMatrix,
    SpatialGrid,
    cat_state_wavefunction,
    interference_peak,
    wigner_transform,
)

ALL_TERMS = frozenset({"kinetic", "potential", "dissipation", "decoherence"})


@dataclass(frozen=True)
class SpectralDensityParams:
    gamma: float
    s: float = 1.0
    cutoff: float = 1e3  # Lambda

    def __post_init__(self):
        if self.gamma < 0:
            raise ValidationError("gamma must be nonnegative")
        if not self.cutoff > 0:
            raise ValidationError("cutoff Lambda must be positive")
        if not self.s > 0:
            raise ValidationError("exponent s must be positive")


@dataclass(frozen=True)
class Potential:
    """``V(x) = a x^2 + b x + c``; ``harmonic`` sets ``a = M omega^2 / 2``."""

    kind: str = "free"
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0

    @classmethod
    def free(cls) -> "Potential":
        return cls("free")

    @classmethod
    def harmonic(cls, omega: float, mass: float = 1.0) -> "Potential":
        return cls("harmonic", a=0.5 * mass * omega**2)

    @classmethod
    def quadratic(cls, a: float, b: float = 0.0, c: float = 0.0) -> "Potential":
        return cls("quadratic", a, b, c)

    @classmethod
    def from_dict(cls, d: dict | None, mass: float = 1.0) -> "Potential":
        d = dict(d or {"kind": "free"})
        kind = d.pop("kind", "free")
        if kind == "free":
            if d:
                raise ValidationError(f"free potential takes no parameters, got {sorted(d)}")
            return cls.free()
        if kind == "harmonic":
            if set(d) != {"omega"}:
                raise ValidationError("harmonic potential needs exactly 'omega'")
            return cls.harmonic(float(d["omega"]), mass)
        if kind == "quadratic":
            extra = set(d) - {"a", "b", "c"}
            if extra:
                raise ValidationError(f"unknown quadratic potential keys {sorted(extra)}")
            return cls.quadratic(**{k: float(v) for k, v in d.items()})
        raise ValidationError(f"potential must be free, harmonic or quadratic, got {kind!r}")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.a * x**2 + self.b * x + self.c


@dataclass(frozen=True)
class QbmParams:
    mass: float
    temperature: float
    spectral: SpectralDensityParams
    potential: Potential = field(default_factory=Potential.free)

    def __post_init__(self):
        if not self.mass > 0:
            raise ValidationError("mass must be positive")
        if self.temperature < 0:
            raise ValidationError("temperature must be nonnegative")

    @property
    def gamma(self) -> float:
        return self.spectral.gamma

    @property
    def diffusion(self) -> float:
        """Coefficient ``2 M gamma T`` of ``(x - x')^2`` in the decoherence term."""
        return 2 * self.mass * self.gamma * self.temperature

    def decoherence_rate(self, L: float) -> float:
        """Predicted decay rate ``2 M gamma T L^2`` of the interference term."""
        return self.diffusion * L**2

    @classmethod
    def from_config(cls, cfg: dict) -> "QbmParams":
        mass = float(cfg.get("M", 1.0))
        return cls(
            mass=mass,
            temperature=float(cfg["T"]),
            spectral=SpectralDensityParams(float(cfg["gamma"]), float(cfg.get("s", 1.0)), float(cfg.get("Lambda", 1e3))),
            potential=Potential.from_dict(cfg.get("potential"), mass),
        )


# --------------------------------------------------------------------------
# spectral densities


def spectral_density(omega, params: SpectralDensityParams):
    """``I(omega) = gamma omega^s exp(-omega^2 / Lambda^2)``."""
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0):
        raise ValidationError("spectral density is defined for omega >= 0")
    out = params.gamma * w**params.s * np.exp(-(w**2) / params.cutoff**2)
    return float(out) if out.ndim == 0 else out


def discrete_bath_spectral_density(couplings, masses, frequencies, bins) -> tuple[np.ndarray, np.ndarray]:
    """Binned weights ``sum_{alpha in bin} c^2 / (2 m omega^2)`` of a discrete bath.

    ``bins`` is anything :func:`numpy.histogram` accepts. Returns
    ``(weights, edges)``; divide weights by bin widths for a density.
    """
    c = np.asarray(couplings, dtype=float)
    m = np.asarray(masses, dtype=float)
    w = np.asarray(frequencies, dtype=float)
    if not (c.shape == m.shape == w.shape) or c.ndim != 1:
        raise ValidationError("couplings, masses and frequencies must be equal-length 1-D arrays")
    if np.any(m <= 0) or np.any(w <= 0):
        raise ValidationError("oscillator masses and frequencies must be positive")
    weights, edges = np.histogram(w, bins=bins, weights=c**2 / (2 * m * w**2))
    return weights, edges


def sample_bath(n: int, params: SpectralDensityParams, omega_max: float, seed: int, mass: float = 1.0):
    """Discrete oscillator bath whose binned spectral density follows ``I(omega)``.

    Frequencies are drawn by stratified inverse-CDF sampling of the density
    proportional to ``I`` on ``(0, omega_max]`` (one draw per quantile
    stratum), and every oscillator carries equal weight ``c^2/(2 m omega^2)``.
    Returns ``(couplings, masses, frequencies)``.
    """
    grid = np.linspace(0.0, omega_max, 20001)
    dens = spectral_density(grid, params)
    cdf = np.concatenate([[0.0], np.cumsum((dens[1:] + dens[:-1]) / 2 * np.diff(grid))])
    total = cdf[-1]
    rng = np.random.default_rng(seed)
    u = (np.arange(n) + rng.uniform(size=n)) / n
    w = np.interp(u * total, cdf, grid)
    w = np.clip(w, grid[1] * 1e-3, None)
    m = np.full(n, mass)
    c = np.sqrt(2 * m * w**2 * total / n)
    return c, m, w


# --------------------------------------------------------------------------
# timescales


@dataclass(frozen=True)
class Timescales:
    cutoff_time: float
    classicalisation_time: float | None
    relaxation_time: float | None
    decoherence_time: float | None
    L: float
    separation_factor: float

    @property
    def ordered(self) -> bool:
        """Lambda^-1 << t_cl << gamma^-1 with the configured separation factor."""
        if self.classicalisation_time is None or self.relaxation_time is None:
            return False
        f = self.separation_factor
        return (self.classicalisation_time >= f * self.cutoff_time
                and self.relaxation_time >= f * self.classicalisation_time)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ordered"] = self.ordered
        return d


def timescales(params: QbmParams, L: float, separation: float = 10.0) -> Timescales:
    """Cut-off, classicalisation, relaxation and decoherence times.

    ``t_cl = (M gamma T)^(-1/2)`` and ``t_dec = (M gamma T L^2)^(-1)`` are
    taken as given in natural units; they are undefined (``None``) when
    gamma or T vanishes.
    """
    g, T, M = params.gamma, params.temperature, params.mass
    mgt = M * g * T
    return Timescales(
        cutoff_time=1.0 / params.spectral.cutoff,
        classicalisation_time=mgt**-0.5 if mgt > 0 else None,
        relaxation_time=1.0 / g if g > 0 else None,
        decoherence_time=1.0 / (mgt * L**2) if mgt > 0 and L > 0 else None,
        L=L,
        separation_factor=separation,
    )


# --------------------------------------------------------------------------
# evolution


def stability_bound(params: QbmParams, grid: SpatialGrid) -> float:
    """Largest allowed step: ``0.1 min(M dx^2, 1/(2 M gamma T L_box^2))``."""
    lbox = grid.x_max - grid.x_min
    bound = params.mass * grid.dx**2
    if params.diffusion > 0:
        bound = min(bound, 1.0 / (params.diffusion * lbox**2))
    return 0.1 * bound


def _check_support(values: np.ndarray, tol: float) -> None:
    edge = max(np.abs(values[0]).max(), np.abs(values[-1]).max(),
               np.abs(values[:, 0]).max(), np.abs(values[:, -1]).max())
    if edge > tol:
        raise GridError(f"state reached the box edge (|rho| = {edge:.3e}); enlarge the grid")


class KramersStepper:
    """Reusable Strang stepper bound to one grid, parameter set and step size."""

    def __init__(self, params: QbmParams, grid: SpatialGrid, dt: float,
                 terms: Iterable[str] = ALL_TERMS, check_stability: bool = True):
        terms = frozenset(terms)
        if terms - ALL_TERMS:
            raise ValidationError(f"unknown terms {sorted(terms - ALL_TERMS)}")
        if not math.isclose(params.spectral.s, 1.0):
            raise ValidationError("Kramers evolution is only valid for an ohmic bath (s = 1)")
        if not dt > 0:
            raise StabilityError("time step must be positive")
        bound = stability_bound(params, grid)
        if check_stability and dt > bound:
            raise StabilityError(f"dt = {dt:.4g} exceeds stability bound {bound:.4g}")
        self.params, self.grid, self.dt, self.terms = params, grid, dt, terms
        x = grid.x
        X, Xp = np.meshgrid(x, x, indexing="ij")
        self._sep = X - Xp
        k = grid.k
        half = dt / 2
        self._kin = np.exp(-1j * (k[:, None] ** 2 - k[None, :] ** 2) * half / (2 * params.mass))
        phase = np.ones_like(self._sep, dtype=complex)
        if "potential" in terms:
            v = params.potential(x)
            phase = phase * np.exp(-1j * (v[:, None] - v[None, :]) * half)
        if "decoherence" in terms:
            phase = phase * np.exp(-params.diffusion * self._sep**2 * half)
        self._half_local = phase

    def _kinetic(self, r: np.ndarray) -> np.ndarray:
        a = np.fft.ifft(np.fft.fft(r, axis=0), axis=1)
        a *= self._kin
        return np.fft.ifft(np.fft.fft(a, axis=1), axis=0)

    def _dissipation_rhs(self, r: np.ndarray) -> np.ndarray:
        dx = self.grid.dx
        grad = np.gradient(r, dx, axis=0, edge_order=2) - np.gradient(r, dx, axis=1, edge_order=2)
        return -self.params.gamma * self._sep * grad

    def step(self, r: np.ndarray) -> np.ndarray:
        if "kinetic" in self.terms:
            r = self._kinetic(r)
        r = r * self._half_local
        if "dissipation" in self.terms and self.params.gamma > 0:
            mid = r + 0.5 * self.dt * self._dissipation_rhs(r)
            r = r + self.dt * self._dissipation_rhs(mid)
        r = r * self._half_local
        if "kinetic" in self.terms:
            r = self._kinetic(r)
        return r


def kramers_evolve(rho: GridDensityMatrix, params: QbmParams, dt: float, steps: int,
                   terms: Iterable[str] = ALL_TERMS, support_tol: float = 1e-10,
                   positivity_every: int = 0) -> GridDensityMatrix:
    """Advance ``rho`` by ``steps`` Strang steps of size ``dt``.

    ``terms`` selects which parts of the generator are active (all by
    default); switching terms off is meant for tests. When
    ``positivity_every > 0`` the smallest eigenvalue is checked at that
    cadence and at the end against the positivity floor.
    """
    stepper = KramersStepper(params, rho.grid, dt, terms)
    r = np.array(rho.values, dtype=complex)
    for i in range(steps):
        r = stepper.step(r)
        _check_support(r, support_tol)
        if positivity_every and (i + 1) % positivity_every == 0:
            _positivity_watch(r, rho.grid, (i + 1) * dt)
    return _finish(r, rho.grid, steps, positivity_every)


def _positivity_watch(r: np.ndarray, grid: SpatialGrid, t: float) -> float:
    lo = float(np.linalg.eigvalsh((r + r.conj().T) / 2 * grid.dx)[0])
    if lo < config.TOL.positivity_floor:
        raise NumericalGuardError("positivity", f"smallest eigenvalue {lo:.3e} below floor at t = {t:.4g}")
    return lo


def _finish(r: np.ndarray, grid: SpatialGrid, steps: int, positivity_every: int) -> GridDensityMatrix:
    herm = float(np.max(np.abs(r - r.conj().T)))
    if herm > config.TOL.grid_hermitian:
        raise NumericalGuardError("hermiticity", f"Hermiticity defect {herm:.3e}")
    tr = float(np.real(np.trace(r)) * grid.dx)
    allowed = 1e-6 * max(1.0, steps / 1000)
    if abs(tr - 1.0) > allowed:
        raise NumericalGuardError("trace", f"trace drifted to {tr!r} after {steps} steps")
    if positivity_every:
        _positivity_watch(r, grid, float("nan"))
    r = (r + r.conj().T) / 2
    return GridDensityMatrix(grid, r / tr)


# --------------------------------------------------------------------------
# decoherence experiment


@dataclass
class DecoherenceSeries:
    times: np.ndarray
    peaks: np.ndarray
    trace_errors: np.ndarray
    min_eigenvalues: np.ndarray
    running_rates: np.ndarray
    fitted_rate: float
    predicted_rate: float
    fit_window: tuple

    @property
    def relative_error(self) -> float:
        return abs(self.fitted_rate - self.predicted_rate) / self.predicted_rate

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "interference_peak", "trace_error", "min_eigenvalue", "fitted_rate_so_far"])
        for row in zip(self.times, self.peaks, self.trace_errors, self.min_eigenvalues, self.running_rates):
            w.writerow([repr(float(v)) for v in row])
        return buf.getvalue()


def fit_decay_rate(times, values, window: tuple | None = None) -> float:
    """Least-squares slope of ``-log(values)`` against time inside ``window``."""
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    mask = v > 0
    if window is not None:
        mask &= (t >= window[0]) & (t <= window[1])
    if mask.sum() < 2:
        return float("nan")
    slope, _ = np.polyfit(t[mask], np.log(v[mask]), 1)
    return float(-slope)


def decoherence_experiment(cat: CatStateParams, params: QbmParams, grid: SpatialGrid, dt: float,
                           steps: int | None = None, sample_every: int = 10,
                           window_fraction: float = 0.3, terms: Iterable[str] = ALL_TERMS) -> DecoherenceSeries:
    """Evolve a cat state and track the decay of its Wigner interference fringe.

    The rate is fitted over ``[10/Lambda, window_fraction * t_dec]``; early
    times are excluded because the factorized initial condition is
    unreliable below the bath response time. With ``steps=None`` the run
    stops at the end of the fit window.
    """
    if params.potential.kind not in ("free", "harmonic"):
        raise ValidationError("the decoherence experiment supports free or harmonic potentials")
    ts = timescales(params, cat.L)
    predicted = params.decoherence_rate(cat.L)
    t_lo = 10 * ts.cutoff_time
    t_hi = window_fraction * ts.decoherence_time if ts.decoherence_time else steps * dt
    if steps is None:
        if ts.decoherence_time is None:
            raise ValidationError("steps must be given when the decoherence time is undefined")
        steps = int(math.ceil(t_hi / dt))
    rho = cat_state_wavefunction(cat, grid).density_matrix()
    stepper = KramersStepper(params, grid, dt, terms)
    r = np.array(rho.values)
    times, peaks, trerr, mins, running = [], [], [], [], []

    def sample(t):
        tr = float(np.real(np.trace(r)) * grid.dx)
        lo = _positivity_watch(r, grid, t)
        W = wigner_transform(GridDensityMatrix(grid, (r + r.conj().T) / (2 * tr)), check_edges=False)
        times.append(t)
        peaks.append(interference_peak(W, cat))
        trerr.append(tr - 1.0)
        mins.append(lo)
        running.append(fit_decay_rate(times, peaks, (t_lo, t_hi)))

    sample(0.0)
    for i in range(1, steps + 1):
        r = stepper.step(r)
        _check_support(r, 1e-10)
        if i % sample_every == 0 or i == steps:
            sample(i * dt)
    _finish(r, grid, steps, 0)
    times = np.array(times)
    return DecoherenceSeries(
        times=times,
        peaks=np.array(peaks),
        trace_errors=np.array(trerr),
        min_eigenvalues=np.array(mins),
        running_rates=np.array(running),
        fitted_rate=fit_decay_rate(times, peaks, (t_lo, t_hi)),
        predicted_rate=predicted,
        fit_window=(t_lo, t_hi),
    )
