"""Pure-dephasing spin coupled to a finite oscillator bath.

    H = sum_k omega_k a_k^dag a_k + (sigma_z / 2) sum_k g_k (a_k + a_k^dag)

The bath starts in its vacuum and the spin in ``|+>``. Because ``sigma_z``
is conserved, each spin branch evolves every mode independently under
``omega_k n +- (g_k/2)(a + a^dag)``; the modes are truncated to ``n_max``
levels and evolved exactly by diagonalization. The spin coherence is

    rho_01(t) = rho_01(0) * prod_k <phi_k^-(t)|phi_k^+(t)>.

With all frequencies equal the bath is periodic and the coherence returns
at ``t = 2 pi / omega``; a spread of frequencies dephases the revivals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NumericalGuardError, ValidationError


@dataclass(frozen=True, eq=False)
class FiniteBath:
    frequencies: np.ndarray
    couplings: np.ndarray

    def __post_init__(self):
        w = np.atleast_1d(np.asarray(self.frequencies, dtype=float))
        g = np.atleast_1d(np.asarray(self.couplings, dtype=float))
        if w.shape != g.shape or w.ndim != 1:
            raise ValidationError("frequencies and couplings must be equal-length 1-D arrays")
        if np.any(w <= 0) or not np.all(np.isfinite(w)) or not np.all(np.isfinite(g)):
            raise ValidationError("bath frequencies must be positive and finite")
        object.__setattr__(self, "frequencies", w)
        object.__setattr__(self, "couplings", g)

    @property
    def n_modes(self) -> int:
        return self.frequencies.size

    @classmethod
    def degenerate(cls, n_modes: int, omega: float, coupling: float) -> "FiniteBath":
        return cls(np.full(n_modes, omega), np.full(n_modes, coupling))

    @classmethod
    def band(cls, n_modes: int, low: float, high: float, coupling_ratio: float, seed: int) -> "FiniteBath":
        """Frequencies uniform in ``[low, high]``; couplings ``g_k = ratio * omega_k``."""
        w = np.sort(np.random.default_rng(seed).uniform(low, high, n_modes))
        return cls(w, coupling_ratio * w)


def _mode_overlap(omega: float, g: float, times: np.ndarray, n_max: int, guard: float) -> np.ndarray:
    n = np.arange(n_max)
    a = np.diag(np.sqrt(n[1:]), 1)
    x = a + a.T
    branches = []
    for sign in (+1, -1):
        h = omega * np.diag(n.astype(float)) + sign * 0.5 * g * x
        e, v = np.linalg.eigh(h)
        c0 = v[0].conj()  # components of the vacuum in the eigenbasis
        phi = v @ (np.exp(-1j * np.outer(e, times)) * c0[:, None])
        top = float(np.max(np.abs(phi[-1]) ** 2))
        if top > guard:
            raise NumericalGuardError("truncation", f"population {top:.2e} in level n_max-1; raise n_max")
        branches.append(phi)
    plus, minus = branches
    return np.sum(minus.conj() * plus, axis=0)


def coherence_at(bath: FiniteBath, times, n_max: int = 12, truncation_guard: float = 1e-8) -> np.ndarray:
    """``|rho_01(t)|`` at arbitrary times for the spin starting in ``|+>``."""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    coh = np.full(times.shape, 0.5, dtype=complex)
    for w, g in zip(bath.frequencies, bath.couplings):
        coh *= _mode_overlap(w, g, times, n_max, truncation_guard)
    return np.abs(coh)


def finite_bath_recurrence(bath: FiniteBath, t_max: float, samples: int, n_max: int = 12,
                           truncation_guard: float = 1e-8) -> tuple[np.ndarray, np.ndarray]:
    """``(times, |rho_01(t)|)`` on ``samples`` evenly spaced times in ``[0, t_max]``."""
    times = np.linspace(0.0, t_max, samples)
    return times, coherence_at(bath, times, n_max, truncation_guard)


def coherence_closed_form(bath: FiniteBath, times) -> np.ndarray:
    """Untruncated result ``0.5 prod_k exp(-(g_k/omega_k)^2 (1 - cos omega_k t))``."""
    t = np.asarray(times, dtype=float)
    ratio2 = (bath.couplings / bath.frequencies) ** 2
    return 0.5 * np.exp(-np.sum(ratio2[:, None] * (1 - np.cos(np.outer(bath.frequencies, t))), axis=0))
