"""Explicit schemes for the tension-modulated (transverse-only) model.

``k_a`` evaluates the tension factor at the current level.  ``k_b`` uses the
level-averaged factor, which is implicit as written but solvable in closed
form because the update is linear in the new level once the factor is known.
The modal scheme does the same for a truncated sine series.
"""

from __future__ import annotations

import numpy as np

from .core import ContractError, SchemeKind
from .diagnostics import SPECTRAL_WEIGHT
from .grid import GridSpec
from .model import KState, ModelParams, SpectralState, StatePair


def _strain(v: np.ndarray, h: float) -> np.ndarray:
    return np.diff(v, axis=0) / h


def gamma_k(scheme: SchemeKind | str, state: KState, m: ModelParams, grid: GridSpec) -> float:
    """Tension factor of ``k_a`` or ``k_b`` at the current level.

    For ``k_b`` the averaged definition ``1 + <q^n, (q^{n+1} + q^{n-1})/2>/(2 alpha)``
    is eliminated against the update itself; transverse damping enters
    through ``a = h_t sigma_eta / 2``.
    """
    scheme = SchemeKind.parse(scheme)
    h = grid.h_x
    q = _strain(state.v_curr, h)
    if scheme is SchemeKind.K_A:
        return 1.0 + h * float(np.sum(q * q)) / (2.0 * m.alpha)
    if scheme is not SchemeKind.K_B:
        raise ContractError(f"{scheme.value} is not a grid scheme for the tension-modulated model")
    a = 0.5 * grid.h_t * m.sigma_eta
    q_prev = _strain(state.v_prev, h)
    r = np.diff(q, axis=0) / h
    num = 1.0 + h * float(np.sum(q * (q + a * q_prev))) / (2.0 * m.alpha * (1.0 + a))
    den = 1.0 + grid.h_t**2 * h * float(np.sum(r * r)) / (4.0 * (1.0 + a))
    return num / den


def step_k(scheme: SchemeKind | str, m: ModelParams, state: KState, grid: GridSpec) -> KState:
    """Advance one step; boundary nodes stay at zero."""
    scheme = SchemeKind.parse(scheme)
    if isinstance(state, StatePair):
        state = KState.from_pair(state)
    if state.N != grid.N:
        raise ContractError(f"state has N={state.N}, grid has N={grid.N}")
    if m.tau or m.nu:
        raise ContractError("implicitness weights are defined for the full model only")
    G = gamma_k(scheme, state, m, grid)
    a = 0.5 * grid.h_t * m.sigma_eta
    v, vp = state.v_curr, state.v_prev
    lap = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / grid.h_x**2
    nxt = np.zeros_like(v)
    nxt[1:-1] = (2.0 * v[1:-1] - (1.0 - a) * vp[1:-1]
                 + grid.h_t**2 * m.alpha * G * lap) / (1.0 + a)
    return KState(v, nxt, state.step + 1)


def spectral_gamma(state: SpectralState, m: ModelParams, h_t: float) -> float:
    """Closed-form averaged tension factor of the modal scheme."""
    kappa = (np.pi * np.arange(1, state.M + 1))[:, None]
    c, cp = state.coeffs_curr, state.coeffs_prev
    a = 0.5 * h_t * m.sigma_eta
    w = SPECTRAL_WEIGHT
    num = 1.0 + w * float(np.sum(kappa**2 * c * (c + a * cp))) / (2.0 * m.alpha * (1.0 + a))
    den = 1.0 + h_t**2 * w * float(np.sum(kappa**4 * c * c)) / (4.0 * (1.0 + a))
    return num / den


def step_spectral(m: ModelParams, state: SpectralState, h_t: float) -> SpectralState:
    if m.tau or m.nu:
        raise ContractError("implicitness weights are defined for the full model only")
    G = spectral_gamma(state, m, h_t)
    a = 0.5 * h_t * m.sigma_eta
    kappa2 = ((np.pi * np.arange(1, state.M + 1)) ** 2)[:, None]
    c, cp = state.coeffs_curr, state.coeffs_prev
    nxt = (2.0 * c - (1.0 - a) * cp - h_t**2 * m.alpha * G * kappa2 * c) / (1.0 + a)
    return SpectralState(c, nxt, state.step + 1)


def _sine_table(M: int, N: int) -> np.ndarray:
    i = np.arange(N + 1)
    k = np.arange(1, M + 1)
    s = np.sin(np.pi * np.outer(i, k) / N)
    s[0] = s[-1] = 0.0
    return s


def spectral_synthesize(state: SpectralState, N: int) -> np.ndarray:
    """Sum of the sine series of the current level at the nodes of an ``N``-interval grid."""
    if N < 2:
        raise ContractError(f"need N >= 2, got {N}")
    return _sine_table(state.M, N) @ state.coeffs_curr


def spectral_project(v: np.ndarray, M: int) -> np.ndarray:
    """Sine coefficients of a nodal field by discrete orthogonality (exact for ``M < N``)."""
    N = v.shape[0] - 1
    if M >= N:
        raise ContractError(f"projection onto {M} modes needs more than {M} intervals")
    return (2.0 / N) * _sine_table(M, N).T @ v


def spectral_from_grid(state: StatePair | KState, M: int) -> SpectralState:
    return SpectralState(spectral_project(state.v_prev, M), spectral_project(state.v_curr, M),
                         state.step)


def spectral_modal(gamma1: float, gamma2: float, M: int, h_t: float) -> SpectralState:
    """Modal counterpart of the first-mode grid initial state."""
    prev = np.zeros((M, 2))
    prev[0, 0] = gamma1
    curr = prev.copy()
    curr[0, 1] = h_t * gamma2
    return SpectralState(prev, curr, step=1)
