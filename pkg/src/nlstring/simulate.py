"""Generic time loop over any scheme, with per-step observers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .core import ContractError, InstabilityError, SchemeKind
from .grid import GridSpec
from .model import KState, ModelParams, SpectralState, StatePair
from .schemes_k import gamma_k, spectral_gamma, step_k, step_spectral
from .schemes_s import step_full

DEFAULT_ABORT_NORM = 1e6


@dataclass(frozen=True)
class StepInfo:
    """What a single update reports besides the new state."""

    residual: float = 0.0
    iterations: int = 0
    condition_estimate: float = math.nan
    gamma: float = math.nan


@dataclass(frozen=True)
class RunSummary:
    final: StatePair | KState | SpectralState
    steps: int
    max_residual: float
    max_condition: float
    total_iterations: int


Stepper = Callable[[object], tuple[object, StepInfo]]
Observer = Callable[[object, StepInfo], None]


def make_stepper(scheme: SchemeKind | str, m: ModelParams, grid: GridSpec,
                 estimate_condition: bool = False) -> Stepper:
    """Return ``state -> (next_state, info)`` for the scheme.

    For the tension-modulated schemes ``info.gamma`` is the tension factor
    used in the update that was just taken.
    """
    scheme = SchemeKind.parse(scheme)
    if scheme.is_full:
        def full(state):
            out = step_full(scheme, m, state, grid, estimate_condition)
            return out.next, StepInfo(out.solver_residual, out.iterations, out.condition_estimate)
        return full
    if scheme.is_modal:
        def modal(state):
            return step_spectral(m, state, grid.h_t), StepInfo(gamma=spectral_gamma(state, m, grid.h_t))
        return modal

    def kirchhoff(state):
        return step_k(scheme, m, state, grid), StepInfo(gamma=gamma_k(scheme, state, m, grid))
    return kirchhoff


def coerce_state(scheme: SchemeKind, state):
    if scheme.is_full and not isinstance(state, StatePair):
        raise ContractError(f"{scheme.value} needs longitudinal and transverse levels")
    if scheme.is_modal and not isinstance(state, SpectralState):
        raise ContractError("the modal scheme needs sine coefficients")
    if not scheme.is_full and not scheme.is_modal and isinstance(state, StatePair):
        return KState.from_pair(state)
    return state


def _size(state) -> float:
    if isinstance(state, SpectralState):
        return float(np.max(np.abs(state.coeffs_curr)))
    size = float(np.max(np.abs(state.v_curr)))
    if isinstance(state, StatePair):
        size = max(size, float(np.max(np.abs(state.u_curr))))
    return size


def run(scheme: SchemeKind | str, m: ModelParams, initial, grid: GridSpec, steps: int,
        observers: Iterable[Observer] = (), abort_norm: float = DEFAULT_ABORT_NORM,
        estimate_condition: bool = False) -> RunSummary:
    """Advance ``steps`` times, calling each observer on the initial and every new state.

    The initial state is observed with an empty ``StepInfo``.  A state whose
    max-norm exceeds ``abort_norm`` or is not finite raises ``InstabilityError``.
    """
    scheme = SchemeKind.parse(scheme)
    if steps < 1:
        raise ContractError(f"steps must be positive, got {steps}")
    state = coerce_state(scheme, initial)
    stepper = make_stepper(scheme, m, grid, estimate_condition)
    observers = tuple(observers)
    for obs in observers:
        obs(state, StepInfo())
    max_res, max_cond, iters = 0.0, math.nan, 0
    for _ in range(steps):
        # overflow on the way to a blow-up is caught by the size check below
        with np.errstate(over="ignore", invalid="ignore"):
            state, info = stepper(state)
        size = _size(state)
        if not math.isfinite(size) or size > abort_norm:
            raise InstabilityError(state.step, size, abort_norm)
        max_res = max(max_res, info.residual)
        if math.isfinite(info.condition_estimate):
            max_cond = info.condition_estimate if math.isnan(max_cond) else max(max_cond, info.condition_estimate)
        iters += info.iterations
        for obs in observers:
            obs(state, info)
    return RunSummary(state, steps, max_res, max_cond, iters)
