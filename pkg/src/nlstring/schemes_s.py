"""Time stepping for the coupled longitudinal/transverse string model.

Schemes ``s_a`` to ``s_d`` advance through their linear update systems; the
fully averaged scheme ``s_e`` has no such form and is solved by fixed-point
iteration on the new level.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ContractError, ConvergenceError, SchemeKind
from .grid import GridSpec, divergence
from .linear import (MATRIX_SCHEMES, assemble_update, linear_parts, solve_report,
                     stack_interior, unstack_interior)
from .model import ModelParams, StatePair

SE_TOL_FACTOR = 1e-13
SE_MAX_ITER = 100


@dataclass(frozen=True)
class StepOutcome:
    next: StatePair
    solver_residual: float
    iterations: int
    condition_estimate: float


def _check(state: StatePair, grid: GridSpec) -> None:
    if state.N != grid.N:
        raise ContractError(f"state has N={state.N}, grid has N={grid.N}")


def advance(state: StatePair, u_next: np.ndarray, v_next: np.ndarray) -> StatePair:
    return StatePair(state.u_curr, u_next, state.v_curr, v_next, state.step + 1)


def step_s(scheme: SchemeKind | str, m: ModelParams, state: StatePair, grid: GridSpec,
           estimate_condition: bool = False) -> StepOutcome:
    """One step of a scheme with a matrix update form."""
    scheme = SchemeKind.parse(scheme)
    if scheme not in MATRIX_SCHEMES:
        raise ContractError(f"{scheme.value} has no matrix update; see step_s_e")
    _check(state, grid)
    mats = assemble_update(scheme, m, state, grid)
    w_prev, w_curr = stack_interior(state)
    rhs = mats.B.matvec(w_curr) - mats.C.matvec(w_prev)
    result = solve_report(mats.A, rhs, estimate_condition)
    u, v = unstack_interior(result.x, grid.N)
    return StepOutcome(advance(state, u, v), result.residual, 1, result.condition_estimate)


def averaged_nonlinear_force(m: ModelParams, state: StatePair, u_next: np.ndarray,
                             v_next: np.ndarray, grid: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    """Nonlinear part of ``h_t^2`` times the forcing of ``s_e`` on interior nodes.

    Both the squared transverse strain and the stress factor are averaged over
    levels n+1 and n-1, which is what makes the scheme conservative and
    keeps it implicit in a nonlinear way.
    """
    h = grid.h_x
    q_next = np.diff(v_next, axis=0) / h
    q_prev = np.diff(state.v_prev, axis=0) / h
    p_next = np.diff(u_next) / h
    p_prev = np.diff(state.u_prev) / h
    z_avg = 0.5 * (np.sum(q_next**2, axis=1) + np.sum(q_prev**2, axis=1))
    p_avg = 0.5 * (p_next + p_prev)
    q_avg = 0.5 * (q_next + q_prev)
    c = 0.5 * (1.0 - m.alpha) * grid.h_t**2
    force_u = c * divergence(z_avg, h)
    force_v = c * divergence(((z_avg + 2.0 * p_avg))[:, None] * q_avg, h)
    return force_u, force_v


def step_s_e(m: ModelParams, state: StatePair, grid: GridSpec, tol: float | None = None,
             max_iter: int = SE_MAX_ITER, estimate_condition: bool = False) -> StepOutcome:
    """One step of ``s_e`` by fixed-point iteration.

    Each sweep evaluates the nonlinear forcing at the latest iterate and solves
    the linear part, which is the identity unless damping or implicitness
    weights are active.  Iteration stops when the max-norm change between
    sweeps falls to ``tol`` (default ``1e-13 * (1 + |w^n|_inf)``).
    """
    _check(state, grid)
    n = grid.N - 1
    w_prev, w_curr = stack_interior(state)
    if tol is None:
        tol = SE_TOL_FACTOR * (1.0 + float(np.max(np.abs(w_curr))))
    lin = linear_parts(m, grid)
    base = lin.B.matvec(w_curr) - lin.C.matvec(w_prev)
    w = 2.0 * w_curr - w_prev
    residual, cond, change = 0.0, np.nan, np.inf
    for it in range(1, max_iter + 1):
        u, v = unstack_interior(w, grid.N)
        fu, fv = averaged_nonlinear_force(m, state, u, v, grid)
        rhs = base + np.concatenate([fu, fv[:, 0], fv[:, 1]])
        result = solve_report(lin.A, rhs, estimate_condition and it == 1)
        if it == 1:
            cond = result.condition_estimate
        residual = result.residual
        change = float(np.max(np.abs(result.x - w)))
        w = result.x
        if not np.isfinite(change):
            break
        if change <= tol:
            u, v = unstack_interior(w, grid.N)
            return StepOutcome(advance(state, u, v), residual, it, cond)
    raise ConvergenceError("s_e fixed-point iteration did not converge", it, change)


def step_full(scheme: SchemeKind | str, m: ModelParams, state: StatePair, grid: GridSpec,
              estimate_condition: bool = False) -> StepOutcome:
    scheme = SchemeKind.parse(scheme)
    if scheme is SchemeKind.S_E:
        return step_s_e(m, state, grid, estimate_condition=estimate_condition)
    return step_s(scheme, m, state, grid, estimate_condition)
