"""Discrete conserved quantities, stability limits and solution-size bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .core import ENERGY_CONSERVING, MOMENTUM_CONSERVING, ContractError, SchemeKind
from .grid import GridSpec, tilde
from .model import KState, ModelParams, SpectralState, StabilityRule, StatePair, stability_limit

__all__ = ["EnergyBreakdown", "BoundsReport", "StabilityRule", "energy", "angular_momentum",
           "stability_limit", "bounds_report", "conservation_residual", "relative_fluctuation",
           "damped_momentum_ratio", "boundary_terms", "SPECTRAL_WEIGHT", "state_norms", "component_energy"]

# Weight of the modal inner product.  With 1/2 the modal norms coincide with
# the L2 norm on the unit interval (Parseval for the sine series), so modal
# and grid energies and tension factors are directly comparable.
SPECTRAL_WEIGHT = 0.5
FLUCTUATION_FLOOR = 1e-30


@dataclass(frozen=True)
class EnergyBreakdown:
    kinetic: float
    potential: float
    total: float

    @classmethod
    def of(cls, kinetic: float, potential: float) -> "EnergyBreakdown":
        return cls(float(kinetic), float(potential), float(kinetic + potential))


def _ip(a: np.ndarray, b: np.ndarray, h: float) -> float:
    return float(h * np.sum(a * b))


def _strains(state: StatePair, grid: GridSpec):
    h = grid.h_x
    return (np.diff(state.u_prev) / h, np.diff(state.u_curr) / h,
            np.diff(state.v_prev, axis=0) / h, np.diff(state.v_curr, axis=0) / h)


def _full_energy(scheme: SchemeKind, state: StatePair, m: ModelParams, grid: GridSpec) -> EnergyBreakdown:
    h, ht, a = grid.h_x, grid.h_t, m.alpha
    kinetic = 0.5 * (_ip(state.u_curr - state.u_prev, state.u_curr - state.u_prev, h)
                     + _ip(state.v_curr - state.v_prev, state.v_curr - state.v_prev, h)) / ht**2
    pp, pc, qp, qc = _strains(state, grid)
    zc, zp = np.sum(qc * qc, axis=1), np.sum(qp * qp, axis=1)
    pq = _ip(qc, qp, h)
    if scheme is SchemeKind.S_B:
        potential = (0.5 * a * _ip(pc, pp, h) + 0.5 * a * pq
                     + 0.5 * (1 - a) * _ip(pc + 0.5 * zc, pp + 0.5 * zp, h))
    elif scheme in (SchemeKind.S_C, SchemeKind.S_D):
        p_avg = 0.5 * (pc + pp)
        qq = np.sum(qc * qp, axis=1)
        potential = (0.5 * _ip(pc, pp, h) + 0.5 * a * pq
                     + 0.5 * (1 - a) * (_ip(p_avg + 0.5 * qq, p_avg + 0.5 * qq, h) - _ip(p_avg, p_avg, h)))
        if scheme is SchemeKind.S_C:
            cross = np.sum(tilde(qc) * qp, axis=1)
            potential += 0.125 * (1 - a) * _ip(cross, cross, h)
    elif scheme is SchemeKind.S_E:
        def excess(p, z):
            return _ip(p + 0.5 * z, p + 0.5 * z, h) - _ip(p, p, h)
        potential = (0.5 * _ip(pc, pp, h) + 0.5 * a * pq
                     + 0.25 * (1 - a) * (excess(pc, zc) + excess(pp, zp)))
    else:
        raise ContractError(f"{scheme.value} has no conserved energy")
    if m.tau or m.nu:
        dp, dq = pc - pp, qc - qp
        potential += 0.125 * (m.tau * _ip(dp, dp, h) + a * m.nu * _ip(dq, dq, h))
    return EnergyBreakdown.of(kinetic, potential)


def _tension_potential(W: float, alpha: float) -> float:
    return 0.5 * alpha * W * (1.0 + W / (4.0 * alpha))


def _wavenumbers(M: int) -> np.ndarray:
    return np.pi * np.arange(1, M + 1)


def energy(scheme: SchemeKind | str, state, m: ModelParams, grid: GridSpec) -> EnergyBreakdown:
    """Discrete energy of the scheme, evaluated from the two stored levels.

    For the modal scheme only ``grid.h_t`` is used.
    """
    scheme = SchemeKind.parse(scheme)
    if scheme not in ENERGY_CONSERVING:
        raise ContractError(f"{scheme.value} has no conserved energy")
    if scheme.is_full:
        if not isinstance(state, StatePair):
            raise ContractError("full-model energy needs a StatePair")
        return _full_energy(scheme, state, m, grid)
    if scheme is SchemeKind.K_SPECTRAL:
        if not isinstance(state, SpectralState):
            raise ContractError("modal energy needs a SpectralState")
        wk = _wavenumbers(state.M)[:, None]
        dc = (state.coeffs_curr - state.coeffs_prev) / grid.h_t
        kinetic = 0.5 * SPECTRAL_WEIGHT * float(np.sum(dc * dc))
        W = SPECTRAL_WEIGHT * float(np.sum((wk * state.coeffs_curr) * (wk * state.coeffs_prev)))
        return EnergyBreakdown.of(kinetic, _tension_potential(W, m.alpha))
    if m.tau or m.nu:
        raise ContractError("implicitness weights are defined for the full model only")
    state = _as_kstate(state)
    h = grid.h_x
    dv = state.v_curr - state.v_prev
    kinetic = 0.5 * _ip(dv, dv, h) / grid.h_t**2
    W = _ip(np.diff(state.v_curr, axis=0), np.diff(state.v_prev, axis=0), h) / h**2
    return EnergyBreakdown.of(kinetic, _tension_potential(W, m.alpha))


def _as_kstate(state) -> KState:
    if isinstance(state, KState):
        return state
    if isinstance(state, StatePair):
        return KState.from_pair(state)
    raise ContractError(f"expected a grid state, got {type(state).__name__}")


def angular_momentum(scheme: SchemeKind | str, state, grid: GridSpec, m: ModelParams | None = None) -> float:
    """Discrete axial angular momentum conserved by the scheme.

    ``s_b`` and ``s_e`` need ``m`` for the stiffness-weighted correction.
    """
    scheme = SchemeKind.parse(scheme)
    if scheme not in MOMENTUM_CONSERVING:
        raise ContractError(f"{scheme.value} has no conserved angular momentum")
    if scheme is SchemeKind.K_SPECTRAL:
        c_avg = 0.5 * (state.coeffs_curr + state.coeffs_prev)
        dc = (state.coeffs_curr - state.coeffs_prev) / grid.h_t
        return SPECTRAL_WEIGHT * float(np.sum(tilde(c_avg) * dc))
    v_prev, v_curr = state.v_prev, state.v_curr
    h = grid.h_x
    value = _ip(tilde(0.5 * (v_curr + v_prev)), (v_curr - v_prev) / grid.h_t, h)
    if scheme in (SchemeKind.S_B, SchemeKind.S_E):
        if m is None:
            raise ContractError(f"{scheme.value} angular momentum needs the model parameters")
        qc = np.diff(v_curr, axis=0) / h
        qp = np.diff(v_prev, axis=0) / h
        value += 0.5 * m.alpha * grid.h_t * _ip(tilde(qc), qp, h)
    return value


def relative_fluctuation(series: Sequence[float], floor: float = FLUCTUATION_FLOOR) -> float:
    """``max_n |X_n - X_0| / max(|X_0|, floor)``."""
    x = np.asarray(series, dtype=float)
    if x.size < 2:
        raise ContractError("need at least two samples")
    return float(np.max(np.abs(x - x[0])) / max(abs(x[0]), floor))


def conservation_residual(energies: Sequence[EnergyBreakdown | float] | None,
                          momenta: Sequence[float] | None) -> tuple[float, float]:
    """Largest relative drift of the total energy and of the angular momentum.

    A quantity that was not recorded comes back as NaN.
    """
    dH = dA = math.nan
    if energies:
        totals = [e.total if isinstance(e, EnergyBreakdown) else float(e) for e in energies]
        dH = relative_fluctuation(totals)
    if momenta:
        dA = relative_fluctuation(momenta)
    return dH, dA


class DampedRatio(NamedTuple):
    ratio: float
    unphysical: bool


def damped_momentum_ratio(sigma_eta: float, h_t: float) -> DampedRatio:
    """Per-step decay factor of the angular momentum under transverse damping.

    ``unphysical`` is set once ``h_t >= 2/sigma``, where the factor stops
    being positive.
    """
    if not h_t > 0:
        raise ContractError("time step must be positive")
    x = 0.5 * h_t * sigma_eta
    return DampedRatio((1.0 - x) / (1.0 + x), bool(sigma_eta > 0 and h_t * sigma_eta >= 2.0))


@dataclass(frozen=True)
class BoundsReport:
    """Bounds on ``|xi^n|`` and ``|eta^n|``; NaN where a bound does not apply."""

    general_xi: float
    general_eta: float
    fixed_xi: float
    fixed_eta: float
    violated_xi: bool = False
    violated_eta: bool = False

    @property
    def violated(self) -> bool:
        return self.violated_xi or self.violated_eta


def _energy_margins(scheme: SchemeKind, m: ModelParams, grid: GridSpec, modes: int):
    """Coefficients ``c`` with ``H >= (c/2)|velocity|^2`` for each component."""
    lam2, a = grid.lam**2, m.alpha
    if scheme in (SchemeKind.S_C, SchemeKind.S_D, SchemeKind.S_E):
        c = 2.0 - a if scheme is SchemeKind.S_E else 1.0
        return 1.0 - (c - m.tau) * lam2, 1.0 - a * (1.0 - m.nu) * lam2
    if scheme is SchemeKind.K_B:
        return math.nan, 1.0 - a * lam2
    if scheme is SchemeKind.K_SPECTRAL:
        return math.nan, 1.0 - a * (grid.h_t * math.pi * modes) ** 2 / 4.0
    return None


def bounds_report(scheme: SchemeKind | str, m: ModelParams, H0: float, xi0_norm: float,
                  eta0_norm: float, grid: GridSpec, n: int, xi_norm: float | None = None,
                  eta_norm: float | None = None, modes: int = 32) -> BoundsReport:
    """Size bounds after ``n`` steps from an initial energy ``H0``.

    The general bounds grow linearly in ``n``; the fixed-end bounds use the
    zero displacement at an end and do not grow.  A bound whose energy margin
    is not positive (Courant number at or above the limit) is infinite.
    Schemes without an energy bound report infinity throughout.
    """
    scheme = SchemeKind.parse(scheme)
    if n < 0:
        raise ContractError("step count must be nonnegative")
    margins = _energy_margins(scheme, m, grid, modes)
    if margins is None:
        inf = math.inf
        return BoundsReport(inf, inf, inf, inf)
    H0 = max(float(H0), 0.0)

    def velocity_bound(c):
        if math.isnan(c):
            return math.nan
        return math.sqrt(2.0 * H0 / c) if c > 0 else math.inf

    vx, ve = velocity_bound(margins[0]), velocity_bound(margins[1])
    strain = math.sqrt(2.0 * H0 / m.alpha)
    general_xi = xi0_norm + grid.h_t * n * vx if n else xi0_norm
    general_eta = eta0_norm + grid.h_t * n * ve if n else eta0_norm
    if scheme is SchemeKind.K_SPECTRAL:
        fixed_xi = fixed_eta = math.nan
    else:
        fixed_xi = grid.N * grid.h_x * strain + 0.5 * grid.h_t * vx
        fixed_eta = grid.N * grid.h_x * strain + 0.5 * grid.h_t * ve

    def exceeds(value, *limits):
        if value is None:
            return False
        slack = 1e-12 * max(1.0, abs(value))
        return any(not math.isnan(b) and value > b + slack for b in limits)

    return BoundsReport(general_xi, general_eta, fixed_xi, fixed_eta,
                        exceeds(xi_norm, general_xi, fixed_xi),
                        exceeds(eta_norm, general_eta, fixed_eta))


def component_energy(state, component: int, m: ModelParams, grid: GridSpec) -> float:
    """Linear wave energy carried by one transverse component of a grid state.

    ``1/2 |d_t eta_c|^2 + alpha/2 <q_c^n, q_c^{n-1}>``; it measures how much
    motion has been transferred out of the plane of an initially planar run.
    """
    if component not in (0, 1):
        raise ContractError(f"component must be 0 or 1, got {component}")
    if isinstance(state, SpectralState):
        raise ContractError("component energy is defined for grid states")
    h = grid.h_x
    v, vp = state.v_curr[:, component], state.v_prev[:, component]
    kinetic = 0.5 * _ip(v - vp, v - vp, h) / grid.h_t**2
    return kinetic + 0.5 * m.alpha * _ip(np.diff(v), np.diff(vp), h) / h**2


def state_norms(state, grid: GridSpec) -> tuple[float, float]:
    """Grid norms of the current longitudinal and transverse displacement."""
    h = grid.h_x
    if isinstance(state, SpectralState):
        return 0.0, math.sqrt(SPECTRAL_WEIGHT * float(np.sum(state.coeffs_curr**2)))
    eta = math.sqrt(_ip(state.v_curr, state.v_curr, h))
    if isinstance(state, StatePair):
        return math.sqrt(_ip(state.u_curr, state.u_curr, h)), eta
    return 0.0, eta


def boundary_terms(velocity_xi: tuple[float, float], velocity_eta: tuple[np.ndarray, np.ndarray],
                   stress_xi: tuple[float, float], stress_eta: tuple[np.ndarray, np.ndarray],
                   eta_ends: tuple[np.ndarray, np.ndarray]) -> tuple[float, float]:
    """Power and torque delivered through the two ends of the string.

    Arguments are ``(left, right)`` pairs: end velocities (centred time
    differences), the stresses at the adjacent staggered points and the end
    displacements.  Both terms vanish identically for fixed ends.
    """
    (vl, vr), (wl, wr) = velocity_xi, velocity_eta
    (sl, sr), (tl, tr) = stress_xi, stress_eta
    (el, er) = eta_ends
    power = vr * sr - vl * sl + float(np.dot(wr, tr) - np.dot(wl, tl))
    torque = float(np.dot(tilde(er), tr) - np.dot(tilde(el), tl))
    return float(power), torque
