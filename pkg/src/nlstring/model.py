"""String parameters, state containers, grid selection and initial conditions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ContractError, SchemeKind
from .grid import GridSpec


@dataclass(frozen=True)
class PhysicalParams:
    """Dimensional string data in SI units."""

    E: float      # Young's modulus, Pa
    A: float      # cross-sectional area, m^2
    rho: float    # linear mass density, kg/m
    T0: float     # nominal tension, N
    L: float      # length, m

    def __post_init__(self):
        for name in ("E", "A", "rho", "T0", "L"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ContractError(f"{name} must be positive and finite, got {value}")
        if self.T0 > self.E * self.A:
            raise ContractError("tension exceeds E*A; the stiffness ratio would exceed 1")


@dataclass(frozen=True)
class ModelParams:
    """Nondimensional model: stiffness ratio, losses and implicitness weights."""

    alpha: float
    sigma_xi: float = 0.0
    sigma_eta: float = 0.0
    tau: float = 0.0
    nu: float = 0.0

    def __post_init__(self):
        if not (0.0 < self.alpha <= 1.0):
            raise ContractError(f"alpha must lie in (0, 1], got {self.alpha}")
        for name in ("sigma_xi", "sigma_eta", "tau", "nu"):
            value = getattr(self, name)
            if not (value >= 0 and math.isfinite(value)):
                raise ContractError(f"{name} must be nonnegative and finite, got {value}")

    @property
    def beta(self) -> float:
        return 0.5 * (self.alpha - 1.0)

    @property
    def damped(self) -> bool:
        return self.sigma_xi > 0 or self.sigma_eta > 0

    @property
    def generalized(self) -> bool:
        return self.tau > 0 or self.nu > 0


def nondimensionalize(p: PhysicalParams) -> tuple[ModelParams, float]:
    """Return the model parameters and the time unit in seconds."""
    EA = p.E * p.A
    return ModelParams(alpha=p.T0 / EA), math.sqrt(p.rho * p.L**2 / EA)


def _frozen(a, shape_tail=()) -> np.ndarray:
    a = np.array(a, dtype=float)
    if a.shape[1:] != shape_tail:
        raise ContractError(f"expected trailing shape {shape_tail}, got {a.shape}")
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class StatePair:
    """Longitudinal ``u`` and transverse ``v`` displacement at steps n-1 and n."""

    u_prev: np.ndarray
    u_curr: np.ndarray
    v_prev: np.ndarray
    v_curr: np.ndarray
    step: int = 1

    def __post_init__(self):
        for name in ("u_prev", "u_curr"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        for name in ("v_prev", "v_curr"):
            object.__setattr__(self, name, _frozen(getattr(self, name), (2,)))
        n = self.u_curr.shape[0]
        if any(a.shape[0] != n for a in (self.u_prev, self.v_prev, self.v_curr)):
            raise ContractError("all levels must cover the same nodes")
        for a in (self.u_prev, self.u_curr, self.v_prev, self.v_curr):
            if np.any(a[0] != 0.0) or np.any(a[-1] != 0.0):
                raise ContractError("fixed ends must hold exactly zero displacement")

    @property
    def N(self) -> int:
        return self.u_curr.shape[0] - 1


@dataclass(frozen=True)
class KState:
    """Transverse displacement at steps n-1 and n for the tension-modulated model."""

    v_prev: np.ndarray
    v_curr: np.ndarray
    step: int = 1

    def __post_init__(self):
        for name in ("v_prev", "v_curr"):
            object.__setattr__(self, name, _frozen(getattr(self, name), (2,)))
        if self.v_prev.shape != self.v_curr.shape:
            raise ContractError("both levels must cover the same nodes")
        for a in (self.v_prev, self.v_curr):
            if np.any(a[0] != 0.0) or np.any(a[-1] != 0.0):
                raise ContractError("fixed ends must hold exactly zero displacement")

    @property
    def N(self) -> int:
        return self.v_curr.shape[0] - 1

    @classmethod
    def from_pair(cls, state: StatePair) -> "KState":
        return cls(state.v_prev, state.v_curr, state.step)


@dataclass(frozen=True)
class SpectralState:
    """Sine-series coefficients (mode k in row k-1) at steps n-1 and n."""

    coeffs_prev: np.ndarray
    coeffs_curr: np.ndarray
    step: int = 1

    def __post_init__(self):
        for name in ("coeffs_prev", "coeffs_curr"):
            object.__setattr__(self, name, _frozen(getattr(self, name), (2,)))
        if self.coeffs_prev.shape != self.coeffs_curr.shape or self.M < 1:
            raise ContractError("both levels need the same positive number of modes")

    @property
    def M(self) -> int:
        return self.coeffs_curr.shape[0]


@dataclass(frozen=True)
class StabilityRule:
    """Largest admissible Courant number, and time step for the modal scheme.

    ``lambda_max`` is ``None`` when no energy-based limit is known or needed.
    """

    scheme: SchemeKind
    lambda_max: float | None
    ht_max_spectral: float | None = None


def stability_limit(scheme: SchemeKind | str, m: ModelParams, modes: int = 32) -> StabilityRule:
    """Courant-number limit under which the discrete energy is nonnegative.

    With implicitness weights ``tau`` and ``nu`` the longitudinal condition
    reads ``(c - tau) lam^2 <= 1`` (``c = 1``, or ``2 - alpha`` for ``s_e``)
    and the transverse one ``alpha (1 - nu) lam^2 <= 1``; a condition whose
    left side is never positive imposes nothing.
    """
    scheme = SchemeKind.parse(scheme)
    if scheme is SchemeKind.K_SPECTRAL:
        if modes < 1:
            raise ContractError("modal scheme needs at least one mode")
        return StabilityRule(scheme, None, 2.0 / (math.pi * modes) / math.sqrt(m.alpha))
    if scheme is SchemeKind.K_B:
        return StabilityRule(scheme, 1.0 / math.sqrt(m.alpha))
    if scheme in (SchemeKind.S_C, SchemeKind.S_D, SchemeKind.S_E):
        c = 2.0 - m.alpha if scheme is SchemeKind.S_E else 1.0
        limits = []
        if c - m.tau > 0:
            limits.append(1.0 / math.sqrt(c - m.tau))
        if 1.0 - m.nu > 0:
            limits.append(1.0 / math.sqrt(m.alpha * (1.0 - m.nu)))
        return StabilityRule(scheme, min(limits) if limits else None)
    return StabilityRule(scheme, None)


def reference_scheme(scheme: SchemeKind) -> SchemeKind:
    """Conservative scheme whose limit sizes the grid of an unconstrained one."""
    return SchemeKind.S_D if scheme.is_full else SchemeKind.K_B


def make_grid(h_t: float, scheme: SchemeKind | str, m: ModelParams,
              lambda_fraction: float = 1.0, reference_lambda: float | None = None) -> GridSpec:
    """Finest grid whose Courant number stays within ``lambda_fraction`` of the limit.

    Schemes without a limit borrow ``reference_lambda`` or, failing that, the
    limit of the matching conservative scheme with no implicitness weights.
    """
    scheme = SchemeKind.parse(scheme)
    if not h_t > 0:
        raise ContractError(f"time step must be positive, got {h_t}")
    if not 0 < lambda_fraction <= 1:
        raise ContractError(f"lambda_fraction must lie in (0, 1], got {lambda_fraction}")
    if scheme.is_modal:
        raise ContractError("the modal scheme has no spatial grid; use a fixed N for output")
    lam_max = stability_limit(scheme, m).lambda_max
    if lam_max is None:
        if reference_lambda is not None:
            lam_max = float(reference_lambda)
        else:
            base = ModelParams(alpha=m.alpha)
            lam_max = stability_limit(reference_scheme(scheme), base).lambda_max
    N = int(math.floor(lambda_fraction * lam_max / h_t * (1 + 1e-12)))
    while N > 0 and h_t * N > lam_max:
        N -= 1
    if N < 2:
        raise ContractError(f"grid too coarse: h_t={h_t} allows only N={N} intervals")
    return GridSpec.from_intervals(N, h_t)


def _sine(grid: GridSpec) -> np.ndarray:
    s = np.sin(np.pi * grid.x)
    s[0] = s[-1] = 0.0
    return s


def initial_modal(gamma1: float, gamma2: float, grid: GridSpec) -> StatePair:
    """First-mode displacement in polarization 1 with a small velocity in polarization 2."""
    s = _sine(grid)
    zeros = np.zeros(grid.N + 1)
    v_prev = np.column_stack([gamma1 * s, zeros])
    v_curr = np.column_stack([gamma1 * s, grid.h_t * gamma2 * s])
    return StatePair(zeros, zeros, v_prev, v_curr, step=1)


def initial_perturbed_planar(gamma1: float, gamma2: float, seed: int, grid: GridSpec) -> StatePair:
    """Stationary first mode plus a seeded random perturbation of polarization 2."""
    rng = np.random.default_rng(seed)
    theta = rng.uniform(-1.0, 1.0, size=grid.N + 1)
    s = _sine(grid)
    v = np.column_stack([gamma1 * s, gamma2 * theta * s])
    zeros = np.zeros(grid.N + 1)
    return StatePair(zeros, zeros, v, v, step=1)


def continuous_energy_oracle(gamma1: float, gamma2: float, m: ModelParams, system: str) -> float:
    """Exact energy of the continuous first-mode initial state.

    Uses the integrals of ``sin^2``, ``cos^2`` and ``cos^4`` over the unit
    interval (1/2, 1/2 and 3/8).
    """
    a = m.alpha
    slope2 = gamma1**2 * math.pi**2 / 2.0
    kinetic = gamma2**2 / 4.0
    if system.upper() == "S":
        return kinetic + 0.5 * a * slope2 + (1 - a) / 8.0 * gamma1**4 * math.pi**4 * 3.0 / 8.0
    if system.upper() == "K":
        return kinetic + 0.5 * a * slope2 * (1.0 + slope2 / (4.0 * a))
    raise ContractError(f"system must be 'S' or 'K', got {system!r}")
