"""Scheme identifiers and the error types shared across the package."""

from __future__ import annotations

from enum import Enum


class SchemeKind(str, Enum):
    """Identifier of a time-stepping scheme.

    ``s_*`` schemes integrate the full transverse/longitudinal system,
    ``k_*`` schemes the tension-modulated transverse-only system and
    ``k_spectral`` is the modal version of ``k_b``.
    """

    S_A = "s_a"
    S_B = "s_b"
    S_C = "s_c"
    S_D = "s_d"
    S_E = "s_e"
    K_A = "k_a"
    K_B = "k_b"
    K_SPECTRAL = "k_spectral"

    @property
    def is_full(self) -> bool:
        return self.value.startswith("s_")

    @property
    def is_modal(self) -> bool:
        return self is SchemeKind.K_SPECTRAL

    @classmethod
    def parse(cls, name: "str | SchemeKind") -> "SchemeKind":
        if isinstance(name, SchemeKind):
            return name
        key = str(name).strip().lower()
        for kind in cls:
            if kind.value == key:
                return kind
        raise ValueError(f"unknown scheme {name!r}; expected one of "
                         f"{', '.join(k.value for k in cls)}")


FULL_SCHEMES = tuple(k for k in SchemeKind if k.is_full)
STRING_K_SCHEMES = (SchemeKind.K_A, SchemeKind.K_B)

# schemes whose discrete angular momentum is exactly conserved
MOMENTUM_CONSERVING = (SchemeKind.S_A, SchemeKind.S_B, SchemeKind.S_D, SchemeKind.S_E,
                       SchemeKind.K_A, SchemeKind.K_B, SchemeKind.K_SPECTRAL)
# schemes whose discrete energy is exactly conserved
ENERGY_CONSERVING = (SchemeKind.S_B, SchemeKind.S_C, SchemeKind.S_D, SchemeKind.S_E,
                     SchemeKind.K_B, SchemeKind.K_SPECTRAL)


class ContractError(ValueError):
    """An argument violates a documented shape, domain or range requirement."""


class SolverError(RuntimeError):
    """The linear update system is singular or too ill-conditioned to trust."""

    def __init__(self, message: str, condition_estimate: float = float("inf")):
        super().__init__(f"{message} (condition estimate {condition_estimate:.3e})")
        self.condition_estimate = condition_estimate


class ConvergenceError(RuntimeError):
    """The fixed-point iteration of an implicit nonlinear step did not converge."""

    def __init__(self, message: str, iterations: int, increment: float):
        super().__init__(f"{message} after {iterations} iterations "
                         f"(last increment {increment:.3e})")
        self.iterations = iterations
        self.increment = increment


class InstabilityError(RuntimeError):
    """The state norm exceeded the abort threshold."""

    def __init__(self, step: int, norm: float, threshold: float):
        super().__init__(f"state norm {norm:.3e} exceeded {threshold:.3e} at step {step}")
        self.step = step
        self.norm = norm
        self.threshold = threshold
