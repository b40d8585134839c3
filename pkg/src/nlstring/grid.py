"""Uniform grid, finite-difference and averaging operators, inner products.

Fields are plain numpy arrays.  A scalar field has shape ``(n,)`` and a planar
(two-component transverse) field has shape ``(n, 2)``.  The first grid index
covered by an array is implied by its length on a grid with ``N`` intervals:

=========  ================  =====================================
length     first index       used for
=========  ================  =====================================
``N + 2``  0                 values including one ghost at ``N+1``
``N + 1``  0                 nodal fields on ``[0..N]``
``N``      1                 strain-like fields on ``[1..N]``
``N - 1``  1                 interior unknowns ``[1..N-1]``
=========  ================  =====================================
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ContractError

_LAMBDA_RTOL = 8 * np.finfo(float).eps


@dataclass(frozen=True)
class GridSpec:
    """Grid on the unit interval with ``N`` intervals and time step ``h_t``."""

    N: int
    h_x: float
    h_t: float
    lam: float

    def __post_init__(self):
        if self.N < 2:
            raise ContractError(f"need at least 2 grid intervals, got N={self.N}")
        if not (self.h_t > 0 and np.isfinite(self.h_t)):
            raise ContractError(f"time step must be positive and finite, got {self.h_t}")
        if not np.isclose(self.h_x, 1.0 / self.N, rtol=_LAMBDA_RTOL, atol=0):
            raise ContractError("h_x must equal 1/N")
        if not np.isclose(self.lam, self.h_t / self.h_x, rtol=_LAMBDA_RTOL, atol=0):
            raise ContractError("lambda must equal h_t/h_x")

    @classmethod
    def from_intervals(cls, N: int, h_t: float) -> "GridSpec":
        N = int(N)
        if N < 2:
            raise ContractError(f"need at least 2 grid intervals, got N={N}")
        return cls(N=N, h_x=1.0 / N, h_t=float(h_t), lam=float(h_t) * N)

    @property
    def x(self) -> np.ndarray:
        """Node positions ``i*h_x`` for ``i = 0..N``."""
        return np.arange(self.N + 1) * self.h_x

    @property
    def mid(self) -> int:
        """Index of the node closest to the middle of the string (ties round up)."""
        return (self.N + 1) // 2


@dataclass(frozen=True)
class IndexRange:
    """Inclusive range of grid indices ``[first..last]``."""

    first: int
    last: int

    def __post_init__(self):
        if self.last < self.first:
            raise ContractError(f"empty index range [{self.first}..{self.last}]")

    @classmethod
    def nodes(cls, N: int) -> "IndexRange":
        """All nodes ``[0..N]``."""
        return cls(0, N)

    @classmethod
    def strains(cls, N: int) -> "IndexRange":
        """Staggered points ``[1..N]`` where backward differences live."""
        return cls(1, N)

    @classmethod
    def interior(cls, N: int) -> "IndexRange":
        return cls(1, N - 1)


def first_index(length: int, N: int) -> int:
    """Grid index of element 0 of an array of the given length."""
    if length in (N + 2, N + 1):
        return 0
    if length in (N, N - 1):
        return 1
    raise ContractError(f"array of length {length} does not fit a grid with N={N}")


def _check_planar_or_scalar(f: np.ndarray) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.ndim == 2 and f.shape[1] != 2:
        raise ContractError(f"planar fields need 2 components, got shape {f.shape}")
    if f.ndim not in (1, 2):
        raise ContractError(f"fields are 1-d or (n, 2) arrays, got shape {f.shape}")
    return f


def diff_backward(f: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Backward difference of a nodal field, returned on ``[1..N]``."""
    f = _check_planar_or_scalar(f)
    if f.shape[0] != grid.N + 1:
        raise ContractError(f"backward difference needs values on [0..{grid.N}], "
                            f"got {f.shape[0]} entries")
    return (f[1:] - f[:-1]) / grid.h_x


def diff_forward(f: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Forward difference returned on ``[0..N]``.

    The input must hold values on ``[0..N+1]``; the ghost at ``N+1`` is
    required even when only interior results are used.
    """
    f = _check_planar_or_scalar(f)
    if f.shape[0] != grid.N + 2:
        raise ContractError(f"forward difference needs values on [0..{grid.N + 1}], "
                            f"got {f.shape[0]} entries")
    return (f[1:] - f[:-1]) / grid.h_x


def divergence(f_strain: np.ndarray, h_x: float) -> np.ndarray:
    """Forward difference of a field on ``[1..N]``, evaluated on ``[1..N-1]``."""
    return (f_strain[1:] - f_strain[:-1]) / h_x


_TWO_LEVEL = {
    "d_plus": (np.array([-1.0, 1.0]), 1),
    "d_minus": (np.array([-1.0, 1.0]), 1),
    "mu_plus": (np.array([0.5, 0.5]), 0),
    "mu_minus": (np.array([0.5, 0.5]), 0),
}
_THREE_LEVEL = {
    "d_center": (np.array([-0.5, 0.0, 0.5]), 1),
    "dd": (np.array([1.0, -2.0, 1.0]), 2),
    "mu_center": (np.array([0.5, 0.0, 0.5]), 0),
    "mu_pm": (np.array([0.25, 0.5, 0.25]), 0),
}
TEMPORAL_KINDS = tuple(_TWO_LEVEL) + tuple(_THREE_LEVEL)


def temporal_combine(kind: str, levels, h_t: float) -> np.ndarray:
    """Time difference or average of consecutive time levels.

    ``levels`` are ordered oldest first: ``(f^n, f^{n+1})`` for the forward
    operators, ``(f^{n-1}, f^n)`` for the backward ones and
    ``(f^{n-1}, f^n, f^{n+1})`` for ``d_center``, ``dd`` (second difference),
    ``mu_center`` and ``mu_pm`` (forward average of the backward average).
    """
    if kind in _TWO_LEVEL:
        weights, power = _TWO_LEVEL[kind]
    elif kind in _THREE_LEVEL:
        weights, power = _THREE_LEVEL[kind]
    else:
        raise ContractError(f"unknown temporal operator {kind!r}")
    if len(levels) != len(weights):
        raise ContractError(f"{kind} needs {len(weights)} time levels, got {len(levels)}")
    if power and not h_t > 0:
        raise ContractError("time step must be positive")
    arrays = [np.asarray(level, dtype=float) for level in levels]
    if any(a.shape != arrays[0].shape for a in arrays):
        raise ContractError("time levels must have matching shapes")
    out = sum(w * a for w, a in zip(weights, arrays) if w != 0.0)
    return out / h_t**power if power else out


def tilde(f: np.ndarray) -> np.ndarray:
    """Quarter-turn rotation ``(f1, f2) -> (-f2, f1)`` of a planar field."""
    f = np.asarray(f, dtype=float)
    if f.shape[-1] != 2:
        raise ContractError(f"rotation needs a planar field, got shape {f.shape}")
    return np.stack([-f[..., 1], f[..., 0]], axis=-1)


def _window(f: np.ndarray, rng: IndexRange, N: int) -> np.ndarray:
    start = first_index(f.shape[0], N)
    lo, hi = rng.first - start, rng.last - start
    if lo < 0 or hi >= f.shape[0]:
        raise ContractError(f"index range [{rng.first}..{rng.last}] is outside the "
                            f"field's support [{start}..{start + f.shape[0] - 1}]")
    return f[lo:hi + 1]


def inner_product(f: np.ndarray, g: np.ndarray, grid: GridSpec, rng: IndexRange) -> float:
    """Weighted sum ``h_x * sum_{i in rng} f_i . g_i`` for scalar or planar fields."""
    f = _check_planar_or_scalar(f)
    g = _check_planar_or_scalar(g)
    if f.ndim != g.ndim:
        raise ContractError("cannot pair a scalar field with a planar field")
    return float(grid.h_x * np.sum(_window(f, rng, grid.N) * _window(g, rng, grid.N)))


def norm(f: np.ndarray, grid: GridSpec, rng: IndexRange) -> float:
    return float(np.sqrt(inner_product(f, f, grid, rng)))
