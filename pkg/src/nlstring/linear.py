"""Block update matrices for the two-step schemes and their banded direct solve.

The unknowns at one time level are the interior values ``w = [u; v1; v2]``,
three blocks of ``n = N - 1`` entries.  Every block of every update matrix is
``c*I + D^T W D`` for a diagonal ``W``, hence symmetric tridiagonal, so a block
is stored as its main diagonal and first off-diagonal.  For the solve the
unknowns are interleaved node by node, which turns the 3x3 block-tridiagonal
matrix into a band matrix with five sub- and super-diagonals.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import lapack
from scipy.sparse.linalg import LinearOperator, onenormest

from .core import ContractError, SchemeKind, SolverError
from .grid import GridSpec
from .model import ModelParams, StatePair

BAND = 5                    # half-bandwidth after interleaving
RCOND_MIN = 1e-14           # reciprocal condition below which a solve is refused


@dataclass(frozen=True)
class DiffMatrix:
    """Scaled difference matrix: ``N`` rows, ``N - 1`` columns, ``lam`` on the
    diagonal and ``-lam`` on the first subdiagonal."""

    N: int
    lam: float

    def matvec(self, u: np.ndarray) -> np.ndarray:
        padded = np.concatenate([[0.0], u, [0.0]])
        return self.lam * (padded[1:] - padded[:-1])

    def rmatvec(self, y: np.ndarray) -> np.ndarray:
        return self.lam * (y[:-1] - y[1:])

    def to_dense(self) -> np.ndarray:
        D = np.zeros((self.N, self.N - 1))
        idx = np.arange(self.N - 1)
        D[idx, idx] = self.lam
        D[idx + 1, idx] = -self.lam
        return D


def build_D(N: int, lam: float) -> DiffMatrix:
    if N < 2:
        raise ContractError(f"difference matrix needs N >= 2, got {N}")
    return DiffMatrix(N, float(lam))


def build_diagonals(state: StatePair, grid: GridSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Diagonals of ``P``, ``Q1``, ``Q2``: the strains ``p``, ``q1``, ``q2`` on ``[1..N]``."""
    if state.N != grid.N:
        raise ContractError(f"state has N={state.N}, grid has N={grid.N}")
    p = np.diff(state.u_curr) / grid.h_x
    q = np.diff(state.v_curr, axis=0) / grid.h_x
    return p, q[:, 0], q[:, 1]


def dtwd_parts(weights: np.ndarray, lam: float) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of ``D^T diag(weights) D``.

    ``weights`` lives on the ``N`` staggered points along its last axis; any
    leading axes are carried through.
    """
    l2 = lam * lam
    return l2 * (weights[..., :-1] + weights[..., 1:]), -l2 * weights[..., 1:-1]


@lru_cache(maxsize=64)
def _band_index(n: int) -> tuple[np.ndarray, ...]:
    r = np.arange(3)[:, None, None]
    c = np.arange(3)[None, :, None]
    k = np.arange(n)[None, None, :]
    ko = k[..., :-1]
    centre = 2 * BAND
    return (np.broadcast_to(centre + r - c, (3, 3, n)),
            np.broadcast_to(3 * k + c, (3, 3, n)),
            np.broadcast_to(centre + r - c - 3, (3, 3, n - 1)),
            np.broadcast_to(3 * (ko + 1) + c, (3, 3, n - 1)),
            np.broadcast_to(centre + r - c + 3, (3, 3, n - 1)),
            np.broadcast_to(3 * ko + c, (3, 3, n - 1)))


@dataclass(frozen=True)
class BandedBlockMatrix:
    """3x3 arrangement of symmetric tridiagonal blocks of size ``n``.

    ``diag[r, c]`` and ``off[r, c]`` hold the main and first off-diagonal of
    block ``(r, c)``; a zero block is all zeros and costs nothing in the solve.
    """

    diag: np.ndarray    # (3, 3, n)
    off: np.ndarray     # (3, 3, n - 1)

    @property
    def n(self) -> int:
        return self.diag.shape[2]

    @classmethod
    def from_weights(cls, ident: np.ndarray, weights: np.ndarray, lam: float) -> "BandedBlockMatrix":
        """Blocks ``ident[r, c] * I + D^T diag(weights[r, c]) D``."""
        d, o = dtwd_parts(weights, lam)
        return cls(d + ident[:, :, None], o)

    @classmethod
    def identity(cls, n: int) -> "BandedBlockMatrix":
        diag = np.zeros((3, 3, n))
        for b in range(3):
            diag[b, b] = 1.0
        return cls(diag, np.zeros((3, 3, n - 1)))

    def nonzero_blocks(self) -> set[tuple[int, int]]:
        mask = np.any(self.diag != 0, axis=2) | np.any(self.off != 0, axis=2)
        return {(int(r), int(c)) for r, c in zip(*np.nonzero(mask))}

    def block(self, r: int, c: int) -> np.ndarray:
        return (np.diag(self.diag[r, c]) + np.diag(self.off[r, c], 1)
                + np.diag(self.off[r, c], -1))

    def matvec(self, w: np.ndarray) -> np.ndarray:
        X = np.asarray(w, dtype=float).reshape(3, self.n)
        Y = np.einsum("rck,ck->rk", self.diag, X)
        Y[:, :-1] += np.einsum("rck,ck->rk", self.off, X[:, 1:])
        Y[:, 1:] += np.einsum("rck,ck->rk", self.off, X[:, :-1])
        return Y.reshape(-1)

    def to_dense(self) -> np.ndarray:
        n = self.n
        out = np.zeros((3 * n, 3 * n))
        for r in range(3):
            for c in range(3):
                out[r * n:(r + 1) * n, c * n:(c + 1) * n] = self.block(r, c)
        return out

    def is_diagonal(self) -> bool:
        if np.any(self.off):
            return False
        return not any(np.any(self.diag[r, c]) for r in range(3) for c in range(3) if r != c)

    def is_symmetric(self) -> bool:
        return (np.array_equal(self.diag, self.diag.transpose(1, 0, 2))
                and np.array_equal(self.off, self.off.transpose(1, 0, 2)))

    def to_lapack_band(self) -> np.ndarray:
        """Interleaved band storage with room for the LU fill-in rows."""
        dr, dc, ur, uc, lr, lc = _band_index(self.n)
        ab = np.zeros((3 * BAND + 1, 3 * self.n))
        ab[dr, dc] = self.diag
        ab[ur, uc] = self.off
        ab[lr, lc] = self.off
        return ab


@dataclass(frozen=True)
class UpdateTriple:
    """Matrices of ``A w^{n+1} = B w^n - C w^{n-1}``."""

    A: BandedBlockMatrix
    B: BandedBlockMatrix
    C: BandedBlockMatrix


def stack_interior(state: StatePair) -> tuple[np.ndarray, np.ndarray]:
    """Interior unknowns ``[u; v1; v2]`` at levels n-1 and n."""
    def pack(u, v):
        return np.concatenate([u[1:-1], v[1:-1, 0], v[1:-1, 1]])
    return pack(state.u_prev, state.v_prev), pack(state.u_curr, state.v_curr)


def unstack_interior(w: np.ndarray, N: int) -> tuple[np.ndarray, np.ndarray]:
    n = N - 1
    u = np.zeros(N + 1)
    v = np.zeros((N + 1, 2))
    u[1:-1] = w[:n]
    v[1:-1, 0] = w[n:2 * n]
    v[1:-1, 1] = w[2 * n:]
    return u, v


def _linear_weights(m: ModelParams, grid: GridSpec):
    """Identity coefficients and staggered weights of the state-independent
    part: wave operators, implicitness weights and damping."""
    stiff = (1.0, m.alpha, m.alpha)
    weight = (m.tau, m.alpha * m.nu, m.alpha * m.nu)
    loss = (0.5 * grid.h_t * m.sigma_xi, 0.5 * grid.h_t * m.sigma_eta, 0.5 * grid.h_t * m.sigma_eta)
    ident_a, ident_b, ident_c = np.zeros((3, 3)), np.zeros((3, 3)), np.zeros((3, 3))
    wa, wb = np.zeros((3, 3, grid.N)), np.zeros((3, 3, grid.N))
    for b in range(3):
        ident_a[b, b] = 1.0 + loss[b]
        ident_c[b, b] = 1.0 - loss[b]
        ident_b[b, b] = 2.0
        wa[b, b] = 0.25 * weight[b]
        wb[b, b] = -stiff[b] + 0.5 * weight[b]
    return ident_a, ident_b, ident_c, wa, wb


def linear_parts(m: ModelParams, grid: GridSpec) -> UpdateTriple:
    """Update matrices with every nonlinear block dropped."""
    ident_a, ident_b, ident_c, wa, wb = _linear_weights(m, grid)
    lam = grid.lam
    return UpdateTriple(BandedBlockMatrix.from_weights(ident_a, wa, lam),
                        BandedBlockMatrix.from_weights(ident_b, wb, lam),
                        BandedBlockMatrix.from_weights(ident_c, wa, lam))


MATRIX_SCHEMES = (SchemeKind.S_A, SchemeKind.S_B, SchemeKind.S_C, SchemeKind.S_D)


def assemble_update(scheme: SchemeKind | str, m: ModelParams, state: StatePair,
                    grid: GridSpec) -> UpdateTriple:
    """Update matrices of a full scheme at the current state.

    The nonlinear blocks depend on the strains at level n.  Terms averaged
    over levels n+1 and n-1 land on ``A`` and ``C`` with half weight each,
    which keeps ``C`` equal to ``A`` until damping is switched on.
    """
    scheme = SchemeKind.parse(scheme)
    if scheme is SchemeKind.S_E:
        raise ContractError("s_e has no matrix update form; use the iterative step")
    if scheme not in MATRIX_SCHEMES:
        raise ContractError(f"{scheme.value} is not a full-model scheme")
    ident_a, ident_b, ident_c, wa, wb = _linear_weights(m, grid)
    beta, half = m.beta, -0.5 * m.beta
    p, q1, q2 = build_diagonals(state, grid)
    # wb collects level-n terms, wa the terms averaged over levels n+1 and n-1
    if scheme is SchemeKind.S_A:
        wb[0, 1] = wb[1, 0] = beta * q1
        wb[0, 2] = wb[2, 0] = beta * q2
        cross = beta * (q1 * q1 + q2 * q2 + p)
        wb[1, 1] += cross
        wb[2, 2] += cross
    elif scheme is SchemeKind.S_B:
        wb[0, 1] = beta * q1
        wb[0, 2] = beta * q2
        avg = half * (q1 * q1 + q2 * q2 + 2.0 * p)
        wa[1, 1] += avg
        wa[2, 2] += avg
    else:
        wb[1, 1] += beta * p
        wb[2, 2] += beta * p
        wa[0, 1] = wa[1, 0] = half * q1
        wa[0, 2] = wa[2, 0] = half * q2
        if scheme is SchemeKind.S_C:
            both = half * (q1 * q1 + q2 * q2)
            wa[1, 1] += both
            wa[2, 2] += both
        else:
            wa[1, 1] += half * q1 * q1
            wa[2, 2] += half * q2 * q2
            wa[1, 2] = wa[2, 1] = half * q1 * q2
    lam = grid.lam
    A = BandedBlockMatrix.from_weights(ident_a, wa, lam)
    C = A if not m.damped else BandedBlockMatrix.from_weights(ident_c, wa, lam)
    return UpdateTriple(A, BandedBlockMatrix.from_weights(ident_b, wb, lam), C)


@dataclass(frozen=True)
class LinearSolve:
    x: np.ndarray
    residual: float
    condition_estimate: float


def _interleave(w: np.ndarray, n: int) -> np.ndarray:
    return w.reshape(3, n).T.reshape(-1)


def _deinterleave(z: np.ndarray, n: int) -> np.ndarray:
    return z.reshape(n, 3).T.reshape(-1)


def solve_report(A: BandedBlockMatrix, rhs: np.ndarray, estimate_condition: bool = False) -> LinearSolve:
    """Direct banded LU solve with the infinity-norm residual.

    The 1-norm condition number is estimated on request; NaN means it was not
    computed.  Diagonal systems are divided through directly.
    """
    n = A.n
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape != (3 * n,):
        raise ContractError(f"right-hand side must have {3 * n} entries, got {rhs.shape}")
    if A.is_diagonal():
        d = np.concatenate([A.diag[b, b] for b in range(3)])
        amin = float(np.min(np.abs(d)))
        cond = float(np.max(np.abs(d))) / amin if amin > 0 else np.inf
        if not amin > 0:
            raise SolverError("singular diagonal update matrix", cond)
        x = rhs / d
        return LinearSolve(x, float(np.max(np.abs(d * x - rhs))), cond)
    lu, piv, info = lapack.dgbtrf(A.to_lapack_band(), BAND, BAND, overwrite_ab=1)
    if info != 0:
        raise SolverError(f"banded factorization failed (info={info})", np.inf)
    z, info = lapack.dgbtrs(lu, BAND, BAND, _interleave(rhs, n)[:, None], piv)
    x = _deinterleave(z[:, 0], n)
    cond = np.nan
    if estimate_condition:
        cond = _condition_estimate(A, lu, piv)
        if not cond < 1.0 / RCOND_MIN:
            raise SolverError("update matrix is too ill-conditioned to solve reliably", cond)
    if not np.all(np.isfinite(x)):
        raise SolverError("non-finite solution of the update system", cond)
    residual = float(np.max(np.abs(A.matvec(x) - rhs)))
    return LinearSolve(x, residual, float(cond))


def _condition_estimate(A: BandedBlockMatrix, lu: np.ndarray, piv: np.ndarray) -> float:
    size = 3 * A.n
    anorm = float(np.max(np.sum(np.abs(A.to_lapack_band()[BAND:]), axis=0)))

    def apply(v, trans):
        v = np.asarray(v, dtype=float).reshape(size, -1)
        out, _ = lapack.dgbtrs(lu, BAND, BAND, v, piv, trans=trans)
        return out

    inv = LinearOperator((size, size), dtype=float,
                         matvec=lambda v: apply(v, 0), rmatvec=lambda v: apply(v, 1),
                         matmat=lambda V: apply(V, 0), rmatmat=lambda V: apply(V, 1))
    # the interleaving permutation leaves 1-norms unchanged
    return anorm * float(onenormest(inv))


def solve(A: BandedBlockMatrix, rhs: np.ndarray) -> np.ndarray:
    """Solve ``A x = rhs`` for block-ordered vectors."""
    return solve_report(A, rhs).x
