"""Dense GKLS generator in the H_S eigenbasis.

Independent check on :mod:`lambheat.transport`: the full 16x16 Liouvillian
is assembled from the jump operators and golden-rule rates, then its kernel,
time evolution and dissipator traces are computed numerically.

Vectorization is column-stacking, ``vec(A X B) = (B^T kron A) vec(X)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lambshift import level_shifts
from .model import Eigensystem, jump_operators
from .pvquad import DEFAULT_CONFIG, PvConfig
from .spectral import rate

__all__ = [
    "Liouvillian",
    "DegenerateSteadyStateError",
    "StepSizeError",
    "build_liouvillian",
    "vec",
    "unvec",
    "evolve",
    "steady_state_nullspace",
    "current_from_dissipator",
]

_I4 = np.eye(4)


class DegenerateSteadyStateError(np.linalg.LinAlgError):
    pass


class StepSizeError(ValueError):
    pass


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho, dtype=complex).reshape(-1, order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    return np.asarray(v).reshape(4, 4, order="F")


def _commutator_super(H):
    return -1j * (np.kron(_I4, H) - np.kron(H.T, _I4))


def _dissipator_super(V):
    VdV = V.conj().T @ V
    return np.kron(V.conj(), V) - 0.5 * (np.kron(_I4, VdV) + np.kron(VdV.T, _I4))


@dataclass(frozen=True)
class Liouvillian:
    matrix: np.ndarray
    hamiltonian: np.ndarray  # H_S (+ H_LS), diagonal in the eigenbasis
    dissipators: tuple  # one 16x16 superoperator per bath
    include_lamb: bool

    def __matmul__(self, v):
        return self.matrix @ v

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return unvec(self.matrix @ vec(rho))

    def spectrum(self) -> np.ndarray:
        return np.linalg.eigvals(self.matrix)


def build_liouvillian(
    eig: Eigensystem,
    baths,
    include_lamb: bool = True,
    method: str = "auto",
    cfg: PvConfig = DEFAULT_CONFIG,
    rate_fn=rate,
) -> Liouvillian:
    """``-i[H_S + H_LS, .] + L_1 + L_2`` as a 16x16 complex matrix.

    ``rate_fn(bath, omega, sign)`` defaults to the golden-rule rates and is a
    hook for mutation tests.
    """
    levels = eig.levels.astype(float)
    if include_lamb:
        levels = levels + level_shifts(eig, baths, cfg, method)[0]
    H = np.diag(levels).astype(complex)
    ops = jump_operators(eig)
    dissipators = []
    for j, bath in enumerate(baths, start=1):
        D = np.zeros((16, 16), dtype=complex)
        for mu in (1, 2):
            V = ops[(j, mu)].matrix().astype(complex)
            w = float(eig.omega[mu - 1])
            D += rate_fn(bath, w, +1) * _dissipator_super(V)
            D += rate_fn(bath, w, -1) * _dissipator_super(V.conj().T)
        dissipators.append(D)
    L = _commutator_super(H) + sum(dissipators)
    return Liouvillian(L, H, tuple(dissipators), include_lamb)


def _rk4_propagator(L: np.ndarray, dt: float) -> np.ndarray:
    A = dt * L
    A2 = A @ A
    A3 = A2 @ A
    return np.eye(16) + A + A2 / 2.0 + A3 / 6.0 + A3 @ A / 24.0


def evolve(L: Liouvillian, rho0: np.ndarray, t: float, dt: float) -> np.ndarray:
    """Fixed-step RK4 integration of ``d rho/dt = L rho`` up to time ``t``."""
    rho0 = np.asarray(rho0, dtype=complex)
    if t == 0:
        return rho0.copy()
    if dt <= 0 or t < 0:
        raise ValueError("t and dt must be non-negative, dt positive")
    norm = np.linalg.norm(L.matrix, 2)
    if dt * norm >= 0.1:
        raise StepSizeError(f"dt*||L|| = {dt * norm:.3g} >= 0.1; reduce dt below {0.1 / norm:.3g}")
    steps = int(np.ceil(t / dt - 1e-12))
    h = t / steps
    P = _rk4_propagator(L.matrix, h)
    v = vec(rho0)
    for _ in range(steps):
        v = P @ v
        rho = unvec(v)
        v = vec(0.5 * (rho + rho.conj().T))
    return unvec(v).copy()


def steady_state_nullspace(L: Liouvillian, tol: float = 1e-10) -> np.ndarray:
    """Unit-trace Hermitian kernel element of the generator."""
    vals, vecs = np.linalg.eig(L.matrix)
    order = np.argsort(np.abs(vals))
    scale = max(1.0, np.max(np.abs(vals)))
    if np.abs(vals[order[1]]) <= tol * scale:
        raise DegenerateSteadyStateError("generator kernel is more than one-dimensional")
    rho = unvec(vecs[:, order[0]])
    rho = rho / np.trace(rho)
    return 0.5 * (rho + rho.conj().T)


def current_from_dissipator(L: Liouvillian, rho: np.ndarray, hamiltonian=None) -> np.ndarray:
    """``Tr(H D_j(rho))`` for each bath ``j``; ``H`` defaults to ``L.hamiltonian``."""
    H = L.hamiltonian if hamiltonian is None else hamiltonian
    v = vec(rho)
    return np.array([np.trace(H @ unvec(D @ v)).real for D in L.dissipators])
