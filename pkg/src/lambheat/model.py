"""Two coupled qubits: analytic eigensystem and secular jump operators.

Natural units (hbar = k_B = 1).  The product basis is ordered
``(|00>, |11>, |10>, |01>)`` where ``|0>`` is the lower qubit level.
Eigenstates are ordered ``s1..s4`` with energies ``(-beta, beta, alpha, -alpha)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SystemParams",
    "Eigensystem",
    "JumpOperator",
    "JumpOperatorSet",
    "eigensystem",
    "jump_operators",
    "eigenvector_matrix",
    "hamiltonian_product_basis",
    "sigma_x_product_basis",
    "check_hierarchy",
    "HierarchyWarning",
]


class HierarchyWarning(UserWarning):
    """Parameters fall outside the weak-coupling / secular regime."""


@dataclass(frozen=True)
class SystemParams:
    """Qubit splittings ``eps1``, ``eps2`` and the XX coupling ``g``.

    The convention ``eps1 >= eps2`` is enforced by swapping the qubit labels;
    ``swapped`` records whether that happened.
    """

    eps1: float
    eps2: float
    g: float
    swapped: bool = field(default=False, compare=False)

    def __post_init__(self):
        for name in ("eps1", "eps2", "g"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be positive and finite, got {value!r}")
        if self.eps2 > self.eps1:
            e1, e2 = self.eps2, self.eps1
            object.__setattr__(self, "eps1", float(e1))
            object.__setattr__(self, "eps2", float(e2))
            object.__setattr__(self, "swapped", not self.swapped)


@dataclass(frozen=True)
class Eigensystem:
    params: SystemParams
    alpha: float
    beta: float
    theta: float
    phi: float
    phi_plus: float
    phi_minus: float

    @property
    def levels(self) -> np.ndarray:
        return np.array([-self.beta, self.beta, self.alpha, -self.alpha])

    @property
    def omega(self) -> np.ndarray:
        """Transition frequencies ``(omega_1, omega_2) = (beta - alpha, beta + alpha)``."""
        return np.array([self.beta - self.alpha, self.beta + self.alpha])

    @property
    def weights(self) -> np.ndarray:
        """Squared jump amplitudes indexed ``[j-1, mu-1]``.

        ``[[sin^2 phi+, cos^2 phi+], [cos^2 phi-, sin^2 phi-]]``
        """
        sp, cp = math.sin(self.phi_plus), math.cos(self.phi_plus)
        sm, cm = math.sin(self.phi_minus), math.cos(self.phi_minus)
        return np.array([[sp * sp, cp * cp], [cm * cm, sm * sm]])


def eigensystem(params: SystemParams) -> Eigensystem:
    e1, e2, g = params.eps1, params.eps2, params.g
    alpha = math.hypot((e1 - e2) / 2.0, g)
    beta = math.hypot((e1 + e2) / 2.0, g)
    # atan2 keeps theta = pi/2 exactly for degenerate qubits
    theta = math.atan2(2.0 * g, e1 - e2)
    phi = math.atan2(2.0 * g, e1 + e2)
    return Eigensystem(
        params=params,
        alpha=alpha,
        beta=beta,
        theta=theta,
        phi=phi,
        phi_plus=(theta + phi) / 2.0,
        phi_minus=(theta - phi) / 2.0,
    )


@dataclass(frozen=True)
class JumpOperator:
    """``V = amplitude * sum_k sign_k |s_out_k><s_in_k|`` (0-based level indices)."""

    bath: int
    mode: int
    amplitude: float
    transitions: tuple  # ((in, out, sign), (in, out, sign))

    def matrix(self) -> np.ndarray:
        m = np.zeros((4, 4))
        for i, o, sign in self.transitions:
            m[o, i] = sign * self.amplitude
        return m


@dataclass(frozen=True)
class JumpOperatorSet:
    eig: Eigensystem
    operators: dict  # (j, mu) -> JumpOperator, 1-based keys

    def __getitem__(self, key):
        return self.operators[key]

    def __iter__(self):
        return iter(self.operators.values())

    def matrices(self) -> dict:
        return {k: v.matrix() for k, v in self.operators.items()}


def jump_operators(eig: Eigensystem) -> JumpOperatorSet:
    sp, cp = math.sin(eig.phi_plus), math.cos(eig.phi_plus)
    sm, cm = math.sin(eig.phi_minus), math.cos(eig.phi_minus)
    # mode 1 lowers s2 -> s3 and s4 -> s1; mode 2 lowers s3 -> s1 and s2 -> s4
    ops = {
        (1, 1): JumpOperator(1, 1, sp, ((1, 2, 1.0), (3, 0, -1.0))),
        (1, 2): JumpOperator(1, 2, cp, ((2, 0, 1.0), (1, 3, 1.0))),
        (2, 1): JumpOperator(2, 1, cm, ((1, 2, 1.0), (3, 0, 1.0))),
        (2, 2): JumpOperator(2, 2, sm, ((2, 0, 1.0), (1, 3, -1.0))),
    }
    return JumpOperatorSet(eig=eig, operators=ops)


def eigenvector_matrix(eig: Eigensystem) -> np.ndarray:
    """Columns are ``|s1>..|s4>`` in the product basis ``(|00>, |11>, |10>, |01>)``."""
    cf, sf = math.cos(eig.phi / 2), math.sin(eig.phi / 2)
    ct, st = math.cos(eig.theta / 2), math.sin(eig.theta / 2)
    return np.array(
        [
            [cf, sf, 0.0, 0.0],
            [-sf, cf, 0.0, 0.0],
            [0.0, 0.0, ct, -st],
            [0.0, 0.0, st, ct],
        ]
    )


def hamiltonian_product_basis(params: SystemParams) -> np.ndarray:
    e1, e2, g = params.eps1, params.eps2, params.g
    s, d = (e1 + e2) / 2.0, (e1 - e2) / 2.0
    return np.array(
        [
            [-s, g, 0.0, 0.0],
            [g, s, 0.0, 0.0],
            [0.0, 0.0, d, g],
            [0.0, 0.0, g, -d],
        ]
    )


def sigma_x_product_basis(j: int) -> np.ndarray:
    """sigma^x of qubit ``j`` (1 or 2) in the product basis."""
    # basis index of |q1 q2>
    index = {(0, 0): 0, (1, 1): 1, (1, 0): 2, (0, 1): 3}
    m = np.zeros((4, 4))
    for (q1, q2), i in index.items():
        flipped = (1 - q1, q2) if j == 1 else (q1, 1 - q2)
        m[index[flipped], i] = 1.0
    return m


def check_hierarchy(eig: Eigensystem, baths, factor: float = 10.0) -> list:
    """Return (and warn about) violations of the weak-coupling hierarchy.

    Requires ``omega_D / g`` and ``2 alpha / (gamma * omega_2)`` to exceed ``factor``.
    """
    problems = []
    g = eig.params.g
    w2 = eig.omega[1]
    for n, bath in enumerate(baths, start=1):
        if bath.omega_d / g < factor:
            problems.append(f"bath {n}: omega_D/g = {bath.omega_d / g:.3g} < {factor}")
        if 2 * eig.alpha < factor * bath.gamma * w2:
            problems.append(
                f"bath {n}: 2*alpha = {2 * eig.alpha:.3g} not >> gamma*omega_2 = {bath.gamma * w2:.3g}"
            )
    for p in problems:
        warnings.warn(p, HierarchyWarning, stacklevel=2)
    return problems
