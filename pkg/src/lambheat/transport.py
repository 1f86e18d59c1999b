"""Steady state and heat currents of the two-qubit bridge.

Sign convention: ``j1`` is the energy current *from bath 1 into the system*,
so it is negative when bath 2 is hotter.  Figure-style quantities (the
``*_magnitude`` helpers and the CSV columns) use ``|j1|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .lambshift import (
    matsubara_r,
    shift_tables,
    transition_shifts,
)
from .model import Eigensystem
from .pvquad import DEFAULT_CONFIG, PvConfig
from .spectral import BathSpec, SpectralKind, bose_occupation, bose_occupation_dT, spectral_density

__all__ = [
    "DegenerateBathError",
    "SecondLawViolation",
    "SteadyState",
    "CurrentReport",
    "steady_state",
    "heat_current",
    "current_difference",
    "current_derivative_dT",
    "current_supremum",
    "asymptotic_slope",
    "pq_decomposition",
    "second_law_margin",
    "current_report",
]


class DegenerateBathError(ValueError):
    """All rates at one transition frequency vanish; the steady state is not unique."""


class SecondLawViolation(ArithmeticError):
    """A Lamb-shifted transition energy came out non-positive."""


@dataclass(frozen=True)
class SteadyState:
    populations: np.ndarray  # eigenbasis order s1..s4
    x_plus: float
    x_minus: float
    y_plus: float
    y_minus: float

    @property
    def x(self) -> float:
        return self.x_plus + self.x_minus

    @property
    def y(self) -> float:
        return self.y_plus + self.y_minus

    def density_matrix(self) -> np.ndarray:
        return np.diag(self.populations).astype(complex)


def _channel_data(eig: Eigensystem, baths):
    """``J[j, mu]`` and ``nbar[j, mu]`` evaluated at the transition frequencies."""
    w = eig.omega
    J = np.array([[spectral_density(b, float(x)) for x in w] for b in baths])
    n = np.array([[bose_occupation(b.temperature, float(x)) for x in w] for b in baths])
    return J, n


def _check_sharp(eig, baths):
    for b in baths:
        if b.kind is SpectralKind.SHARP and eig.omega[1] >= b.omega_d:
            raise ValueError("sharp cutoff: transition frequencies must lie below omega_D")


def steady_state(eig: Eigensystem, baths) -> SteadyState:
    _check_sharp(eig, baths)
    J, n = _channel_data(eig, baths)
    w = eig.weights
    # mode 1: bath 1 weight sin^2 phi+, bath 2 cos^2 phi-; mode 2: cos^2 phi+, sin^2 phi-
    a1 = J[:, 0] * w[:, 0]
    a2 = J[:, 1] * w[:, 1]
    xp = float(a1 @ n[:, 0])
    xm = float(a1 @ (n[:, 0] + 1.0))
    yp = float(a2 @ n[:, 1])
    ym = float(a2 @ (n[:, 1] + 1.0))
    X, Y = xp + xm, yp + ym
    if X <= 0 or Y <= 0:
        raise DegenerateBathError("no bath couples to one of the transition frequencies")
    pops = np.array([xm * ym, xp * yp, xm * yp, xp * ym]) / (X * Y)
    return SteadyState(pops, xp, xm, yp, ym)


def _prefactors(eig, baths):
    """``A_mu`` and ``nbar_1 - nbar_2`` at each transition frequency."""
    J, n = _channel_data(eig, baths)
    w = eig.weights
    ss = steady_state(eig, baths)
    A = np.array(
        [
            2.0 * w[0, 0] * w[1, 0] * J[0, 0] * J[1, 0] / ss.x,
            2.0 * w[0, 1] * w[1, 1] * J[0, 1] * J[1, 1] / ss.y,
        ]
    )
    return A, n[0] - n[1]


def heat_current(
    eig: Eigensystem,
    baths,
    lamb: bool = True,
    deltas: Optional[np.ndarray] = None,
    method: str = "auto",
    cfg: PvConfig = DEFAULT_CONFIG,
) -> float:
    """Steady-state current ``J_1 = sum_mu A_mu (nbar_1 - nbar_2)(omega_mu + delta_mu)``.

    ``J_2 = -J_1``.  With ``lamb=False`` the shifts are zero.
    """
    A, dn = _prefactors(eig, baths)
    if not lamb:
        d = np.zeros(2)
    elif deltas is None:
        d = transition_shifts(eig, baths, method, cfg)
    else:
        d = np.asarray(deltas, dtype=float)
    return float(np.sum(A * dn * (eig.omega + d)))


def current_difference(
    eig: Eigensystem, baths, deltas=None, method: str = "auto", cfg: PvConfig = DEFAULT_CONFIG
) -> float:
    """Signed ``J_1^delta - J_1^0 = sum_mu A_mu (nbar_1 - nbar_2) delta_mu``."""
    A, dn = _prefactors(eig, baths)
    d = transition_shifts(eig, baths, method, cfg) if deltas is None else np.asarray(deltas, float)
    return float(np.sum(A * dn * d))


def current_derivative_dT(eig: Eigensystem, baths) -> float:
    """``d|J_1^0| / d(Delta T)`` at fixed ``T_1``, with ``T_2 = T_1 + Delta T``.

    Closed form ``2 K_1 (J_1 s+^2 + J_2 c-^2) w_1 / X^2 + 2 K_2 (J_2 s-^2 + J_1 c+^2) w_2 / Y^2``.
    """
    J, n = _channel_data(eig, baths)
    w = eig.weights
    ss = steady_state(eig, baths)
    T2 = baths[1].temperature
    dn2 = np.array([bose_occupation_dT(T2, float(x)) for x in eig.omega])
    K1 = dn2[0] * w[0, 0] * w[1, 0] * J[0, 0] * J[1, 0] * (2 * n[0, 0] + 1)
    K2 = dn2[1] * w[1, 1] * w[0, 1] * J[0, 1] * J[1, 1] * (2 * n[0, 1] + 1)
    om = eig.omega
    return float(
        2 * K1 * (J[0, 0] * w[0, 0] + J[1, 0] * w[1, 0]) / ss.x**2 * om[0]
        + 2 * K2 * (J[1, 1] * w[1, 1] + J[0, 1] * w[0, 1]) / ss.y**2 * om[1]
    )


def current_supremum(eig: Eigensystem, bath1: BathSpec) -> float:
    """Large-``Delta T`` limit of ``|J_1^0|``: ``J_1(w1) w1 sin^2 phi+ + J_1(w2) w2 cos^2 phi+``."""
    w = eig.weights
    w1, w2 = (float(x) for x in eig.omega)
    return spectral_density(bath1, w1) * w1 * w[0, 0] + spectral_density(bath1, w2) * w2 * w[0, 1]


def _q_coeffs(eig, bath2):
    w = eig.weights
    w1, w2 = (float(x) for x in eig.omega)
    q1 = 2.0 * spectral_density(bath2, w1) / bath2.omega_d * w[1, 0]
    q2 = 2.0 * spectral_density(bath2, w2) / bath2.omega_d * w[1, 1]
    return np.array([q1, q2])


def asymptotic_slope(eig: Eigensystem, baths) -> float:
    """Large-``Delta T`` slope of ``|Delta J_1|``: ``J_1(w1) Q_1 s+^2 + J_1(w2) Q_2 c+^2`` (Drude bath 2)."""
    q = _q_coeffs(eig, baths[1])
    w = eig.weights
    w1, w2 = (float(x) for x in eig.omega)
    b1 = baths[0]
    return float(spectral_density(b1, w1) * q[0] * w[0, 0] + spectral_density(b1, w2) * q[1] * w[0, 1])


def pq_decomposition(eig: Eigensystem, baths):
    """``(P, Q)`` with ``delta_mu = P_mu + Q_mu Delta T + (Q_mu wD / pi) R_{2,mu}``.

    Requires Drude baths sharing ``omega_D``; ``Delta T = T_2 - T_1``.
    """
    b1, b2 = baths
    for b in baths:
        if b.kind is not SpectralKind.DRUDE:
            raise ValueError("P/Q decomposition needs Drude baths")
    if not math.isclose(b1.omega_d, b2.omega_d, rel_tol=1e-12):
        raise ValueError("P/Q decomposition assumes a common omega_D")
    wd = b1.omega_d
    w = eig.weights
    om = [float(x) for x in eig.omega]
    J1 = [spectral_density(b1, x) for x in om]
    J2 = [spectral_density(b2, x) for x in om]
    R1 = [matsubara_r(b1, x) for x in om]
    thermal1 = math.pi / (b1.beta * wd)
    P = np.array(
        [
            2 * J1[0] / math.pi * (thermal1 + R1[0]) * w[0, 0] + 2 * J2[0] / (b1.beta * wd) * w[1, 0],
            2 * J1[1] / math.pi * (thermal1 + R1[1]) * w[0, 1] + 2 * J2[1] / (b1.beta * wd) * w[1, 1],
        ]
    )
    return P, _q_coeffs(eig, b2)


def second_law_margin(eig: Eigensystem, baths, deltas=None, method="auto", cfg: PvConfig = DEFAULT_CONFIG):
    """``omega_mu + delta_mu``; raises :class:`SecondLawViolation` if either is ``<= 0``."""
    d = transition_shifts(eig, baths, method, cfg) if deltas is None else np.asarray(deltas, float)
    margin = eig.omega + d
    if np.any(margin <= 0):
        raise SecondLawViolation(
            f"non-positive shifted transition energy: omega={eig.omega.tolist()}, "
            f"delta={d.tolist()}, T=({baths[0].temperature}, {baths[1].temperature})"
        )
    return margin


@dataclass
class CurrentReport:
    j1_with_lamb: float
    j1_no_lamb: float
    dj: float
    a1: float
    a2: float
    delta1: float
    delta2: float
    supremum: float
    slope_dT: float
    asympt_slope: Optional[float]
    second_law_margin: np.ndarray
    p1: Optional[float] = None
    p2: Optional[float] = None
    q1: Optional[float] = None
    q2: Optional[float] = None

    @property
    def j2_with_lamb(self) -> float:
        return -self.j1_with_lamb

    @property
    def magnitude_difference(self) -> float:
        """``|J_1^delta| - |J_1^0|``: negative when the Lamb shift suppresses the flow."""
        return abs(self.j1_with_lamb) - abs(self.j1_no_lamb)


def current_report(eig: Eigensystem, baths, method: str = "auto", cfg: PvConfig = DEFAULT_CONFIG) -> CurrentReport:
    d = transition_shifts(eig, baths, method, cfg)
    A, dn = _prefactors(eig, baths)
    j0 = float(np.sum(A * dn * eig.omega))
    dj = float(np.sum(A * dn * d))
    drude = all(b.kind is SpectralKind.DRUDE for b in baths)
    same_wd = math.isclose(baths[0].omega_d, baths[1].omega_d, rel_tol=1e-12)
    rep = CurrentReport(
        j1_with_lamb=j0 + dj,
        j1_no_lamb=j0,
        dj=dj,
        a1=float(A[0]),
        a2=float(A[1]),
        delta1=float(d[0]),
        delta2=float(d[1]),
        supremum=current_supremum(eig, baths[0]),
        slope_dT=current_derivative_dT(eig, baths),
        asympt_slope=asymptotic_slope(eig, baths) if drude else None,
        second_law_margin=second_law_margin(eig, baths, deltas=d),
    )
    if drude and same_wd:
        P, Q = pq_decomposition(eig, baths)
        rep.p1, rep.p2, rep.q1, rep.q2 = (float(v) for v in (*P, *Q))
    return rep
