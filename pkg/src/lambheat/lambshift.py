"""Lamb shift of the two-qubit system.

Drude baths are handled analytically: the thermal shift is a closed-form
logarithm plus the Matsubara sum ``R``; the vacuum shift is a pure logarithm.
Other cutoff kinds (and the individual ``Delta+/-`` pieces, which have no
closed form) come from :mod:`lambheat.pvquad`.

Writing ``c = 2 pi T`` (first Matsubara frequency, *not* a transition
frequency) and ``w_k = k c``::

    R = c * sum_{k>=1} (w^2 - wD w_k) / ((w^2 + w_k^2)(wD + w_k))
    Delta  = J(w)/pi * (ln(wD/w) + pi/(beta wD) + R)
    Delta' = -2 J(w)/pi * ln(wD/w)

The Matsubara sum has no poles in ``beta`` or ``wD``, so it stays finite
where the equivalent cotangent representation has canceling singularities at
``beta wD = 2 pi k``.  That form is not implemented.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import special

from .model import Eigensystem
from .pvquad import DEFAULT_CONFIG, PvConfig, delta_pm_quad, delta_prime_quad, delta_quad
from .spectral import BathSpec, SpectralKind, spectral_density

__all__ = [
    "SeriesConvergenceError",
    "LambShiftReport",
    "matsubara_r",
    "matsubara_r_estimate",
    "delta_analytic",
    "delta_prime_analytic",
    "combined_2d_plus_dprime",
    "shift_tables",
    "transition_shifts",
    "level_shifts",
    "level_shifts_from_s",
    "lamb_shift_report",
]

MAX_TERMS = 10**8
_CHUNK = 2**20
_TAIL_ORDER = 40


class SeriesConvergenceError(ArithmeticError):
    def __init__(self, message, estimate):
        super().__init__(f"{message} (estimate={estimate!r})")
        self.estimate = estimate


def _require_drude(bath: BathSpec):
    if bath.kind is not SpectralKind.DRUDE:
        raise ValueError(f"closed-form Lamb shift needs a Drude bath, got {bath.kind.value}")


def _tail_coefficients(w2: float, wd: float, n: int) -> np.ndarray:
    """Taylor coefficients of ``(w2 u - wd) / ((1 + w2 u^2)(1 + wd u))`` in ``u``."""
    num = np.zeros(n)
    num[0], num[1] = -wd, w2
    den = (1.0, wd, w2, wd * w2)
    h = np.zeros(n)
    for i in range(n):
        acc = num[i]
        for k in range(1, 4):
            if i - k >= 0:
                acc -= den[k] * h[i - k]
        h[i] = acc
    return h


def _matsubara_terms(k: np.ndarray, c: float, w2: float, wd: float) -> np.ndarray:
    wk = c * k
    return (w2 - wd * wk) / ((w2 + wk * wk) * (wd + wk))


def matsubara_r(bath: BathSpec, omega_mu: float, tol: float = 1e-13, max_terms: int = MAX_TERMS) -> float:
    """Matsubara sum ``R`` for a Drude bath.

    Terms behave as ``-wD beta / (2 pi k^2)``.  The first ``K`` terms are summed
    directly, with ``c K`` past ``4 max(wD, w)`` so the large-``k`` expansion of
    the summand in ``1/k`` converges geometrically; the tail is then the
    exact series ``sum_n a_n zeta(n, K+1)`` of Hurwitz zeta values (its leading
    term is the integral-comparison estimate ``-wD beta / (2 pi K)``).
    """
    _require_drude(bath)
    if not omega_mu > 0:
        raise ValueError("omega_mu must be positive")
    c = 2.0 * math.pi * bath.temperature
    wd, w2 = bath.omega_d, omega_mu * omega_mu
    scale = max(wd, omega_mu)
    K = int(math.ceil(4.0 * scale / c)) + 16
    if K > max_terms:
        # best effort: truncated sum plus the leading tail
        k = np.arange(1, max_terms + 1, dtype=float)
        est = c * (np.sum(_matsubara_terms(k, c, w2, wd)) - wd / c * special.zeta(2, max_terms + 1))
        raise SeriesConvergenceError(f"Matsubara sum needs {K} > {max_terms} terms", est)

    partial = 0.0
    parts = []
    for start in range(1, K + 1, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, K + 1), dtype=float)
        parts.append(np.sum(_matsubara_terms(k, c, w2, wd)[::-1]))
    partial = math.fsum(parts)

    # G(k) = sum_n h_n c^{-(n+2)} k^{-(n+2)}
    h = _tail_coefficients(w2, wd, _TAIL_ORDER)
    n = np.arange(_TAIL_ORDER)
    tail_terms = h * c ** (-(n + 2.0)) * special.zeta(n + 2.0, K + 1.0)
    tail = math.fsum(tail_terms[::-1])
    last = abs(tail_terms[-1])
    total = partial + tail
    if last > tol * max(abs(total), 1e-300) and last > 1e-300:
        raise SeriesConvergenceError("Matsubara tail expansion did not converge", c * total)
    return c * total


def matsubara_r_estimate(bath: BathSpec, omega_mu: float) -> float:
    """Euler-Maclaurin estimate ``ln(sqrt(4 pi^2 + w^2 beta^2) / (2 pi + wD beta))``."""
    _require_drude(bath)
    b = bath.beta
    return math.log(math.hypot(2.0 * math.pi, omega_mu * b) / (2.0 * math.pi + bath.omega_d * b))


def delta_analytic(bath: BathSpec, omega_mu: float, tol: float = 1e-13) -> float:
    _require_drude(bath)
    J = spectral_density(bath, omega_mu)
    r = matsubara_r(bath, omega_mu, tol)
    return J / math.pi * (math.log(bath.omega_d / omega_mu) + math.pi / (bath.beta * bath.omega_d) + r)


def delta_prime_analytic(bath: BathSpec, omega_mu: float) -> float:
    _require_drude(bath)
    return -2.0 * spectral_density(bath, omega_mu) / math.pi * math.log(bath.omega_d / omega_mu)


def combined_2d_plus_dprime(bath: BathSpec, omega_mu: float, tol: float = 1e-13) -> float:
    """``2 Delta + Delta'`` from the coth expansion: ``J (2/(beta wD) + (4/beta) sum_k G_k)``."""
    _require_drude(bath)
    J = spectral_density(bath, omega_mu)
    b = bath.beta
    # (4/beta) sum G = (2/pi) R
    series = 2.0 / math.pi * matsubara_r(bath, omega_mu, tol)
    return J * (2.0 / (b * bath.omega_d) + series)


@dataclass
class LambShiftReport:
    """All shift quantities, arrays indexed ``[j-1, mu-1]``."""

    delta_jmu: np.ndarray
    delta_prime_jmu: np.ndarray
    method: str
    r_jmu: Optional[np.ndarray] = None
    r_estimate_jmu: Optional[np.ndarray] = None
    delta_plus: Optional[np.ndarray] = None
    delta_minus: Optional[np.ndarray] = None
    level_shifts: Optional[np.ndarray] = None
    transition_shifts: np.ndarray = field(default_factory=lambda: np.zeros(2))


def _use_series(baths, method: str) -> bool:
    if method == "series":
        for b in baths:
            _require_drude(b)
        return True
    if method == "quadrature":
        return False
    if method != "auto":
        raise ValueError("method must be 'auto', 'series' or 'quadrature'")
    return all(b.kind is SpectralKind.DRUDE for b in baths)


def shift_tables(eig: Eigensystem, baths, method: str = "auto", cfg: PvConfig = DEFAULT_CONFIG):
    """``(Delta_jmu, Delta'_jmu, method_tag)`` as 2x2 arrays."""
    series = _use_series(baths, method)
    d = np.empty((2, 2))
    dp = np.empty((2, 2))
    for j, bath in enumerate(baths):
        for mu, w in enumerate(eig.omega):
            w = float(w)
            if series:
                d[j, mu] = delta_analytic(bath, w, cfg.series_tol)
                dp[j, mu] = delta_prime_analytic(bath, w)
            else:
                d[j, mu] = delta_quad(bath, w, cfg)
                dp[j, mu] = delta_prime_quad(bath, w, cfg)
    return d, dp, "series" if series else "quadrature"


def _combine(eig: Eigensystem, d, dp) -> np.ndarray:
    w = eig.weights
    k = 2.0 * d + dp
    return np.array(
        [k[0, 0] * w[0, 0] + k[1, 0] * w[1, 0], k[1, 1] * w[1, 1] + k[0, 1] * w[0, 1]]
    )


def transition_shifts(eig: Eigensystem, baths, method: str = "auto", cfg: PvConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Shifts ``(delta_1, delta_2)`` of the two transition frequencies."""
    d, dp, _ = shift_tables(eig, baths, method, cfg)
    return _combine(eig, d, dp)


# sign of each (j, mu) channel on levels s1..s4:
# -1 -> the level is the lower end (gets -(Delta + Delta+)),
# +1 -> the upper end (gets +(Delta + Delta-)).
_LEVEL_SIGNS = {
    (0, 0): (-1, +1, -1, +1),
    (1, 0): (-1, +1, -1, +1),
    (0, 1): (-1, +1, +1, -1),
    (1, 1): (-1, +1, +1, -1),
}


def level_shifts(
    eig: Eigensystem, baths, cfg: PvConfig = DEFAULT_CONFIG, method: str = "auto", tables=None
) -> tuple:
    """Diagonal Lamb-shift energies ``(Delta_1..Delta_4)`` and ``(Delta+, Delta-)``.

    ``Delta+`` is taken from quadrature and ``Delta-`` is set to
    ``Delta' - Delta+`` so that level differences reproduce the transition
    shifts exactly.
    """
    if tables is None:
        d, dp, _ = shift_tables(eig, baths, method, cfg)
    else:
        d, dp = tables[0], tables[1]
    plus = np.empty((2, 2))
    for j, bath in enumerate(baths):
        for mu, w in enumerate(eig.omega):
            plus[j, mu] = delta_pm_quad(bath, float(w), cfg)[0]
    minus = dp - plus
    w = eig.weights
    levels = np.zeros(4)
    for (j, mu), signs in _LEVEL_SIGNS.items():
        for n, s in enumerate(signs):
            if s < 0:
                levels[n] -= (d[j, mu] + plus[j, mu]) * w[j, mu]
            else:
                levels[n] += (d[j, mu] + minus[j, mu]) * w[j, mu]
    return levels, plus, minus


def level_shifts_from_s(eig: Eigensystem, baths, cfg: PvConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Diagonal of ``sum S(w) V^dag V + S(-w) V V^dag``, by direct quadrature of ``S``."""
    from .model import jump_operators
    from .pvquad import s_coeff_quad

    ops = jump_operators(eig)
    h = np.zeros((4, 4))
    for (j, mu), op in ops.operators.items():
        bath = baths[j - 1]
        w = float(eig.omega[mu - 1])
        v = op.matrix()
        h += s_coeff_quad(bath, w, +1, cfg) * v.T @ v
        h += s_coeff_quad(bath, w, -1, cfg) * v @ v.T
    return np.diag(h).copy()


def lamb_shift_report(
    eig: Eigensystem, baths, method: str = "auto", cfg: PvConfig = DEFAULT_CONFIG, with_levels: bool = True
) -> LambShiftReport:
    d, dp, tag = shift_tables(eig, baths, method, cfg)
    rep = LambShiftReport(delta_jmu=d, delta_prime_jmu=dp, method=tag)
    rep.transition_shifts = _combine(eig, d, dp)
    drude = all(b.kind is SpectralKind.DRUDE for b in baths)
    if drude:
        rep.r_jmu = np.array([[matsubara_r(b, float(w), cfg.series_tol) for w in eig.omega] for b in baths])
        rep.r_estimate_jmu = np.array(
            [[matsubara_r_estimate(b, float(w)) for w in eig.omega] for b in baths]
        )
    if with_levels:
        rep.level_shifts, rep.delta_plus, rep.delta_minus = level_shifts(eig, baths, cfg, tables=(d, dp))
    return rep
