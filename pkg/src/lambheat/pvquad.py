"""Principal-value quadrature of the bath shift integrals.

This is the numerical oracle for :mod:`lambheat.lambshift`: every quantity is
obtained by integrating its defining real-axis integral directly.  The pole
is handled by symmetric pairing on a window ``[pole - h, pole + h]``::

    PV int kernel = int_lo^{p-h} kernel + int_0^h [kernel(p+t) + kernel(p-t)] dt
                    + int_{p+h}^{hi} kernel

and the smooth pieces go to QUADPACK's adaptive Gauss-Kronrod routines.
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from .spectral import BathSpec, SpectralKind

__all__ = [
    "PvConfig",
    "PvConvergenceError",
    "pv_integral",
    "s_coeff_quad",
    "delta_quad",
    "delta_prime_quad",
    "delta_plus_quad",
    "delta_minus_quad",
    "delta_pm_quad",
    "upper_limit",
]

# n-bar is below exp(-THERMAL_CUTOFF) beyond omega = pole + THERMAL_CUTOFF * T
THERMAL_CUTOFF = 40.0
DRUDE_VACUUM_CUTOFF = 1e3
GAUSSIAN_CUTOFF = 8.0


class PvConvergenceError(ArithmeticError):
    """Quadrature did not reach the requested tolerance.

    ``estimate`` and ``error`` hold the best value obtained and its error bound.
    """

    def __init__(self, message, estimate, error):
        super().__init__(f"{message} (estimate={estimate!r}, error={error!r})")
        self.estimate = estimate
        self.error = error


@dataclass(frozen=True)
class PvConfig:
    """Tolerances and truncation rules for :func:`pv_integral`.

    ``pole_window`` of ``None`` selects ``min(pole/2, (upper - pole)/2, 1)``.
    ``upper_limit_policy`` is ``"auto"`` (finite truncation per integrand type,
    scaled by ``truncation_scale``) or ``"infinite"`` (integrate to infinity).
    ``series_tol`` is the Matsubara tail tolerance used when Drude shifts are
    taken from the series instead of quadrature.
    """

    rel_tol: float = 1e-9
    abs_floor: float = 1e-300
    pole_window: Optional[float] = None
    upper_limit_policy: str = "auto"
    truncation_scale: float = 1.0
    max_subdivisions: int = 1000
    series_tol: float = 1e-13

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if not self.series_tol > 0:
            raise ValueError("series_tol must be positive")
        if self.pole_window is not None and not self.pole_window > 0:
            raise ValueError("pole_window must be positive")
        if self.upper_limit_policy not in ("auto", "infinite"):
            raise ValueError("upper_limit_policy must be 'auto' or 'infinite'")


DEFAULT_CONFIG = PvConfig()

# QUADPACK refuses epsrel below 50 machine epsilons
_MIN_EPSREL = 2e-14


def _quad(f, a, b, cfg, epsrel, points=None):
    kwargs = dict(epsabs=0.0, epsrel=epsrel, limit=cfg.max_subdivisions, full_output=1)
    if points is not None and np.isfinite(b):
        pts = [p for p in points if a < p < b]
        if pts:
            kwargs["points"] = pts
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(f, a, b, **kwargs)
    value, err = out[0], out[1]
    # a fourth element is the warning message: non-zero ier
    ier = 0 if len(out) == 3 else 1
    return value, err, ier


@functools.lru_cache(maxsize=None)
def _legendre(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return (x + 1.0) / 2.0, w / 2.0


def _paired_window(kernel, pole, h, epsrel):
    """Gauss-Legendre integral of ``kernel(pole + t) + kernel(pole - t)`` over ``[0, h]``.

    The pairing cancels ``1/t`` terms, which loses digits right next to
    ``t = 0``; Gauss nodes stay away from the endpoint, and the paired
    integrand is analytic on the window, so the rules converge geometrically.
    The tolerance is measured against the unpaired magnitudes.
    """
    prev = None
    for n in (32, 64, 128, 256):
        x, w = _legendre(n)
        right = np.array([kernel(pole + h * t) for t in x])
        left = np.array([kernel(pole - h * t) for t in x])
        q = h * float(np.dot(w, right + left))
        if prev is not None:
            err = abs(q - prev)
            if err <= epsrel * h * float(np.dot(w, np.abs(right) + np.abs(left))):
                return q, err, 0
        prev = q
    return q, err, 1


def pv_integral(
    kernel: Callable[[float], float],
    pole: float,
    lower: float = 0.0,
    upper: float = math.inf,
    cfg: PvConfig = DEFAULT_CONFIG,
    *,
    window: Optional[float] = None,
    points=(),
    tail_from: Optional[float] = None,
):
    """Cauchy principal value of ``int_lower^upper kernel(w) dw``.

    ``kernel`` may have a simple pole at ``pole``; if ``pole`` lies outside
    ``(lower, upper)`` the ordinary integral is returned.  When ``upper`` is
    finite and ``tail_from`` is given, ``upper`` must equal ``tail_from`` and
    the remainder ``[upper, inf)`` is added by semi-infinite quadrature.

    Returns ``(value, abserr)``.  Raises :class:`PvConvergenceError` when the
    error bound exceeds ``rel_tol * |value| + abs_floor`` even after tightening.
    """
    if not upper > lower:
        raise ValueError("upper must exceed lower")
    has_pole = lower < pole < upper
    h = window if window is not None else cfg.pole_window
    if has_pole:
        if h is None:
            h = min((pole - lower) / 2.0, 1.0)
            if math.isfinite(upper):
                h = min(h, (upper - pole) / 2.0)
        if not (lower < pole - h and pole + h < upper):
            raise ValueError("pole window must lie strictly inside the integration range")

    epsrel = max(cfg.rel_tol / 10.0, _MIN_EPSREL)
    while True:
        pieces = []
        if has_pole:
            pieces.append(_quad(kernel, lower, pole - h, cfg, epsrel, points))
            pieces.append(_paired_window(kernel, pole, h, epsrel))
            pieces.append(_quad(kernel, pole + h, upper, cfg, epsrel, points))
        else:
            pieces.append(_quad(kernel, lower, upper, cfg, epsrel, points))
        if tail_from is not None and math.isfinite(upper):
            pieces.append(_quad(kernel, upper, math.inf, cfg, epsrel))
        # fixed summation order keeps results reproducible
        value = math.fsum(p[0] for p in pieces)
        err = math.fsum(p[1] for p in pieces)
        # pieces may cancel (e.g. an exactly antisymmetric kernel), so the
        # tolerance is relative to their absolute sum
        scale = math.fsum(abs(p[0]) for p in pieces)
        ok = all(p[2] == 0 for p in pieces)
        if ok and err <= cfg.rel_tol * scale + cfg.abs_floor:
            return value, err
        if epsrel <= _MIN_EPSREL:
            raise PvConvergenceError("principal-value quadrature did not converge", value, err)
        epsrel = max(epsrel / 100.0, _MIN_EPSREL)


# --- integrands ---------------------------------------------------------------


def _nbar(w, T):
    x = w / T
    if x > 700.0:
        return 0.0
    return math.exp(-x) / -math.expm1(-x)


def _J_scalar(kind, gamma, wd):
    if kind is SpectralKind.DRUDE:
        return lambda w: gamma * w / (1.0 + (w / wd) ** 2)
    if kind is SpectralKind.SHARP:
        return lambda w: gamma * w if w < wd else 0.0
    return lambda w: gamma * w * math.exp(-((w / wd) ** 2))


def upper_limit(bath: BathSpec, pole: float, thermal: bool, cfg: PvConfig = DEFAULT_CONFIG):
    """Finite upper limit and whether a semi-infinite tail must be added."""
    if cfg.upper_limit_policy == "infinite":
        if bath.kind is SpectralKind.SHARP:
            return bath.omega_d, False
        return math.inf, False
    s = cfg.truncation_scale
    if bath.kind is SpectralKind.SHARP:
        hi = bath.omega_d
    elif bath.kind is SpectralKind.GAUSSIAN:
        hi = s * GAUSSIAN_CUTOFF * bath.omega_d
    else:
        hi = math.inf
    if thermal:
        hi = min(hi, pole + s * THERMAL_CUTOFF * bath.temperature)
        return hi, False
    if bath.kind is SpectralKind.DRUDE:
        return s * DRUDE_VACUUM_CUTOFF * bath.omega_d, True
    return hi, False


def _breakpoints(bath: BathSpec, pole: float):
    T, wd = bath.temperature, bath.omega_d
    pts = {2 * pole, 5 * pole, T, 5 * T, 20 * T, wd, 3 * wd, 10 * wd, 100 * wd}
    return sorted(pts)


def _window(pole: float, hi: float, cfg: PvConfig):
    if cfg.pole_window is not None:
        return cfg.pole_window
    h = min(pole / 2.0, 1.0)
    if math.isfinite(hi):
        h = min(h, (hi - pole) / 2.0)
    return h


def _check_pole(bath: BathSpec, omega_mu: float):
    if not omega_mu > 0:
        raise ValueError("omega_mu must be positive")
    if bath.kind is SpectralKind.SHARP and omega_mu >= bath.omega_d:
        raise ValueError("sharp cutoff: transition frequency must lie below omega_D")


def _integrate(bath, pole, kernel, thermal, cfg):
    hi, tail = upper_limit(bath, pole, thermal, cfg)
    if hi <= pole:
        raise ValueError("truncation point does not clear the pole")
    value, _ = pv_integral(
        kernel,
        pole,
        0.0,
        hi,
        cfg,
        window=_window(pole, hi, cfg),
        points=_breakpoints(bath, pole),
        tail_from=hi if tail else None,
    )
    return value


@functools.lru_cache(maxsize=4096)
def delta_quad(bath: BathSpec, omega_mu: float, cfg: PvConfig = DEFAULT_CONFIG) -> float:
    """Thermal shift ``(2 w/pi) PV int J nbar / (w^2 - x^2) dx``."""
    _check_pole(bath, omega_mu)
    J = _J_scalar(bath.kind, bath.gamma, bath.omega_d)
    T, m = bath.temperature, omega_mu
    pref = 2.0 * m / math.pi

    def kernel(w):
        return pref * J(w) * _nbar(w, T) / ((m - w) * (m + w))

    return _integrate(bath, m, kernel, True, cfg)


@functools.lru_cache(maxsize=4096)
def _vacuum(kind, gamma, omega_d, omega_mu, which, cfg):
    bath = BathSpec(1.0, gamma, omega_d, kind)
    _check_pole(bath, omega_mu)
    J = _J_scalar(kind, gamma, omega_d)
    m = omega_mu
    if which == "prime":
        pref = 2.0 * m / math.pi

        def kernel(w):
            return pref * J(w) / ((m - w) * (m + w))

    elif which == "plus":

        def kernel(w):
            return J(w) / (math.pi * (m + w))

    else:

        def kernel(w):
            return J(w) / (math.pi * (m - w))

    return _integrate(bath, m, kernel, False, cfg)


def delta_plus_quad(bath: BathSpec, omega_mu: float, cfg: PvConfig = DEFAULT_CONFIG) -> float:
    """``(1/pi) int J / (w + x) dx`` (no pole)."""
    return _vacuum(bath.kind, bath.gamma, bath.omega_d, float(omega_mu), "plus", cfg)


def delta_minus_quad(bath: BathSpec, omega_mu: float, cfg: PvConfig = DEFAULT_CONFIG) -> float:
    """``(1/pi) PV int J / (w - x) dx``."""
    return _vacuum(bath.kind, bath.gamma, bath.omega_d, float(omega_mu), "minus", cfg)


def delta_pm_quad(bath: BathSpec, omega_mu: float, cfg: PvConfig = DEFAULT_CONFIG):
    return delta_plus_quad(bath, omega_mu, cfg), delta_minus_quad(bath, omega_mu, cfg)


def delta_prime_quad(
    bath: BathSpec, omega_mu: float, cfg: PvConfig = DEFAULT_CONFIG, check: bool = False
) -> float:
    """Vacuum shift ``(2 w/pi) PV int J / (w^2 - x^2) dx``.

    With ``check=True`` the result is compared against ``Delta+ + Delta-``
    and a :class:`PvConvergenceError` is raised on disagreement.
    """
    value = _vacuum(bath.kind, bath.gamma, bath.omega_d, float(omega_mu), "prime", cfg)
    if check:
        plus, minus = delta_pm_quad(bath, omega_mu, cfg)
        diff = abs(plus + minus - value)
        if diff > 100 * cfg.rel_tol * max(abs(value), abs(plus), abs(minus)):
            raise PvConvergenceError("Delta+ + Delta- disagrees with Delta'", value, diff)
    return value


def s_coeff_quad(bath: BathSpec, omega_mu: float, sign: int, cfg: PvConfig = DEFAULT_CONFIG) -> float:
    """Imaginary part ``S_j(+-omega_mu)`` of the one-sided bath correlation transform."""
    _check_pole(bath, omega_mu)
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    J = _J_scalar(bath.kind, bath.gamma, bath.omega_d)
    T, m = bath.temperature, omega_mu
    if sign > 0:

        def kernel(w):
            n = _nbar(w, T)
            return J(w) * ((n + 1.0) / (m - w) + n / (m + w)) / math.pi

    else:

        def kernel(w):
            n = _nbar(w, T)
            return -J(w) * (n / (m - w) + (n + 1.0) / (m + w)) / math.pi

    return _integrate(bath, m, kernel, False, cfg)
