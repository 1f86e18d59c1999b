"""Ohmic spectral densities, Bose occupation and golden-rule rates."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SpectralKind",
    "BathSpec",
    "spectral_density",
    "bose_occupation",
    "bose_occupation_dT",
    "rate",
]


class SpectralKind(str, enum.Enum):
    DRUDE = "drude"
    SHARP = "sharp"
    GAUSSIAN = "gaussian"

    @classmethod
    def parse(cls, value) -> "SpectralKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(
                f"unknown spectral kind {value!r}; expected one of "
                + ", ".join(k.value for k in cls)
            ) from None


@dataclass(frozen=True)
class BathSpec:
    temperature: float
    gamma: float
    omega_d: float
    kind: SpectralKind = SpectralKind.DRUDE

    def __post_init__(self):
        object.__setattr__(self, "kind", SpectralKind.parse(self.kind))
        for name in ("temperature", "gamma", "omega_d"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be positive and finite, got {value!r}")

    @property
    def beta(self) -> float:
        return 1.0 / self.temperature

    def with_temperature(self, temperature: float) -> "BathSpec":
        return BathSpec(temperature, self.gamma, self.omega_d, self.kind)

    def J(self, omega):
        return spectral_density(self, omega)

    def nbar(self, omega):
        return bose_occupation(self.temperature, omega)


def spectral_density(bath: BathSpec, omega):
    """Ohmic ``J(omega) = gamma * omega * f(omega / omega_D)`` for the bath's cutoff kind.

    ``f`` is ``1/(1+x^2)`` (Drude), ``exp(-x^2)`` (Gaussian) or the step
    ``x < 1`` (Sharp; the point ``omega = omega_D`` belongs to the zero branch).
    """
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0):
        raise ValueError("spectral density is defined for omega >= 0")
    x = w / bath.omega_d
    if bath.kind is SpectralKind.DRUDE:
        out = bath.gamma * w / (1.0 + x * x)
    elif bath.kind is SpectralKind.SHARP:
        out = np.where(w < bath.omega_d, bath.gamma * w, 0.0)
    else:
        out = bath.gamma * w * np.exp(-x * x)
    return out if out.ndim else float(out)


def bose_occupation(temperature: float, omega):
    """``1/(exp(omega/T) - 1)``, accurate for both ``omega/T << 1`` and ``>> 1``."""
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    w = np.asarray(omega, dtype=float)
    if np.any(w <= 0):
        raise ValueError("Bose occupation has a pole at omega = 0; omega must be > 0")
    x = w / temperature
    # exp(-x)/(1-exp(-x)) never overflows
    out = np.exp(-x) / -np.expm1(-x)
    return out if out.ndim else float(out)


def bose_occupation_dT(temperature: float, omega):
    """Temperature derivative ``d nbar / dT = (omega/T^2) nbar (nbar + 1)``."""
    n = np.asarray(bose_occupation(temperature, omega))
    out = np.asarray(omega, dtype=float) / temperature**2 * n * (n + 1.0)
    return out if out.ndim else float(out)


def rate(bath: BathSpec, omega, sign: int = +1):
    """Golden-rule rate: ``2 J (nbar + 1)`` for emission (``sign=+1``), ``2 J nbar`` for absorption."""
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    J = np.asarray(spectral_density(bath, omega))
    n = np.asarray(bose_occupation(bath.temperature, omega))
    out = 2.0 * J * (n + 1.0) if sign > 0 else 2.0 * J * n
    return out if out.ndim else float(out)
