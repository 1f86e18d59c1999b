"""Parameter sets of the figure presets.

The figure captions write the qubit coupling as ``k``; it is the ``g`` of the
Hamiltonian.  Horizontal ranges are not given in the captions, the ones here
are chosen to show each figure's feature (crossover, saturation, growth).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import SystemParams, eigensystem
from .spectral import BathSpec, SpectralKind

__all__ = ["Curve", "FigurePreset", "PRESETS", "preset_points"]


@dataclass(frozen=True)
class Curve:
    tag: str
    eps1: float
    eps2: float
    g: float
    t1: float
    gamma: float
    omega_d: float
    kind: SpectralKind = SpectralKind.DRUDE

    @property
    def eig(self):
        return eigensystem(SystemParams(self.eps1, self.eps2, self.g))

    def baths(self, dT: float):
        return (
            BathSpec(self.t1, self.gamma, self.omega_d, self.kind),
            BathSpec(self.t1 + dT, self.gamma, self.omega_d, self.kind),
        )


@dataclass(frozen=True)
class FigurePreset:
    name: str
    caption: str
    curves: tuple
    columns: tuple
    dT_max_over_wd: float
    points: int

    def grid(self, curve: Curve) -> np.ndarray:
        return np.linspace(0.0, self.dT_max_over_wd * curve.omega_d, self.points)


_CURRENT_COLS = ("dT_over_wD", "j1_lamb", "j1_nolamb", "dj", "delta1", "delta2")

PRESETS = {
    "fig2": FigurePreset(
        "fig2",
        "T1=1, T2=1+dT, gamma1=gamma2=0.01, omega_D=50, eps1=3, eps2=2, k=0.5",
        (Curve("R21", 3.0, 2.0, 0.5, 1.0, 0.01, 50.0),),
        ("dT_over_wD", "R21_exact", "R21_estimate", "delta1", "delta2"),
        2.0,
        101,
    ),
    "fig3": FigurePreset(
        "fig3",
        "eps1=3, eps2=2, T1=0.1, T2=0.1+dT, gamma1=gamma2=0.02, omega_D=100, k=0.5",
        (Curve("suppression", 3.0, 2.0, 0.5, 0.1, 0.02, 100.0),),
        _CURRENT_COLS,
        10.0,
        201,
    ),
    "fig4": FigurePreset(
        "fig4",
        "eps1=3, eps2=2, T1=1, T2=1+dT, gamma1=gamma2=0.02, k=0.5; omega_D=10,20,50,100",
        tuple(Curve(f"wD{int(w)}", 3.0, 2.0, 0.5, 1.0, 0.02, w) for w in (10.0, 20.0, 50.0, 100.0)),
        ("dT", "dT_over_wD", "dj"),
        10.0,
        401,
    ),
    "fig5": FigurePreset(
        "fig5",
        "T1=1, T2=1+dT, gamma1=gamma2=0.01, omega_D=50, k=0.5; "
        "(eps1, eps2) = (3, 2) blue, (2.75, 2.25) red, (2.5, 2.5) green",
        (
            Curve("blue", 3.0, 2.0, 0.5, 1.0, 0.01, 50.0),
            Curve("red", 2.75, 2.25, 0.5, 1.0, 0.01, 50.0),
            Curve("green", 2.5, 2.5, 0.5, 1.0, 0.01, 50.0),
        ),
        ("dT_over_wD", "j1_lamb", "j1_nolamb", "supremum"),
        20.0,
        201,
    ),
    "fig6": FigurePreset(
        "fig6",
        "T1=1, T2=1+dT, gamma1=gamma2=0.01, omega_D=50, eps1=3, eps2=2.5, k=0.5; "
        "J1 Drude (blue), J2 sharp (red), J3 Gaussian (black)",
        tuple(
            Curve(kind.value, 3.0, 2.5, 0.5, 1.0, 0.01, 50.0, kind)
            for kind in (SpectralKind.DRUDE, SpectralKind.SHARP, SpectralKind.GAUSSIAN)
        ),
        _CURRENT_COLS,
        20.0,
        201,
    ),
}


def preset_points():
    """One representative ``(name, curve, dT)`` triple set per preset, for cross-checks."""
    out = []
    for name, preset in PRESETS.items():
        for curve in preset.curves:
            for frac in (0.02, 0.5, 1.0):
                out.append((name, curve, frac * preset.dT_max_over_wd * curve.omega_d))
    return out
