import numpy as np
import pytest

from lambheat import validate
from lambheat.presets import PRESETS, preset_points
from lambheat.spectral import rate


def test_presets_cover_captions():
    assert set(PRESETS) == {"fig2", "fig3", "fig4", "fig5", "fig6"}
    assert [c.omega_d for c in PRESETS["fig4"].curves] == [10.0, 20.0, 50.0, 100.0]
    assert [c.kind.value for c in PRESETS["fig6"].curves] == ["drude", "sharp", "gaussian"]
    assert [(c.eps1, c.eps2) for c in PRESETS["fig5"].curves] == [(3.0, 2.0), (2.75, 2.25), (2.5, 2.5)]
    for p in PRESETS.values():
        for c in p.curves:
            g = p.grid(c)
            assert g[0] == 0 and len(g) == p.points
    assert len(preset_points()) == 3 * sum(len(p.curves) for p in PRESETS.values())


def test_quick_level_passes():
    results = validate.run_checks("quick")
    assert all(c.passed for c in results), validate.format_table(results)
    names = " ".join(c.name for c in results)
    for key in ("series vs PV", "KMS", "null space", "conservation", "second law", "saturation", "slope", "crossover"):
        assert key in names


def test_mutation_fails_dynamics_check():
    mutant = lambda b, w, s=1: 0.5 * rate(b, w, s)
    results = {c.name: c.passed for c in validate.run_checks("quick", rate_fn=mutant)}
    assert not results["heat current: closed form vs Tr(H L_1 rho)"]


def test_level_validation():
    with pytest.raises(ValueError):
        validate.run_checks("medium")


def test_crossover_points_linear_interp():
    curve = PRESETS["fig4"].curves[0]
    x, vals = validate.crossover_points(curve, np.linspace(1e-3, 200.0, 201))
    assert len(x) == 1 and 0 < x[0] < 200.0
