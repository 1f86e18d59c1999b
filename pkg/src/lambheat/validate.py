"""Cross-checks between the closed forms and the numerical oracles."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, List

import numpy as np

from . import dynamics, lambshift, pvquad, transport
from .model import SystemParams, eigensystem
from .presets import PRESETS, Curve, preset_points
from .spectral import BathSpec, SpectralKind, rate

__all__ = ["Check", "CHECKS", "run_checks", "format_table"]


@dataclass
class Check:
    name: str
    passed: bool
    quantity: str
    expected: str
    got: str
    tolerance: str
    seconds: float = 0.0

    def __post_init__(self):
        self.passed = bool(self.passed)


def _fmt(x):
    return f"{x:.3e}" if isinstance(x, float) else str(x)


def _grid(level):
    if level == "quick":
        return (1.0,), (50.0,), None
    return (0.1, 1.0, 10.0), (10.0, 50.0, 100.0), None


def check_series_vs_quadrature(level="full") -> Check:
    eig = eigensystem(SystemParams(3.0, 2.0, 0.5))
    temps, cutoffs, _ = _grid(level)
    worst = 0.0
    for T in temps:
        for wd in cutoffs:
            bath = BathSpec(T, 0.01, wd)
            for w in eig.omega:
                w = float(w)
                dq = pvquad.delta_quad(bath, w)
                dpq = pvquad.delta_prime_quad(bath, w)
                worst = max(
                    worst,
                    abs(lambshift.delta_analytic(bath, w) - dq) / abs(dq),
                    abs(lambshift.delta_prime_analytic(bath, w) - dpq) / abs(dpq),
                )
    return Check("lamb shift: series vs PV quadrature", worst < 1e-6, "max rel diff of Delta, Delta'",
                 "0", _fmt(worst), "1e-6")


def check_kms(level="full") -> Check:
    worst = 0.0
    for kind in SpectralKind:
        for T in (0.1, 1.0, 10.0):
            bath = BathSpec(T, 0.02, 50.0, kind)
            for w in np.linspace(0.05, 40.0, 9 if level == "quick" else 41):
                up, down = rate(bath, w, +1), rate(bath, w, -1)
                if up == 0:
                    continue
                worst = max(worst, abs(down - math.exp(-w / T) * up) / up)
    return Check("KMS detailed balance", worst < 1e-12, "max rel |G(-w) - e^{-w/T} G(w)|", "0",
                 _fmt(worst), "1e-12")


def _dynamics_points(level):
    pts = preset_points()
    if level == "quick":
        seen, out = set(), []
        for name, curve, dT in pts:
            if name not in seen:
                seen.add(name)
                out.append((name, curve, max(dT, 1.0)))
        return out
    return [(n, c, max(dT, 1.0)) for n, c, dT in pts]


def check_dynamics(level="full", rate_fn=rate) -> List[Check]:
    worst_pop = worst_cur = worst_cons = 0.0
    t0 = time.perf_counter()
    for _, curve, dT in _dynamics_points(level):
        eig, baths = curve.eig, curve.baths(dT)
        ss = transport.steady_state(eig, baths)
        for lamb in (True, False):
            L = dynamics.build_liouvillian(eig, baths, include_lamb=lamb, rate_fn=rate_fn)
            rho = dynamics.steady_state_nullspace(L)
            worst_pop = max(worst_pop, float(np.max(np.abs(np.diag(rho).real - ss.populations))))
            jd = dynamics.current_from_dissipator(L, ss.density_matrix())
            jc = transport.heat_current(eig, baths, lamb=lamb)
            worst_cur = max(worst_cur, abs(jd[0] - jc) / abs(jc))
            worst_cons = max(worst_cons, abs(jd[0] + jd[1]) / abs(jd[0]))
    dt = time.perf_counter() - t0
    return [
        Check("steady state: closed form vs null space", worst_pop < 1e-8, "max |population diff|", "0",
              _fmt(worst_pop), "1e-8", dt),
        Check("heat current: closed form vs Tr(H L_1 rho)", worst_cur < 1e-10, "max rel diff", "0",
              _fmt(worst_cur), "1e-10"),
        Check("conservation J1 + J2 = 0 (dissipator traces)", worst_cons < 1e-10, "max |J1+J2|/|J1|", "0",
              _fmt(worst_cons), "1e-10"),
    ]


def _preset_grid(preset, curve, level):
    grid = preset.grid(curve)
    return grid[::10] if level == "quick" else grid


def check_second_law(level="full") -> Check:
    worst = math.inf
    count = 0
    for preset in PRESETS.values():
        for curve in preset.curves:
            eig = curve.eig
            for dT in _preset_grid(preset, curve, level):
                d = lambshift.transition_shifts(eig, curve.baths(dT))
                worst = min(worst, float(np.min((eig.omega + d) / eig.omega)))
                count += 1
    return Check("second law: omega_mu + delta_mu > 0", worst > 0, f"min (w+d)/w over {count} points",
                 "> 0", _fmt(worst), "0")


FIG5_BLUE = PRESETS["fig5"].curves[0]


def check_saturation(level="full") -> Check:
    c = FIG5_BLUE
    eig = c.eig
    grid = np.concatenate([[0.0], np.logspace(-2, 3, 26 if level == "quick" else 101)])
    mags = np.array([abs(transport.heat_current(eig, c.baths(dT), lamb=False)) for dT in grid])
    sup = transport.current_supremum(eig, c.baths(0.0)[0])
    monotone = bool(np.all(np.diff(mags) > 0))
    ratio = mags[-1] / sup
    ok = monotone and 0.98 < ratio < 1.0
    return Check("saturation of |J1^0| (Fig. 5 blue)", ok, "|J1^0(1e3)|/supremum, monotone",
                 "(0.98, 1)", f"{ratio:.6f}, {monotone}", "2%")


def check_asymptotic_slope(level="full") -> Check:
    """Incremental slope of |Delta J| at dT = 50 wD and 1/dT approach of the secant ratio."""
    c = FIG5_BLUE
    eig = c.eig

    def mag_dj(dT):
        return -transport.current_difference(eig, c.baths(dT))

    slope = transport.asymptotic_slope(eig, c.baths(0.0))
    dT = 50 * c.omega_d
    h = 1e-3 * dT
    local = (mag_dj(dT + h) - mag_dj(dT - h)) / (2 * h)
    rel = abs(local - slope) / slope
    # secant deficit should fall like 1/dT
    gaps = [abs(mag_dj(x) / x - slope) / slope for x in (dT, 10 * dT)]
    order = math.log10(gaps[0] / gaps[1])
    ok = rel < 0.02 and 0.8 < order < 1.2
    return Check("asymptotic slope of |Delta J| (Fig. 5 blue)", ok,
                 "rel diff of d|dJ|/d dT at 50 wD; secant-gap decay order", "0; 1",
                 f"{rel:.2e}; {order:.3f}", "2%; 0.2")


def crossover_points(curve: Curve, grid) -> np.ndarray:
    """``Delta T`` values where ``|J^delta| - |J^0|`` changes sign (linear interpolation)."""
    eig = curve.eig
    vals = np.array([-transport.current_difference(eig, curve.baths(dT)) for dT in grid])
    idx = np.nonzero(np.diff(np.sign(vals)) != 0)[0]
    out = []
    for i in idx:
        x0, x1, y0, y1 = grid[i], grid[i + 1], vals[i], vals[i + 1]
        out.append(x0 - y0 * (x1 - x0) / (y1 - y0))
    return np.array(out), vals


def check_crossover(level="full") -> Check:
    n = 101 if level == "quick" else 401
    fig3 = PRESETS["fig3"].curves[0]
    grid3 = np.linspace(1e-3, 20 * fig3.omega_d, n)
    x3, v3 = crossover_points(fig3, grid3)
    ok3 = len(x3) == 1 and v3[0] < 0 and v3[-1] > 0
    xs = []
    for curve in PRESETS["fig4"].curves:
        x, _ = crossover_points(curve, np.linspace(1e-3, 20 * curve.omega_d, n))
        xs.append(x[0] if len(x) == 1 else math.nan)
    ok4 = all(np.isfinite(xs)) and bool(np.all(np.diff(xs) > 0))
    return Check("suppression-to-enhancement crossover (Figs. 3, 4)", ok3 and ok4,
                 "Fig.3 crossings; Fig.4 crossing dT per wD", "1; increasing",
                 f"{len(x3)}; {[round(float(v), 3) for v in xs]}", "exact")


def check_estimate_order(level="full") -> Check:
    c = PRESETS["fig2"].curves[0]
    w1 = float(c.eig.omega[0])
    betas = np.logspace(-4, -2, 5 if level == "quick" else 9) / c.omega_d
    errs = []
    for b in betas:
        bath = BathSpec(1.0 / b, c.gamma, c.omega_d)
        errs.append(abs(lambshift.matsubara_r(bath, w1) - lambshift.matsubara_r_estimate(bath, w1)))
    slope = np.polyfit(np.log(betas), np.log(errs), 1)[0]
    ratios = [lambshift.matsubara_r(BathSpec(1 + dT, c.gamma, c.omega_d), w1) / dT for dT in (1e3, 1e4)]
    ok = abs(slope - 1) <= 0.2 and abs(ratios[1]) < abs(ratios[0])
    return Check("Euler-Maclaurin estimate error O(beta); R/dT -> 0", ok, "log-log slope; |R/dT| at 1e3, 1e4",
                 "1; decreasing", f"{slope:.4f}; {abs(ratios[0]):.2e}, {abs(ratios[1]):.2e}", "0.2")


def random_hierarchy_draws(n: int, seed: int = 7):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        eps2 = rng.uniform(1.0, 3.0)
        eps1 = eps2 + rng.uniform(0.0, 1.5)
        g = rng.uniform(0.3, 0.8)
        wd = rng.uniform(30.0, 150.0)
        gamma = rng.uniform(0.002, 0.02)
        t1 = rng.uniform(0.2, 3.0)
        dT = rng.uniform(0.1, 50.0)
        out.append((SystemParams(eps1, eps2, g), BathSpec(t1, gamma, wd), BathSpec(t1 + dT, gamma, wd)))
    return out


def check_derivative(level="full") -> Check:
    worst = 0.0
    positive = True
    for params, b1, b2 in random_hierarchy_draws(5 if level == "quick" else 20):
        eig = eigensystem(params)
        h = 1e-4 * b1.temperature
        f = lambda T2: abs(transport.heat_current(eig, (b1, b2.with_temperature(T2)), lamb=False))
        fd = (f(b2.temperature + h) - f(b2.temperature - h)) / (2 * h)
        cf = transport.current_derivative_dT(eig, (b1, b2))
        positive &= cf > 0
        worst = max(worst, abs(cf - fd) / abs(fd))
    return Check("d|J1^0|/d dT: closed form vs finite differences", worst < 1e-6 and positive,
                 "max rel diff; all positive", "0; True", f"{worst:.2e}; {positive}", "1e-6")


def check_spectral_kinds(level="full") -> Check:
    curves = PRESETS["fig6"].curves
    wd = curves[0].omega_d
    grid = np.linspace(0.0, 2 * wd, 11 if level == "quick" else 41)[1:]
    worst = 0.0
    for dT in grid:
        j0 = [transport.heat_current(c.eig, c.baths(dT), lamb=False) for c in curves]
        worst = max(worst, (max(j0) - min(j0)) / max(abs(x) for x in j0))
    far = np.array([20.0, 50.0, 100.0, 200.0]) * wd
    growing = True
    for c in curves:
        mags = np.array([abs(transport.heat_current(c.eig, c.baths(dT))) for dT in far])
        sup = transport.current_supremum(c.eig, c.baths(0.0)[0])
        growing &= bool(np.all(np.diff(mags) > 0) and mags[-1] > sup)
    return Check("spectral-kind robustness (Fig. 6)", worst < 0.01 and growing,
                 "max rel spread of J1^0 for dT <= 2 wD; |J1^d| growing past supremum", "< 1%; True",
                 f"{worst:.2e}; {growing}", "1%")


def check_exceeds_supremum(level="full") -> Check:
    c = FIG5_BLUE
    eig = c.eig
    sup = transport.current_supremum(eig, c.baths(0.0)[0])
    grid = np.linspace(1.0, 1e3, 50 if level == "quick" else 200)
    over = [dT for dT in grid if abs(transport.heat_current(eig, c.baths(dT))) > sup]
    return Check("|J1^delta| exceeds the supremum by dT = 1e3", bool(over), "first dT above supremum",
                 "<= 1e3", _fmt(over[0]) if over else "none", "exact")


CHECKS: List[Callable] = [
    check_series_vs_quadrature,
    check_kms,
    check_dynamics,
    check_second_law,
    check_saturation,
    check_asymptotic_slope,
    check_exceeds_supremum,
    check_crossover,
    check_estimate_order,
    check_derivative,
    check_spectral_kinds,
]


def run_checks(level: str = "quick", rate_fn=rate) -> List[Check]:
    """Run every check; ``rate_fn`` replaces the golden-rule rates in the dynamics oracle."""
    if level not in ("quick", "full"):
        raise ValueError("level must be 'quick' or 'full'")
    results = []
    for fn in CHECKS:
        t0 = time.perf_counter()
        out = fn(level, rate_fn=rate_fn) if fn is check_dynamics else fn(level)
        out = out if isinstance(out, list) else [out]
        dt = time.perf_counter() - t0
        for c in out:
            c.seconds = dt
        results.extend(out)
    return results


def format_table(results: List[Check]) -> str:
    w = max(len(c.name) for c in results)
    lines = [f"{'check':<{w}}  status  expected / got (tol)"]
    for c in results:
        status = "PASS" if c.passed else "FAIL"
        lines.append(f"{c.name:<{w}}  {status:<6}  {c.quantity}: expected {c.expected}, got {c.got} (tol {c.tolerance})")
    return "\n".join(lines)
