"""``heat`` command-line front end.

Exit codes: 0 ok, 1 validation failure, 2 usage or configuration error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import __version__, lambshift, transport
from .model import SystemParams, check_hierarchy, eigensystem
from .presets import PRESETS
from .pvquad import PvConfig
from .spectral import BathSpec, SpectralKind
from .validate import format_table, run_checks

EXIT_OK, EXIT_VALIDATION, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

SWEEP_COLUMNS = (
    "dT", "j1_lamb", "j1_nolamb", "dj", "delta1", "delta2",
    "margin1", "margin2", "supremum", "asympt_slope",
)

COLUMN_DOC = {
    "dT": "T2 - T1",
    "dT_over_wD": "(T2 - T1) / omega_D",
    "j1_lamb": "|J1| with the Lamb shift",
    "j1_nolamb": "|J1| without the Lamb shift",
    "dj": "|J1 with shift| - |J1 without shift| (negative = suppression)",
    "delta1": "Lamb shift of omega_1",
    "delta2": "Lamb shift of omega_2",
    "margin1": "omega_1 + delta1 (second-law margin)",
    "margin2": "omega_2 + delta2 (second-law margin)",
    "supremum": "large-dT limit of |J1| without the Lamb shift",
    "asympt_slope": "large-dT slope of dj (Drude baths only, nan otherwise)",
    "R21_exact": "Matsubara sum R for bath 2 at omega_1",
    "R21_estimate": "Euler-Maclaurin estimate of R21",
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    eps1: Optional[float] = None
    eps2: Optional[float] = None
    g: Optional[float] = None
    t1: Optional[float] = None
    t2: Optional[float] = None
    gamma1: Optional[float] = None
    gamma2: Optional[float] = None
    omega_d1: Optional[float] = None
    omega_d2: Optional[float] = None
    kind1: str = "drude"
    kind2: str = "drude"
    sweep_min: float = 0.0
    sweep_max: Optional[float] = None
    points: int = 101
    scale: str = "linear"
    lamb: str = "both"
    series_tol: float = 1e-13
    quad_rel_tol: float = 1e-9
    output: Optional[str] = None
    method: str = "auto"

    @classmethod
    def from_json(cls, data: dict) -> "RunConfig":
        unknown = set(data) - {"system", "bath1", "bath2", "sweep", "lamb", "tolerances", "output"}
        if unknown:
            raise ConfigError("unknown config keys: " + ", ".join(sorted(unknown)))
        cfg = cls()
        system = data.get("system", {})
        b1, b2 = data.get("bath1", {}), data.get("bath2", {})
        sweep = data.get("sweep", {})
        tol = data.get("tolerances", {})
        pairs = [
            ("eps1", system, "eps1"), ("eps2", system, "eps2"), ("g", system, "g"),
            ("t1", b1, "temperature"), ("gamma1", b1, "gamma"), ("omega_d1", b1, "omega_d"), ("kind1", b1, "kind"),
            ("t2", b2, "temperature"), ("gamma2", b2, "gamma"), ("omega_d2", b2, "omega_d"), ("kind2", b2, "kind"),
            ("sweep_min", sweep, "min"), ("sweep_max", sweep, "max"), ("points", sweep, "points"),
            ("scale", sweep, "scale"), ("series_tol", tol, "series_tol"), ("quad_rel_tol", tol, "quad_rel_tol"),
        ]
        for attr, block, key in pairs:
            if key in block:
                setattr(cfg, attr, block[key])
        if sweep.get("variable", "dT") != "dT":
            raise ConfigError("sweep.variable must be 'dT'")
        for key in ("lamb", "output"):
            if key in data:
                setattr(cfg, key, data[key])
        return cfg

    def apply_flags(self, args):
        simple = {
            "eps1": "eps1", "eps2": "eps2", "g": "g", "t1": "t1", "gamma1": "gamma1", "gamma2": "gamma2",
            "lamb": "lamb", "out": "output", "dt_min": "sweep_min", "dt_max": "sweep_max", "points": "points",
            "scale": "scale", "method": "method",
        }
        for flag, attr in simple.items():
            value = getattr(args, flag, None)
            if value is not None:
                setattr(self, attr, value)
        if getattr(args, "omega_d", None) is not None:
            self.omega_d1 = self.omega_d2 = args.omega_d
        if getattr(args, "kind", None) is not None:
            self.kind1 = self.kind2 = args.kind
        if getattr(args, "dt", None) is not None:
            if self.t1 is None:
                raise ConfigError("--dt needs a bath-1 temperature (--t1)")
            self.t2 = self.t1 + args.dt

    # ------------------------------------------------------------------
    def require(self, *names):
        flag = {"t1": "--t1", "t2": "--dt", "gamma1": "--gamma1", "omega_d1": "--omega-d",
                "eps1": "--eps1", "eps2": "--eps2", "g": "--g", "sweep_max": "--dt-max"}
        missing = [flag.get(n, n) for n in names if getattr(self, n) is None]
        if missing:
            raise ConfigError("missing required parameter(s): " + ", ".join(missing))

    def system(self) -> SystemParams:
        self.require("eps1", "eps2", "g")
        return SystemParams(float(self.eps1), float(self.eps2), float(self.g))

    def numerics(self) -> PvConfig:
        return PvConfig(rel_tol=float(self.quad_rel_tol), series_tol=float(self.series_tol))

    def bath_pair(self, dT: Optional[float] = None):
        """Baths in the user's labels; ``dT`` overrides ``T2``."""
        self.require("t1", "gamma1", "omega_d1")
        t2 = self.t2 if dT is None else float(self.t1) + dT
        if t2 is None:
            raise ConfigError("missing required parameter(s): --dt")
        gamma2 = self.gamma1 if self.gamma2 is None else self.gamma2
        wd2 = self.omega_d1 if self.omega_d2 is None else self.omega_d2
        b1 = BathSpec(float(self.t1), float(self.gamma1), float(self.omega_d1), SpectralKind.parse(self.kind1))
        b2 = BathSpec(float(t2), float(gamma2), float(wd2), SpectralKind.parse(self.kind2))
        return b1, b2

    def grid(self) -> np.ndarray:
        self.require("sweep_max")
        lo, hi, n = float(self.sweep_min), float(self.sweep_max), int(self.points)
        if lo < 0 or hi < lo:
            raise ConfigError("sweep range needs 0 <= min <= max")
        if n < 2:
            raise ConfigError("sweep needs at least 2 points")
        if self.scale == "log":
            if lo <= 0:
                raise ConfigError("log sweep needs min > 0")
            return np.geomspace(lo, hi, n)
        if self.scale != "linear":
            raise ConfigError("scale must be 'linear' or 'log'")
        return np.linspace(lo, hi, n)


def _ordered(baths, params: SystemParams):
    return (baths[1], baths[0]) if params.swapped else tuple(baths)


def _swap_notice(params: SystemParams):
    if params.swapped:
        print(
            f"notice: eps2 > eps1, qubit labels swapped (eps1={params.eps1:g}, eps2={params.eps2:g}); "
            "baths 1 and 2 follow their qubits, so J1 refers to the bath on the larger-splitting qubit",
            file=sys.stderr,
        )


def _workers() -> int:
    raw = os.environ.get("HEAT_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"HEAT_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise ConfigError("HEAT_THREADS must be >= 0")
    return n if n > 0 else min(32, os.cpu_count() or 1)


def _parallel_map(fn, items):
    items = list(items)
    n = _workers()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _f(x) -> str:
    x = float(x)
    return "nan" if math.isnan(x) else "%.11e" % x


def _write_text(path: Optional[str], text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _csv(header_lines, columns, rows) -> str:
    out = [f"# {line}" for line in header_lines]
    out.append(",".join(columns))
    out.extend(",".join(_f(v) for v in row) for row in rows)
    return "\n".join(out) + "\n"


# ----------------------------------------------------------------------
# point evaluation shared by sweep and figure


def evaluate_point(eig, baths, lamb: bool = True, method: str = "auto", cfg: PvConfig = PvConfig(),
                   want_r: bool = False) -> dict:
    """All per-point quantities, current magnitudes as in the CSV columns."""
    j0 = transport.heat_current(eig, baths, lamb=False)
    drude = all(b.kind is SpectralKind.DRUDE for b in baths)
    row = {
        "j1_nolamb": abs(j0),
        "supremum": transport.current_supremum(eig, baths[0]),
        "asympt_slope": transport.asymptotic_slope(eig, baths) if drude else math.nan,
    }
    if lamb:
        d = lambshift.transition_shifts(eig, baths, method, cfg)
        j = transport.heat_current(eig, baths, deltas=d)
        row.update(j1_lamb=abs(j), dj=abs(j) - abs(j0), delta1=d[0], delta2=d[1])
        margin = eig.omega + d
        if np.any(margin <= 0):
            print(f"warning: non-positive shifted transition energy {margin.tolist()}", file=sys.stderr)
    else:
        row.update(j1_lamb=math.nan, dj=math.nan, delta1=math.nan, delta2=math.nan)
        margin = eig.omega
    row.update(margin1=margin[0], margin2=margin[1])
    if want_r:
        w1 = float(eig.omega[0])
        row["R21_exact"] = lambshift.matsubara_r(baths[1], w1, cfg.series_tol)
        row["R21_estimate"] = lambshift.matsubara_r_estimate(baths[1], w1)
    return row


# ----------------------------------------------------------------------
# commands


def _report(args, cfg: RunConfig, payload: dict, lines):
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if cfg.output:
        _write_text(cfg.output, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _setup(cfg: RunConfig, need_baths=True):
    params = cfg.system()
    _swap_notice(params)
    eig = eigensystem(params)
    if not need_baths:
        return eig, None
    baths = _ordered(cfg.bath_pair(), params)
    check_hierarchy(eig, baths)
    return eig, baths


def cmd_eigensystem(args, cfg: RunConfig) -> int:
    eig, _ = _setup(cfg, need_baths=False)
    p = eig.params
    payload = {
        "eps1": p.eps1, "eps2": p.eps2, "g": p.g, "swapped": p.swapped,
        "alpha": eig.alpha, "beta": eig.beta, "theta": eig.theta, "phi": eig.phi,
        "phi_plus": eig.phi_plus, "phi_minus": eig.phi_minus,
        "omega": eig.omega.tolist(), "levels": eig.levels.tolist(),
    }
    lines = [
        f"eps1 = {p.eps1:.12g}  eps2 = {p.eps2:.12g}  g = {p.g:.12g}",
        f"alpha = {eig.alpha:.12g}",
        f"beta = {eig.beta:.12g}",
        f"theta = {eig.theta:.12g}",
        f"phi = {eig.phi:.12g}",
        f"omega1 = {eig.omega[0]:.12g}",
        f"omega2 = {eig.omega[1]:.12g}",
        "levels (s1..s4) = " + ", ".join(f"{x:.12g}" for x in eig.levels),
    ]
    _report(args, cfg, payload, lines)
    return EXIT_OK


def cmd_lamb_shift(args, cfg: RunConfig) -> int:
    eig, baths = _setup(cfg)
    rep = lambshift.lamb_shift_report(eig, baths, cfg.method, cfg.numerics())
    payload = {
        "method": rep.method,
        "delta_jmu": rep.delta_jmu.tolist(),
        "delta_prime_jmu": rep.delta_prime_jmu.tolist(),
        "transition_shifts": rep.transition_shifts.tolist(),
        "level_shifts": rep.level_shifts.tolist(),
        "delta_plus_jmu": rep.delta_plus.tolist(),
        "delta_minus_jmu": rep.delta_minus.tolist(),
    }
    lines = [f"method = {rep.method}"]
    for j in range(2):
        for mu in range(2):
            lines.append(
                f"bath {j + 1}, omega{mu + 1}: Delta = {rep.delta_jmu[j, mu]:.12g}  "
                f"Delta' = {rep.delta_prime_jmu[j, mu]:.12g}  Delta+ = {rep.delta_plus[j, mu]:.12g}  "
                f"Delta- = {rep.delta_minus[j, mu]:.12g}"
            )
    if rep.r_jmu is not None:
        payload["r_jmu"] = rep.r_jmu.tolist()
        payload["r_estimate_jmu"] = rep.r_estimate_jmu.tolist()
        for j in range(2):
            for mu in range(2):
                lines.append(
                    f"R{j + 1},{mu + 1} = {rep.r_jmu[j, mu]:.12g}  estimate = {rep.r_estimate_jmu[j, mu]:.12g}"
                )
    lines.append(f"delta1 = {rep.transition_shifts[0]:.12g}")
    lines.append(f"delta2 = {rep.transition_shifts[1]:.12g}")
    lines.append("level shifts (s1..s4) = " + ", ".join(f"{x:.12g}" for x in rep.level_shifts))
    _report(args, cfg, payload, lines)
    return EXIT_OK


def cmd_steady_state(args, cfg: RunConfig) -> int:
    eig, baths = _setup(cfg)
    ss = transport.steady_state(eig, baths)
    payload = {
        "populations": ss.populations.tolist(),
        "x_plus": ss.x_plus, "x_minus": ss.x_minus, "y_plus": ss.y_plus, "y_minus": ss.y_minus,
    }
    lines = [
        "populations (s1..s4) = " + ", ".join(f"{x:.12g}" for x in ss.populations),
        f"X+ = {ss.x_plus:.12g}  X- = {ss.x_minus:.12g}",
        f"Y+ = {ss.y_plus:.12g}  Y- = {ss.y_minus:.12g}",
    ]
    _report(args, cfg, payload, lines)
    return EXIT_OK


def cmd_current(args, cfg: RunConfig) -> int:
    eig, baths = _setup(cfg)
    rep = transport.current_report(eig, baths, cfg.method, cfg.numerics())
    payload = {
        "supremum": rep.supremum, "slope_dT": rep.slope_dT, "asympt_slope": rep.asympt_slope,
        "a1": rep.a1, "a2": rep.a2,
    }
    lines = []
    if cfg.lamb in ("on", "both"):
        payload.update(j1_lamb=rep.j1_with_lamb, j2_lamb=rep.j2_with_lamb, delta1=rep.delta1,
                       delta2=rep.delta2, margin=rep.second_law_margin.tolist())
        lines += [
            f"J1 (Lamb) = {rep.j1_with_lamb:.12g}  J2 = {rep.j2_with_lamb:.12g}  |J1| = {abs(rep.j1_with_lamb):.12g}",
            f"delta1 = {rep.delta1:.12g}  delta2 = {rep.delta2:.12g}",
            "omega + delta = " + ", ".join(f"{x:.12g}" for x in rep.second_law_margin),
        ]
    if cfg.lamb in ("off", "both"):
        payload.update(j1_nolamb=rep.j1_no_lamb)
        lines.append(f"J1 (no Lamb) = {rep.j1_no_lamb:.12g}  |J1| = {abs(rep.j1_no_lamb):.12g}")
    if cfg.lamb == "both":
        payload.update(dj=rep.dj, dj_magnitude=rep.magnitude_difference)
        lines.append(f"J1 Lamb - J1 no Lamb = {rep.dj:.12g}  |J1 Lamb| - |J1 no Lamb| = {rep.magnitude_difference:.12g}")
    lines.append(f"A1 = {rep.a1:.12g}  A2 = {rep.a2:.12g}")
    lines.append(f"supremum = {rep.supremum:.12g}")
    lines.append(f"d|J1 no Lamb|/d dT = {rep.slope_dT:.12g}")
    if rep.asympt_slope is not None:
        lines.append(f"asymptotic slope = {rep.asympt_slope:.12g}")
    if rep.p1 is not None:
        payload.update(p=[rep.p1, rep.p2], q=[rep.q1, rep.q2])
        lines.append(f"P = ({rep.p1:.12g}, {rep.p2:.12g})  Q = ({rep.q1:.12g}, {rep.q2:.12g})")
    _report(args, cfg, payload, lines)
    return EXIT_OK


def cmd_sweep(args, cfg: RunConfig) -> int:
    params = cfg.system()
    _swap_notice(params)
    eig = eigensystem(params)
    grid = cfg.grid()
    check_hierarchy(eig, _ordered(cfg.bath_pair(float(grid[-1])), params))
    if cfg.lamb not in ("on", "off", "both"):
        raise ConfigError("lamb must be on, off or both")
    lamb = cfg.lamb != "off"
    num = cfg.numerics()
    method = cfg.method

    def row(dT):
        baths = _ordered(cfg.bath_pair(float(dT)), params)
        vals = evaluate_point(eig, baths, lamb, method, num)
        vals["dT"] = dT
        return [vals[c] for c in SWEEP_COLUMNS]

    rows = _parallel_map(row, grid)
    b1, b2 = cfg.bath_pair(float(grid[0]))
    header = [
        "heat sweep over dT = T2 - T1",
        f"eps1={cfg.eps1}, eps2={cfg.eps2}, g={cfg.g}, T1={b1.temperature}, "
        f"gamma1={b1.gamma}, gamma2={b2.gamma}, omega_D1={b1.omega_d}, omega_D2={b2.omega_d}, "
        f"kind1={b1.kind.value}, kind2={b2.kind.value}, lamb={cfg.lamb}, scale={cfg.scale}",
        "currents are magnitudes |J1|; dj = |J1 with shift| - |J1 without shift|",
    ]
    _write_text(cfg.output, _csv(header, SWEEP_COLUMNS, rows))
    return EXIT_OK


def write_figure(name: str, outdir: str) -> list:
    """Write one CSV per curve and a schema sidecar; returns the written paths."""
    preset = PRESETS[name]
    os.makedirs(outdir, exist_ok=True)
    want_r = "R21_exact" in preset.columns
    written, files = [], []
    for curve in preset.curves:
        eig = curve.eig

        def row(dT, curve=curve, eig=eig):
            vals = evaluate_point(eig, curve.baths(float(dT)), want_r=want_r)
            vals["dT"] = dT
            vals["dT_over_wD"] = dT / curve.omega_d
            return [vals[c] for c in preset.columns]

        rows = _parallel_map(row, preset.grid(curve))
        fname = f"{name}_{curve.tag}.csv"
        header = [
            f"preset: {name}",
            f"caption: {preset.caption}",
            f"curve: {curve.tag} eps1={curve.eps1}, eps2={curve.eps2}, g={curve.g}, T1={curve.t1}, "
            f"gamma={curve.gamma}, omega_D={curve.omega_d}, kind={curve.kind.value}",
        ]
        path = os.path.join(outdir, fname)
        _write_text(path, _csv(header, preset.columns, rows))
        written.append(path)
        files.append({"file": fname, "curve": curve.tag, "eps1": curve.eps1, "eps2": curve.eps2, "g": curve.g,
                      "t1": curve.t1, "gamma": curve.gamma, "omega_d": curve.omega_d, "kind": curve.kind.value})
    schema = {
        "preset": name,
        "caption": preset.caption,
        "columns": {c: COLUMN_DOC[c] for c in preset.columns},
        "files": files,
        "grid": {"dT_min": 0.0, "dT_max_over_wD": preset.dT_max_over_wd, "points": preset.points},
    }
    path = os.path.join(outdir, f"{name}_schema.json")
    _write_text(path, json.dumps(schema, indent=2, sort_keys=True) + "\n")
    written.append(path)
    return written


def cmd_figure(args, cfg: RunConfig) -> int:
    for path in write_figure(args.preset, cfg.output or "."):
        print(path)
    return EXIT_OK


def cmd_validate(args, cfg: RunConfig) -> int:
    results = run_checks(args.level)
    print(format_table(results))
    failed = [c for c in results if not c.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    for c in failed:
        print(f"FAILED {c.name}: {c.quantity} expected {c.expected}, got {c.got}, tolerance {c.tolerance}",
              file=sys.stderr)
    return EXIT_VALIDATION if failed else EXIT_OK


# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON run configuration; flags override it")
    common.add_argument("--out", metavar="PATH", help="output file (directory for figure)")

    phys = argparse.ArgumentParser(add_help=False)
    phys.add_argument("--eps1", type=float)
    phys.add_argument("--eps2", type=float)
    phys.add_argument("--g", type=float, help="XX coupling strength")
    phys.add_argument("--t1", type=float, help="bath 1 temperature")
    phys.add_argument("--dt", type=float, help="T2 - T1")
    phys.add_argument("--gamma1", type=float)
    phys.add_argument("--gamma2", type=float, help="defaults to gamma1")
    phys.add_argument("--omega-d", dest="omega_d", type=float, help="cutoff frequency of both baths")
    phys.add_argument("--kind", choices=[k.value for k in SpectralKind])
    phys.add_argument("--lamb", choices=("on", "off", "both"))
    phys.add_argument("--method", choices=("auto", "series", "quadrature"),
                      help="Lamb-shift evaluation (auto: series for Drude baths)")

    parser = argparse.ArgumentParser(prog="heat", description="Heat transport through two coupled qubits.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    sub.add_parser("eigensystem", parents=[common, phys], help="eigenvalues, angles and transition frequencies")
    sub.add_parser("lamb-shift", parents=[common, phys], help="Lamb-shift tables and level shifts")
    sub.add_parser("steady-state", parents=[common, phys], help="closed-form steady-state populations")
    sub.add_parser("current", parents=[common, phys], help="steady-state heat current")
    sw = sub.add_parser("sweep", parents=[common, phys], help="CSV sweep over dT")
    sw.add_argument("--dt-min", type=float)
    sw.add_argument("--dt-max", type=float)
    sw.add_argument("--points", type=int)
    sw.add_argument("--scale", choices=("linear", "log"))
    fig = sub.add_parser("figure", parents=[common], help="CSV data of a figure preset")
    fig.add_argument("preset", choices=sorted(PRESETS))
    val = sub.add_parser("validate", parents=[common], help="run the oracle cross-checks")
    val.add_argument("--level", choices=("quick", "full"), default="quick")
    return parser


COMMANDS = {
    "eigensystem": cmd_eigensystem,
    "lamb-shift": cmd_lamb_shift,
    "steady-state": cmd_steady_state,
    "current": cmd_current,
    "sweep": cmd_sweep,
    "figure": cmd_figure,
    "validate": cmd_validate,
}


def _load_config(path: Optional[str]) -> RunConfig:
    if not path:
        return RunConfig()
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return RunConfig.from_json(data)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    subparser = parser._subparsers._group_actions[0].choices[args.command]
    try:
        cfg = _load_config(args.config)
        cfg.apply_flags(args)
        return COMMANDS[args.command](args, cfg)
    except ConfigError as exc:
        subparser.print_usage(sys.stderr)
        print(f"heat {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"heat {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, TypeError) as exc:
        print(f"heat {args.command}: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
