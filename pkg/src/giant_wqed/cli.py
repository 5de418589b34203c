"""Command-line front end: ``giant-wqed run|validate-kernels|sweep|zeno``.

Scenario files are flat INI text.  All quantities are dimensionless: times
in 1/omega0, rates in Gamma0, lengths in 1/k0 (so omega0 = k0 = 1).
"""
from __future__ import annotations

import argparse
import configparser
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import instantaneous_rate
from .dde import aligned_step, solve_retard
from .field import default_t_grid, default_x_grid, intensity_const, intensity_retard
from .geometry import CouplingLayout, build_braided, build_separate
from .kernels import random_kernel_checks
from .model import WaveguideSetup, markovian_rate, zeno_time_array, zeno_time_single
from .states import custom_state, effective_hamiltonian, excited_single, subradiant_state, timed_dicke
from .trajectory import ConfigurationError, NumericalError
from .volterra import solve

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_VALIDATION = 0, 2, 3, 4
WORKERS_ENV = "GIANT_WQED_WORKERS"
KERNEL_TOL = 1e-7
STATES = ("timed_dicke_plus", "timed_dicke_minus", "subradiant", "excited_single", "custom")
FRAMEWORKS = ("const", "lin", "retard")
OUTPUTS = ("trajectories", "rates", "field", "zeno")
SWEEP_AXES = {
    "d": ("layout", "d_in_units_of_pi_over_k0"),
    "M": ("layout", "M"),
    "N": ("layout", "N"),
    "gamma0_over_omega0": ("setup", "gamma0_over_omega0"),
    "cutoff_ratio": ("setup", "cutoff_ratio"),
}


class ConfigError(ValueError):
    """Invalid scenario file; the message carries the offending line."""


@dataclass
class ScenarioConfig:
    model: str = "const"
    gamma0_over_omega0: float = 1e-4
    cutoff_ratio: float = 1e4
    topology: str = "separate"
    n_atoms: int = 1
    n_legs: int = 2
    d_over_pi: float = 0.1
    centered: bool = False
    positions: list | None = None
    state: str = "excited_single"
    excited_atom: int = 1
    custom_amplitudes: list | None = None
    t_end: float = 300.0
    dt: float = 0.01
    align_dt: bool = False
    frameworks: list = field(default_factory=lambda: ["const"])
    directory: str = "out"
    outputs: list = field(default_factory=lambda: ["trajectories", "rates"])
    x_points_per_d: int = 4
    x_margin_d: float = 2.0
    t_decimate: int = 10

    def setup(self, model: str | None = None) -> WaveguideSetup:
        return WaveguideSetup(model or self.model, self.gamma0_over_omega0, 1.0, self.cutoff_ratio)

    def layout(self) -> CouplingLayout:
        d = self.d_over_pi * np.pi
        if self.topology == "separate":
            return build_separate(self.n_atoms, self.n_legs, d, self.centered)
        if self.topology == "braided":
            return build_braided(self.n_atoms, d, self.centered)
        return CouplingLayout(np.asarray(self.positions, float), "custom")

    def digest(self) -> str:
        canon = json.dumps(asdict(self), sort_keys=True, default=lambda z: [z.real, z.imag])
        return hashlib.sha256(canon.encode()).hexdigest()[:12]


def _line_of(text: str, section: str, key: str | None) -> int | None:
    current = None
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if key is None and current == section:
                return number
        elif current == section and key is not None and "=" in line:
            if line.split("=", 1)[0].strip().lower() == key.lower():
                return number
    return None


def _list(value: str) -> list[str]:
    return [v.strip() for v in value.replace(";", ",").split(",") if v.strip()]


def parse_config(text: str, source: str = "<config>") -> ScenarioConfig:
    """Parse and validate a scenario; errors name the file line."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    cfg = ScenarioConfig()

    def fail(section, key, msg):
        line = _line_of(text, section, key)
        where = f"{source}:{line}" if line else source
        raise ConfigError(f"{where}: [{section}] {key or ''}: {msg}")

    def get(section, key, conv, attr):
        if not parser.has_option(section, key):
            return
        raw = parser.get(section, key)
        try:
            setattr(cfg, attr, conv(raw))
        except ValueError as exc:
            fail(section, key, f"cannot parse {raw!r} ({exc})")

    def boolean(raw):
        low = raw.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError("expected true/false")

    def positions(raw):
        rows = [[float(v) for v in r.split()] for r in raw.split(";") if r.strip()]
        return rows

    def amplitudes(raw):
        return [complex(v.replace(" ", "")) for v in _list(raw)]

    known = {
        "setup": {"model", "gamma0_over_omega0", "cutoff_ratio"},
        "layout": {"topology", "N", "M", "d_in_units_of_pi_over_k0", "centered", "positions"},
        "state": {"state", "excited_atom", "custom_amplitudes"},
        "run": {"t_end_omega0", "dt_omega0", "align_dt", "frameworks"},
        "outputs": {"directory", "which"},
        "field": {"x_points_per_d", "x_margin_d", "t_decimate"},
    }
    for section in parser.sections():
        if section not in known:
            fail(section, None, "unknown section")
        for key in parser.options(section):
            if key not in {k.lower() for k in known[section]}:
                fail(section, key, "unknown key")
    # configparser lower-cases keys
    get("setup", "model", str.strip, "model")
    get("setup", "gamma0_over_omega0", float, "gamma0_over_omega0")
    get("setup", "cutoff_ratio", float, "cutoff_ratio")
    get("layout", "topology", str.strip, "topology")
    get("layout", "n", int, "n_atoms")
    get("layout", "m", int, "n_legs")
    get("layout", "d_in_units_of_pi_over_k0", float, "d_over_pi")
    get("layout", "centered", boolean, "centered")
    get("layout", "positions", positions, "positions")
    get("state", "state", str.strip, "state")
    get("state", "excited_atom", int, "excited_atom")
    get("state", "custom_amplitudes", amplitudes, "custom_amplitudes")
    get("run", "t_end_omega0", float, "t_end")
    get("run", "dt_omega0", float, "dt")
    get("run", "align_dt", boolean, "align_dt")
    get("run", "frameworks", _list, "frameworks")
    get("outputs", "directory", str.strip, "directory")
    get("outputs", "which", _list, "outputs")
    get("field", "x_points_per_d", int, "x_points_per_d")
    get("field", "x_margin_d", float, "x_margin_d")
    get("field", "t_decimate", int, "t_decimate")

    if cfg.model not in ("const", "lin"):
        fail("setup", "model", f"expected const or lin, got {cfg.model!r}")
    if not cfg.gamma0_over_omega0 > 0:
        fail("setup", "gamma0_over_omega0", "must be positive")
    if not cfg.cutoff_ratio > 1:
        fail("setup", "cutoff_ratio", "must exceed 1")
    if cfg.topology not in ("separate", "braided", "custom"):
        fail("layout", "topology", "expected separate, braided or custom")
    if cfg.topology == "custom" and not cfg.positions:
        fail("layout", "positions", "custom topology needs positions")
    if cfg.topology != "custom" and (cfg.n_atoms < 1 or cfg.n_legs < 1 or not cfg.d_over_pi > 0):
        fail("layout", None, "N, M must be >= 1 and d > 0")
    if cfg.topology == "braided" and cfg.n_legs != 2:
        fail("layout", "M", "braided chains are two-legged")
    if cfg.state not in STATES:
        fail("state", "state", f"expected one of {', '.join(STATES)}")
    if cfg.state == "custom" and not cfg.custom_amplitudes:
        fail("state", "custom_amplitudes", "custom state needs amplitudes")
    if not cfg.frameworks:
        fail("run", "frameworks", "at least one framework is required")
    for fw in cfg.frameworks:
        if fw not in FRAMEWORKS:
            fail("run", "frameworks", f"unknown framework {fw!r}")
    if len(set(cfg.frameworks)) != len(cfg.frameworks):
        fail("run", "frameworks", "frameworks must be distinct")
    if not cfg.t_end > 0 or not cfg.dt > 0:
        fail("run", None, "t_end_omega0 and dt_omega0 must be positive")
    for out in cfg.outputs:
        if out not in OUTPUTS:
            fail("outputs", "which", f"unknown output {out!r}")
    try:
        layout = cfg.layout()
    except ValueError as exc:
        fail("layout", None, str(exc))
    if cfg.state == "excited_single" and not 1 <= cfg.excited_atom <= layout.n_atoms:
        fail("state", "excited_atom", "atom index out of range")
    if cfg.state == "custom" and len(cfg.custom_amplitudes) != layout.n_atoms:
        fail("state", "custom_amplitudes", f"need {layout.n_atoms} amplitudes")
    if cfg.align_dt:
        cfg.dt = aligned_step(layout, 1.0, cfg.dt)
    return cfg


def _read_text(path: Path) -> str:
    try:
        return path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from exc


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    return parse_config(_read_text(path), str(path))


def initial_state(cfg: ScenarioConfig, layout: CouplingLayout, setup: WaveguideSetup) -> np.ndarray:
    if cfg.state == "timed_dicke_plus":
        return timed_dicke(layout, setup, +1).amplitudes
    if cfg.state == "timed_dicke_minus":
        return timed_dicke(layout, setup, -1).amplitudes
    if cfg.state == "subradiant":
        return subradiant_state(effective_hamiltonian(layout, setup)).amplitudes
    if cfg.state == "custom":
        return custom_state(cfg.custom_amplitudes).amplitudes
    return excited_single(layout, cfg.excited_atom - 1).amplitudes


def _trajectory(cfg: ScenarioConfig, framework: str, layout, c0):
    if framework == "retard":
        return solve_retard(layout, cfg.gamma0_over_omega0, 1.0, c0, cfg.t_end, cfg.dt, strict=True)
    return solve(cfg.setup(framework), layout, c0, cfg.t_end, cfg.dt)


def execute(cfg: ScenarioConfig) -> dict:
    """Run every framework of a scenario and write its artifacts.

    Returns a summary (files written, plateau and peak rates).
    """
    outdir = Path(cfg.directory)
    outdir.mkdir(parents=True, exist_ok=True)
    tag = cfg.digest()
    layout = cfg.layout()
    setup = cfg.setup()
    try:
        c0 = initial_state(cfg, layout, setup)
    except ValueError as exc:
        raise ConfigurationError(str(exc)) from exc
    summary = {"digest": tag, "files": [], "frameworks": {}}
    for fw in cfg.frameworks:
        traj = _trajectory(cfg, fw, layout, c0)
        rate = instantaneous_rate(traj, rate_ratio=cfg.gamma0_over_omega0)
        summary["frameworks"][fw] = {
            "plateau_rate": rate.plateau(),
            "peak_rate": rate.peak()[1],
            "peak_time": rate.peak()[0],
        }
        if "trajectories" in cfg.outputs:
            name = outdir / f"{tag}_{fw}_trajectory.csv"
            traj.to_csv(name)
            summary["files"].append(name.name)
        if "rates" in cfg.outputs:
            name = outdir / f"{tag}_{fw}_rates.csv"
            rate.to_csv(name)
            summary["files"].append(name.name)
            if layout.n_atoms > 1:
                for n in range(layout.n_atoms):
                    name = outdir / f"{tag}_{fw}_rates_atom{n + 1}.csv"
                    instantaneous_rate(traj, n, rate_ratio=cfg.gamma0_over_omega0).to_csv(name)
                    summary["files"].append(name.name)
        if "field" in cfg.outputs and fw in ("const", "retard"):
            x_grid = default_x_grid(layout, cfg.x_points_per_d, cfg.x_margin_d)
            t_grid = default_t_grid(traj, cfg.t_decimate)
            if fw == "retard":
                fmap = intensity_retard(traj, layout, x_grid, t_grid)
            else:
                fmap = intensity_const(traj, layout, cfg.setup("const"), x_grid, t_grid)
            for suffix, writer in (("field.csv", fmap.to_csv), ("field.gnu", fmap.to_gnuplot_matrix)):
                name = outdir / f"{tag}_{fw}_{suffix}"
                writer(name)
                summary["files"].append(name.name)
    if "zeno" in cfg.outputs:
        name = outdir / f"{tag}_zeno.csv"
        name.write_text(_zeno_table(cfg))
        summary["files"].append(name.name)
    return summary


def _zeno_table(cfg: ScenarioConfig) -> str:
    layout = cfg.layout()
    d = cfg.d_over_pi * np.pi
    gap = float(np.mean(layout.within_atom_gaps())) if layout.n_legs > 1 else d
    lines = ["quantity,model,value"]
    for model in ("const", "lin"):
        setup = cfg.setup(model)
        lines.append(f"tau_Z,{model},{zeno_time_single(setup, layout.n_legs, gap)!r}")
        if model == "lin":
            exact = zeno_time_single(setup, layout.n_legs, gap, exact=True)
            lines.append(f"tau_Z_exact,{model},{exact!r}")
        for sign, label in ((1, "plus"), (-1, "minus")):
            lines.append(f"tau_ZN_{label},{model},{zeno_time_array(setup, layout, sign * setup.k0)!r}")
    for m in range(1, max(layout.n_legs, 4) + 1):
        lines.append(f"gamma_mar_M{m},-,{markovian_rate(1.0, m, gap)!r}")
    return "\n".join(lines) + "\n"


def _manifest(path: Path, cfg_echo: str, payload: dict, wall: float) -> None:
    data = {
        "engine": "giant_wqed",
        "version": __version__,
        "config": cfg_echo,
        "wall_time_s": round(wall, 3),
        "written": time.strftime("%Y-%m-%dT%H:%M:%S"),
        **payload,
    }
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    start = time.perf_counter()
    summary = execute(cfg)
    wall = time.perf_counter() - start
    manifest = Path(cfg.directory) / f"{summary['digest']}_manifest.json"
    _manifest(manifest, Path(args.config).read_text(), summary, wall)
    for fw, info in summary["frameworks"].items():
        print(f"{fw}: plateau {info['plateau_rate']:.6g} Gamma0, peak {info['peak_rate']:.6g} Gamma0 "
              f"at omega0 t = {info['peak_time']:.4g}")
    print(f"wrote {len(summary['files'])} files and {manifest}")
    return EXIT_OK


def kernel_report(samples: int, seed: int) -> tuple[str, bool]:
    checks = random_kernel_checks(samples, seed)
    worst = max(checks, key=lambda c: c.error)
    ok = worst.error <= KERNEL_TOL
    lines = [
        f"kernel validation: {samples} samples x 2 models, seed {seed}",
        f"max abs error {worst.error:.3e} (tolerance {KERNEL_TOL:g})",
        f"worst: model={worst.model} phase={worst.phase!r} lag={worst.lag!r} cutoff={worst.cutoff!r}",
        "PASS" if ok else "FAIL",
    ]
    return "\n".join(lines) + "\n", ok


def cmd_validate(args) -> int:
    if args.samples < 1:
        raise ConfigError("--samples must be at least 1")
    report, ok = kernel_report(args.samples, args.seed)
    sys.stdout.write(report)
    if args.report:
        Path(args.report).write_text(report)
    return EXIT_OK if ok else EXIT_VALIDATION


def _sweep_one(item):
    cfg, value = item
    return value, execute(cfg)


def _worker_cap() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ConfigError(f"{WORKERS_ENV} must be an integer") from None
    return max(1, os.cpu_count() or 1)


def cmd_sweep(args) -> int:
    if args.axis not in SWEEP_AXES:
        raise ConfigError(f"unknown sweep axis {args.axis!r}; expected one of {', '.join(SWEEP_AXES)}")
    values = _list(args.values or "")
    if not values:
        raise ConfigError("--values must list at least one value")
    text = _read_text(Path(args.config))
    section, key = SWEEP_AXES[args.axis]
    configs = []
    for value in values:
        parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
        parser.optionxform = str
        parser.read_string(text, source=args.config)
        if not parser.has_section(section):
            parser.add_section(section)
        parser.set(section, key, value)
        buf = []
        for sec in parser.sections():
            buf.append(f"[{sec}]")
            buf += [f"{k} = {v}" for k, v in parser.items(sec)]
        configs.append((parse_config("\n".join(buf) + "\n", f"{args.config} ({args.axis}={value})"), value))

    start = time.perf_counter()
    workers = min(_worker_cap(), len(configs))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_one, configs))
    else:
        results = [_sweep_one(item) for item in configs]
    wall = time.perf_counter() - start

    outdir = Path(configs[0][0].directory)
    digest = hashlib.sha256((text + args.axis + ",".join(values)).encode()).hexdigest()[:12]
    rows = ["value,framework,plateau_rate,peak_rate,peak_time"]
    for value, summary in results:
        for fw, info in summary["frameworks"].items():
            rows.append(f"{value},{fw},{info['plateau_rate']!r},{info['peak_rate']!r},{info['peak_time']!r}")
    summary_path = outdir / f"sweep_{digest}_{args.axis}_summary.csv"
    summary_path.write_text("\n".join(rows) + "\n")
    _manifest(
        outdir / f"sweep_{digest}_manifest.json",
        text,
        {"axis": args.axis, "values": values, "runs": {v: s for v, s in results}, "summary": summary_path.name},
        wall,
    )
    sys.stdout.write("\n".join(rows) + "\n")
    return EXIT_OK


def cmd_zeno(args) -> int:
    cfg = load_config(args.config)
    sys.stdout.write(_zeno_table(cfg))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="giant-wqed", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one scenario file")
    p.add_argument("config")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("validate-kernels", help="compare closed-form kernels with quadrature")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--report", help="also write the report to this file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("sweep", help="run a scenario over several values of one parameter")
    p.add_argument("config")
    p.add_argument("--axis", required=True)
    p.add_argument("--values", required=True, help="comma-separated values")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("zeno", help="print Zeno times and Markovian rates")
    p.add_argument("config")
    p.set_defaults(func=cmd_zeno)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ConfigurationError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
