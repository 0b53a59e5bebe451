"""Command-line interface.

Six subcommands, one CSV schema family, deterministic output:

  simulate        exact propagation of the full model
  approx          strong-coupling approximate solution (any Picard order)
  compare         approximation against the exact propagator, per time step
  scan-delta      worst-case infidelity of the approximation versus delta
  scan-rwa        full-versus-RWA discrepancy versus drive frequency
  phase-integral  the two phase-integral routes side by side

Numbers are written with 17 significant digits, '.' decimal point and '\n'
line endings, so identical configurations reproduce byte-identical files.
Options may come from a flat JSON config file (--config); keys are the flag
names with dashes stripped (t-max -> tmax), explicit flags win over the
file, the file wins over defaults.  With --plot, a PNG figure is rendered
next to the CSV.

Exit codes: 0 success, 1 numerical failure or unwritable output, 2 usage.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, fields
from typing import Sequence

import numpy as np

from .algebra import HADAMARD
from .hamiltonians import DriveParams, hamiltonian_full
from .propagator import IntegrationError, IntegratorConfig, propagate
from .quadrature import QuadratureError
from .strongcoupling import (approx_solution, phase_integral_bessel,
                             phase_integral_quadrature, picard_iterate,
                             reconstruct_full)
from .analysis import (ScanResult, bloch_siegert_proxy_scan, fidelity,
                       infidelity_scan)
from . import plotting

__all__ = ["RunConfig", "parse_args", "run", "main"]

COMMANDS = ("simulate", "approx", "compare", "scan-delta", "scan-rwa",
            "phase-integral")


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved options for one CLI invocation."""

    command: str
    delta: tuple[float, ...] = (0.1,)
    g: float = 1.0
    omega: tuple[float, ...] = (1.0,)
    alpha: complex = 1.0 + 0j
    beta: complex = 0j
    theta: float | None = None
    equal_superposition: bool = False
    psi0: complex | None = None
    psi1: complex | None = None
    t_max: float = 10.0
    samples: int | None = None
    rel_tol: float = 1e-10
    quad_tol: float = 1e-10
    order: int = 1
    out: str | None = None
    plot: bool = False

    def to_config_dict(self) -> dict:
        """Serialize everything but the command in config-file form."""
        data: dict = {
            "delta": _format_float_list(self.delta),
            "g": self.g,
            "omega": _format_float_list(self.omega),
            "equalsuperposition": self.equal_superposition,
            "tmax": self.t_max,
            "reltol": self.rel_tol,
            "quadtol": self.quad_tol,
            "order": self.order,
            "plot": self.plot,
        }
        # alpha/beta are derived values in the psi and equal-superposition
        # modes; writing them back would make the file self-contradictory.
        if self.psi0 is not None:
            data["psi0"] = format_complex(self.psi0)
            data["psi1"] = format_complex(self.psi1)
        elif not self.equal_superposition:
            data["alpha"] = format_complex(self.alpha)
            data["beta"] = format_complex(self.beta)
        if self.theta is not None:
            data["theta"] = self.theta
        if self.samples is not None:
            data["samples"] = self.samples
        if self.out is not None:
            data["out"] = self.out
        return data


def parse_complex(text: str) -> complex:
    """Parse 're+imi' style complex literals; 'j' is accepted for 'i'."""
    cleaned = str(text).strip().replace(" ", "").replace("i", "j")
    try:
        return complex(cleaned)
    except ValueError:
        raise ValueError(f"cannot parse complex number from {text!r}") from None


def format_complex(z: complex) -> str:
    """Inverse of :func:`parse_complex`: 're+imi' with full precision."""
    return f"{z.real:.17g}{z.imag:+.17g}i"


def _format_float_list(values: tuple[float, ...]) -> str | float:
    if len(values) == 1:
        return values[0]
    return ",".join(format(v, ".17g") for v in values)


def _parse_float_list(raw, flag: str) -> tuple[float, ...]:
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return (float(raw),)
    if isinstance(raw, (tuple, list)):
        try:
            values = tuple(float(v) for v in raw)
        except (TypeError, ValueError):
            raise ValueError(f"{flag} expects numbers, got {raw!r}") from None
        if not values:
            raise ValueError(f"{flag} got an empty list")
        return values
    try:
        parts = [p for p in str(raw).split(",") if p.strip() != ""]
        values = tuple(float(p) for p in parts)
    except ValueError:
        raise ValueError(f"{flag} expects a number or comma-separated "
                         f"numbers, got {raw!r}") from None
    if not values:
        raise ValueError(f"{flag} got an empty list")
    return values


# RunConfig field name -> config file key (flag name with dashes stripped).
_FILE_KEYS = {
    "delta": "delta",
    "g": "g",
    "omega": "omega",
    "alpha": "alpha",
    "beta": "beta",
    "theta": "theta",
    "equal_superposition": "equalsuperposition",
    "psi0": "psi0",
    "psi1": "psi1",
    "t_max": "tmax",
    "samples": "samples",
    "rel_tol": "reltol",
    "quad_tol": "quadtol",
    "order": "order",
    "out": "out",
    "plot": "plot",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="strongdrive",
        description="Driven two-level system beyond the rotating-wave "
                    "approximation.")
    sub = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "simulate": "Exact propagation of the full model.",
        "approx": "Strong-coupling approximate solution.",
        "compare": "Approximation versus exact propagation.",
        "scan-delta": "Approximation infidelity over a list of delta values.",
        "scan-rwa": "Full-versus-RWA discrepancy over a list of omega values.",
        "phase-integral": "Cross-report the two phase-integral routes.",
    }
    for name in COMMANDS:
        sp = sub.add_parser(name, help=descriptions[name])
        sp.add_argument("--delta", type=str, default=None,
                        help="level splitting; comma-separated list for "
                             "scan-delta")
        sp.add_argument("--g", type=float, default=None,
                        help="drive amplitude")
        sp.add_argument("--omega", type=str, default=None,
                        help="drive frequency (> 0); comma-separated list "
                             "for scan-rwa")
        sp.add_argument("--alpha", type=str, default=None,
                        help="rotated-frame initial amplitude, 're+imi'")
        sp.add_argument("--beta", type=str, default=None,
                        help="rotated-frame initial amplitude, 're+imi'")
        sp.add_argument("--theta", type=float, default=None,
                        help="phase for --equal-superposition")
        sp.add_argument("--equal-superposition", action="store_const",
                        const=True, default=None,
                        help="start from alpha = beta = e^{i theta}/sqrt(2)")
        sp.add_argument("--psi0", type=str, default=None,
                        help="lab-frame initial amplitude <0|psi>, 're+imi'")
        sp.add_argument("--psi1", type=str, default=None,
                        help="lab-frame initial amplitude <1|psi>, 're+imi'")
        sp.add_argument("--t-max", type=float, default=None,
                        help="time horizon")
        sp.add_argument("--samples", type=int, default=None,
                        help="grid points over [0, t-max] (default: 32 per "
                             "drive period)")
        sp.add_argument("--rel-tol", type=float, default=None,
                        help="propagator relative tolerance")
        sp.add_argument("--quad-tol", type=float, default=None,
                        help="phase-integral quadrature tolerance")
        sp.add_argument("--order", type=int, default=None,
                        help="Picard order for approx (default 1)")
        sp.add_argument("--out", type=str, default=None,
                        help="output CSV path (default '<command>.csv')")
        sp.add_argument("--plot", action="store_const", const=True,
                        default=None,
                        help="render a PNG figure next to the CSV")
        sp.add_argument("--config", type=str, default=None,
                        help="JSON config file; flags override its entries")
    return parser


def _load_config_file(path: str, parser: argparse.ArgumentParser) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        parser.error(f"cannot read config file {path!r}: {exc}")
    except json.JSONDecodeError as exc:
        parser.error(f"config file {path!r} is not valid JSON: {exc}")
    if not isinstance(raw, dict):
        parser.error(f"config file {path!r} must hold a flat JSON object")
    known = set(_FILE_KEYS.values())
    for key in raw:
        if key not in known:
            parser.error(f"config file {path!r} has unknown key {key!r}")
    return raw


def parse_args(argv: Sequence[str] | None = None) -> RunConfig:
    """Parse command-line arguments into a validated RunConfig.

    Precedence: built-in defaults, then the --config file, then explicit
    flags.  Exits with status 2 on any usage or validation error.
    """
    parser = _build_parser()
    args = parser.parse_args(argv)

    defaults = {f.name: f.default for f in fields(RunConfig)
                if f.name != "command"}
    merged = dict(defaults)
    explicit: set[str] = set()
    if args.config is not None:
        file_data = _load_config_file(args.config, parser)
        for field_name, key in _FILE_KEYS.items():
            if key in file_data:
                merged[field_name] = file_data[key]
                explicit.add(field_name)
    for field_name in _FILE_KEYS:
        cli_value = getattr(args, field_name)
        if cli_value is not None:
            merged[field_name] = cli_value
            explicit.add(field_name)

    try:
        config = _normalize(args.command, merged, explicit)
    except ValueError as exc:
        parser.error(str(exc))
    return config


def _normalize(command: str, merged: dict,
               explicit: frozenset[str] | set[str] = frozenset()) -> RunConfig:
    delta = _parse_float_list(merged["delta"], "--delta")
    omega = _parse_float_list(merged["omega"], "--omega")
    for d in delta:
        if not math.isfinite(d) or d < 0.0:
            raise ValueError(f"--delta values must be finite and >= 0, got {d}")
    for w in omega:
        if not math.isfinite(w) or w <= 0.0:
            raise ValueError(f"--omega values must be finite and > 0, got {w}")
    if command != "scan-delta" and len(delta) != 1:
        raise ValueError(f"{command} takes a single --delta value")
    if command != "scan-rwa" and len(omega) != 1:
        raise ValueError(f"{command} takes a single --omega value")

    g = float(merged["g"])
    if not math.isfinite(g) or g < 0.0:
        raise ValueError(f"--g must be finite and >= 0, got {g}")

    t_max = float(merged["t_max"])
    if not math.isfinite(t_max) or t_max <= 0.0:
        raise ValueError(f"--t-max must be finite and > 0, got {t_max}")

    samples = merged["samples"]
    if samples is not None:
        samples = int(samples)
        if samples < 2:
            raise ValueError(f"--samples must be >= 2, got {samples}")

    rel_tol = float(merged["rel_tol"])
    if not (0.0 < rel_tol <= 1e-3):
        raise ValueError(f"--rel-tol must be in (0, 1e-3], got {rel_tol}")
    quad_tol = float(merged["quad_tol"])
    if not (0.0 < quad_tol):
        raise ValueError(f"--quad-tol must be > 0, got {quad_tol}")

    order = int(merged["order"])
    if order < 0:
        raise ValueError(f"--order must be >= 0, got {order}")

    theta = merged["theta"]
    if theta is not None:
        theta = float(theta)
    equal_superposition = bool(merged["equal_superposition"] or False)

    psi_given = merged["psi0"] is not None or merged["psi1"] is not None
    alpha = _as_complex(merged["alpha"], "--alpha")
    beta = _as_complex(merged["beta"], "--beta")
    # A mode conflict is about what the user asked for, not the values:
    # --alpha 1 still clashes with --equal-superposition even though 1
    # happens to be the default amplitude.
    amplitudes_custom = ("alpha" in explicit or "beta" in explicit
                         or alpha != RunConfig.alpha or beta != RunConfig.beta)

    psi0 = psi1 = None
    if psi_given:
        if merged["psi0"] is None or merged["psi1"] is None:
            raise ValueError("--psi0 and --psi1 must be given together")
        if equal_superposition or theta is not None:
            raise ValueError("--psi0/--psi1 conflicts with "
                             "--equal-superposition/--theta")
        if amplitudes_custom:
            raise ValueError("--psi0/--psi1 conflicts with --alpha/--beta")
        psi0 = _as_complex(merged["psi0"], "--psi0")
        psi1 = _as_complex(merged["psi1"], "--psi1")
        lab = np.array([psi0, psi1])
        nrm = float(np.linalg.norm(lab))
        if abs(nrm - 1.0) > 1e-9:
            raise ValueError(
                f"|psi0|^2 + |psi1|^2 must be 1 within 1e-9, got {nrm**2!r}")
        rotated = HADAMARD @ lab
        alpha = complex(rotated[0])
        beta = complex(rotated[1])
    elif equal_superposition:
        if amplitudes_custom:
            raise ValueError("--equal-superposition conflicts with "
                             "--alpha/--beta")
        phase = np.exp(1j * (theta or 0.0)) / np.sqrt(2.0)
        alpha = complex(phase)
        beta = complex(phase)
    else:
        if theta is not None:
            raise ValueError("--theta requires --equal-superposition")
        nrm = abs(alpha) ** 2 + abs(beta) ** 2
        if abs(nrm - 1.0) > 1e-9:
            raise ValueError(
                f"|alpha|^2 + |beta|^2 must be 1 within 1e-9, got {nrm!r} "
                f"(hint: --equal-superposition builds a normalized pair)")

    out = merged["out"]
    if out is not None:
        out = str(out)
    plot = bool(merged["plot"] or False)

    return RunConfig(command=command, delta=delta, g=g, omega=omega,
                     alpha=alpha, beta=beta, theta=theta,
                     equal_superposition=equal_superposition,
                     psi0=psi0, psi1=psi1, t_max=t_max, samples=samples,
                     rel_tol=rel_tol, quad_tol=quad_tol, order=order,
                     out=out, plot=plot)


def _as_complex(value, flag: str) -> complex:
    if isinstance(value, complex):
        return value
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    try:
        return parse_complex(str(value))
    except ValueError as exc:
        raise ValueError(f"{flag}: {exc}") from None


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_csv(path: str, header: Sequence[str],
               rows: Sequence[Sequence[float]]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(x) for x in row) for row in rows)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")


def _default_samples(t_max: float, period: float) -> int:
    return max(2, math.ceil(32.0 * t_max / period) + 1)


def _figure_path(csv_path: str) -> str:
    root, _ = os.path.splitext(csv_path)
    return root + ".png"


def _state_rows(times: np.ndarray, states: np.ndarray,
                fidelities: np.ndarray | None = None) -> list[list[float]]:
    rows = []
    for k, t in enumerate(times):
        psi = states[k]
        row = [t, psi[0].real, psi[0].imag, psi[1].real, psi[1].imag,
               abs(psi[1]) ** 2]
        if fidelities is not None:
            row.append(fidelities[k])
        row.append(float(np.linalg.norm(psi)))
        rows.append(row)
    return rows


def run(config: RunConfig) -> int:
    """Execute one command; returns the process exit status."""
    out_path = config.out or f"{config.command}.csv"
    try:
        if config.command == "simulate":
            summary = _run_simulate(config, out_path)
        elif config.command == "approx":
            summary = _run_approx(config, out_path)
        elif config.command == "compare":
            summary = _run_compare(config, out_path)
        elif config.command == "scan-delta":
            summary = _run_scan_delta(config, out_path)
        elif config.command == "scan-rwa":
            summary = _run_scan_rwa(config, out_path)
        elif config.command == "phase-integral":
            summary = _run_phase_integral(config, out_path)
        else:
            print(f"unknown command {config.command!r}", file=sys.stderr)
            return 2
    except (IntegrationError, QuadratureError, ValueError) as exc:
        print(f"strongdrive {config.command}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"strongdrive {config.command}: {exc}", file=sys.stderr)
        return 1
    print(summary)
    return 0


def _scalar_params(config: RunConfig) -> DriveParams:
    return DriveParams(delta=config.delta[0], g=config.g,
                       omega=config.omega[0])


def _time_grid(config: RunConfig, params: DriveParams) -> np.ndarray:
    n = config.samples or _default_samples(config.t_max, params.period)
    return np.linspace(0.0, config.t_max, n)


def _initial_lab_state(config: RunConfig) -> np.ndarray:
    psi = HADAMARD @ np.array([config.alpha, config.beta])
    return psi / np.linalg.norm(psi)


def _exact_trajectory(config: RunConfig, params: DriveParams,
                      grid: np.ndarray):
    cfg = IntegratorConfig(rel_tol=config.rel_tol, abs_tol=1e-12,
                           max_step=params.period / 20.0)
    return propagate(lambda t: hamiltonian_full(t, params),
                     _initial_lab_state(config), grid, cfg, params=params)


def _approx_states(config: RunConfig, params: DriveParams,
                   grid: np.ndarray) -> np.ndarray:
    if config.order == 1:
        states = [approx_solution(float(t), config.alpha, config.beta,
                                  params, config.quad_tol) for t in grid]
    else:
        sol = picard_iterate(params, config.alpha, config.beta, config.order,
                             config.quad_tol)
        states = [reconstruct_full(float(t), sol.phi(float(t)), params)
                  for t in grid]
    return np.array(states)


_STATE_HEADER = ["t", "re_psi0", "im_psi0", "re_psi1", "im_psi1",
                 "pop_excited", "norm"]
_COMPARE_HEADER = ["t", "re_psi0", "im_psi0", "re_psi1", "im_psi1",
                   "pop_excited", "fidelity_vs_exact", "norm"]


def _run_simulate(config: RunConfig, out_path: str) -> str:
    params = _scalar_params(config)
    grid = _time_grid(config, params)
    traj = _exact_trajectory(config, params, grid)
    _write_csv(out_path, _STATE_HEADER, _state_rows(traj.times, traj.states))
    if config.plot:
        fig = plotting.trajectory_figure(traj.times,
                                         traj.populations_excited(),
                                         traj.norms(), title="exact")
        plotting.save_figure(fig, _figure_path(out_path))
    return (f"simulate: wrote {grid.size} rows to {out_path}; "
            f"final norm drift = {traj.norm_drift():.3e}")


def _run_approx(config: RunConfig, out_path: str) -> str:
    params = _scalar_params(config)
    grid = _time_grid(config, params)
    states = _approx_states(config, params, grid)
    _write_csv(out_path, _STATE_HEADER, _state_rows(grid, states))
    norms = np.linalg.norm(states, axis=1)
    deviation = float(np.max(np.abs(norms - 1.0)))
    if config.plot:
        fig = plotting.trajectory_figure(grid, np.abs(states[:, 1]) ** 2,
                                         norms,
                                         title=f"order {config.order}")
        plotting.save_figure(fig, _figure_path(out_path))
    return (f"approx: wrote {grid.size} rows to {out_path}; "
            f"max norm deviation = {deviation:.3e}")


def _run_compare(config: RunConfig, out_path: str) -> str:
    params = _scalar_params(config)
    grid = _time_grid(config, params)
    traj = _exact_trajectory(config, params, grid)
    states = _approx_states(config, params, grid)
    fidelities = np.array([fidelity(traj.states[k], states[k])
                           for k in range(grid.size)])
    _write_csv(out_path, _COMPARE_HEADER,
               _state_rows(grid, states, fidelities))
    max_infidelity = float(np.max(1.0 - fidelities))
    if config.plot:
        fig = plotting.trajectory_figure(grid, np.abs(states[:, 1]) ** 2,
                                         np.linalg.norm(states, axis=1),
                                         fidelities, title="approx vs exact")
        plotting.save_figure(fig, _figure_path(out_path))
    return (f"compare: wrote {grid.size} rows to {out_path}; "
            f"max infidelity = {max_infidelity:.3e}; "
            f"final norm drift = {traj.norm_drift():.3e}")


def _scan_csv(result: ScanResult, out_path: str, param_cols: dict) -> None:
    header = ["axis", "metric", *param_cols.keys()]
    rows = [[x, v, *param_cols.values()]
            for x, v in zip(result.axis, result.values)]
    _write_csv(out_path, header, rows)


def _report_scan_failures(result: ScanResult) -> None:
    for axis_value, reason in result.failures:
        print(f"scan point {axis_value:g} failed: {reason}", file=sys.stderr)


def _run_scan_delta(config: RunConfig, out_path: str) -> str:
    params = _scalar_params(config)
    grid_samples = config.samples or _default_samples(config.t_max,
                                                      params.period)
    result = infidelity_scan(params, config.delta, config.t_max,
                             grid_samples, config.quad_tol,
                             alpha=config.alpha, beta=config.beta)
    _scan_csv(result, out_path,
              {"g": config.g, "omega": config.omega[0],
               "horizon": config.t_max})
    _report_scan_failures(result)
    if result.axis.size == 0:
        raise IntegrationError("every scan point failed", t_fail=0.0)
    if config.plot:
        fig = plotting.scan_figure(result.axis, result.values, "delta",
                                   "max infidelity")
        plotting.save_figure(fig, _figure_path(out_path))
    return (f"scan-delta: wrote {result.axis.size} rows to {out_path}; "
            f"max infidelity = {float(np.max(result.values)):.3e}")


def _run_scan_rwa(config: RunConfig, out_path: str) -> str:
    params = _scalar_params(config)
    result = bloch_siegert_proxy_scan(params, config.omega, config.t_max,
                                      samples=config.samples,
                                      rel_tol=config.rel_tol)
    _scan_csv(result, out_path,
              {"delta": config.delta[0], "g": config.g,
               "horizon": config.t_max})
    _report_scan_failures(result)
    if result.axis.size == 0:
        raise IntegrationError("every scan point failed", t_fail=0.0)
    if config.plot:
        fig = plotting.scan_figure(result.axis, result.values, "omega",
                                   "max trace distance vs RWA")
        plotting.save_figure(fig, _figure_path(out_path))
    return (f"scan-rwa: wrote {result.axis.size} rows to {out_path}; "
            f"max trace distance = {float(np.max(result.values)):.3e}")


def _run_phase_integral(config: RunConfig, out_path: str) -> str:
    params = _scalar_params(config)
    grid = _time_grid(config, params)
    quad_vals = []
    bessel_vals = []
    for t in grid:
        quad_vals.append(
            phase_integral_quadrature(float(t), +1, params,
                                      config.quad_tol).value)
        bessel_vals.append(phase_integral_bessel(float(t), +1, params).value)
    quad_arr = np.array(quad_vals)
    bessel_arr = np.array(bessel_vals)
    gap = np.abs(quad_arr - bessel_arr)
    rows = [[t, q.real, q.imag, b.real, b.imag, d]
            for t, q, b, d in zip(grid, quad_arr, bessel_arr, gap)]
    _write_csv(out_path,
               ["t", "re_quadrature", "im_quadrature", "re_bessel",
                "im_bessel", "discrepancy"], rows)
    if config.plot:
        fig = plotting.phase_integral_figure(grid, quad_arr, bessel_arr, gap)
        plotting.save_figure(fig, _figure_path(out_path))
    return (f"phase-integral: wrote {grid.size} rows to {out_path}; "
            f"max discrepancy = {float(np.max(gap)):.3e}")


def main(argv: Sequence[str] | None = None) -> int:
    """Console entry point."""
    config = parse_args(argv)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
