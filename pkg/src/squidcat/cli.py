"""Batch front end: JSON run configuration in, tables/states/reports out.

One invocation runs one scenario (cat, inject, squeeze, sweep, verify or
feasibility) and writes a single output file at the configured path.  All
floating-point output is printed with 17 significant digits so emitted
states reload bit-faithfully.

Exit codes: 0 success, 2 configuration error, 3 numerical-contract failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .analytic import (
    branch_decomposition_to_dict,
    evolve_coherent,
    evolve_vacuum,
    flux_pi_pulse,
    materialize_label,
    squeezed_evolution,
)
from .errors import ConfigError, HermiticityError, NullOutcomeError, TruncationError
from .experiments import (
    VERIFY_SCENARIOS,
    default_lambda_grid,
    feasibility_report,
    fig1_sweep,
    sweep_rows_to_csv,
    verify_analytic_numeric,
)
from .hilbert import CavityState, min_quadrature_variance, wigner
from .measurement import measure_qubit, measurement_record_to_dict
from .model import CAVITY_KINDS, DeviceParams, coupling_xi

__all__ = ["RunConfig", "load_config", "run", "main", "example_config", "dumps17"]

SCENARIOS = ("cat", "inject", "squeeze", "sweep", "verify", "feasibility")

_DEVICE_KEY_MAP = {
    "E_J": "E_J",
    "E_ch": "E_ch",
    "n_g": "n_g",
    "phi_c_ratio": "phi_c_ratio",
    "lambda": "wavelength",
    "cavity_kind": "cavity_kind",
    "S": "squid_area",
    "z0": "z0",
    "Q": "Q",
    "omega": "omega",
}
_REQUIRED_DEVICE_KEYS = ("E_J", "E_ch")

_SCENARIO_KEYS = {
    "cat": ({"tau"}, {"fock_dim", "wigner"}),
    "inject": ({"alpha_prime", "tau1"}, {"fock_dim"}),
    "squeeze": ({"gamma", "t"}, {"fock_dim"}),
    "sweep": (set(), {"lambda_points", "ratios", "kinds"}),
    "verify": ({"target"}, {"points", "tau_max", "alpha_prime", "gamma", "fock_dim"}),
    "feasibility": ({"T1", "T2", "tau_m"}, set()),
}


@dataclass(frozen=True)
class RunConfig:
    """Validated run configuration."""

    scenario: str
    device: DeviceParams | None
    args: dict
    out_path: str
    out_format: str
    seed: int | None = None


def _fmt(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite float {x!r} in output")
    return format(float(x), ".17g")


def dumps17(obj, indent: int = 0) -> str:
    """JSON rendering with every float printed at 17 significant digits."""
    pad = "  " * indent
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        inner = ",\n".join("  " * (indent + 1) + dumps17(v, indent + 1) for v in obj)
        return "[\n" + inner + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        inner = ",\n".join(
            "  " * (indent + 1) + json.dumps(str(k)) + ": " + dumps17(v, indent + 1)
            for k, v in obj.items()
        )
        return "{\n" + inner + "\n" + pad + "}"
    raise TypeError(f"cannot serialize object of type {type(obj).__name__}")


def _as_complex(value, key: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(
        isinstance(v, (int, float)) for v in value
    ):
        return complex(value[0], value[1])
    raise ConfigError(f"key {key!r} must be a number or [re, im] pair, got {value!r}")


def _parse_device(data, context: str) -> DeviceParams:
    if not isinstance(data, dict):
        raise ConfigError(f"{context}: 'device' must be an object")
    kwargs = {}
    for key, value in data.items():
        if key.startswith("_"):
            continue
        if key not in _DEVICE_KEY_MAP:
            raise ConfigError(f"{context}: unknown device key {key!r}")
        if value is not None:
            kwargs[_DEVICE_KEY_MAP[key]] = value
    for key in _REQUIRED_DEVICE_KEYS:
        if _DEVICE_KEY_MAP[key] not in kwargs:
            raise ConfigError(f"{context}: missing required device key {key!r}")
    try:
        return DeviceParams(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{context}: invalid device parameters: {exc}") from exc


def load_config(path: str) -> RunConfig:
    """Load and validate a JSON run configuration."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from exc
    return validate_config(data)


def validate_config(data) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    scenario = data.get("scenario")
    if scenario not in SCENARIOS:
        raise ConfigError(f"key 'scenario' must be one of {SCENARIOS}, got {scenario!r}")
    required, optional = _SCENARIO_KEYS[scenario]

    base_keys = {"scenario", "device", "output", "seed"}
    for key in data:
        if key.startswith("_"):
            continue
        if key not in base_keys | required | optional:
            raise ConfigError(f"unknown key {key!r} for scenario {scenario!r}")
    for key in required:
        if key not in data:
            raise ConfigError(f"scenario {scenario!r} requires key {key!r}")

    device = None
    if scenario != "sweep":
        if "device" not in data:
            raise ConfigError(f"scenario {scenario!r} requires key 'device'")
        device = _parse_device(data["device"], f"scenario {scenario!r}")

    output = data.get("output")
    if not isinstance(output, dict) or "path" not in output or "format" not in output:
        raise ConfigError("key 'output' must be an object with 'path' and 'format'")
    for key in output:
        if key not in ("path", "format") and not key.startswith("_"):
            raise ConfigError(f"unknown output key {key!r}")
    out_format = output["format"]
    expected_format = "csv" if scenario == "sweep" else "json"
    if out_format != expected_format:
        raise ConfigError(
            f"scenario {scenario!r} emits {expected_format!r}; got format {out_format!r}"
        )

    seed = data.get("seed")
    if seed is not None and not isinstance(seed, int):
        raise ConfigError(f"key 'seed' must be an integer, got {seed!r}")

    args = {k: v for k, v in data.items() if k in required | optional}
    return RunConfig(
        scenario=scenario,
        device=device,
        args=args,
        out_path=str(output["path"]),
        out_format=out_format,
        seed=seed,
    )


def _safe_record(state, outcome: str) -> dict:
    try:
        return measurement_record_to_dict(measure_qubit(state, outcome))
    except NullOutcomeError:
        return {"outcome": outcome, "probability": 0.0, "post_state": None, "analytic_post": None}


def _wigner_section(records, args) -> list[dict]:
    grid_cfg = args.get("wigner") or {}
    if not isinstance(grid_cfg, dict):
        raise ConfigError("key 'wigner' must be an object with 'extent' and 'points'")
    extent = float(grid_cfg.get("extent", 3.0))
    points = int(grid_cfg.get("points", 41))
    axis = np.linspace(-extent, extent, points)
    sections = []
    for record in records:
        if record["post_state"] is None:
            continue
        amp = [complex(re, im) for re, im in record["post_state"]["fock_amplitudes"]]
        state = CavityState(np.array(amp))
        grid = axis[:, None] * 1j + axis[None, :]  # values[i_im][i_re]
        values = wigner(state, grid.ravel()).reshape(points, points)
        sections.append(
            {
                "outcome": record["outcome"],
                "extent": extent,
                "points": points,
                "axis": [float(x) for x in axis],
                "values": [[float(v) for v in row] for row in values],
            }
        )
    return sections


def _run_cat(config: RunConfig) -> dict:
    params = config.device
    coupling = coupling_xi(params)
    tau = float(config.args["tau"])
    decomposition = evolve_vacuum(params, coupling, tau)
    records = [_safe_record(decomposition, "g"), _safe_record(decomposition, "e")]
    return {
        "scenario": "cat",
        "tau": tau,
        "branches": branch_decomposition_to_dict(decomposition),
        "measurements": records,
        "wigner": _wigner_section(records, config.args),
    }


def _run_inject(config: RunConfig) -> dict:
    params = config.device
    coupling = coupling_xi(params)
    alpha_prime = _as_complex(config.args["alpha_prime"], "alpha_prime")
    tau1 = float(config.args["tau1"])
    before = evolve_coherent(params, coupling, alpha_prime, tau1)
    after = flux_pi_pulse(before, params)
    return {
        "scenario": "inject",
        "tau1": tau1,
        "alpha_prime": [alpha_prime.real, alpha_prime.imag],
        "pre_pulse": branch_decomposition_to_dict(before),
        "post_pulse": branch_decomposition_to_dict(after),
        "measurements": [_safe_record(after, "g"), _safe_record(after, "e")],
    }


def _run_squeeze(config: RunConfig) -> dict:
    params = config.device
    coupling = coupling_xi(params)
    gamma = _as_complex(config.args["gamma"], "gamma")
    t = float(config.args["t"])
    decomposition = squeezed_evolution(params, coupling, gamma, t)
    variances = []
    for label in decomposition.labels():
        dim = int(config.args.get("fock_dim") or 96)
        state = materialize_label(label, dim)
        r = abs(label.squeeze)
        variances.append(
            {
                "squeeze": [label.squeeze.real, label.squeeze.imag],
                "degree": r,
                "min_variance": min_quadrature_variance(state),
                "expected_min_variance": 0.5 * math.exp(-2.0 * r),
            }
        )
    return {
        "scenario": "squeeze",
        "t": t,
        "gamma": [gamma.real, gamma.imag],
        "branches": branch_decomposition_to_dict(decomposition),
        "variances": variances,
        "measurements": [_safe_record(decomposition, "g"), _safe_record(decomposition, "e")],
    }


def _run_sweep(config: RunConfig) -> str:
    points = int(config.args.get("lambda_points", 200))
    ratios = config.args.get("ratios", [4.0, 7.0, 10.0, 15.0])
    kinds = config.args.get("kinds", ["full", "quarter"])
    for kind in kinds:
        if kind not in CAVITY_KINDS:
            raise ConfigError(f"unknown cavity kind {kind!r} in 'kinds'")
    rows = fig1_sweep(default_lambda_grid(points), tuple(ratios), tuple(kinds))
    return sweep_rows_to_csv(rows)


def _run_verify(config: RunConfig) -> dict:
    params = config.device
    target = config.args["target"]
    if target not in VERIFY_SCENARIOS:
        raise ConfigError(f"key 'target' must be one of {VERIFY_SCENARIOS}, got {target!r}")
    points = int(config.args.get("points", 20))
    tau_max = config.args.get("tau_max")
    if tau_max is None:
        tau_max = 4.0 * math.pi / params.omega_cavity
    grid = np.linspace(0.0, float(tau_max), points)
    max_infidelity = verify_analytic_numeric(
        params,
        target,
        grid,
        config.args.get("fock_dim"),
        alpha_prime=_as_complex(config.args.get("alpha_prime", 0.0), "alpha_prime"),
        gamma=_as_complex(config.args.get("gamma", 0.0), "gamma"),
    )
    return {
        "scenario": "verify",
        "target": target,
        "points": points,
        "tau_max": float(tau_max),
        "max_infidelity": max_infidelity,
    }


def _run_feasibility(config: RunConfig) -> dict:
    report = feasibility_report(
        config.device,
        T1=float(config.args["T1"]),
        T2=float(config.args["T2"]),
        tau_m=float(config.args["tau_m"]),
    )
    out = {"scenario": "feasibility"}
    out.update(report.to_dict())
    return out


def run(config: RunConfig) -> Path:
    """Execute a validated configuration and write its output file."""
    if config.scenario == "sweep":
        payload = _run_sweep(config)
    elif config.scenario == "cat":
        payload = _run_cat(config)
    elif config.scenario == "inject":
        payload = _run_inject(config)
    elif config.scenario == "squeeze":
        payload = _run_squeeze(config)
    elif config.scenario == "verify":
        payload = _run_verify(config)
    else:
        payload = _run_feasibility(config)

    out_path = Path(config.out_path)
    if out_path.parent != Path("."):
        out_path.parent.mkdir(parents=True, exist_ok=True)
    if config.out_format == "csv":
        out_path.write_text(payload, encoding="utf-8")
    else:
        out_path.write_text(dumps17(payload) + "\n", encoding="utf-8")
    return out_path


_EXAMPLE_DEVICE = {
    "_notes": "energies in eV, lengths in m; omega defaults to 2*pi*c/lambda",
    "E_J": 7.749012397327047e-05,
    "E_ch": 0.0003099604958930819,
    "n_g": 0.5,
    "phi_c_ratio": 0.5,
    "lambda": 0.001,
    "cavity_kind": "full",
    "S": 1e-10,
}


def example_config(scenario: str) -> dict:
    """Commented configuration template for a scenario ('_'-prefixed keys are ignored)."""
    if scenario not in SCENARIOS:
        raise ConfigError(f"no example for scenario {scenario!r}; choose from {SCENARIOS}")
    if scenario == "cat":
        return {
            "_notes": "vacuum-input cat generation: branches, both measurements, Wigner maps",
            "scenario": "cat",
            "device": dict(_EXAMPLE_DEVICE),
            "tau": 1.6678204759907604e-12,
            "wigner": {"extent": 3.0, "points": 41},
            "output": {"path": "cat_run.json", "format": "json"},
        }
    if scenario == "inject":
        return {
            "_notes": "coherent injection followed by the flux pulse",
            "scenario": "inject",
            "device": dict(_EXAMPLE_DEVICE),
            "alpha_prime": [1.0, 0.0],
            "tau1": 1.6678204759907604e-12,
            "output": {"path": "inject_run.json", "format": "json"},
        }
    if scenario == "squeeze":
        device = dict(_EXAMPLE_DEVICE)
        device["phi_c_ratio"] = 0.0
        return {
            "_notes": "squeezed-branch generation at zero classical flux",
            "scenario": "squeeze",
            "device": device,
            "gamma": [1.0, 0.0],
            "t": 1.6678204759907604e-12,
            "output": {"path": "squeeze_run.json", "format": "json"},
        }
    if scenario == "sweep":
        return {
            "_notes": "drive-rate sweep over wavelength; 200 x ratios x kinds rows; "
            "cavity volume modeled as L^3 with L the cavity length",
            "scenario": "sweep",
            "lambda_points": 200,
            "ratios": [4.0, 7.0, 10.0, 15.0],
            "kinds": ["full", "quarter"],
            "output": {"path": "sweep.csv", "format": "csv"},
        }
    if scenario == "verify":
        return {
            "_notes": "analytic vs numeric cross-check; target in vacuum|coherent|pulse|squeeze",
            "scenario": "verify",
            "device": dict(_EXAMPLE_DEVICE),
            "target": "vacuum",
            "points": 20,
            "output": {"path": "verify.json", "format": "json"},
        }
    device = dict(_EXAMPLE_DEVICE)
    device["Q"] = 3e8
    return {
        "_notes": "timescale feasibility report; times in seconds",
        "scenario": "feasibility",
        "device": device,
        "T1": 1e-6,
        "T2": 5e-9,
        "tau_m": 4e-9,
        "output": {"path": "feasibility.json", "format": "json"},
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="squidcat",
        description="Cat-state and squeezed-state generation scenarios for a "
        "charge qubit coupled to a microwave cavity.",
    )
    parser.add_argument("--config", metavar="PATH", help="JSON run configuration")
    parser.add_argument(
        "--print-example",
        metavar="SCENARIO",
        help=f"print a config template for one of {', '.join(SCENARIOS)}",
    )
    parser.add_argument("--out", metavar="PATH", help="override the configured output path")
    parser.add_argument("--seed", type=int, metavar="N", help="reserved; no stochastic paths")
    opts = parser.parse_args(argv)

    try:
        if opts.print_example:
            print(dumps17(example_config(opts.print_example)))
            return 0
        if not opts.config:
            parser.print_usage(sys.stderr)
            print("error: --config or --print-example is required", file=sys.stderr)
            return 2
        config = load_config(opts.config)
        if opts.out:
            config = RunConfig(
                scenario=config.scenario,
                device=config.device,
                args=config.args,
                out_path=opts.out,
                out_format=config.out_format,
                seed=opts.seed if opts.seed is not None else config.seed,
            )
        out_path = run(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (TruncationError, HermiticityError) as exc:
        print(f"numerical contract failure: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    print(out_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
