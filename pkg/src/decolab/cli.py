"""Command-line scenario runner.

    decolab run cat-wigner --sigma 1 --L 6 --n 256
    decolab run qbm-decoherence --preset realistic
    decolab run --config configs/tomography.json --output-dir out/
    decolab validate configs/qbm-realistic.json

Exit status: 0 on success, 2 on invalid input, 3 when a numerical guard
aborts the run.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from .errors import NumericalGuardError, ValidationError
from .scenarios import SCENARIOS, physical_violations, resolve

SCHEMA_VERSION = 1
CONFIG_KEYS = {"scenario", "params", "output_dir", "seed"}


def read_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from None
    if not isinstance(cfg, dict):
        raise ValidationError("config must be a JSON object")
    unknown = set(cfg) - CONFIG_KEYS
    if unknown:
        raise ValidationError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    if cfg.get("scenario") is not None and cfg["scenario"] not in SCENARIOS:
        raise ValidationError(f"unknown scenario {cfg['scenario']!r}")
    if not isinstance(cfg.get("params", {}), dict):
        raise ValidationError("params must be a JSON object")
    return cfg


def resolve_seed(flag: int | None, cfg: dict) -> int:
    """``--seed`` flag, then the config file, then ``DECOLAB_SEED``, then 0."""
    if flag is not None:
        return flag
    if cfg.get("seed") is not None:
        return int(cfg["seed"])
    env = os.environ.get("DECOLAB_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValidationError(f"DECOLAB_SEED must be an integer, got {env!r}") from None
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="decolab", description="Decoherence experiments from the command line.")
    parser.add_argument("--version", action="version", version=f"decolab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario and write its artifacts")
    scen = run.add_subparsers(dest="scenario", metavar="SCENARIO")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config {scenario, params, output_dir, seed}")
    common.add_argument("--output-dir", help="directory for manifest and CSVs (default: output/<scenario>)")
    common.add_argument("--seed", type=int, help="overrides config seed and DECOLAB_SEED")
    common.add_argument("--threads", type=int, default=1, help="worker cap for parallel sweeps")
    run.add_argument("--config", dest="bare_config", help="run the scenario named in this config file")
    run.add_argument("--output-dir", dest="bare_output_dir")
    run.add_argument("--seed", dest="bare_seed", type=int)
    run.add_argument("--threads", dest="bare_threads", type=int)
    for name, (schema, _) in SCENARIOS.items():
        p = scen.add_parser(name, parents=[common], help=f"{name} scenario")
        for key, (typ, default) in schema.items():
            flag = f"--{key.replace('_', '-')}"
            if typ is bool:
                p.add_argument(flag, dest=f"param_{key}", action="store_const", const=True, default=None)
            else:
                kind = str if typ in (list, dict) else typ
                p.add_argument(flag, dest=f"param_{key}", type=kind, default=None,
                               help=f"default {default!r}" + (" (JSON)" if typ in (list, dict) else ""))

    val = sub.add_parser("validate", help="check a config without running it")
    val.add_argument("config", nargs="?", help="config file path")
    val.add_argument("--preset", help="validate a qbm-decoherence preset by name")
    return parser


def _scenario_inputs(args) -> tuple[str, dict, dict]:
    config_path = getattr(args, "config", None) or getattr(args, "bare_config", None)
    cfg = read_config(config_path)
    scenario = args.scenario or cfg.get("scenario")
    if scenario is None:
        raise ValidationError("no scenario given on the command line or in the config")
    if args.scenario and cfg.get("scenario") and cfg["scenario"] != args.scenario:
        raise ValidationError(f"config is for {cfg['scenario']!r}, not {args.scenario!r}")
    overrides = {k[6:]: v for k, v in vars(args).items() if k.startswith("param_") and v is not None}
    params = {**cfg.get("params", {}), **overrides}
    return scenario, params, cfg


def _pick(args, name):
    v = getattr(args, name, None)
    return v if v is not None else getattr(args, f"bare_{name}", None)


def cmd_run(args) -> int:
    scenario, raw, cfg = _scenario_inputs(args)
    schema, runner = SCENARIOS[scenario]
    params = resolve(schema, raw)
    seed = resolve_seed(_pick(args, "seed"), cfg)
    threads = _pick(args, "threads") or 1
    if threads < 1:
        raise ValidationError("--threads must be at least 1")
    out_dir = Path(_pick(args, "output_dir") or cfg.get("output_dir") or Path("output") / scenario)
    violations, _ = physical_violations(scenario, params)
    if violations:
        raise ValidationError("; ".join(violations))

    started = datetime.datetime.now(datetime.timezone.utc)
    t0 = time.perf_counter()
    if scenario == "halo":
        results, files = runner(params, seed, workers=threads)
    else:
        results, files = runner(params, seed)
    wall = time.perf_counter() - t0

    out_dir.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (out_dir / name).write_text(text)
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "scenario": scenario,
        "library_version": __version__,
        "seed": seed,
        "threads": threads,
        "params": params,
        "results": results,
        "outputs": sorted(files),
        "timing": {"started_utc": started.isoformat(), "wall_time_s": wall},
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2, default=_jsonable) + "\n")
    print(f"{scenario}: wrote {len(files) + 1} files to {out_dir} in {wall:.2f} s")
    return 0


def _jsonable(obj):
    try:
        return obj.item()
    except AttributeError:
        return str(obj)


def validation_report(cfg: dict) -> dict:
    """Schema and physical-range checks; never raises for bad content."""
    scenario = cfg.get("scenario")
    report = {"scenario": scenario, "violations": []}
    if scenario not in SCENARIOS:
        report["violations"].append(f"unknown scenario {scenario!r}")
        return report
    try:
        params = resolve(SCENARIOS[scenario][0], cfg.get("params", {}))
    except ValidationError as exc:
        report["violations"].append(str(exc))
        return report
    violations, info = physical_violations(scenario, params)
    report["violations"] += violations
    report.update(info)
    return report


def cmd_validate(args) -> int:
    if args.preset:
        cfg = {"scenario": "qbm-decoherence", "params": {"preset": args.preset}}
    elif args.config:
        try:
            cfg = read_config(args.config)
        except ValidationError as exc:
            cfg = None
            report = {"scenario": None, "violations": [str(exc)]}
    else:
        raise ValidationError("validate needs a config path or --preset")
    if cfg is not None:
        report = validation_report(cfg)
    ts = report.get("timescales")
    if ts:
        print("timescales:")
        for key in ("cutoff_time", "classicalisation_time", "relaxation_time", "decoherence_time"):
            print(f"  {key:22s} {ts[key]!r}")
        print(f"  hierarchy ordered (factor {ts['separation_factor']:g}): {ts['ordered']}")
    print(json.dumps(report, indent=2, default=_jsonable))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        return cmd_validate(args)
    except NumericalGuardError as exc:
        print(f"numerical guard aborted the run: invariant '{exc.invariant}' violated: {exc}", file=sys.stderr)
        return 3
    except ValidationError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
