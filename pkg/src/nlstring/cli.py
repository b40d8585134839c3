"""Command-line entry point: ``run``, ``preset`` and ``sweep``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .core import ContractError
from .harness import (PRESETS, ConfigError, OutputError, execute, parse_config, run_preset,
                      sweep, write_run, write_sweep)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3

# flag -> config key
RUN_FLAGS = {
    "--scheme": "scheme", "--alpha": "alpha", "--ht": "h_t", "--lambda-frac": "lambda_fraction",
    "--steps": "steps", "--gamma1": "gamma1", "--gamma2": "gamma2", "--seed": "seed",
    "--sigma-eta": "sigma_eta", "--sigma-xi": "sigma_xi", "--tau": "tau", "--nu": "nu",
    "--modes": "modes", "--out": "out_path", "--init": "init", "--intervals": "intervals",
    "--sample-every": "sample_every",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nlstring", description="Conservative nonlinear string simulations.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one configuration")
    run_p.add_argument("--config", type=Path)
    for flag, key in RUN_FLAGS.items():
        run_p.add_argument(flag, dest=key, default=None)
    run_p.add_argument("--estimate-condition", dest="estimate_condition", action="store_true", default=None)

    preset_p = sub.add_parser("preset", help="run a named experiment")
    preset_p.add_argument("name", choices=PRESETS)
    preset_p.add_argument("--out", type=Path, default=Path("out"))

    sweep_p = sub.add_parser("sweep", help="vary one key over several values")
    sweep_p.add_argument("--axis", required=True)
    sweep_p.add_argument("--values", required=True, help="comma-separated")
    sweep_p.add_argument("--config", type=Path)
    sweep_p.add_argument("--out", type=Path, default=Path("sweep.csv"))
    return parser


def _load(path: Path | None, overrides: dict):
    text = ""
    if path is not None:
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise OutputError(path, exc) from None
    return parse_config(text, overrides)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            overrides = {key: getattr(args, key) for key in list(RUN_FLAGS.values()) + ["estimate_condition"]}
            result = execute(_load(args.config, overrides))
            paths = write_run(result)
            print(f"{result.status}; wrote {', '.join(str(p) for p in paths)}")
            return EXIT_OK if result.error is None else EXIT_NUMERICAL
        if args.command == "preset":
            paths = run_preset(args.name, args.out)
            print(f"wrote {len(paths)} files to {args.out}")
            return EXIT_OK
        base = _load(args.config, {})
        values = [v.strip() for v in args.values.split(",") if v.strip()]
        rows = sweep(base, args.axis, values)
        write_sweep(args.out, rows)
        print(f"wrote {len(rows)} rows to {args.out}")
        return EXIT_OK
    except OutputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfigError, ContractError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
