"""Command-line front end.

    itlinq simulate --config cfg.json [--set key=value ...] [--output-dir DIR]
    itlinq sweep    --preset iv-b --set trials=20
    itlinq fraction --preset iv-a
    itlinq theory   --betas 0.5,1,2 --n-list 8,64,512
    itlinq validate-config --config cfg.json
    itlinq list-presets

Exit codes: 0 ok, 2 usage, 3 invalid config, 4 runtime failure, 5 I/O.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from pydantic import ValidationError

from .config import PRESETS, ExperimentConfig, build_config
from .harness import run_experiment

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_RUNTIME, EXIT_IO = 0, 2, 3, 4, 5
OUTPUT_DIR_ENV = "ITLINQ_OUTPUT_DIR"

SUBCOMMANDS = ("simulate", "sweep", "fraction", "theory", "validate-config", "list-presets")
FRACTION_EXPERIMENTS = ("fraction_vs_n", "fading_fraction", "gap_vs_n")

log = logging.getLogger("itlinq")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class CliInvocation:
    subcommand: str
    config: ExperimentConfig | None = None
    config_path: Path | None = None
    output_dir: Path | None = None
    overrides: list[str] = field(default_factory=list)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(EXIT_USAGE, f"{self.prog}: {message}")


def _csv_list(kind):
    def parse(text):
        try:
            return [kind(x) for x in text.split(",") if x.strip()]
        except ValueError as e:
            raise argparse.ArgumentTypeError(str(e)) from None
    return parse


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="itlinq", description="ITLinQ link-scheduling experiments")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    for name in SUBCOMMANDS[:5]:
        sp = sub.add_parser(name)
        sp.add_argument("--config", type=Path, help="JSON experiment config")
        sp.add_argument("--preset", choices=sorted(PRESETS))
        sp.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
        if name != "validate-config":
            sp.add_argument("--output-dir", type=Path)
        if name == "theory":
            sp.add_argument("--betas", type=_csv_list(float))
            sp.add_argument("--n-list", type=_csv_list(int))
    sub.add_parser("list-presets")
    return p


def _load_raw(path: Path | None) -> dict:
    if path is None:
        return {}
    try:
        text = path.read_text()
    except OSError as e:
        raise CliError(EXIT_IO, f"cannot read config {path}: {e.strerror or e}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise CliError(EXIT_CONFIG, f"{path}: invalid JSON: {e}") from None
    if not isinstance(raw, dict):
        raise CliError(EXIT_CONFIG, f"{path}: top level must be an object")
    return raw


def _format_validation(e: ValidationError) -> str:
    lines = []
    for err in e.errors():
        loc = ".".join(str(x) for x in err["loc"]) or "<root>"
        kind = "unknown key" if err["type"] == "extra_forbidden" else err["msg"]
        lines.append(f"  {loc}: {kind}")
    return "invalid config:\n" + "\n".join(lines)


def parse_and_validate(argv: list[str]) -> CliInvocation:
    args = make_parser().parse_args(argv)
    if args.subcommand == "list-presets":
        return CliInvocation("list-presets")
    raw = _load_raw(args.config)
    overrides = list(args.overrides)
    if args.subcommand == "sweep":
        overrides.append("experiment=sum_rate_sweep")
    elif args.subcommand == "theory":
        overrides.append("experiment=theory_curves")
        if args.betas:
            overrides.append(f"betas={json.dumps(args.betas)}")
        if args.n_list:
            overrides.append(f"n_list={json.dumps(args.n_list)}")
    elif args.subcommand == "fraction":
        base = raw.get("experiment") or PRESETS.get(args.preset or raw.get("preset"), {}).get("experiment")
        if base not in FRACTION_EXPERIMENTS:
            overrides.append("experiment=fraction_vs_n")
    if args.subcommand in ("simulate", "validate-config") and args.config is None and args.preset is None:
        raise CliError(EXIT_USAGE, f"{args.subcommand} needs --config or --preset")
    try:
        cfg = build_config(raw, args.preset, overrides)
    except ValidationError as e:
        raise CliError(EXIT_CONFIG, _format_validation(e)) from None
    except (KeyError, ValueError, IndexError, TypeError) as e:
        raise CliError(EXIT_CONFIG, f"invalid config: {e}") from None
    out = getattr(args, "output_dir", None)
    if out is None and args.subcommand != "validate-config":
        out = Path(os.environ.get(OUTPUT_DIR_ENV, "results"))
    return CliInvocation(args.subcommand, cfg, args.config, out, list(args.overrides))


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def dispatch(inv: CliInvocation, stdout=None) -> int:
    stdout = stdout or sys.stdout
    if inv.subcommand == "list-presets":
        print(json.dumps(PRESETS, indent=2), file=stdout)
        return EXIT_OK
    cfg = inv.config
    print(f"config_hash {cfg.config_hash()}", file=stdout)
    if inv.subcommand == "validate-config":
        print(f"ok: {cfg.experiment}", file=stdout)
        return EXIT_OK
    try:
        result = run_experiment(cfg)
    except Exception as e:  # noqa: BLE001 - reported as runtime failure
        log.exception("experiment failed")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    stem = inv.output_dir / cfg.experiment
    try:
        write_atomic(stem.with_suffix(".csv"), result.to_csv())
        write_atomic(stem.with_suffix(".json"), json.dumps(result.summary(cfg), indent=2) + "\n")
        if result.link_rows:
            from .rates import rate_rows_csv

            write_atomic(inv.output_dir / f"{cfg.experiment}_links.csv", rate_rows_csv(result.link_rows))
    except OSError as e:
        print(f"error: cannot write outputs to {inv.output_dir}: {e}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {stem.with_suffix('.csv')}", file=stdout)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        inv = parse_and_validate(sys.argv[1:] if argv is None else argv)
    except CliError as e:
        print(str(e), file=sys.stderr)
        return e.code
    return dispatch(inv)


if __name__ == "__main__":
    sys.exit(main())
