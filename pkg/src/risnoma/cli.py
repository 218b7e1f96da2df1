"""Command-line entry point for running sweep experiments."""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .config import DomainError
from .experiments import (
    PRESETS,
    Experiment,
    Series,
    parse_config,
    preset,
    run_experiment,
    serialize_config,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2


def _load_experiment(args: argparse.Namespace) -> Experiment:
    if args.config:
        try:
            with open(args.config) as fh:
                text = fh.read()
        except OSError as exc:
            raise _IoFailure(str(exc)) from exc
        exp = parse_config(text)
    elif args.preset:
        exp = preset(args.preset)
    else:
        raise DomainError("one of --config or --preset is required")

    updates: dict = {}
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.trials is not None:
        updates["trials"] = args.trials
    for item in args.override or []:
        key, _, val = item.partition("=")
        key, val = key.strip(), val.strip()
        if not val:
            raise DomainError(f"override '{item}' must look like key=value")
        if key in ("series", "schemes"):
            updates["series"] = tuple(Series.parse(t) for t in val.split(";") if t.strip())
        elif key.startswith("override."):
            extra = tuple(o for o in exp.overrides if o[0] != key[9:])
            updates["overrides"] = extra + ((key[9:], val),)
        else:
            fields = {f.name: f for f in dataclasses.fields(Experiment)}
            if key not in fields:
                raise DomainError(f"unknown experiment field '{key}'")
            ftype = fields[key].type
            if ftype in ("int", int):
                updates[key] = int(val)
            elif ftype in ("float", float):
                updates[key] = float(val)
            else:
                updates[key] = val
    if updates:
        exp = dataclasses.replace(exp, **updates)
    exp.validate()
    return exp


class _IoFailure(Exception):
    pass


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="risnoma", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a sweep experiment")
    p_run.add_argument("--config", help="path to a flat key=value config file")
    p_run.add_argument("--preset", help="named preset (see list-presets)")
    p_run.add_argument("--override", action="append", metavar="KEY=VALUE")
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--trials", type=int)
    p_run.add_argument("--out", required=True, help="output CSV path")
    p_run.add_argument("--workers", type=int, default=1)

    sub.add_parser("list-presets", help="list preset experiment names")

    p_val = sub.add_parser("validate", help="check a config file")
    p_val.add_argument("--config", required=True)

    args = parser.parse_args(argv)

    if args.command == "list-presets":
        for name in sorted(PRESETS):
            print(name)
        return EXIT_OK

    if args.command == "validate":
        try:
            with open(args.config) as fh:
                parse_config(fh.read())
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
        except DomainError as exc:
            print(f"invalid config: {exc}", file=sys.stderr)
            return EXIT_VALIDATION
        print("ok")
        return EXIT_OK

    # run
    try:
        exp = _load_experiment(args)
    except _IoFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (DomainError, ValueError) as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        run_experiment(exp, args.out, workers=args.workers)
    except OSError as exc:
        print(f"error writing '{args.out}': {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {args.out}")
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
