"""Command-line interface: ``validate``, ``report`` and ``catalog``.

Exit codes:

    0  success
    2  usage error (bad arguments, unknown catalog entry, bad parameters)
    3  parse error (unreadable or malformed spec file)
    4  validation failure (Jacobi, SPD, norm bounds)
    5  precondition refusal (flag curvature on a non-Berwald metric)

All diagnostics go to stderr; stdout only ever carries the requested document.
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import catalog
from .errors import GeometryError, ParameterError, PreconditionError
from .report import build_report, to_json, to_table
from .specfile import (
    SpecParseError,
    build_spec,
    dump_spec,
    first_failure,
    load_spec,
    validate_spec,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_INVALID = 4
EXIT_PRECONDITION = 5


class CLIError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load_valid(path, require_tilde, tol):
    try:
        raw = load_spec(path)
    except SpecParseError as exc:
        raise CLIError(EXIT_PARSE, f"{path}: parse error: {exc}") from None
    checks = validate_spec(raw, require_tilde=require_tilde, tol=tol)
    bad = first_failure(checks)
    if bad is not None:
        raise CLIError(EXIT_INVALID, f"{path}: validation failed: {bad.name}: {bad.detail}")
    try:
        alg, h, X = build_spec(raw, tol)
    except GeometryError as exc:
        raise CLIError(EXIT_INVALID, f"{path}: validation failed: {exc}") from None
    return raw, checks, (alg, h, X)


def cmd_validate(args) -> int:
    _, checks, _ = _load_valid(args.path, args.tilde, args.tol)
    for ch in checks:
        print(f"{ch.name:<18} ok    {ch.detail}")
    return EXIT_OK


def _report_one(path, args) -> str:
    raw, checks, (alg, h, X) = _load_valid(path, True, args.tol)
    asym = next(ch.value for ch in checks if ch.name == "metric symmetry")
    try:
        doc = build_report(alg, h, X, metric=args.metric, flag=args.flag, metric_asymmetry=asym)
    except PreconditionError as exc:
        raise CLIError(EXIT_PRECONDITION, f"{path}: precondition failed: {exc}") from None
    except GeometryError as exc:
        raise CLIError(EXIT_INVALID, f"{path}: validation failed: {exc}") from None
    return to_json(doc) if args.format == "json" else to_table(doc)


def cmd_report(args) -> int:
    paths = args.paths

    def run(path):
        try:
            return _report_one(path, args), None
        except CLIError as exc:
            return None, exc

    if len(paths) == 1:
        results = [run(paths[0])]
    else:
        with ThreadPoolExecutor() as pool:
            results = list(pool.map(run, paths))

    code = EXIT_OK
    for text, err in results:
        if err is not None:
            print(err, file=sys.stderr)
            code = code or err.code
        else:
            sys.stdout.write(text)
    return code


def _parse_params(name, items):
    spec = catalog.PARAMETERS.get(name)
    if spec is None:
        raise ParameterError(
            f"unknown catalog entry {name!r}; choose from {', '.join(sorted(catalog.CATALOG))}"
        )
    params = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or key not in spec:
            raise ParameterError(
                f"bad parameter {item!r} for {name}; expected key=value with key in {', '.join(spec)}"
            )
        kw, conv = spec[key]
        try:
            params[kw] = conv(value)
        except ValueError:
            raise ParameterError(f"cannot parse {key}={value!r}") from None
    return params


def cmd_catalog(args) -> int:
    try:
        entry = catalog.build(args.name, **_parse_params(args.name, args.params))
    except ParameterError as exc:
        raise CLIError(EXIT_USAGE, f"catalog: {exc}") from None
    text = dump_spec(entry)
    if args.emit:
        Path(args.emit).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="randers-lie",
        description="Left-invariant Randers metrics deformed by a vector field.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a spec file")
    p.add_argument("path")
    p.add_argument("--tilde", action="store_true",
                   help="also require the g_X bound |X|(1+|X|) < 1 needed for F~")
    p.add_argument("--tol", type=float, default=None, help="override the file's tolerance")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("report", help="compute the full report for one or more spec files")
    p.add_argument("paths", nargs="+")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--metric", choices=("h", "gx", "both"), default="both")
    p.add_argument("--flag", action="store_true",
                   help="require flag curvatures (fails on non-Berwald input)")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("catalog", help="emit a spec file for a catalog entry")
    p.add_argument("name", help=", ".join(sorted(catalog.CATALOG)))
    p.add_argument("params", nargs="*", metavar="key=value")
    p.add_argument("--emit", metavar="PATH", help="write to PATH instead of stdout")
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "tol", None) is not None and not args.tol > 0:
        print("--tol must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except CLIError as exc:
        print(exc, file=sys.stderr)
        return exc.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
