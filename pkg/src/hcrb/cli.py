"""Command-line front end.

Exit status: 0 success, 2 configuration error, 3 model validation failure,
4 violated numerical hypothesis (the hypothesis is named on stderr).
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .errors import ConfigError, ConvergenceError, HCRBError, HypothesisError, RankDeficiencyError
from .models import SCENARIOS, ModelSpec
from .report import METHODS, Row, evaluate, to_csv, to_json

EXIT_OK, EXIT_CONFIG, EXIT_MODEL, EXIT_HYPOTHESIS = 0, 2, 3, 4

# command-line option -> ModelSpec field, in grid order (last varies fastest)
SWEEPABLE = (("n", "n", int), ("G", "G", int), ("g", "g", float), ("x", "x", float),
             ("phi", "phi", float), ("lambda", "lambda_th", float), ("beta", "beta", float))


def parse_values(text: str, kind) -> list:
    """``"a:b"`` is an inclusive integer range; otherwise a comma-separated list."""
    text = text.strip()
    try:
        if ":" in text:
            lo, hi = (int(t) for t in text.split(":"))
            if hi < lo:
                raise ConfigError(f"empty range {text!r}")
            vals = list(range(lo, hi + 1))
        else:
            vals = [float(t) for t in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"cannot parse value list {text!r}") from exc
    if kind is int:
        if any(float(v) != int(v) for v in vals):
            raise ConfigError(f"integer values expected, got {text!r}")
        return [int(v) for v in vals]
    return [float(v) for v in vals]


def exit_code(exc: BaseException) -> int:
    if isinstance(exc, ConfigError):
        return EXIT_CONFIG
    if isinstance(exc, (HypothesisError, RankDeficiencyError, ConvergenceError)):
        return EXIT_HYPOTHESIS
    return EXIT_MODEL


def describe(exc: BaseException) -> str:
    msg = f"{type(exc).__name__}: {exc}"
    if isinstance(exc, HypothesisError):
        msg += f" [hypothesis: {exc.hypothesis}]"
    return msg


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hcrb", description="Holevo and quantum Cramer-Rao bounds for two or more parameters.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in (("compute", "evaluate one model"), ("sweep", "evaluate a parameter grid"),
                        ("export-model", "write the built model as JSON")):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--scenario", choices=SCENARIOS)
        s.add_argument("--spec", help="JSON model-spec document (options given on the command line override it)")
        s.add_argument("--model", help="serialised model JSON (implies --scenario custom)")
        for opt, _, _ in SWEEPABLE:
            s.add_argument(f"--{opt}", help="value, comma list or inclusive integer range a:b")
        s.add_argument("--theta", help="field components, comma separated (third is known unless --all-three)")
        s.add_argument("--all-three", action="store_true", help="estimate all three field components")
        s.add_argument("--output", "-o", help="output file (default stdout)")
        if name != "export-model":
            s.add_argument("--method", choices=METHODS + ("all",), default="all")
            s.add_argument("--format", choices=("csv", "json"), default="csv")
            s.add_argument("--timing", action="store_true", help="add a wall-time column (output no longer reproducible)")
        if name == "sweep":
            s.add_argument("--workers", type=int, default=1, help="worker processes")
    return p


def _base_spec(args) -> dict:
    doc = {}
    if args.spec:
        try:
            doc = json.loads(Path(args.spec).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read spec file {args.spec}: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError("spec document must be a JSON object")
    if args.model:
        doc.update(scenario="custom", path=args.model)
    if args.scenario:
        doc["scenario"] = args.scenario
    if args.theta:
        doc["theta"] = parse_values(args.theta, float)
    if args.all_three:
        doc["estimate_all_three"] = True
    if "scenario" not in doc:
        raise ConfigError("no scenario given (use --scenario, --spec or --model)")
    return doc


def grid(args, allow_many: bool) -> list[ModelSpec]:
    base = _base_spec(args)
    axes = []
    for opt, fld, kind in SWEEPABLE:
        raw = getattr(args, opt)
        if raw is None:
            continue
        vals = parse_values(raw, kind)
        if len(vals) > 1 and not allow_many:
            raise ConfigError(f"--{opt} has {len(vals)} values; use the sweep command")
        axes.append((fld, vals))
    specs = []
    for combo in itertools.product(*(v for _, v in axes)):
        doc = dict(base)
        doc.update({fld: val for (fld, _), val in zip(axes, combo)})
        specs.append(ModelSpec.from_dict(doc))
    return specs


def run_point(task) -> tuple[list[Row], int, str | None]:
    """Evaluate one grid point; never raises for package errors."""
    spec_doc, method, timing = task
    spec = ModelSpec.from_dict(spec_doc)
    desc = spec.descriptor()
    start = time.perf_counter()
    try:
        model = spec.build()
        rows = evaluate(model, desc, method)
        code, msg = EXIT_OK, None
    except HCRBError as exc:
        rows = [Row(desc, method, error=describe(exc))]
        code, msg = exit_code(exc), describe(exc)
    if timing:
        elapsed = time.perf_counter() - start
        for r in rows:
            r.wall_time_s = elapsed
    return rows, code, msg


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        specs = grid(args, allow_many=args.command == "sweep")
        if args.command == "export-model":
            if len(specs) != 1:
                raise ConfigError("export-model needs exactly one model")
            _emit(json.dumps(specs[0].build().to_dict()) + "\n", args.output)
            return EXIT_OK
        if args.command == "sweep" and args.workers < 1:
            raise ConfigError("--workers must be at least 1")
        tasks = [(s.to_dict(), args.method, args.timing) for s in specs]
        if args.command == "sweep" and args.workers > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=args.workers) as pool:
                results = list(pool.map(run_point, tasks))
        else:
            results = [run_point(t) for t in tasks]
    except HCRBError as exc:
        print(f"hcrb: {describe(exc)}", file=sys.stderr)
        return exit_code(exc)

    rows = [r for res in results for r in res[0]]
    failures = [(code, msg) for _, code, msg in results if code != EXIT_OK]
    for code, msg in failures:
        print(f"hcrb: {msg}", file=sys.stderr)
    text = to_csv(rows, args.timing) if args.format == "csv" else to_json(rows, args.timing)
    _emit(text, args.output)
    return failures[0][0] if failures else EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
