"""Batch command line front end.

Subcommands: ``pool`` compresses a sequence in time, ``analyze`` exports
the curves and windows behind a plan, ``energy`` exports the joint-energy
report, ``synth`` generates a sequence from a JSON spec, and ``compare``
tabulates adaptive against uniform window boundaries.

Exit codes: 0 success, 1 I/O failure, 2 unreadable or malformed input
(the message names the file and line), 3 invalid parameter values (the
message names the flag).
"""

from __future__ import annotations

import argparse
import dataclasses
import glob as globlib
import json
import sys
from pathlib import Path

from . import __version__
from .energy import active_joint_selection
from .errors import (
    DimensionMismatch,
    InvalidParameter,
    NonFiniteValue,
    ParseError,
    SequenceError,
    TauTooLarge,
    TooShort,
)
from .ingest import (
    SyntheticSpec,
    parse_csv,
    parse_json,
    parse_ntu_skeleton,
    synthesize,
    write_csv,
    write_json,
)
from .model import PoolingParams
from .pooling import apply, plan_frame_wise, plan_joint_wise, uniform_boundaries

EXIT_OK = 0
EXIT_IO = 1
EXIT_FORMAT = 2
EXIT_PARAMS = 3

_PARSERS = {"ntu": parse_ntu_skeleton, "csv": parse_csv, "json": parse_json}
_WRITERS = {"csv": write_csv, "json": write_json}
_SUFFIX_FORMATS = {".skeleton": "ntu", ".csv": "csv", ".json": "json"}
_PARAM_FLAGS = {
    "theta": "--theta",
    "gamma": "--gamma",
    "alpha": "--alpha",
    "epsilon2": "--epsilon2",
    "norm_fn": "--norm",
    "mode": "--mode",
}
_EMIT_CHOICES = ("mi", "ci", "windows", "matrix")


def _add_io_arguments(cmd: argparse.ArgumentParser) -> None:
    source = cmd.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", help="one input file")
    source.add_argument(
        "--glob",
        help="shell pattern of input files, processed independently; "
        "--output then names a directory",
    )
    cmd.add_argument("--output", help="output path (stdout when omitted)")
    cmd.add_argument(
        "--format",
        choices=sorted(_PARSERS),
        help="input format (inferred from the file suffix when omitted)",
    )


def _add_param_arguments(cmd: argparse.ArgumentParser) -> None:
    cmd.add_argument("--mode", choices=("frame", "joint"), default="frame")
    cmd.add_argument("--theta", type=float, default=2.0, help="temporal reduction factor")
    cmd.add_argument("--gamma", type=float, default=5.0, help="window sharpness exponent")
    cmd.add_argument("--alpha", type=float, default=0.1, help="active-joint threshold slack")
    cmd.add_argument("--epsilon2", type=float, default=1e-6, help="normalization stabilizer")
    cmd.add_argument(
        "--norm",
        choices=("tanh", "identity", "sqrt", "softmax"),
        default="tanh",
        help="intensity curvature function",
    )
    cmd.add_argument(
        "--no-row-normalize",
        dest="row_normalize",
        action="store_false",
        help="keep raw response rows instead of rescaling them to sum 1",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="motionpool",
        description="Motion-adaptive temporal pooling for skeleton sequences.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    pool = commands.add_parser("pool", help="compress a sequence in time")
    _add_io_arguments(pool)
    _add_param_arguments(pool)
    pool.set_defaults(handler=_run_pool, suffix=None)

    analyze = commands.add_parser("analyze", help="export intensity curves and windows")
    _add_io_arguments(analyze)
    _add_param_arguments(analyze)
    analyze.add_argument(
        "--emit",
        default="mi,ci,windows",
        help="comma-separated subset of: " + ", ".join(_EMIT_CHOICES),
    )
    analyze.set_defaults(handler=_run_analyze, suffix=".analysis.json")

    energy = commands.add_parser("energy", help="export the joint-energy report")
    _add_io_arguments(energy)
    _add_param_arguments(energy)
    energy.set_defaults(handler=_run_energy, suffix=".energy.json")

    compare = commands.add_parser(
        "compare", help="tabulate adaptive vs uniform window boundaries"
    )
    _add_io_arguments(compare)
    _add_param_arguments(compare)
    compare.set_defaults(handler=_run_compare, suffix=".compare.csv")

    synth = commands.add_parser("synth", help="generate a sequence from a JSON spec")
    synth.add_argument("--spec", required=True, help="path of the SyntheticSpec JSON")
    synth.add_argument("--seed", type=int, help="override the spec's seed")
    synth.add_argument("--output", help="output path (stdout when omitted)")
    synth.add_argument(
        "--format",
        choices=("csv", "json"),
        help="output format (inferred from the output suffix; json on stdout)",
    )
    synth.set_defaults(handler=None)

    return parser


def _params_from_args(args: argparse.Namespace) -> PoolingParams:
    try:
        return PoolingParams(
            theta=args.theta,
            gamma=args.gamma,
            alpha=args.alpha,
            epsilon2=args.epsilon2,
            norm_fn=args.norm,
            mode="frame_wise" if args.mode == "frame" else "joint_wise",
            row_normalize=args.row_normalize,
        )
    except InvalidParameter as exc:
        raise _named_by_flag(exc)


def _named_by_flag(exc: InvalidParameter) -> InvalidParameter:
    flag = _PARAM_FLAGS.get(exc.name, exc.name)
    detail = str(exc)
    prefix = f"{exc.name}: "
    if detail.startswith(prefix):
        detail = detail[len(prefix) :]
    return InvalidParameter(flag, detail)


def _detect_format(path: str, declared: str | None) -> str:
    if declared:
        return declared
    fmt = _SUFFIX_FORMATS.get(Path(path).suffix.lower())
    if fmt is None:
        raise InvalidParameter(
            "--format", f"cannot infer the format of {path!r}, pass --format"
        )
    return fmt


def _build_plan(seq, params: PoolingParams):
    if params.mode.value == "frame_wise":
        return plan_frame_wise(seq, params)
    return plan_joint_wise(seq, params)


def _run_pool(seq, fmt: str, params: PoolingParams, args) -> tuple[str, str]:
    pooled = apply(_build_plan(seq, params), seq)
    # The NTU layout cannot carry pooled output (it needs the dropped
    # sensor fields), so skeleton inputs emit JSON.
    out_fmt = "json" if fmt == "ntu" else fmt
    return _WRITERS[out_fmt](pooled), f".pooled.{out_fmt}"


def _run_analyze(seq, fmt: str, params: PoolingParams, args) -> tuple[str, str]:
    emit = {part.strip() for part in args.emit.split(",") if part.strip()}
    unknown = emit.difference(_EMIT_CHOICES)
    if unknown:
        raise InvalidParameter(
            "--emit", f"unknown selection {sorted(unknown)!r}, choose from {_EMIT_CHOICES}"
        )
    plan = _build_plan(seq, params)
    profile = plan.profile.to_json_dict()
    windows = plan.to_json_dict(include_matrices="matrix" in emit)
    out = {
        "mode": params.mode.value,
        "tau": plan.tau,
        "degenerate": plan.degenerate,
        "norm_fn": profile["norm_fn"],
        "epsilon2": profile["epsilon2"],
    }
    if "mi" in emit:
        out["mi"] = profile["mi"]
        out["frame_mi"] = profile["frame_mi"]
    if "ci" in emit:
        out["mi_norm"] = profile["mi_norm"]
        out["ci"] = profile["ci"]
        out["frame_ci"] = profile["frame_ci"]
    if "windows" in emit:
        out["boundaries"] = windows["boundaries"]
        out["centers"] = windows["centers"]
        out["width"] = windows["width"]
    if "matrix" in emit:
        out["matrices"] = windows["matrices"]
    return json.dumps(out, indent=2) + "\n", ".analysis.json"


def _run_energy(seq, fmt: str, params: PoolingParams, args) -> tuple[str, str]:
    report = active_joint_selection(seq, params.alpha)
    return json.dumps(report.to_json_dict(), indent=2) + "\n", ".energy.json"


def _run_compare(seq, fmt: str, params: PoolingParams, args) -> tuple[str, str]:
    plan = plan_frame_wise(seq, params)
    uniform = uniform_boundaries(plan.frames, plan.tau)
    lines = ["adaptive,uniform"]
    lines += [f"{int(a)},{int(u)}" for a, u in zip(plan.boundaries[0], uniform)]
    return "\n".join(lines) + "\n", ".compare.csv"


def _severity(exc: Exception) -> int:
    if isinstance(exc, (ParseError, NonFiniteValue, TooShort, DimensionMismatch)):
        return EXIT_FORMAT
    if isinstance(exc, (InvalidParameter, TauTooLarge)):
        return EXIT_PARAMS
    if isinstance(exc, OSError):
        return EXIT_IO
    return EXIT_IO


def _emit_output(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _process_one(path: str, args, params: PoolingParams, output: str | None) -> int:
    try:
        fmt = _detect_format(path, args.format)
        seq = _PARSERS[fmt](Path(path).read_text())
        text, _ = args.handler(seq, fmt, params, args)
        _emit_output(text, output)
    except Exception as exc:  # reported per file; batch mode keeps going
        if not isinstance(exc, (SequenceError, OSError)):
            raise
        print(f"{path}: {exc}", file=sys.stderr)
        return _severity(exc)
    return EXIT_OK


def _run_batch(args, params: PoolingParams) -> int:
    paths = sorted(globlib.glob(args.glob))
    if not paths:
        print(f"no files match {args.glob!r}", file=sys.stderr)
        return EXIT_IO
    if not args.output:
        print("--glob requires --output DIRECTORY", file=sys.stderr)
        return EXIT_IO
    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    status = EXIT_OK
    for path in paths:
        suffix = args.suffix
        if suffix is None:  # pool keeps the input's format family
            try:
                fmt = _detect_format(path, args.format)
            except InvalidParameter as exc:
                print(f"{path}: {exc}", file=sys.stderr)
                status = max(status, EXIT_PARAMS)
                continue
            suffix = ".pooled.json" if fmt == "ntu" else f".pooled.{fmt}"
        target = out_dir / (Path(path).stem + suffix)
        status = max(status, _process_one(path, args, params, str(target)))
    return status


def _run_synth(args) -> int:
    try:
        spec = SyntheticSpec.from_json_dict(json.loads(Path(args.spec).read_text()))
    except OSError as exc:
        print(f"{args.spec}: {exc}", file=sys.stderr)
        return EXIT_IO
    except json.JSONDecodeError as exc:
        print(f"{args.spec}: line {exc.lineno}: {exc.msg}", file=sys.stderr)
        return EXIT_FORMAT
    except SequenceError as exc:
        print(f"{args.spec}: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    if args.seed is not None:
        try:
            spec = dataclasses.replace(spec, seed=args.seed)
        except InvalidParameter as exc:
            print(f"--seed: {exc}", file=sys.stderr)
            return EXIT_PARAMS
    fmt = args.format
    if fmt is None:
        if args.output is None:
            fmt = "json"
        else:
            try:
                fmt = _detect_format(args.output, None)
            except InvalidParameter as exc:
                print(exc, file=sys.stderr)
                return EXIT_PARAMS
            if fmt not in _WRITERS:
                print(
                    f"--format: cannot write the {fmt} layout, pass --format",
                    file=sys.stderr,
                )
                return EXIT_PARAMS
    seq = synthesize(spec)
    try:
        _emit_output(_WRITERS[fmt](seq), args.output)
    except OSError as exc:
        print(f"{args.output}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "synth":
        return _run_synth(args)
    try:
        params = _params_from_args(args)
    except InvalidParameter as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_PARAMS
    if args.glob:
        return _run_batch(args, params)
    try:
        return _process_one(args.input, args, params, args.output)
    finally:
        sys.stdout.flush()


if __name__ == "__main__":
    sys.exit(main())
