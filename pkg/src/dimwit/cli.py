"""Command-line front end.

Exit codes: 0 success (or feasible), 1 usage/validation/I-O error,
2 infeasible membership, 3 internal numeric failure.
"""
import argparse
import datetime
import hashlib
import json
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from .classical import conv_c_membership
from .correlations import CorrelationTensor
from .errors import CapacityError, OptimizationError, RangeError, UnsupportedWitnessError, ValidationError
from .optimizer import ALGORITHMS, OptimizerConfig, multi_restart, resolve_workers
from .robustness import threshold_sweep, to_csv
from .witness import WitnessCoefficients, build_I_witness, evaluate, verdict

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_NUMERIC = 0, 1, 2, 3
CLI_MAX_D = 10


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def manifest(command: str, config: dict, inputs=(), seed=None) -> dict:
    return {
        "command": command,
        "config": config,
        "inputs": {str(p): _digest(p) for p in inputs},
        "seed": seed,
        "version": __version__,
        "created": datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds"),
    }


def read_json(path) -> dict:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    text = raw.decode("utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        offset = len(text[: exc.pos].encode("utf-8"))
        raise ValidationError(f"malformed JSON in {path} at byte offset {offset}: {exc.msg}") from None


def write_text(path, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from None


def _emit(text: str, out) -> None:
    if out:
        write_text(out, text)
    else:
        sys.stdout.write(text)


def _complex(a) -> dict:
    a = np.asarray(a)
    return {"real": a.real.tolist(), "imag": a.imag.tolist()}


def _config_from(args) -> OptimizerConfig:
    if args.restarts < 1:
        raise UsageError(f"--restarts must be >= 1, got {args.restarts}")
    return OptimizerConfig(epsilon=args.eps, max_iterations=args.max_iter, tolerance=args.tol,
                           restarts=args.restarts, seed=args.seed, real_only=args.real_only)


def cmd_witness_build(args) -> int:
    w = build_I_witness(args.d)
    _emit(json.dumps(w.to_dict(), indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_optimize(args) -> int:
    config = _config_from(args)
    inputs = []
    if args.witness:
        w = WitnessCoefficients.from_dict(read_json(args.witness))
        inputs.append(args.witness)
    else:
        w = build_I_witness(args.d)
    result = multi_restart(ALGORITHMS[args.algorithm], w, config, workers=resolve_workers())
    doc = {
        "algorithm": result.algorithm,
        "value": result.value,
        "restart_index": result.restart_index,
        "iterations": result.iterations,
        "restart_values": list(result.restart_values),
        "states": _complex(result.states),
        "povms": [_complex(P.elements) for P in result.povms],
    }
    if result.vectors is not None:
        doc["vectors"] = _complex(result.vectors)
    conf = asdict(config)
    conf.update(algorithm=args.algorithm, d=w.d)
    doc["manifest"] = manifest("optimize", conf, inputs, config.seed)
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    if args.out:
        print(f"value: {result.value:.9f}")
    return EXIT_OK


def cmd_thresholds(args) -> int:
    if not 2 <= args.d_min <= args.d_max <= CLI_MAX_D:
        raise UsageError(f"need 2 <= --d-min <= --d-max <= {CLI_MAX_D}, got {args.d_min}, {args.d_max}")
    config = _config_from(args)
    reports = threshold_sweep(args.d_min, args.d_max, config, args.algorithm, workers=resolve_workers())
    conf = asdict(config)
    conf.update(algorithm=args.algorithm, d_min=args.d_min, d_max=args.d_max)
    meta = manifest("thresholds", conf, (), config.seed)
    if args.format == "csv":
        _emit(to_csv(reports), args.out)
        if args.out:
            write_text(f"{args.out}.manifest.json", json.dumps(meta, indent=2) + "\n")
    else:
        doc = {"reports": [r.to_dict() for r in reports], "manifest": meta}
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_membership(args) -> int:
    p = CorrelationTensor.from_dict(read_json(args.tensor))
    res = conv_c_membership(p, args.d)
    if res.feasible:
        print(f"FEASIBLE: mixture of {len(res.weights)} deterministic strategies "
              f"(residual {res.residual:.3e})")
        return EXIT_OK
    print(f"INFEASIBLE: residual {res.residual:.9f}")
    return EXIT_INFEASIBLE


def cmd_eval(args) -> int:
    w = WitnessCoefficients.from_dict(read_json(args.witness))
    p = CorrelationTensor.from_dict(read_json(args.tensor))
    value = evaluate(w, p)
    print(f"value: {value:.9f}")
    print(f"verdict: {verdict(w, value)}")
    return EXIT_OK


def _add_optimizer_flags(p, restarts=32):
    p.add_argument("--algorithm", choices=sorted(ALGORITHMS), default="rank1")
    p.add_argument("--restarts", type=int, default=restarts)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--max-iter", type=int, default=5000)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--real-only", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dimwit", description="Dimension witnesses under detection loss.")
    parser.add_argument("--version", action="version", version=f"dimwit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    witness = sub.add_parser("witness", help="witness construction")
    wsub = witness.add_subparsers(dest="witness_command", required=True, parser_class=_Parser)
    build = wsub.add_parser("build", help="write the I_{d+1} witness as JSON")
    build.add_argument("--d", type=int, required=True)
    build.add_argument("--out")
    build.set_defaults(func=cmd_witness_build)

    opt = sub.add_parser("optimize", help="maximize a witness over quantum realizations")
    src = opt.add_mutually_exclusive_group(required=True)
    src.add_argument("--witness", help="witness JSON file")
    src.add_argument("--d", type=int, help="use the I_{d+1} witness")
    _add_optimizer_flags(opt)
    opt.add_argument("--out")
    opt.set_defaults(func=cmd_optimize)

    thr = sub.add_parser("thresholds", help="detection-efficiency thresholds per dimension")
    thr.add_argument("--d-min", type=int, required=True)
    thr.add_argument("--d-max", type=int, required=True)
    thr.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_optimizer_flags(thr)
    thr.add_argument("--out")
    thr.set_defaults(func=cmd_thresholds)

    mem = sub.add_parser("membership", help="test membership in the classical polytope")
    mem.add_argument("tensor", help="correlation JSON file")
    mem.add_argument("--d", type=int, required=True)
    mem.set_defaults(func=cmd_membership)

    ev = sub.add_parser("eval", help="evaluate a witness on a correlation tensor")
    ev.add_argument("witness")
    ev.add_argument("tensor")
    ev.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"dimwit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, UnsupportedWitnessError, CapacityError, OSError) as exc:
        print(f"dimwit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OptimizationError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"dimwit: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
