"""Command-line front end: ``onebit-cdg {encode,reconstruct,sparsity,experiment}``.

Failures print one line ``ERROR:<category>: <message>`` to stderr and exit
with 2 (usage/config), 3 (ingestion), 4 (format) or 5 (solver/ensemble).
"""
import argparse
import dataclasses
import sys
from pathlib import Path

from . import datasets
from .encoder import encode, pack, payload_size, unpack
from .errors import OneBitError
from .evaluation import DEFAULT_M_GRID, ExperimentConfig, compression_ratio_1bit, run_experiment
from .solvers import SOLVERS, decode, make_config
from .transform import build_ensemble, dct_synthesis_matrix

EXIT_CODES = {"usage": 2, "config": 2, "ingestion": 3, "degenerate": 3, "format": 4, "ensemble": 5, "solver": 5}

SOLVER_FLAGS = {
    "k": "k",
    "max_iters": "max_iters",
    "step_tau": "tau",
    "d": "d",
    "stop_var": "stop_var",
    "scan_mode": "scan_mode",
    "lambda0": "lambda0",
    "lambda_growth": "lambda_growth",
    "stages": "stages",
    "inner_iters": "inner_iters",
    "grad_step": "grad_step",
    "tol": "tol",
}


class CliError(Exception):
    def __init__(self, category, message):
        super().__init__(message)
        self.category = category


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("usage", message)


def _existing_file(text):
    if not Path(text).is_file():
        raise argparse.ArgumentTypeError(f"input path does not exist: {text}")
    return text


def _m_grid(text):
    """``start:stop:step`` (inclusive) or a comma-separated list."""
    try:
        if ":" in text:
            start, stop, step = (int(p) for p in text.split(":"))
            if step < 1:
                raise ValueError
            grid = tuple(range(start, stop + 1, step))
        else:
            grid = tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad m grid {text!r}; use start:stop:step or a,b,c") from None
    if not grid:
        raise argparse.ArgumentTypeError(f"m grid {text!r} is empty")
    return grid


def _add_source(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", type=_existing_file, help="delimited text trace")
    src.add_argument("--fixture", choices=datasets.FIXTURES, help="shipped synthetic trace")
    p.add_argument("--column", default="0", help="column index or header name (default 0)")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--start", type=int, default=0, help="window offset into the series")
    p.add_argument("--n", type=int, default=250, help="window length")


def _add_solver(p, default="bbiht"):
    p.add_argument("--solver", default=default, help=f"one of {', '.join(sorted(SOLVERS))}")
    p.add_argument("--k", type=int, help="sparsity level (biht)")
    p.add_argument("--max-iters", type=int)
    p.add_argument("--tau", type=float, help="BIHT step size")
    p.add_argument("--d", type=float, help="bbiht sweep fraction")
    p.add_argument("--stop-var", type=float)
    p.add_argument("--scan-mode", choices=("literal", "first_exceed"))
    p.add_argument("--lambda0", type=float)
    p.add_argument("--lambda-growth", type=float)
    p.add_argument("--stages", type=int)
    p.add_argument("--inner-iters", type=int)
    p.add_argument("--grad-step", type=float)
    p.add_argument("--tol", type=float)


def build_parser():
    parser = _Parser(prog="onebit-cdg", description="1-bit compressive data gathering for sensor traces")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="encode one window into a .1bm file")
    _add_source(p)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--output", required=True)

    p = sub.add_parser("reconstruct", help="reconstruct readings from a .1bm file")
    p.add_argument("--input", type=_existing_file, required=True)
    p.add_argument("--output", required=True, help="index,value CSV")
    _add_solver(p)

    p = sub.add_parser("sparsity", help="DCT coefficients and cumulative energy of one window")
    _add_source(p)
    p.add_argument("--output", help="CSV path (stdout when omitted)")

    p = sub.add_parser("experiment", help="multi-trial SNR / ratio / timing sweep")
    _add_source(p)
    p.add_argument("--m-grid", type=_m_grid, default=DEFAULT_M_GRID, help="start:stop:step or a,b,c")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--solvers", default=None, help="comma-separated solver list (overrides --solver)")
    _add_solver(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", help="report path (stdout when omitted)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-timing", action="store_true", help="record 0 s so output is byte-reproducible")
    return parser


def _column(text):
    return int(text) if text.lstrip("-").isdigit() else text


def _load_window(args):
    if args.fixture:
        series = datasets.load_fixture(args.fixture)
    else:
        series = datasets.load_csv_trace(args.input, column=_column(args.column), delimiter=args.delimiter)
    return datasets.window(series, args.n, args.start)


def _solver_params(args, solver):
    cls = SOLVERS[solver][1] if solver in SOLVERS else None
    if cls is None:
        return {}
    names = {f.name for f in dataclasses.fields(cls)}
    return {field: getattr(args, flag) for field, flag in SOLVER_FLAGS.items() if field in names and getattr(args, flag) is not None}


def _write(path, text, binary=False):
    if path is None:
        sys.stdout.write(text)
        return
    mode = "wb" if binary else "w"
    with open(path, mode) as fh:
        fh.write(text)


def cmd_encode(args):
    w = _load_window(args)
    ensemble = build_ensemble(args.n, args.m, args.seed)
    sm = encode(w.values, ensemble, source_id=w.source_id)
    blob = pack(sm)
    _write(args.output, blob, binary=True)
    print(f"m={sm.m} n={sm.n} payload_bytes={payload_size(sm.m)} file_bytes={len(blob)} "
          f"ratio_1bit={compression_ratio_1bit(sm.m, sm.n):.3f}")


def cmd_reconstruct(args):
    config = make_config(args.solver, **_solver_params(args, args.solver))
    try:
        data = Path(args.input).read_bytes()
    except OSError as exc:
        raise CliError("ingestion", str(exc)) from None
    sm = unpack(data)
    ensemble = build_ensemble(sm.n, sm.m, sm.seed)
    xhat, est = decode(sm, ensemble, args.solver, config)
    lines = ["index,value"] + [f"{i},{v:.10g}" for i, v in enumerate(xhat)]
    _write(args.output, "\n".join(lines) + "\n")
    print(f"solver={est.solver_name} k_used={est.k_used} hamming_fraction={est.hamming_error / sm.m:.6f}")


def cmd_sparsity(args):
    w = _load_window(args)
    report = datasets.sparsity_report(w, dct_synthesis_matrix(args.n))
    _write(args.output, report.to_csv())


def cmd_experiment(args):
    solvers = tuple(s.strip() for s in args.solvers.split(",")) if args.solvers else (args.solver,)
    for name in solvers:
        make_config(name, **_solver_params(args, name))
    w = _load_window(args)
    cfg = ExperimentConfig(
        signal=w.values,
        m_grid=args.m_grid,
        trials=args.trials,
        master_seed=args.seed,
        solvers=solvers,
        solver_params={name: _solver_params(args, name) for name in solvers},
        dataset_id=f"{w.source_id}@{w.start_index}",
        workers=args.workers,
        timing=not args.no_timing,
    )
    report = run_experiment(cfg)
    _write(args.output, report.to_csv() if args.format == "csv" else report.to_json())


COMMANDS = {
    "encode": cmd_encode,
    "reconstruct": cmd_reconstruct,
    "sparsity": cmd_sparsity,
    "experiment": cmd_experiment,
}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        COMMANDS[args.command](args)
    except CliError as exc:
        category, message = exc.category, str(exc)
    except OneBitError as exc:
        category, message = exc.category, str(exc)
    else:
        return 0
    message = " ".join(message.split())
    print(f"ERROR:{category}: {message}", file=sys.stderr)
    return EXIT_CODES.get(category, 1)


if __name__ == "__main__":
    sys.exit(main())
