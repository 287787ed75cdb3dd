"""Command-line experiment harness.

Subcommands::

    tensortrace generate     --gen orth-diag --order 3 --dim 20 --seed 7 --out A.tns
    tensortrace run          --algo als --in A.tns --eta "1/(1000n)" --out runs/a
    tensortrace compare-init --gen uniform --order 4 --dim 10 --seed 0 --out runs/init

``run`` writes ``telemetry.csv`` and ``summary.json`` into ``--out``;
``compare-init`` writes ``identity.csv``, ``hosvd.csv`` and ``comparison.json``.
Exit status is 0 when the requested runs completed, 2 on usage or input
errors and 3 when ``run`` stops on a fully degenerate cycle.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import re
import sys
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from .als import run as run_als
from .ensembles import gen_antisymmetric, gen_orth_diagonalizable, gen_sym_diagonalizable, gen_uniform
from .solver import DecompositionResult, SolverConfig
from .symmetric import run_sym
from .tensor import DenseTensor
from .tns import format_real, read_tns, write_tns

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DEGENERATE = 3

TELEMETRY_COLUMNS = [
    "cycle",
    "micro_index",
    "pivot_i",
    "pivot_j",
    "mode",
    "applied",
    "trace",
    "rel_offnorm",
    "lambda_pivot_abs2",
    "lambda_spec_norm",
]

GENERATORS = ("uniform", "orth-diag", "sym-diag", "antisym")
ALGOS = ("als", "sym", "sym-mode1")
DEFAULT_DIMS = {3: 20, 4: 10, 6: 5}

_ETA_RE = re.compile(r"^1\s*/\s*\(?\s*(\d*)\s*\*?\s*n\s*\)?$")


class UsageError(Exception):
    pass


def parse_eta(text: str, n: int) -> float:
    """``"1/n"``, ``"1/(10n)"``, ``"1/(100n)"``, ``"1/(1000n)"`` or a plain decimal."""
    m = _ETA_RE.match(text.strip())
    if m:
        k = int(m.group(1)) if m.group(1) else 1
        if k == 0:
            raise UsageError(f"bad eta {text!r}")
        return 1.0 / (k * n)
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"bad eta {text!r}: use 1/n, 1/(10n), 1/(100n), 1/(1000n) or a number") from None


def default_dim(order: int) -> int:
    return DEFAULT_DIMS.get(order, 5)


def generate_tensor(kind: str, order: int, n: int, seed: int, diag_range) -> Tuple[DenseTensor, Optional[np.ndarray]]:
    if kind == "uniform":
        return gen_uniform(order, n, seed), None
    if kind == "orth-diag":
        return gen_orth_diagonalizable(order, n, seed, diag_range)
    if kind == "sym-diag":
        A, diag, _ = gen_sym_diagonalizable(order, n, seed, diag_range)
        return A, diag
    if kind == "antisym":
        return gen_antisymmetric(order, n, seed), None
    raise UsageError(f"unknown generator {kind!r}")


def _load_input(args) -> DenseTensor:
    if args.input and args.gen:
        raise UsageError("--in and --gen are mutually exclusive")
    if args.input:
        return read_tns(args.input)
    if not args.gen:
        raise UsageError("one of --in or --gen is required")
    n = args.dim or default_dim(args.order)
    A, _ = generate_tensor(args.gen, args.order, n, args.seed, tuple(args.diag_range))
    return A


def _config(args, n: int, init: str) -> SolverConfig:
    eta = parse_eta(args.eta, n) if args.eta is not None else None
    cfg = SolverConfig(
        eta=eta,
        tol=args.tol,
        max_cycles=args.max_cycles,
        pivot_order=args.pivot_order,
        init=init,
        seed=args.seed,
    )
    cfg.resolve_eta(n)
    return cfg


def solve(A: DenseTensor, algo: str, cfg: SolverConfig) -> DecompositionResult:
    if algo == "als":
        return run_als(A, cfg)
    if algo in ("sym", "sym-mode1"):
        return run_sym(A, cfg, "full" if algo == "sym" else "mode1")
    raise UsageError(f"unknown algorithm {algo!r}")


def write_telemetry(path: Path, result: DecompositionResult) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TELEMETRY_COLUMNS)
        for r in result.telemetry:
            w.writerow([
                r.cycle,
                r.micro_index,
                r.pivot[0],
                r.pivot[1],
                r.mode,
                int(r.applied),
                format_real(r.trace),
                format_real(r.rel_offnorm),
                format_real(r.lambda_pivot_abs2),
                format_real(r.lambda_spec_norm),
            ])


def summary_dict(result: DecompositionResult) -> dict:
    return {
        "converged": result.converged,
        "status": result.status,
        "message": result.message,
        "cycles": result.cycles,
        "start_trace": result.start_trace,
        "start_rel_offnorm": result.start_rel_offnorm,
        "final_trace": result.final_trace,
        "final_rel_offnorm": result.final_rel_offnorm,
        "degenerate_skips": result.degenerate_skips,
        "microiteration_histogram": result.microiteration_histogram,
    }


def _dump_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def cmd_generate(args) -> int:
    n = args.dim or default_dim(args.order)
    A, diag = generate_tensor(args.gen, args.order, n, args.seed, tuple(args.diag_range))
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_tns(out, A)
    if diag is not None:
        Path(str(out) + ".diag").write_text("".join(format_real(x) + "\n" for x in diag))
    print(f"wrote {out} (d={A.order}, n={A.dim})")
    return EXIT_OK


def cmd_run(args) -> int:
    A = _load_input(args)
    result = solve(A, args.algo, _config(args, A.dim, args.init))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_telemetry(out / "telemetry.csv", result)
    _dump_json(out / "summary.json", summary_dict(result))
    print(
        f"{args.algo}: {result.status} after {result.cycles} cycle(s), "
        f"trace={result.final_trace:.10g}, rel_offnorm={result.final_rel_offnorm:.3e}"
    )
    if result.status == "degenerate":
        print(result.message, file=sys.stderr)
        return EXIT_DEGENERATE
    return EXIT_OK


def cmd_compare_init(args) -> int:
    A = _load_input(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    comparison = {}
    for init in ("identity", "hosvd"):
        result = run_als(A, _config(args, A.dim, init))
        write_telemetry(out / f"{init}.csv", result)
        comparison[init] = {
            "start_trace": result.start_trace,
            "start_rel_offnorm": result.start_rel_offnorm,
            "final_trace": result.final_trace,
            "final_rel_offnorm": result.final_rel_offnorm,
            "cycles": result.cycles,
            "status": result.status,
            "message": result.message,
        }
        print(f"{init}: {result.status}, start={result.start_trace:.10g}, final={result.final_trace:.10g}")
    _dump_json(out / "comparison.json", comparison)
    return EXIT_OK


def _add_source_args(p: argparse.ArgumentParser, required_gen: bool = False) -> None:
    p.add_argument("--gen", choices=GENERATORS, required=required_gen, help="tensor ensemble")
    p.add_argument("--order", type=int, default=3, help="tensor order d (default 3)")
    p.add_argument("--dim", type=int, default=None, help="dimension n (default 20/10/5 for d=3/4/6)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--diag-range", type=float, nargs=2, default=(0.0, 1.0), metavar=("LO", "HI"))


def _add_solver_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--in", dest="input", default=None, help="read the tensor from a TNS file")
    p.add_argument("--eta", default=None, help='gate parameter: "1/n", "1/(10n)", ... or a number (default 1/(100n))')
    p.add_argument("--tol", type=float, default=1e-4)
    p.add_argument("--max-cycles", type=int, default=200)
    p.add_argument("--pivot-order", choices=("row", "column"), default="row")
    p.add_argument("--out", required=True, help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tensortrace", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a random tensor to a TNS file")
    _add_source_args(g, required_gen=True)
    g.add_argument("--out", required=True, help="output TNS path; the diagonal goes to <out>.diag")
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("run", help="run one solver and write telemetry")
    r.add_argument("--algo", choices=ALGOS, default="als")
    r.add_argument("--init", choices=("identity", "hosvd"), default="identity")
    _add_source_args(r)
    _add_solver_args(r)
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("compare-init", help="ALS with identity and HOSVD initialization")
    _add_source_args(c)
    _add_solver_args(c)
    c.set_defaults(func=cmd_compare_init)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
