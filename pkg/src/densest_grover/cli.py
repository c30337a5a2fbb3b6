"""Command-line entry point: ``gen``, ``solve``, ``convergence``, ``scaling``, ``fit``.

Exit codes: 0 success, 1 usage error, 2 runtime error.  Settings resolve as
flags, then ``--config`` JSON, then defaults.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import bench
from .baselines import BlackBoxGrover
from .circuits import search_layout
from .graph import (GenerationError, bitstring, erdos_renyi, erdos_renyi_unique_densest,
                    format_edge_list, read_edge_list, vertices_of)
from .search import TRACE_COLUMNS, QuantumExecutor, SearchConfig, adaptive_search
from .sim import CapacityError


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.replace(",", " ").split()]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="densest-grover", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(p):
        p.add_argument("--config", type=Path, help="JSON file of option defaults")
        p.add_argument("--seed", type=int, default=0)
        return p

    gen = common(sub.add_parser("gen", help="write a G(n, p) edge list"))
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--p", type=float, default=0.5)
    gen.add_argument("--unique-k", type=int, help="reject until the densest k-subset is unique")
    gen.add_argument("--max-attempts", type=int, default=10_000)
    gen.add_argument("--out", type=Path)

    solve = common(sub.add_parser("solve", help="adaptive Grover search on an edge list"))
    solve.add_argument("--in", dest="input", type=Path, required=True)
    solve.add_argument("--k", type=int, required=True)
    solve.add_argument("--executor", choices=("auto", "quantum", "emulator"), default="auto")
    solve.add_argument("--p-target", type=float, default=0.95)
    solve.add_argument("--trace", type=Path, help="write the per-attempt table here")
    solve.add_argument("--max-qubits", type=int, default=22)

    conv = common(sub.add_parser("convergence", help="best-so-far versus oracle calls"))
    conv.add_argument("--in", dest="input", type=Path, required=True)
    conv.add_argument("--k", type=int, required=True)
    conv.add_argument("--runs", type=int, default=1000)
    conv.add_argument("--algorithms", default=",".join(bench.ALGORITHMS))
    conv.add_argument("--p-target", type=float, default=0.95)
    conv.add_argument("--out", type=Path, required=True, help="output prefix")

    scal = common(sub.add_parser("scaling", help="oracle cost versus N = C(n, k)"))
    scal.add_argument("--k", type=_int_list, required=True, help="e.g. 3,4,5")
    scal.add_argument("--n", type=_int_list, help="explicit n values (else all admissible)")
    scal.add_argument("--max-N", type=int, default=100_000)
    scal.add_argument("--min-N", type=int, default=2)
    scal.add_argument("--graphs", type=int, default=20)
    scal.add_argument("--runs", type=int, default=20)
    scal.add_argument("--p-graph", type=float, default=0.5)
    scal.add_argument("--executor", choices=("auto", "quantum", "emulator", "sa"), default="auto")
    scal.add_argument("--p-target", type=float, default=0.95)
    scal.add_argument("--n-boot", type=int, default=2000)
    scal.add_argument("--max-qubits", type=int, default=22)
    scal.add_argument("--jobs", type=int, default=1)
    scal.add_argument("--out", type=Path, required=True, help="output prefix")

    fit = common(sub.add_parser("fit", help="fit y = a N^b to a two-column table"))
    fit.add_argument("--in", dest="input", type=Path, required=True)
    fit.add_argument("--x", default="N")
    fit.add_argument("--y", default="mean")
    parser.subcommands = {"gen": gen, "solve": solve, "convergence": conv,
                          "scaling": scal, "fit": fit}
    return parser


def _parse(argv) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        raise UsageError("a subcommand is required: gen, solve, convergence, scaling, fit")
    if args.config is not None:
        try:
            overrides = json.loads(args.config.read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        parser.subcommands[args.command].set_defaults(**{k.replace("-", "_"): v for k, v in overrides.items()})
        args = parser.parse_args(argv)
    return args


def _config_echo(args) -> dict:
    return {k: (str(v) if isinstance(v, Path) else v)
            for k, v in sorted(vars(args).items()) if k != "config"}


def _search_config(args) -> SearchConfig:
    return SearchConfig(confidence=args.p_target, seed=args.seed)


def cmd_gen(args, out) -> None:
    if args.n < 1 or not 0 <= args.p <= 1:
        raise UsageError("need n >= 1 and 0 <= p <= 1")
    if args.unique_k is not None:
        g = erdos_renyi_unique_densest(args.n, args.p, args.unique_k, args.seed,
                                       max_attempts=args.max_attempts)
    else:
        g = erdos_renyi(args.n, args.p, args.seed)
    text = format_edge_list(g)
    if args.out is None:
        out.write(text)
    else:
        args.out.write_text(text, encoding="utf-8")
        print(f"wrote {args.out}: n={g.n} m={g.num_edges} seed={args.seed}", file=out)


def cmd_solve(args, out) -> None:
    g = _load_graph(args.input)
    if not 1 <= args.k <= g.n:
        raise UsageError(f"k must lie in [1, {g.n}], got {args.k}")
    kind = bench.choose_executor(g.n, args.k, args.executor)
    if args.executor == "auto" and search_layout(g.n, args.k).num_qubits > args.max_qubits:
        kind = "emulator"
    executor = QuantumExecutor(args.max_qubits) if kind == "quantum" else BlackBoxGrover()
    cfg = _search_config(args)
    trace = adaptive_search(g, args.k, cfg, executor)
    if args.trace is not None:
        bench.write_table(args.trace, trace.rows(), TRACE_COLUMNS)
    print(f"subset: {' '.join(map(str, vertices_of(trace.best_subset)))}", file=out)
    print(f"bitstring: {bitstring(trace.best_subset, g.n)}", file=out)
    print(f"edges: {trace.best_edges}", file=out)
    print(f"oracle_calls: {trace.total_calls}", file=out)
    print(f"executor: {kind}", file=out)
    print(f"seed: {args.seed}", file=out)
    print(f"optimal with probability at least {args.p_target}", file=out)


def cmd_convergence(args, out) -> None:
    g = _load_graph(args.input)
    if not 1 <= args.k <= g.n:
        raise UsageError(f"k must lie in [1, {g.n}], got {args.k}")
    algorithms = [a for a in args.algorithms.split(",") if a]
    unknown = set(algorithms) - set(bench.ALGORITHMS)
    if unknown:
        raise UsageError(f"unknown algorithms {sorted(unknown)}")
    series = bench.convergence_experiment(g, args.k, algorithms, args.runs, args.seed,
                                          _search_config(args))
    rows = [r for s in series.values() for r in s.rows()]
    table = Path(f"{args.out}.csv")
    bench.write_table(table, rows, bench.CONVERGENCE_COLUMNS)
    bench.write_summary(f"{args.out}.json", {
        "config": _config_echo(args),
        "final_mean": {name: float(s.mean[-1]) for name, s in series.items()},
        "calls": {name: len(s.mean) for name, s in series.items()},
    })
    print(f"wrote {table} ({len(rows)} rows)", file=out)


def cmd_scaling(args, out) -> None:
    if args.n:
        pairs = [(n, k) for k in args.k for n in args.n if n > k]
    else:
        pairs = bench.admissible_pairs(args.k, args.max_N, args.min_N)
    if not pairs:
        raise UsageError("no admissible (n, k) pairs")
    if args.executor == "sa":
        points = bench.sa_scaling_experiment(pairs, args.graphs, args.runs, args.seed,
                                             n_boot=args.n_boot, jobs=args.jobs)
    else:
        points = bench.scaling_experiment(pairs, args.graphs, args.runs, args.p_graph,
                                          args.seed, args.executor, _search_config(args),
                                          args.n_boot, args.max_qubits, args.jobs)
    table = Path(f"{args.out}.csv")
    bench.write_table(table, [p.row() for p in points], bench.SCALING_COLUMNS)
    fits = {}
    for k in sorted({p.k for p in points}):
        series = [(p.N, p.mean) for p in points if p.k == k]
        if len(series) >= 2:
            fits[str(k)] = bench.power_law_fit(series)
    bench.write_summary(f"{args.out}.json", {"config": _config_echo(args), "fits": fits,
                                             "points": [p.row() for p in points]})
    for k, f in fits.items():
        print(f"k={k}: a={f.a:.6g} b={f.b:.6g}", file=out)
    print(f"wrote {table} ({len(points)} points)", file=out)


def cmd_fit(args, out) -> None:
    points = _read_points(args.input, args.x, args.y)
    f = bench.power_law_fit(points)
    print(f"a={f.a:.10g} b={f.b:.10g} r2={f.r_squared:.6f} points={f.points}", file=out)


def _read_points(path: Path, x: str, y: str) -> list[tuple[float, float]]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh) if r]
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    if not rows:
        raise UsageError(f"{path} is empty")
    header = rows[0]
    try:
        [float(v) for v in header[:2]]
        cols, body = (0, 1), rows
    except ValueError:
        if x in header and y in header:
            cols = (header.index(x), header.index(y))
        else:
            cols = (0, 1)
        body = rows[1:]
    try:
        return [(float(r[cols[0]]), float(r[cols[1]])) for r in body]
    except (ValueError, IndexError) as exc:
        raise UsageError(f"bad numeric row in {path}: {exc}") from None


def _load_graph(path: Path):
    try:
        return read_edge_list(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


COMMANDS = {"gen": cmd_gen, "solve": cmd_solve, "convergence": cmd_convergence,
            "scaling": cmd_scaling, "fit": cmd_fit}


def run_command(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = _parse(argv)
        COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(exc, file=err)
        return 1
    except (CapacityError, GenerationError, bench.ConfigurationError) as exc:
        print(f"error: {exc}", file=err)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=err)
        return 1
    return 0


def main() -> None:
    sys.exit(run_command())
