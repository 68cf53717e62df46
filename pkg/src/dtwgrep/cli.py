"""``dtw-grep``: match, approximate, simulate, benchmark and convert."""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import __version__
from .approx import approx_min_dtw_general, approx_min_dtw_tree, exact_min_dtw
from .baseline import is_inf, match_last_row
from .bench import run_bench
from .block import GT_K, CompressedMatchRow, solve_kdtw
from .k1 import solve_1dtw
from .metric import LetterMetric, read_metric_table
from .rle import format_rle_text, read_sequence, rle_decode
from .sim import parse_grid, run_experiment
from .tree import read_tree


class CliError(Exception):
    pass


def _metric(spec: str) -> LetterMetric:
    if spec == "discrete":
        return LetterMetric.discrete()
    if spec.startswith("table:"):
        return read_metric_table(spec[len("table:"):])
    raise CliError(f"unknown metric {spec!r}; use 'discrete' or 'table:FILE'")


def _render(v, json_mode: bool):
    if v is GT_K:
        return "gt_k" if json_mode else ">k"
    if is_inf(v):
        return "inf"
    return v


def _pick_algo(algo: str, k: int) -> str:
    if k < 0:
        raise CliError("--k must be non-negative")
    if algo == "auto":
        return "baseline" if k == 0 else "k1" if k == 1 else "block"
    if algo == "baseline" and k != 0:
        raise CliError("--algo baseline computes the exact row; use --k 0")
    if algo == "k1" and k != 1:
        raise CliError("--algo k1 needs --k 1")
    if algo == "block" and k < 1:
        raise CliError("--algo block needs --k >= 1")
    return algo


def cmd_match(args) -> int:
    algo = _pick_algo(args.algo, args.k)
    P = read_sequence(args.pattern, args.input_format)
    T = read_sequence(args.text, args.input_format)
    d = _metric(args.metric)
    out = sys.stdout
    if algo == "baseline":
        row = match_last_row(P, T, d)
        values = [_render(v.item(), args.format == "json") for v in row]
        if args.format == "json":
            json.dump({"k": 0, "row": values}, out)
            out.write("\n")
        else:
            out.write("position\tvalue\n")
            out.writelines(f"{j}\t{v}\n" for j, v in enumerate(values))
        return 0
    row = solve_1dtw(P, T, d, args.index) if algo == "k1" else solve_kdtw(P, T, d, args.k)
    if args.format == "json":
        obj = row.to_json()
        if args.expand:
            obj["values"] = [_render(v, True) for v in row.expand()]
        json.dump(obj, out)
        out.write("\n")
    else:
        _write_tsv(row, out)
    return 0


def _write_tsv(row: CompressedMatchRow, out) -> None:
    out.write("position\tvalue\n")
    out.writelines(f"{r}\t{_render(v, False)}\n" for r, v in enumerate(row.expand(), 1))


def _fmt_number(v: float) -> str:
    if math.isinf(v):
        return "inf"
    return repr(float(v))


def cmd_approx(args) -> int:
    if not 0 < args.epsilon < 1:
        raise CliError("--epsilon must lie strictly between 0 and 1")
    P = read_sequence(args.pattern, args.input_format)
    T = read_sequence(args.text, args.input_format)
    if args.tree:
        tree = read_tree(args.tree)
        res = approx_min_dtw_tree(P, T, tree, args.epsilon, args.mode)
        exact_metric = tree.metric()
        embeddings = 0
    else:
        exact_metric = _metric(args.metric)
        res = approx_min_dtw_general(P, T, exact_metric, args.epsilon, args.seed, args.repeats)
        embeddings = args.repeats or max(1, math.ceil(math.log2(max(P.total_length, T.total_length))))
    lines = [("value", _fmt_number(res.value)), ("branch", res.branch)]
    if res.i_star is not None:
        lines.append(("i_star", str(res.i_star)))
    if embeddings:
        lines.append(("embeddings", str(embeddings)))
    if args.oracle:
        lines.append(("exact", _fmt_number(exact_min_dtw(P, T, exact_metric))))
    sys.stdout.writelines(f"{k}\t{v}\n" for k, v in lines)
    return 0


def cmd_simulate(args) -> int:
    if args.reads < 0:
        raise CliError("--reads must be non-negative")
    result = run_experiment(args.genome, parse_grid(args.phom_grid), args.reads, args.seed, threads=args.threads)
    text = result.to_csv()
    if args.out == "-":
        sys.stdout.write(text)
    else:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            raise CliError(f"cannot write {args.out}: {exc.strerror}") from None
    return 0


def cmd_bench(args) -> int:
    try:
        m, n = (int(x) for x in args.runs.split(","))
    except ValueError:
        raise CliError("--runs wants two integers, e.g. 200,200") from None
    if min(m, n, args.runlen_max, args.k, args.trials) < 1:
        raise CliError("--runs, --runlen-max, --k and --trials must be positive")
    rows = run_bench(m, n, args.runlen_max, args.k, args.trials, args.seed)
    cols = ["trial", "M", "N", "m", "n", "k", "baseline_seconds", "block_seconds",
            "baseline_cells", "block_ops", "ops_per_kmn"]
    print("\t".join(cols))
    for r in rows:
        d = r.as_dict()
        print("\t".join(f"{d[c]:.6f}" if isinstance(d[c], float) else str(d[c]) for c in cols))
    return 0


def cmd_convert(args) -> int:
    text = Path(args.input).read_text()
    if text.lstrip().startswith("{"):
        if args.to != "tsv":
            raise CliError("a match-row JSON file can only be converted to tsv")
        _write_tsv(CompressedMatchRow.from_json(text), sys.stdout)
        return 0
    if args.to == "tsv":
        raise CliError("--to tsv expects a match-row JSON file")
    x = read_sequence(args.input, args.input_format)
    if args.to == "rle":
        sys.stdout.write(format_rle_text(x))
    else:
        plain = rle_decode(x)
        if not isinstance(plain, str):
            plain = "".join(map(str, plain))
        if args.to == "fasta":
            sys.stdout.write(f">{args.name}\n")
            sys.stdout.writelines(plain[i:i + 60] + "\n" for i in range(0, len(plain), 60))
        else:
            sys.stdout.write(plain + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dtw-grep", description="DTW pattern matching on run-length encoded strings.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    fmt_help = "sequence file format (default: detect)"

    p = sub.add_parser("match", help="best DTW distance ending at every text position")
    p.add_argument("--pattern", required=True)
    p.add_argument("--text", required=True)
    p.add_argument("--k", type=int, required=True, help="threshold; 0 prints the exact row")
    p.add_argument("--algo", choices=["auto", "baseline", "k1", "block"], default="auto")
    p.add_argument("--metric", default="discrete", help="'discrete' or 'table:FILE'")
    p.add_argument("--format", choices=["json", "tsv"], default="json")
    p.add_argument("--expand", action="store_true", help="add per-position values to JSON output")
    p.add_argument("--index", choices=["sa", "hash"], default="sa", help="suffix index used by --algo k1")
    p.add_argument("--input-format", choices=["auto", "plain", "fasta", "rle"], default="auto", help=fmt_help)
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("approx", help="approximate smallest DTW distance to any substring")
    p.add_argument("--pattern", required=True)
    p.add_argument("--text", required=True)
    p.add_argument("--epsilon", type=float, required=True)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--tree", help="well-separated tree metric file")
    src.add_argument("--metric", default="discrete", help="'discrete' or 'table:FILE' (embedded into trees)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=None, help="number of tree embeddings (default ceil(log2 L))")
    p.add_argument("--mode", choices=["binary", "linear"], default="binary")
    p.add_argument("--oracle", action="store_true", help="also print the exact value")
    p.add_argument("--input-format", choices=["auto", "plain", "fasta", "rle"], default="auto", help=fmt_help)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("simulate", help="edit vs DTW offsets under simulated sequencing errors")
    p.add_argument("--genome", default="synthetic:10000:1", help="FASTA path or synthetic:<len>:<seed>")
    p.add_argument("--phom-grid", default="0:0.9:0.1")
    p.add_argument("--reads", type=int, default=60)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.add_argument("--threads", type=int, default=None, help="worker threads (default DTW_GREP_THREADS or CPU count)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bench", help="time baseline and block algorithms on random strings")
    p.add_argument("--runs", default="200,200", help="m,n run counts")
    p.add_argument("--runlen-max", type=int, default=64)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("convert", help="convert sequence files, or expand a match-row JSON to TSV")
    p.add_argument("--input", required=True)
    p.add_argument("--to", choices=["plain", "rle", "fasta", "tsv"], required=True)
    p.add_argument("--name", default="seq", help="FASTA record name")
    p.add_argument("--input-format", choices=["auto", "plain", "fasta", "rle"], default="auto", help=fmt_help)
    p.set_defaults(func=cmd_convert)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"dtw-grep: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
