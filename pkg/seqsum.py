import argparse
import json
import sys
from pathlib import Path

import config
from bench.report import emit_report
from bench.sweep import GranularityGrid, run_sweep
from insights.evaluate import load_insights, report_to_dict, score_report
from models.dataset import stats
from models.errors import DatasetError, SchemaError, StructureError
from models.summary import deserialize, node_count, serialize, validate
from mining.dispatch import TECHNIQUES, granularity_flag, mine
from pipeline.load import dump_dataset, load_dataset
from pipeline.precompute import precompute
from pipeline.synthetic import PROFILES, generate, generate_suite
from utils.files import write_atomic
from utils.printer import error, info, print_bench_records, print_score_report, print_stats
from viz.layout import LayoutConfig, layout_summary
from viz.render import render_svg


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    """Usage errors raise instead of exiting with argparse's status 2."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _dumps(obj) -> bytes:
    return (json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n").encode("utf-8")


def _read_summary(path):
    summary = deserialize(Path(path).read_bytes())
    ok, violations = validate(summary)
    if not ok:
        raise SchemaError(f"{path} is not a valid summary: {'; '.join(violations)}")
    return summary


def run_stats(args):
    d = load_dataset(args.input, args.format)
    print_stats(stats(d), d.name)


def _granularity(args) -> float:
    wanted = granularity_flag(args.technique)
    given = {"--min-support": args.min_support, "--lambda": args.lam}
    other = "--lambda" if wanted == "--min-support" else "--min-support"
    if given[other] is not None:
        raise UsageError(f"{args.technique} takes {wanted}, not {other}.")
    if given[wanted] is None:
        raise UsageError(f"{args.technique} needs {wanted}.")
    return given[wanted]


def run_mine(args):
    level = _granularity(args)
    d = load_dataset(args.input, args.format)
    info("mine", f"{args.technique} on '{d.name}' ({len(d)} sequences) at {level:g} ...")

    summary = mine(d, args.technique, level, node_cap=args.node_cap)
    write_atomic(args.output, serialize(summary))
    info("mine", f"{node_count(summary)} nodes, {len(summary.edges)} edges -> {args.output}")


def run_render(args):
    summary = _read_summary(args.input)
    cfg = LayoutConfig(
        node_width=args.node_width,
        node_height=args.node_height,
        horizontal_gap=args.horizontal_gap,
        vertical_gap=args.vertical_gap,
        canvas_width=args.canvas_width,
        canvas_height=args.canvas_height,
        link_width_per_sequence=args.link_width,
    )
    layout = layout_summary(summary, cfg)
    write_atomic(args.output, render_svg(summary, layout))
    if args.layout_json:
        write_atomic(args.layout_json, _dumps(layout.to_dict()))
    info("render", f"Saved {args.output}")


def run_eval(args):
    summary = _read_summary(args.summary)
    queries, unsupported = load_insights(args.insights)
    report = score_report(summary, queries)

    print_score_report(report, unsupported)
    if args.report:
        out = report_to_dict(report)
        out["unsupported"] = unsupported
        write_atomic(args.report, _dumps(out))
        info("eval", f"Saved {args.report}")


def _bench_datasets(args):
    if not args.datasets:
        info("bench", f"No --datasets given, generating the synthetic suite (seed {args.seed}).")
        return generate_suite(args.seed)

    folder = Path(args.datasets)
    if not folder.is_dir():
        raise FileNotFoundError(f"Datasets directory not found: {folder}")
    paths = sorted(p for p in folder.iterdir() if p.suffix.lower() in (".json", ".csv"))
    if not paths:
        raise DatasetError(f"No .json or .csv datasets in {folder}")
    return [load_dataset(p) for p in paths]


def run_bench(args):
    datasets = _bench_datasets(args)
    records = run_sweep(datasets, GranularityGrid(), repeats=args.repeats, node_cap=args.node_cap, verbose=True)
    csv_bytes, svg_bytes = emit_report(records)

    out_dir = Path(args.out_dir)
    write_atomic(out_dir / "bench.csv", csv_bytes)
    write_atomic(out_dir / "bench.svg", svg_bytes)
    print_bench_records(records)
    info("bench", f"Saved {out_dir / 'bench.csv'} and {out_dir / 'bench.svg'}")


def run_precompute(args):
    d = load_dataset(args.input, args.format)
    precompute(d, args.out_dir, node_cap=args.node_cap)


def run_generate(args):
    fmt = args.format or Path(args.output).suffix.lower().lstrip(".") or "json"
    if fmt not in ("csv", "json"):
        raise UsageError(f"cannot infer dataset format from '{args.output}'; pass --format.")
    d = generate(PROFILES[args.profile], args.seed)
    write_atomic(args.output, dump_dataset(d, fmt))
    info("generate", f"{args.profile}: {len(d)} sequences -> {args.output}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="seqsum", description="SeqSummaries: mine, draw and evaluate event sequence summaries")
    sub = parser.add_subparsers(dest="command", required=True)

    # STATS
    p_stats = sub.add_parser("stats", help="Dataset statistics")
    p_stats.add_argument("--input", required=True)
    p_stats.add_argument("--format", choices=["csv", "json"])
    p_stats.set_defaults(func=run_stats)

    # MINE
    p_mine = sub.add_parser("mine", help="Mine a summary")
    p_mine.add_argument("--technique", choices=TECHNIQUES, required=True)
    p_mine.add_argument("--min-support", type=float, dest="min_support")
    p_mine.add_argument("--lambda", type=float, dest="lam")
    p_mine.add_argument("--input", required=True)
    p_mine.add_argument("--output", required=True)
    p_mine.add_argument("--format", choices=["csv", "json"])
    p_mine.add_argument("--node-cap", type=int, default=config.DEFAULT_NODE_CAP, dest="node_cap")
    p_mine.set_defaults(func=run_mine)

    # RENDER
    p_render = sub.add_parser("render", help="Lay out and draw a summary as SVG")
    p_render.add_argument("--input", required=True)
    p_render.add_argument("--output", required=True)
    p_render.add_argument("--node-width", type=float, default=config.NODE_WIDTH)
    p_render.add_argument("--node-height", type=float, default=config.NODE_HEIGHT)
    p_render.add_argument("--horizontal-gap", type=float, default=config.HORIZONTAL_GAP)
    p_render.add_argument("--vertical-gap", type=float, default=config.VERTICAL_GAP)
    p_render.add_argument("--canvas-width", type=float, default=config.CANVAS_WIDTH)
    p_render.add_argument("--canvas-height", type=float, default=config.CANVAS_HEIGHT)
    p_render.add_argument("--link-width", type=float, default=config.LINK_WIDTH_PER_SEQUENCE)
    p_render.add_argument("--layout-json")
    p_render.set_defaults(func=run_render)

    # EVAL
    p_eval = sub.add_parser("eval", help="Check insights against a summary")
    p_eval.add_argument("--summary", required=True)
    p_eval.add_argument("--insights", required=True)
    p_eval.add_argument("--report")
    p_eval.set_defaults(func=run_eval)

    # BENCH
    p_bench = sub.add_parser("bench", help="Time and memory sweep over all techniques and levels")
    p_bench.add_argument("--datasets")
    p_bench.add_argument("--repeats", type=int, default=config.DEFAULT_REPEATS)
    p_bench.add_argument("--seed", type=int, default=config.DEFAULT_SEED)
    p_bench.add_argument("--out-dir", default=str(config.OUTPUT_DIR), dest="out_dir")
    p_bench.add_argument("--node-cap", type=int, default=config.DEFAULT_NODE_CAP, dest="node_cap")
    p_bench.set_defaults(func=run_bench)

    # PRECOMPUTE
    p_pre = sub.add_parser("precompute", help="Save summaries and drawings for every technique and level")
    p_pre.add_argument("--input", required=True)
    p_pre.add_argument("--out-dir", default=str(config.OUTPUT_DIR), dest="out_dir")
    p_pre.add_argument("--format", choices=["csv", "json"])
    p_pre.add_argument("--node-cap", type=int, default=config.DEFAULT_NODE_CAP, dest="node_cap")
    p_pre.set_defaults(func=run_precompute)

    # GENERATE
    p_gen = sub.add_parser("generate", help="Write a synthetic dataset shaped like a known one")
    p_gen.add_argument("--profile", choices=list(PROFILES), required=True)
    p_gen.add_argument("--seed", type=int, default=config.DEFAULT_SEED)
    p_gen.add_argument("--output", required=True)
    p_gen.add_argument("--format", choices=["csv", "json"])
    p_gen.set_defaults(func=run_generate)

    return parser


def main(argv=None) -> int:
    """
    Exit codes: 0 success, 1 input error, 2 internal invariant violation.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.func(args)
    except StructureError as e:
        error(f"internal invariant violated: {e}")
        return 2
    except (DatasetError, SchemaError, UsageError, FileNotFoundError, ValueError) as e:
        error(str(e))
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
