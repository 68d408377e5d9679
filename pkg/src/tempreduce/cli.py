"""Command line entry point: ``tempreduce <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .closure import IntervalGraph, read_annotation, saturate, serialize_annotation
from .errors import AnnotationParseError, InconsistencyError, NonConvexError
from .experiments import (
    DEFAULT_FRACTIONS,
    DISTURB_FRACTIONS,
    PRECISION_METRICS,
    RECALL_METRICS,
    curve_csv,
    degradation_curve,
    disturbance_curve,
)
from .metrics import evaluate, prepare
from .pointgraph import serialize_point_graph
from .synthgen import GenConfig, generate, sidecar
from .timeml import corpus_stats, load_reltype_map, read_corpus, read_timeml, to_interval_graph

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_INCONSISTENT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def _name_list(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def load_graph(path: str, reltypes=None) -> IntervalGraph:
    """Native annotation file, or a TimeML document by extension."""
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such file: {path}")
    if p.suffix in (".tml", ".xml"):
        return to_interval_graph(read_timeml(p), reltypes=reltypes)
    return read_annotation(p)


def cmd_compare(args) -> int:
    k, g = load_graph(args.ref), load_graph(args.cand)
    report = evaluate(k, g, args.mode)
    if args.format == "json":
        print(json.dumps(report.to_dict(), indent=2))
    else:
        doc = Path(args.cand).stem
        print("document,metric,value")
        for name, val in report.metric_items():
            print(f"{doc},{name},{round(val, 6)}")
    return EXIT_OK


def cmd_closure(args) -> int:
    sys.stdout.write(serialize_annotation(saturate(load_graph(args.file))))
    return EXIT_OK


def cmd_reduce(args) -> int:
    sys.stdout.write(serialize_point_graph(prepare(load_graph(args.file)).reduced))
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        cfg = GenConfig(args.events, args.range, args.indet, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc))
    g = generate(cfg)
    text = serialize_annotation(g)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        Path(args.output + ".json").write_text(sidecar(cfg, g), encoding="utf-8")
    else:
        sys.stdout.write(text)
        if args.sidecar:
            Path(args.sidecar).write_text(sidecar(cfg, g), encoding="utf-8")
    return EXIT_OK


def cmd_degrade(args) -> int:
    try:
        points = degradation_curve(
            load_graph(args.ref), args.fractions, args.trials, args.metrics, args.seed, args.mode
        )
    except ValueError as exc:
        raise UsageError(str(exc))
    sys.stdout.write(curve_csv(points))
    return EXIT_OK


def cmd_disturb(args) -> int:
    try:
        points = disturbance_curve(
            load_graph(args.ref), args.fractions, args.trials, args.metrics, args.seed,
            args.max_retries, args.mode,
        )
    except ValueError as exc:
        raise UsageError(str(exc))
    sys.stdout.write(curve_csv(points))
    return EXIT_OK


def cmd_stats(args) -> int:
    if not Path(args.corpus_dir).is_dir():
        raise UsageError(f"not a directory: {args.corpus_dir}")
    reltypes = load_reltype_map(args.reltype_map) if args.reltype_map else None
    mode = {
        (False, False): "raw",
        (True, False): "time-time",
        (False, True): "saturated",
        (True, True): "saturated+tt",
    }[(args.time_time, args.saturate)]
    stats = corpus_stats(read_corpus(args.corpus_dir), [mode], reltypes)
    print(json.dumps(stats.to_dict(), indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tempreduce", description="Temporal graph closure, reduction and evaluation.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compare", help="score a candidate annotation against a reference")
    c.add_argument("ref")
    c.add_argument("cand")
    c.add_argument("--mode", choices=["strict", "relaxed"], default="relaxed")
    c.add_argument("--format", choices=["json", "csv"], default="json")
    c.set_defaults(func=cmd_compare)

    c = sub.add_parser("closure", help="print the saturated graph")
    c.add_argument("file")
    c.set_defaults(func=cmd_closure)

    c = sub.add_parser("reduce", help="print the merged endpoint graph's major edges")
    c.add_argument("file")
    c.set_defaults(func=cmd_reduce)

    c = sub.add_parser("gen", help="generate a random graph")
    c.add_argument("--events", type=int, required=True)
    c.add_argument("--range", type=int, required=True)
    c.add_argument("--indet", type=int, default=0)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--output", "-o", help="write here (plus a .json sidecar) instead of stdout")
    c.add_argument("--sidecar", help="where to write the JSON sidecar when printing to stdout")
    c.set_defaults(func=cmd_gen)

    c = sub.add_parser("degrade-exp", help="recall as annotated edges are removed")
    c.add_argument("ref")
    c.add_argument("--fractions", type=_float_list, default=list(DEFAULT_FRACTIONS))
    c.add_argument("--trials", type=int, default=20)
    c.add_argument("--metrics", type=_name_list, default=list(RECALL_METRICS))
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--mode", choices=["strict", "relaxed"], default="relaxed")
    c.set_defaults(func=cmd_degrade)

    c = sub.add_parser("disturb-exp", help="precision as annotated edges are switched")
    c.add_argument("ref")
    c.add_argument("--fractions", type=_float_list, default=list(DISTURB_FRACTIONS))
    c.add_argument("--trials", type=int, default=20)
    c.add_argument("--metrics", type=_name_list, default=list(PRECISION_METRICS))
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--max-retries", type=int, default=10)
    c.add_argument("--mode", choices=["strict", "relaxed"], default="relaxed")
    c.set_defaults(func=cmd_disturb)

    c = sub.add_parser("stats", help="TimeML corpus statistics")
    c.add_argument("corpus_dir")
    c.add_argument("--time-time", action="store_true", help="add relations between dated timexes")
    c.add_argument("--saturate", action="store_true", help="saturate before counting relations")
    c.add_argument("--reltype-map", help="relType mapping file overriding the default")
    c.set_defaults(func=cmd_stats)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AnnotationParseError, NonConvexError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InconsistencyError as exc:
        print(f"inconsistent: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT


if __name__ == "__main__":
    sys.exit(main())
