"""Command-line front end.

Exit codes: 0 success, 1 internal failure, 2 bad arguments or unsatisfiable
request, 3 unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
from typing import Optional, Sequence

from . import __version__
from .compaction import compact
from .evaluation import evaluate, read_edge_csv
from .ingest_io import (
    ParseError,
    RatingPolicy,
    export_graph,
    parse_publications,
    read_graph,
)
from .metrics import SweepError, SweepSpec, density_sweep, fit_log, infer_primary, network_metrics, rank_sources
from .model import Config, ConfigError, MessageGraph, SourceGraph, ValidationError, normalize_series
from .visibility import build_graph

log = logging.getLogger("thvg")

EXIT_INTERNAL, EXIT_USAGE, EXIT_INPUT = 1, 2, 3


class UsageError(Exception):
    pass


def fmt_real(x: float) -> str:
    return f"{x:.6f}"


def _sha256(paths: Sequence[str]) -> str:
    h = hashlib.sha256()
    for p in paths:
        with open(p, "rb") as fh:
            h.update(hashlib.sha256(fh.read()).digest())
    return h.hexdigest()


def write_manifest(path: str, args: argparse.Namespace, inputs: Sequence[str],
                   config: Optional[Config] = None, policy: Optional[RatingPolicy] = None,
                   extra: Optional[dict] = None) -> None:
    manifest = {
        "command": args.command,
        "inputs": list(inputs),
        "config": config.snapshot() if config else None,
        "rating_policy": policy.snapshot() if policy else None,
        "seed": args.seed,
        "tool_version": __version__,
        "input_sha256": _sha256(inputs),
    }
    if extra:
        manifest.update(extra)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _emit(args, text: str, inputs, **manifest_kw) -> None:
    """Print ``text`` or write it to ``--out``; the manifest goes next to the output."""
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        write_manifest(out + ".manifest.json", args, inputs, **manifest_kw)
    else:
        sys.stdout.write(text)
    if getattr(args, "manifest", None):
        write_manifest(args.manifest, args, inputs, **manifest_kw)


def _write_bytes(args, data: bytes, inputs, **manifest_kw) -> None:
    with open(args.out, "wb") as fh:
        fh.write(data)
    write_manifest(args.out + ".manifest.json", args, inputs, **manifest_kw)


def _config(args) -> Config:
    if args.method in ("thvg", "eq1") and args.tau is None:
        raise UsageError(f"--tau is required with --method {args.method}")
    if args.tau_unit == "seconds" and args.window is None:
        raise UsageError("--tau-unit seconds requires --window")
    try:
        return Config(
            tau=args.tau if args.tau is not None else 1,
            method=args.method,
            tau_unit=args.tau_unit,
            drop_self_loops=not getattr(args, "keep_self_loops", False),
            time_window_seconds=args.window,
        )
    except ConfigError as e:
        raise UsageError(str(e)) from None


def _policy(args) -> RatingPolicy:
    try:
        return RatingPolicy(args.ratings, args.volume_weight, args.rate_weight)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _series(args, policy: RatingPolicy):
    with open(args.input, "rb") as fh:
        raw = parse_publications(fh.read(), args.format, policy)
    return normalize_series(raw)


def _message_graph(path: str) -> MessageGraph:
    g = read_graph(path)
    if not isinstance(g, MessageGraph):
        raise ParseError(f"{path}: expected a message graph (kind 'message')")
    return g


def _source_graph(path: str) -> SourceGraph:
    g = read_graph(path)
    if not isinstance(g, SourceGraph):
        raise ParseError(f"{path}: expected a source graph (kind 'source')")
    return g


def cmd_build(args) -> None:
    config = _config(args)
    policy = _policy(args)
    graph = build_graph(_series(args, policy), config)
    log.info("built %s graph: %d nodes, %d edges", config.method.value, graph.n, len(graph.edges))
    _write_bytes(args, export_graph(graph, args.export), [args.input], config=config, policy=policy)


def cmd_compact(args) -> None:
    config = Config(drop_self_loops=not args.keep_self_loops)
    graph = compact(_message_graph(args.input), config)
    _write_bytes(args, export_graph(graph, args.export), [args.input], config=config)


def metrics_text(m) -> str:
    hist = " ".join(f"{k}:{c}" for k, c in m.degree_histogram.items())
    lines = [
        f"n {m.n}",
        f"v {m.v}",
        f"directed_edges {m.directed_edge_count}",
        f"density {fmt_real(m.density)}",
        f"average_degree {fmt_real(m.average_degree)}",
        f"diameter {'NA' if m.diameter is None else m.diameter}",
        f"components {m.component_count}",
        f"degree_histogram {hist}",
    ]
    return "\n".join(lines) + "\n"


def cmd_metrics(args) -> None:
    m = network_metrics(read_graph(args.input), with_diameter=not args.no_diameter)
    _emit(args, metrics_text(m), [args.input])
    if args.plot:
        from .plotting import plot_degree_histogram

        plot_degree_histogram(m.degree_histogram, args.plot)


def cmd_sweep(args) -> None:
    config = _config(args)
    policy = _policy(args)
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
        spec = SweepSpec(tuple(sizes), args.sampling, args.seed, args.repeats)
    except ValueError as e:
        raise UsageError(f"--sizes: {e}") from None
    series = _series(args, policy)
    points = density_sweep(series, config, spec, workers=args.workers)
    text = "n,D\n" + "".join(f"{n},{fmt_real(d)}\n" for n, d in points)
    fit = None
    if args.fit:
        if len(points) < 2:
            raise UsageError("--fit needs at least two sizes")
        fit = fit_log(points)
    _emit(args, text, [args.input], config=config, policy=policy,
          extra={"sweep": {"sizes": list(spec.sizes), "sampling": spec.sampling.value,
                           "repeats": spec.repeats}})
    if fit is not None:
        sys.stdout.write(f"a {fmt_real(fit.a)}\nb {fmt_real(fit.b)}\nr_squared {fmt_real(fit.r_squared)}\n")
    if args.plot:
        from .plotting import plot_density_sweep

        plot_density_sweep(points, args.plot, fit=fit)


def cmd_eval(args) -> None:
    with open(args.predicted, encoding="utf-8") as fh:
        predicted = read_edge_csv(fh.read(), allow_self=args.allow_self)
    with open(args.gold, encoding="utf-8") as fh:
        gold = read_edge_csv(fh.read(), allow_self=args.allow_self)
    r = evaluate(predicted, gold, directed=not args.undirected)
    text = (f"tp {r.tp} fp {r.fp} fn {r.fn}\n"
            f"precision {fmt_real(r.precision)} recall {fmt_real(r.recall)} "
            f"f_measure {fmt_real(r.f_measure)}\n")
    _emit(args, text, [args.predicted, args.gold])


def cmd_rank(args) -> None:
    graph = _source_graph(args.input)
    rows = ["rank,source_id,score,in_weight,in_degree,out_degree,earliest_timestamp,rating"]
    for k, r in enumerate(rank_sources(graph)[: args.top], start=1):
        ts = "" if r.earliest_timestamp is None else r.earliest_timestamp
        rating = "" if r.rating is None else fmt_real(r.rating)
        rows.append(f"{k},{r.source_id},{fmt_real(r.score)},{r.in_weight},{r.in_degree},"
                    f"{r.out_degree},{ts},{rating}")
    text = "\n".join(rows) + "\n"
    if args.primary:
        picks = infer_primary(graph, args.primary)
        text += "# primary-source candidates (heuristic: in-weight desc, out-degree asc, earliest)\n"
        text += "".join(f"primary {k},{s}\n" for k, s in enumerate(picks, start=1))
    _emit(args, text, [args.input])


def cmd_export(args) -> None:
    _write_bytes(args, export_graph(read_graph(args.input), args.to), [args.input])


def _add_build_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="publication file")
    p.add_argument("--format", choices=["csv", "jsonl"], default="csv")
    p.add_argument("--method", choices=["hvg", "thvg", "eq1"], required=True)
    p.add_argument("--tau", type=int, help="look-back window (required for thvg and eq1)")
    p.add_argument("--tau-unit", choices=["index", "seconds"], default="index")
    p.add_argument("--window", type=int, help="window in seconds for --tau-unit seconds")
    p.add_argument("--ratings", choices=["provided", "estimate"], default="provided")
    p.add_argument("--volume-weight", type=float, default=1.0)
    p.add_argument("--rate-weight", type=float, default=1.0)


def _default_seed() -> int:
    try:
        return int(os.environ.get("THVG_SEED", "0"))
    except ValueError:
        return 0


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=_default_seed(),
                        help="random seed (default: $THVG_SEED or 0)")
    common.add_argument("--manifest", help="also write a run manifest here")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="thvg", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"thvg {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    exports = ["adj_json", "edge_csv", "dot", "graphml"]

    p = sub.add_parser("build", parents=[common], help="build a message-level graph")
    _add_build_flags(p)
    p.add_argument("--export", choices=exports, default="adj_json")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("compact", parents=[common], help="merge messages into a source network")
    p.add_argument("--input", required=True, help="message graph (adj_json)")
    p.add_argument("--keep-self-loops", action="store_true")
    p.add_argument("--export", choices=exports, default="adj_json")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compact)

    p = sub.add_parser("metrics", parents=[common], help="density, degree, diameter")
    p.add_argument("--input", required=True, help="graph file (adj_json, or edge_csv by .csv suffix)")
    p.add_argument("--no-diameter", action="store_true")
    p.add_argument("--plot", help="write a degree-distribution figure")
    p.add_argument("--out")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("sweep", parents=[common], help="density against source count")
    _add_build_flags(p)
    p.add_argument("--sizes", required=True, help="comma-separated source counts")
    p.add_argument("--sampling", choices=["prefix", "random"], default="prefix")
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--fit", action="store_true", help="fit D = a ln(n) + b")
    p.add_argument("--plot", help="write the sweep figure")
    p.add_argument("--out", help="CSV output (default: stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("eval", parents=[common], help="precision / recall / F-measure")
    p.add_argument("--predicted", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--undirected", action="store_true")
    p.add_argument("--allow-self", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("rank", parents=[common], help="rank sources by incoming weight")
    p.add_argument("--input", required=True, help="source graph")
    p.add_argument("--top", type=int, default=10)
    p.add_argument("--primary", type=int, default=0, metavar="K",
                   help="also nominate K primary-source candidates")
    p.add_argument("--out")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("export", parents=[common], help="convert a graph file")
    p.add_argument("--input", required=True)
    p.add_argument("--to", choices=exports, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except (UsageError, SweepError) as e:
        print(f"thvg {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as e:
        print(f"thvg {args.command}: error: {e.filename}: no such file", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, ValidationError, OSError) as e:
        print(f"thvg {args.command}: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as e:  # noqa: BLE001
        log.exception("internal failure")
        print(f"thvg {args.command}: internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    return 0


if __name__ == "__main__":
    sys.exit(main())
