"""Command-line interface.

Exit codes: 0 success, 2 I/O, 3 parse, 4 validation, 5 numeric failure.
Set TURINGNET_LOG_LEVEL (e.g. DEBUG, INFO) to change log verbosity.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import __version__, centrality, reports
from .bibliometrics import (
    country_table,
    geographic_distribution,
    metrics_by_tn,
    metrics_from_table,
    scholar_metrics,
)
from .config import INDICATORS, build_config, read_config_file
from .errors import InputError, ParseError, TuringNetError, ValidationError
from .graph import build_graph, load_graph, save_graph, write_edge_list
from .ingest import (
    GeocodeTable,
    SkipReport,
    attach_affiliations,
    load_laureates,
    open_corpus,
    read_affiliations,
    read_corpus,
    read_name_list,
    read_scholar_table,
    resolve_authors,
    write_corpus,
    write_scholar_table,
)
from .pipeline import run_pipeline
from .stats import correlate_tn
from .tn import compute_tn, null_model, tn_distribution

log = logging.getLogger("turingnet")

LOG_ENV = "TURINGNET_LOG_LEVEL"


def _csv_list(s):
    return [x.strip() for x in s.split(",") if x.strip()]


def _out_dir(path):
    p = Path(path)
    try:
        p.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise InputError(f"cannot create {p}: {exc}") from exc
    return p


# --- subcommands -------------------------------------------------------------


def cmd_ingest(args):
    report = SkipReport()
    errors: list = []
    records = []
    for path in args.inputs:
        if not Path(path).is_file():
            raise InputError(f"input file not found: {path}")
        records.extend(open_corpus(path, args.format, report, errors))
    if errors:
        lines = "\n".join(f"  {e}" for e in errors[:10])
        raise ParseError(f"{len(errors)} unparseable record(s); first ones:\n{lines}")
    out = _out_dir(args.out_dir)
    write_corpus(records, out / "corpus.jsonl")
    corpus = resolve_authors(records)
    table = corpus.scholars
    if args.affiliations:
        table, aff = attach_affiliations(
            table, read_affiliations(args.affiliations), GeocodeTable.from_csv(args.geocode)
        )
        log.info("affiliations: %s", aff)
    if args.laureates:
        _, table = load_laureates(read_name_list(args.laureates), table)
    metrics = scholar_metrics(corpus)
    write_scholar_table(table, out / "scholars.csv", metrics.h_index)
    reports.write_json(out / "skip_report.json", report.as_dict())
    print(f"{len(records)} records, {len(table)} scholars, {report.skipped} skipped -> {out}")


def cmd_graph_build(args):
    corpus = read_corpus(args.corpus)
    g = build_graph(corpus.author_lists(), len(corpus.scholars), args.clique_guard)
    save_graph(g, args.out)
    if args.edge_list:
        write_edge_list(g, args.edge_list)
    print(f"{g.n_nodes} nodes, {g.n_edges} edges -> {args.out}")


def _seeds(args, n_nodes):
    table, _ = read_scholar_table(args.scholars)
    if len(table) != n_nodes:
        raise ValidationError(
            f"scholar table has {len(table)} rows but the graph has {n_nodes} nodes"
        )
    seeds, table = load_laureates(read_name_list(args.laureates), table)
    return seeds, table


def cmd_tn_compute(args):
    g = load_graph(args.graph)
    seeds, table = _seeds(args, g.n_nodes)
    result = compute_tn(g, seeds)
    reports.write_tn(args.out, result, table)
    summary = reports.tn_summary(tn_distribution(result))
    if args.summary:
        reports.write_json(args.summary, summary)
    print(f"modal TN {summary['modal_tn']}, share in [2,5] {summary['band_share']}, "
          f"unreachable {summary['n_unreachable']}")


def cmd_tn_null_model(args):
    g = load_graph(args.graph)
    exclude = None
    if args.exclude_seeds:
        if not (args.scholars and args.laureates):
            raise ValidationError("--exclude-seeds needs --scholars and --laureates")
        exclude, _ = _seeds(args, g.n_nodes)
    result = null_model(g, args.k, args.trials, args.seed, exclude, args.threads)
    reports.write_null_model(args.out, result)
    if args.summary:
        reports.write_null_summary(args.summary, result)
    print(f"{result.trials} trials of k={result.k} -> {args.out}")


def cmd_centrality(args):
    g = load_graph(args.graph)
    out = _out_dir(args.out_dir)
    scores = {}
    for m in args.measures:
        if m not in centrality.MEASURES:
            raise ValidationError(f"unknown measure {m!r}; expected {centrality.MEASURES}")
    for m in args.measures:
        scores[m] = centrality.compute(
            g, m, samples=args.samples, rng_seed=args.seed, tolerance=args.tolerance,
            max_iters=args.max_iters, threads=args.threads,
        )
        reports.write_centrality(out / f"centrality_{m}.csv", scores[m])
    reports.write_json(out / "centrality_params.json", reports.centrality_params(scores))
    print(f"{', '.join(scores)} -> {out}")


def cmd_stats_correlate(args):
    tn = reports.read_tn(args.tn)
    table, h = read_scholar_table(args.scholars)
    metrics = metrics_from_table(table, h)
    for name in args.indicators:
        if name not in INDICATORS:
            raise ValidationError(f"unknown indicator {name!r}; expected {INDICATORS}")
    rows = correlate_tn(tn, {n: metrics.indicator(n) for n in args.indicators},
                        exclude_zero=args.exclude_zero)
    reports.write_table3(args.out, rows)
    for r in rows:
        print(f"{r.method:9s} {r.indicator:12s} {r.coefficient:+.3f}{r.stars}")


def cmd_report(args):
    tn = reports.read_tn(args.tn)
    table, h = read_scholar_table(args.scholars)
    metrics = metrics_from_table(table, h)
    out = _out_dir(args.out_dir)
    reports.write_fig2(out / "fig2_buckets.csv", metrics_by_tn(metrics, tn))
    reports.write_table2(out / "table2_countries.csv",
                         country_table(table, metrics, tn, args.top_k))
    reports.write_geography(out / "fig1b_geography.csv", geographic_distribution(table, tn))
    if args.centrality_dir:
        fig3 = []
        for name in centrality.MEASURES:
            path = Path(args.centrality_dir) / f"centrality_{name}.csv"
            if not path.is_file():
                continue
            m, vals, norm = reports.read_centrality(path)
            raw = centrality.centrality_by_tn(vals, tn, args.stat)
            nrm = centrality.centrality_by_tn(norm, tn, args.stat)
            fig3.extend((m, args.stat, a, b) for a, b in zip(raw, nrm))
        reports.write_fig3(out / "fig3_centrality_by_tn.csv", fig3)
    print(f"reports -> {out}")


_PIPELINE_OVERRIDES = {
    "inputs": "inputs", "format": "format", "laureates": "laureates",
    "geocode": "geocode", "affiliations": "affiliations", "out_dir": "output_dir",
    "clique_guard": "clique_guard", "khop_radius": "khop_radius", "k": "null_k",
    "trials": "null_trials", "seed": "rng_seed", "exclude_seeds": "exclude_seeds",
    "measures": "measures", "samples": "betweenness_samples", "tolerance": "tolerance",
    "max_iters": "max_iters", "indicators": "indicators", "exclude_zero": "exclude_zero",
    "stat": "fig3_stat", "top_k": "top_k", "threads": "threads",
}


def cmd_pipeline(args):
    file_values = read_config_file(args.config) if args.config else {}
    overrides = {}
    for attr, key in _PIPELINE_OVERRIDES.items():
        v = getattr(args, attr, None)
        if v is None or v is False:
            continue
        overrides[key] = ",".join(v) if isinstance(v, list) else v
    cfg = build_config(file_values, overrides)
    manifest = run_pipeline(cfg)
    print(f"report bundle -> {cfg.output_dir} (config {manifest['config_hash'][:12]})")


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="turingnet", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ingest", help="parse a corpus into corpus.jsonl + scholars.csv")
    s.add_argument("--format", choices=["jsonl", "dblp"], required=True)
    s.add_argument("--in", dest="inputs", nargs="+", required=True)
    s.add_argument("--out-dir", required=True)
    s.add_argument("--affiliations")
    s.add_argument("--geocode")
    s.add_argument("--laureates")
    s.set_defaults(func=cmd_ingest)

    graph = sub.add_parser("graph", help="graph cache operations")
    gsub = graph.add_subparsers(dest="graph_command", required=True)
    s = gsub.add_parser("build", help="build the coauthorship graph cache")
    s.add_argument("--corpus", required=True, help="normalized corpus.jsonl from ingest")
    s.add_argument("--out", required=True)
    s.add_argument("--edge-list")
    s.add_argument("--clique-guard", type=int, default=500)
    s.set_defaults(func=cmd_graph_build)

    tn = sub.add_parser("tn", help="Turing Number")
    tsub = tn.add_subparsers(dest="tn_command", required=True)
    s = tsub.add_parser("compute")
    s.add_argument("--graph", required=True)
    s.add_argument("--scholars", required=True)
    s.add_argument("--laureates", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--summary")
    s.set_defaults(func=cmd_tn_compute)
    s = tsub.add_parser("null-model")
    s.add_argument("--graph", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--exclude-seeds", action="store_true")
    s.add_argument("--scholars")
    s.add_argument("--laureates")
    s.add_argument("--out", required=True)
    s.add_argument("--summary")
    s.set_defaults(func=cmd_tn_null_model)

    s = sub.add_parser("centrality", help="centrality measures")
    s.add_argument("--graph", required=True)
    s.add_argument("--measures", type=_csv_list, default=list(centrality.MEASURES))
    s.add_argument("--samples", type=int, help="betweenness pivots (default exact)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--tolerance", type=float, default=centrality.DEFAULT_TOLERANCE)
    s.add_argument("--max-iters", type=int, default=centrality.DEFAULT_MAX_ITERS)
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--out-dir", required=True)
    s.set_defaults(func=cmd_centrality)

    st = sub.add_parser("stats", help="correlation analysis")
    ssub = st.add_subparsers(dest="stats_command", required=True)
    s = ssub.add_parser("correlate")
    s.add_argument("--tn", required=True)
    s.add_argument("--scholars", required=True)
    s.add_argument("--indicators", type=_csv_list, default=list(INDICATORS))
    s.add_argument("--exclude-zero", action="store_true")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_stats_correlate)

    s = sub.add_parser("report", help="per-TN and per-country tables")
    s.add_argument("--tn", required=True)
    s.add_argument("--scholars", required=True)
    s.add_argument("--centrality-dir")
    s.add_argument("--stat", choices=["mean", "median"], default="mean")
    s.add_argument("--top-k", type=int, default=11)
    s.add_argument("--out-dir", required=True)
    s.set_defaults(func=cmd_report)

    s = sub.add_parser("pipeline", help="run everything from a config file")
    s.add_argument("--config")
    s.add_argument("--in", dest="inputs", nargs="+")
    s.add_argument("--format", choices=["jsonl", "dblp"])
    s.add_argument("--laureates")
    s.add_argument("--geocode")
    s.add_argument("--affiliations")
    s.add_argument("--out-dir")
    s.add_argument("--clique-guard", type=int)
    s.add_argument("--khop-radius", type=int,
                   help="restrict to scholars within this many hops of a laureate")
    s.add_argument("--k", type=int, help="null-model seeds per trial (default: #laureates)")
    s.add_argument("--trials", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--exclude-seeds", action="store_true", default=None)
    s.add_argument("--measures", type=_csv_list)
    s.add_argument("--samples", type=int)
    s.add_argument("--tolerance", type=float)
    s.add_argument("--max-iters", type=int)
    s.add_argument("--indicators", type=_csv_list)
    s.add_argument("--exclude-zero", action="store_true", default=None)
    s.add_argument("--stat", choices=["mean", "median"])
    s.add_argument("--top-k", type=int)
    s.add_argument("--threads", type=int)
    s.set_defaults(func=cmd_pipeline)
    return p


def main(argv=None) -> int:
    logging.basicConfig(
        level=os.environ.get(LOG_ENV, "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except TuringNetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return InputError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
