"""End-to-end run: ingest -> graph -> TN -> null model -> centrality -> bibliometrics -> stats."""

from __future__ import annotations

import dataclasses
import hashlib
import logging
import shutil
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__, centrality, reports
from .bibliometrics import (
    ScholarMetrics,
    country_table,
    geographic_distribution,
    metrics_by_tn,
    scholar_metrics,
)
from .config import RunConfig
from .errors import InputError, ParseError, ValidationError
from .graph import CollabGraph, build_graph, khop_nodes, subgraph
from .ingest import (
    Corpus,
    GeocodeTable,
    ScholarTable,
    SkipReport,
    attach_affiliations,
    load_laureates,
    open_corpus,
    read_affiliations,
    read_name_list,
    resolve_authors,
)
from .stats import correlate_tn
from .tn import compute_tn, null_model, tn_distribution

log = logging.getLogger(__name__)


@dataclass
class Network:
    """Everything downstream stages need, aligned on scholar_id."""

    table: ScholarTable
    metrics: ScholarMetrics
    graph: CollabGraph
    seeds: frozenset


def ingest(cfg: RunConfig) -> tuple[Corpus, SkipReport]:
    report = SkipReport()
    errors: list = []
    records = []
    for path in cfg.inputs:
        records.extend(open_corpus(path, cfg.format, report, errors))
    if errors:
        shown = "; ".join(str(e) for e in errors[:10])
        raise ParseError(f"{len(errors)} bad record(s): {shown}")
    return resolve_authors(records), report


def _restrict(net: Network, keep: np.ndarray) -> Network:
    """Restrict to ``keep`` (sorted old ids), renumbering scholars densely."""
    g, old = subgraph(net.graph, keep)
    remap = {int(o): i for i, o in enumerate(old)}
    table = ScholarTable(
        dataclasses.replace(net.table[int(o)], scholar_id=i) for i, o in enumerate(old)
    )
    metrics = ScholarMetrics(net.metrics.n_papers[old], net.metrics.n_citations[old],
                             net.metrics.h_index[old])
    return Network(table, metrics, g, frozenset(remap[s] for s in net.seeds))


def build_network(cfg: RunConfig, corpus: Corpus) -> Network:
    table = corpus.scholars
    if cfg.affiliations:
        geo = GeocodeTable.from_csv(cfg.geocode)
        table, aff = attach_affiliations(table, read_affiliations(cfg.affiliations), geo)
        log.info("affiliations: %s", aff)
    seeds, table = load_laureates(read_name_list(cfg.laureates), table)
    graph = build_graph(corpus.author_lists(), len(table), cfg.clique_guard)
    net = Network(table, scholar_metrics(corpus), graph, seeds)
    if cfg.khop_radius is not None:
        net = _restrict(net, khop_nodes(graph, sorted(seeds), cfg.khop_radius))
    return net


def run_pipeline(cfg: RunConfig) -> dict:
    """Write the full report bundle to ``cfg.output_dir`` and return the manifest.

    Outputs are staged in a temporary sibling directory and moved into place
    only when every stage succeeded.
    """
    out = Path(cfg.output_dir)
    if out.exists() and any(out.iterdir()) and not (out / "manifest.json").exists():
        raise ValidationError(f"{out} exists, is not empty and holds no previous bundle")
    out.parent.mkdir(parents=True, exist_ok=True)
    stage = Path(tempfile.mkdtemp(prefix=f".{out.name}.", dir=out.parent))
    try:
        manifest = _run(cfg, stage)
        if out.exists():
            shutil.rmtree(out)
        stage.rename(out)
    except BaseException:
        shutil.rmtree(stage, ignore_errors=True)
        raise
    return manifest


def _run(cfg: RunConfig, d: Path) -> dict:
    t0 = time.perf_counter()
    corpus, skip = ingest(cfg)
    log.info("ingested %d papers, %d scholars", len(corpus.papers), len(corpus.scholars))
    net = build_network(cfg, corpus)
    table, g = net.table, net.graph
    log.info("graph: %d nodes, %d edges", g.n_nodes, g.n_edges)

    tn = compute_tn(g, net.seeds)
    reports.write_tn(d / "tn.csv", tn, table)
    reports.write_json(d / "tn_summary.json", reports.tn_summary(tn_distribution(tn)))

    k = cfg.null_k or len(net.seeds)
    nm = null_model(g, k, cfg.null_trials, cfg.rng_seed,
                    exclude=net.seeds if cfg.exclude_seeds else None, threads=cfg.threads)
    reports.write_null_model(d / "null_model.csv", nm)
    reports.write_null_summary(d / "null_model_summary.csv", nm, tn)

    scores = {}
    for m in cfg.measures:
        scores[m] = centrality.compute(
            g, m, samples=cfg.betweenness_samples, rng_seed=cfg.rng_seed,
            tolerance=cfg.tolerance, max_iters=cfg.max_iters, threads=cfg.threads,
        )
        reports.write_centrality(d / f"centrality_{m}.csv", scores[m])
    reports.write_json(d / "centrality_params.json", reports.centrality_params(scores))
    fig3 = []
    for m, s in scores.items():
        raw = centrality.centrality_by_tn(s.values, tn, cfg.fig3_stat)
        norm = centrality.centrality_by_tn(s.normalized_values, tn, cfg.fig3_stat)
        fig3.extend((m, cfg.fig3_stat, a, b) for a, b in zip(raw, norm))
    reports.write_fig3(d / "fig3_centrality_by_tn.csv", fig3)

    reports.write_fig2(d / "fig2_buckets.csv", metrics_by_tn(net.metrics, tn))
    reports.write_table2(d / "table2_countries.csv",
                         country_table(table, net.metrics, tn, cfg.top_k))
    reports.write_geography(d / "fig1b_geography.csv", geographic_distribution(table, tn))

    indicators = {name: net.metrics.indicator(name) for name in cfg.indicators}
    reports.write_table3(d / "table3_correlations.csv",
                         correlate_tn(tn, indicators, exclude_zero=cfg.exclude_zero))

    manifest = {
        "tool": "turingnet",
        "tool_version": __version__,
        "config_hash": cfg.config_hash(),
        "corpus_hash": _corpus_hash(cfg.inputs),
        "rng_seed": cfg.rng_seed,
        "counts": {
            "papers": len(corpus.papers),
            "scholars": len(table),
            "edges": g.n_edges,
            "laureates": len(net.seeds),
        },
        "ingest": skip.as_dict(),
        "outputs": {p.name: reports.sha256_file(p) for p in sorted(d.iterdir())},
    }
    reports.write_json(d / "manifest.json", manifest)
    log.info("pipeline finished in %.2fs", time.perf_counter() - t0)
    return manifest


def _corpus_hash(paths) -> str:
    h = hashlib.sha256()
    for p in paths:
        try:
            h.update(reports.sha256_file(p).encode())
        except OSError as exc:
            raise InputError(str(exc)) from exc
    return h.hexdigest()
