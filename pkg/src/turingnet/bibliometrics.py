"""Scholar-level indicators and their per-TN / per-country aggregations."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .ingest import Corpus, ScholarTable
from .tn import TnResult

log = logging.getLogger(__name__)


def h_index(citations) -> int:
    """Largest h such that h papers have at least h citations each."""
    ranked = sorted(citations, reverse=True)
    h = 0
    for i, c in enumerate(ranked, 1):
        if c < i:
            break
        h = i
    return h


@dataclass(frozen=True, eq=False)
class ScholarMetrics:
    """Columnar indicators indexed by scholar_id. ``h_index`` is NaN where
    per-paper citation counts are unavailable."""

    n_papers: np.ndarray
    n_citations: np.ndarray
    h_index: np.ndarray

    def __len__(self):
        return len(self.n_papers)

    def indicator(self, name: str) -> np.ndarray:
        if name not in ("n_papers", "n_citations", "h_index"):
            raise ValidationError(f"unknown indicator {name!r}")
        return np.asarray(getattr(self, name), dtype=float)


def scholar_metrics(corpus: Corpus) -> ScholarMetrics:
    n = len(corpus.scholars)
    per_paper: list[list[int]] = [[] for _ in range(n)]
    for p in corpus.papers:
        for a in p.authors:
            per_paper[a].append(p.citation_count)
    return ScholarMetrics(
        n_papers=np.array([len(c) for c in per_paper], dtype=np.int64),
        n_citations=np.array([sum(c) for c in per_paper], dtype=np.int64),
        h_index=np.array([h_index(c) for c in per_paper], dtype=float),
    )


def metrics_from_table(table: ScholarTable, h_values) -> ScholarMetrics:
    """Metrics from a stored scholar table; missing h-index entries become NaN."""
    return ScholarMetrics(
        n_papers=np.array(table.column("n_papers"), dtype=np.int64),
        n_citations=np.array(table.column("n_citations"), dtype=np.int64),
        h_index=np.array([np.nan if h is None else h for h in h_values], dtype=float),
    )


@dataclass(frozen=True)
class TnMetricsRow:
    tn: int
    n_scholars: int
    mean_papers: float
    mean_citations: float
    mean_h_index: float | None


def metrics_by_tn(metrics: ScholarMetrics, tn_result: TnResult) -> list[TnMetricsRow]:
    """Arithmetic means per TN bucket over reachable scholars; empty buckets omitted."""
    if len(metrics) != len(tn_result.tn):
        raise ValidationError("metrics and TN cover different node sets")
    rows = []
    for t in sorted(tn_result.histogram):
        m = tn_result.reachable & (tn_result.tn == t)
        h = metrics.h_index[m]
        h = h[~np.isnan(h)]
        rows.append(TnMetricsRow(
            t, int(m.sum()),
            float(metrics.n_papers[m].mean()),
            float(metrics.n_citations[m].mean()),
            float(h.mean()) if len(h) else None,
        ))
    return rows


@dataclass(frozen=True)
class CountryStats:
    country: str
    n_scholars: int
    mean_papers: float
    mean_citations: float
    mean_h_index: float | None
    mean_tn: float | None
    """Over the country's reachable scholars only."""
    n_reachable: int = 0


def _by_country(table: ScholarTable):
    groups: dict[str, list[int]] = {}
    for p in table:
        if p.country:
            groups.setdefault(p.country, []).append(p.scholar_id)
    return groups


def country_table(
    table: ScholarTable, metrics: ScholarMetrics, tn_result: TnResult, top_k: int = 11
) -> list[CountryStats]:
    """Per-country means for geocoded scholars, largest countries first
    (ties by name), truncated to ``top_k`` rows."""
    if top_k < 1:
        raise ValidationError("top_k must be >= 1")
    groups = _by_country(table)
    if not groups:
        log.warning("no geocoded scholars; country table is empty")
        return []
    rows = []
    for country, ids in groups.items():
        idx = np.array(ids)
        h = metrics.h_index[idx]
        h = h[~np.isnan(h)]
        reach = idx[tn_result.reachable[idx]]
        rows.append(CountryStats(
            country, len(idx),
            float(metrics.n_papers[idx].mean()),
            float(metrics.n_citations[idx].mean()),
            float(h.mean()) if len(h) else None,
            float(tn_result.tn[reach].mean()) if len(reach) else None,
            len(reach),
        ))
    rows.sort(key=lambda r: (-r.n_scholars, r.country))
    return rows[:top_k]


@dataclass(frozen=True)
class GeoRow:
    kind: str
    """"country" or "location"."""
    name: str
    country: str
    latitude: float | None
    longitude: float | None
    n_scholars: int
    n_reachable: int
    mean_tn: float | None


def geographic_distribution(table: ScholarTable, tn_result: TnResult) -> list[GeoRow]:
    """Mean TN per country, then per distinct institution location.

    Country rows carry the centroid of their scholars' coordinates.
    """

    def summarise(ids):
        idx = np.array(ids)
        reach = idx[tn_result.reachable[idx]]
        return len(idx), len(reach), float(tn_result.tn[reach].mean()) if len(reach) else None

    rows = []
    for country, ids in sorted(_by_country(table).items()):
        lat = float(np.mean([table[i].latitude for i in ids]))
        lon = float(np.mean([table[i].longitude for i in ids]))
        rows.append(GeoRow("country", country, country, lat, lon, *summarise(ids)))
    places: dict[tuple, list[int]] = {}
    for p in table:
        if p.country:
            places.setdefault((p.country, p.latitude, p.longitude), []).append(p.scholar_id)
    for (country, lat, lon), ids in sorted(places.items()):
        name = min(table[i].institution or "" for i in ids)
        rows.append(GeoRow("location", name, country, lat, lon, *summarise(ids)))
    return rows
