"""CSV/JSON writers (and the readers the CLI needs to chain stages).

Reals are written with 6 significant digits so files are stable across
platforms; missing values are empty cells.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from pathlib import Path

import numpy as np

from .bibliometrics import CountryStats, GeoRow, TnMetricsRow
from .centrality import CentralityScores, TnBucket
from .errors import InputError, ValidationError
from .ingest import ScholarTable
from .stats import CorrelationResult
from .tn import NullModelResult, TnDistribution, TnResult


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return ""
    out = f"{x:.6g}"
    return "0" if out == "-0" else out


def round6(x):
    """Round a float to 6 significant digits for JSON output."""
    return None if x is None else float(fmt(x))


def _write(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(v) if not isinstance(v, str) else v for v in r])


def write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, ensure_ascii=False)
        fh.write("\n")


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


# --- TN ----------------------------------------------------------------------


def write_tn(path, result: TnResult, table: ScholarTable):
    _write(path, ["scholar_id", "author_key", "tn", "reachable"], (
        (i, table[i].author_key, int(result.tn[i]) if result.reachable[i] else None,
         bool(result.reachable[i]))
        for i in range(len(result.tn))
    ))


def read_tn(path) -> TnResult:
    tn, reach, seeds = [], [], set()
    try:
        fh = open(path, encoding="utf-8", newline="")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    with fh:
        for i, r in enumerate(csv.DictReader(fh)):
            if int(r["scholar_id"]) != i:
                raise ValidationError(f"{path}: scholar ids must be contiguous")
            ok = r["reachable"] == "1"
            t = int(r["tn"]) if ok else -1
            tn.append(t)
            reach.append(ok)
            if ok and t == 0:
                seeds.add(i)
    return TnResult(np.array(tn, dtype=np.int64), np.array(reach, dtype=bool),
                    frozenset(seeds))


def tn_summary(dist: TnDistribution) -> dict:
    d = dist.as_dict()
    d["band_share"] = round6(d["band_share"])
    return d


def write_null_model(path, result: NullModelResult):
    _write(path, ["trial", "tn_value", "count"], (
        (t, v, int(c))
        for t in range(result.trials)
        for v, c in enumerate(result.counts[t])
    ))


def write_null_summary(path, result: NullModelResult, real: TnResult | None = None):
    """Per-TN mean/std of counts across trials, beside the real distribution."""
    real_hist = real.histogram if real is not None else {}
    width = max(result.counts.shape[1], max(real_hist, default=-1) + 1)
    mean = np.zeros(width)
    std = np.zeros(width)
    mean[: result.counts.shape[1]] = result.mean_counts
    std[: result.counts.shape[1]] = result.std_counts
    _write(path, ["tn_value", "mean_count", "std_count", "real_count"], (
        (v, mean[v], std[v], real_hist.get(v, 0) if real is not None else None)
        for v in range(width)
    ))


# --- centrality --------------------------------------------------------------


def write_centrality(path, scores: CentralityScores):
    m = scores.measure.value
    _write(path, ["scholar_id", "measure", "value", "normalized_value"], (
        (i, m, v, nv) for i, (v, nv) in enumerate(zip(scores.values, scores.normalized_values))
    ))


def read_centrality(path) -> tuple[str, np.ndarray, np.ndarray]:
    vals, norm, measure = [], [], None
    with open(path, encoding="utf-8", newline="") as fh:
        for r in csv.DictReader(fh):
            measure = r["measure"]
            vals.append(float(r["value"]))
            norm.append(float(r["normalized_value"]))
    return measure, np.array(vals), np.array(norm)


def centrality_params(scores: dict) -> dict:
    out = {}
    for name, s in scores.items():
        out[name] = {k: round6(v) if isinstance(v, float) else v for k, v in s.params.items()}
    return out


def write_fig3(path, rows: list[tuple[str, str, TnBucket, TnBucket]]):
    """rows: (measure, statistic, bucket over raw values, bucket over normalized)."""
    _write(path, ["measure", "statistic", "tn", "n_nodes", "n_positive", "n_zero",
                  "ln_value", "ln_normalized_value"], (
        (m, stat, b.tn, b.n_nodes, b.n_positive, b.n_zero, b.ln_stat, bn.ln_stat)
        for m, stat, b, bn in rows
    ))


# --- bibliometrics / stats ---------------------------------------------------


def write_fig2(path, rows: list[TnMetricsRow]):
    _write(path, ["tn", "n_scholars", "mean_papers", "mean_citations", "mean_h_index"], (
        (r.tn, r.n_scholars, r.mean_papers, r.mean_citations, r.mean_h_index) for r in rows
    ))


def write_table2(path, rows: list[CountryStats]):
    _write(path, ["country", "scholars", "papers", "citations", "h_index", "tn"], (
        (r.country, r.n_scholars, r.mean_papers, r.mean_citations, r.mean_h_index, r.mean_tn)
        for r in rows
    ))


def write_geography(path, rows: list[GeoRow]):
    _write(path, ["kind", "name", "country", "lat", "lon", "n_scholars", "n_reachable",
                  "mean_tn"], (
        (r.kind, r.name, r.country, r.latitude, r.longitude, r.n_scholars, r.n_reachable,
         r.mean_tn)
        for r in rows
    ))


def write_table3(path, rows: list[CorrelationResult]):
    _write(path, ["method", "indicator", "coefficient", "p_value", "stars", "n"], (
        (r.method, r.indicator, r.coefficient, r.p_value, r.stars, r.n) for r in rows
    ))
