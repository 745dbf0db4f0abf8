"""Random graphs and the synthetic laureate-centred corpus used by tests and scripts."""

from __future__ import annotations

import csv
import itertools
from pathlib import Path

import numpy as np

from .graph import CollabGraph, from_edges
from .ingest import PaperRecord, write_corpus


def gnp_graph(n: int, p: float, rng: np.random.Generator) -> CollabGraph:
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(len(iu)) < p
    return from_edges(n, np.column_stack([iu[keep], ju[keep]]))


def connected_graph(n: int, p: float, rng: np.random.Generator) -> CollabGraph:
    """G(n, p) plus a random recursive spanning tree, so always connected."""
    parents = [int(rng.integers(0, v)) for v in range(1, n)]
    tree = np.column_stack([np.arange(1, n), parents]) if n > 1 else np.empty((0, 2))
    extra = gnp_graph(n, p, rng).edges()
    return from_edges(n, np.concatenate([tree.reshape(-1, 2), extra]))


def barabasi_albert(n: int, m: int, rng: np.random.Generator) -> CollabGraph:
    """Preferential attachment: each new node links to m distinct earlier nodes
    chosen proportionally to degree (seeded with a star on m + 1 nodes)."""
    edges = np.empty(((n - m - 1) * m + m, 2), dtype=np.int64)
    edges[:m] = np.column_stack([np.full(m, m), np.arange(m)])
    ends = np.empty(2 * len(edges), dtype=np.int64)
    ends[: 2 * m] = edges[:m].ravel()
    n_ends = 2 * m
    e = m
    for v in range(m + 1, n):
        targets = set()
        while len(targets) < m:
            targets.add(int(ends[rng.integers(0, n_ends)]))
        for t in sorted(targets):
            edges[e] = (v, t)
            ends[n_ends] = v
            ends[n_ends + 1] = t
            n_ends += 2
            e += 1
    return from_edges(n, edges)


def star_graph(leaves: int) -> CollabGraph:
    return from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def cycle_graph(n: int) -> CollabGraph:
    return from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> CollabGraph:
    return from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> CollabGraph:
    return from_edges(n, list(itertools.combinations(range(n), 2)))


# --- fixture corpus ----------------------------------------------------------

LEVEL_SIZES = (5, 35, 120, 200, 110, 16, 6)
"""Scholars per planted TN level; level 0 are the laureates."""
N_DISCONNECTED = 8

_FIRST = ["Ada", "Alan", "Barbara", "Chen", "Dana", "Edsger", "Fatima", "Grace",
          "Hiro", "Ines", "Jürgen", "Kofi", "Leslie", "Maria", "Niklaus", "Olga",
          "Priya", "Raj", "Søren", "Tim", "Uma", "Vint", "Wei", "Yuki", "Zoë"]
_LAST = ["Abara", "Berners", "Cerf", "Dahl", "Engel", "Floyd", "Gupta", "Hoare",
         "Ishikawa", "Jensen", "Knuth", "Lamport", "Müller", "Nakamura", "Ortiz",
         "Perlis", "Quinn", "Rivest", "Sato", "Tarjan", "Ullman", "Valiant",
         "Wirth", "Xu", "Yao", "Zhang"]

INSTITUTIONS = [
    # pattern, country, lat, lon, raw affiliation string
    ("Massachusetts Institute of Technology", "United States", 42.3601, -71.0942,
     "CSAIL, Massachusetts Institute of Technology, Cambridge, MA"),
    ("Stanford University", "United States", 37.4275, -122.1697,
     "Computer Science Dept., Stanford University"),
    ("University of California, Berkeley", "United States", 37.8719, -122.2585,
     "EECS, University of California, Berkeley"),
    ("University of California", "United States", 37.8044, -122.2712,
     "University of California Office of the President"),
    ("Tsinghua University", "China", 40.0000, 116.3264, "Tsinghua University, Beijing"),
    ("Max Planck Institute", "Germany", 49.2577, 7.0454,
     "Max Planck Institute for Informatics, Saarbrücken"),
    ("INRIA", "France", 48.8378, 2.1030, "Inria Paris"),
    ("University of Toronto", "Canada", 43.6629, -79.3957, "Dept. of CS, University of Toronto"),
    ("University of Oxford", "United Kingdom", 51.7548, -1.2544, "University of Oxford"),
    ("University of Tokyo", "Japan", 35.7126, 139.7620, "The University of Tokyo"),
    ("KAIST", "South Korea", 36.3721, 127.3604, "School of Computing, KAIST"),
    ("Universidade de São Paulo", "Brazil", -23.5614, -46.7300,
     "ICMC, Universidade de São Paulo"),
]
UNMATCHED_AFFILIATION = "Independent Researcher"


def _names(n, rng):
    pool = [f"{f} {l}" for f in _FIRST for l in _LAST]
    order = rng.permutation(len(pool))
    names = []
    for i in range(n):
        base = pool[order[i % len(pool)]]
        names.append(base if i < len(pool) else f"{base} {i // len(pool):04d}")
    return names


def fixture_corpus(seed: int = 7):
    """Laureate-centred synthetic corpus with planted TN levels.

    Every scholar at level L >= 1 leads at least one paper with a level L-1
    coauthor and never coauthors below L-1, so its TN is exactly L.
    Productivity and citations fall with level, which plants a negative
    TN/indicator association. Returns (records, names, levels, affiliations).
    """
    rng = np.random.default_rng(seed)
    n_conn = sum(LEVEL_SIZES)
    names = _names(n_conn + N_DISCONNECTED, rng)
    levels = np.repeat(np.arange(len(LEVEL_SIZES)), LEVEL_SIZES)
    by_level = [np.flatnonzero(levels == lv) for lv in range(len(LEVEL_SIZES))]

    records = []

    def add(authors, min_level, year):
        mean = 60.0 * np.exp(-0.8 * min_level)
        cites = int(rng.negative_binomial(2, 2 / (2 + mean)))
        uniq = list(dict.fromkeys(names[a] for a in authors))
        records.append(PaperRecord(f"fx/{len(records):05d}", f"Synthetic paper {len(records)}",
                                   int(year), tuple(uniq), cites))

    for v in range(n_conn):
        lv = int(levels[v])
        n_lead = 1 + int(rng.poisson(7.0 * np.exp(-0.5 * lv)))
        for j in range(n_lead):
            year = rng.integers(1975, 2021)
            # coauthors span at most two adjacent levels so no edge skips a level
            upward = lv > 0 and (j == 0 or rng.random() < 0.8)
            if upward:
                pool_levels, probs = [lv - 1, lv], [0.65, 0.35]
            elif lv + 1 < len(LEVEL_SIZES):
                pool_levels, probs = [lv, lv + 1], [0.4, 0.6]
            else:
                pool_levels, probs = [lv], [1.0]
            k = 1 + int(rng.integers(0, 3))
            co = []
            if lv > 0 and j == 0:
                co.append(int(rng.choice(by_level[lv - 1])))
            while len(co) < k:
                pick = int(rng.choice(pool_levels, p=probs))
                co.append(int(rng.choice(by_level[pick])))
            authors = [v] + [c for c in co if c != v]
            add(authors, min(levels[a] for a in authors), year)

    # two solo authors, a triangle and a path: all unreachable from the laureates
    d = list(range(n_conn, n_conn + N_DISCONNECTED))
    groups = [[d[0]], [d[1]], [d[2], d[3], d[4]], [d[5], d[6]], [d[6], d[7]]]
    for g in groups:
        add(g, 6, rng.integers(1990, 2021))

    order = rng.permutation(len(records))
    records = [records[i] for i in order]

    affiliations = []
    n_inst = len(INSTITUTIONS)
    for v, name in enumerate(names):
        lv = int(levels[v]) if v < n_conn else 6
        u = rng.random()
        if u < 0.06:
            continue
        if u < 0.10:
            affiliations.append((name, UNMATCHED_AFFILIATION))
            continue
        p_us = max(0.15, 0.7 - 0.1 * lv)
        if rng.random() < p_us:
            inst = INSTITUTIONS[int(rng.integers(0, 4))]
        else:
            inst = INSTITUTIONS[int(rng.integers(4, n_inst))]
        affiliations.append((name, inst[4]))
    return records, names, levels, affiliations


def write_fixture(out_dir, seed: int = 7) -> dict:
    """Write corpus.jsonl, affiliations.csv, geocode.csv and laureates.txt."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    records, names, levels, affiliations = fixture_corpus(seed)
    write_corpus(records, out / "corpus.jsonl")
    with open(out / "affiliations.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["author_key", "institution"])
        w.writerows(affiliations)
    with open(out / "geocode.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["pattern", "country", "lat", "lon"])
        for pattern, country, lat, lon, _ in INSTITUTIONS:
            w.writerow([pattern, country, lat, lon])
    with open(out / "laureates.txt", "w", encoding="utf-8") as fh:
        fh.write("# synthetic laureates (planted TN level 0)\n")
        for v in range(LEVEL_SIZES[0]):
            fh.write(names[v] + "\n")
    return {"n_papers": len(records), "n_scholars": len(names)}


def dblp_fixture(n: int = 100, no_author_every: int = 33, seed: int = 3) -> bytes:
    """DBLP-style XML with ``n`` publications; every ``no_author_every``-th one
    (1-based) carries only editors. Includes named entities and a non-publication
    element."""
    rng = np.random.default_rng(seed)
    tags = ["article", "inproceedings", "proceedings", "book", "incollection",
            "phdthesis", "mastersthesis"]
    parts = ['<?xml version="1.0" encoding="ISO-8859-1"?>\n',
             '<!DOCTYPE dblp SYSTEM "dblp.dtd">\n<dblp>\n']
    people = ["J&uuml;rgen M&uuml;ller", "Ana Garc&iacute;a", "Wei Wang 0001",
              "Wei Wang 0002", "Edsger W. Dijkstra", "S&oslash;ren Hansen", "Bob Smith"]
    for i in range(1, n + 1):
        tag = tags[i % len(tags)]
        parts.append(f'<{tag} key="fx/{i}" mdate="2020-01-01">')
        if i % no_author_every == 0:
            parts.append("<editor>Some Editor</editor>")
        else:
            k = 1 + int(rng.integers(0, 3))
            for a in rng.choice(len(people), size=k, replace=False):
                parts.append(f"<author>{people[a]}</author>")
        parts.append(f"<title>Title <i>{i}</i> &amp; more.</title>")
        parts.append(f"<year>{1970 + i % 50}</year>")
        if i % 5 == 0:
            parts.append(f"<n_citation>{i}</n_citation>")
        parts.append(f"<ee>https://doi.org/10.0/{i}</ee></{tag}>\n")
        if i % 10 == 0:
            parts.append('<www key="homepages/x"><author>Home Page</author></www>\n')
    parts.append("</dblp>\n")
    return "".join(parts).encode("latin-1")
