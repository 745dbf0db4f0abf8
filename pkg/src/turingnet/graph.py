"""Undirected coauthorship graph in CSR form, plus persistence and traversal helpers."""

from __future__ import annotations

import hashlib
import struct
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numba
import numpy as np

from .errors import GraphFormatError, InputError

MAGIC = b"TNGRAPH\x00"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<8sIQQ")
_CHECKSUM_LEN = 32

DEFAULT_CLIQUE_GUARD = 500


class CliqueGuardWarning(UserWarning):
    pass


@dataclass(frozen=True, eq=False)
class CollabGraph:
    """Immutable simple undirected graph.

    ``offsets`` has length ``n_nodes + 1``; the neighbours of ``v`` are
    ``adjacency[offsets[v]:offsets[v + 1]]``, sorted ascending.
    """

    offsets: np.ndarray
    adjacency: np.ndarray
    node_attrs: object = None

    def __post_init__(self):
        self.offsets.setflags(write=False)
        self.adjacency.setflags(write=False)

    @property
    def n_nodes(self) -> int:
        return len(self.offsets) - 1

    @property
    def n_edges(self) -> int:
        return len(self.adjacency) // 2

    def degree(self, v: int) -> int:
        self._check(v)
        return int(self.offsets[v + 1] - self.offsets[v])

    def neighbors(self, v: int) -> np.ndarray:
        self._check(v)
        return self.adjacency[self.offsets[v] : self.offsets[v + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    def edges(self) -> np.ndarray:
        """(m, 2) array of edges with u < v, in lexicographic order."""
        src = np.repeat(np.arange(self.n_nodes, dtype=np.int64), self.degrees())
        keep = src < self.adjacency
        return np.column_stack([src[keep], self.adjacency[keep].astype(np.int64)])

    def same_structure(self, other: "CollabGraph") -> bool:
        return np.array_equal(self.offsets, other.offsets) and np.array_equal(
            self.adjacency, other.adjacency
        )

    def _check(self, v):
        if not 0 <= v < self.n_nodes:
            raise IndexError(f"node {v} out of range [0, {self.n_nodes})")


def from_edges(n_nodes: int, edges, node_attrs=None) -> CollabGraph:
    """Build a graph from an iterable/array of (u, v) pairs.

    Self-loops are dropped and duplicate or reversed pairs collapse.
    """
    e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if len(e) and (e.min() < 0 or e.max() >= n_nodes):
        raise ValueError("edge endpoint out of range")
    e = e[e[:, 0] != e[:, 1]]
    lo = np.minimum(e[:, 0], e[:, 1])
    hi = np.maximum(e[:, 0], e[:, 1])
    codes = np.unique(lo * n_nodes + hi)
    lo, hi = codes // n_nodes, codes % n_nodes
    src = np.concatenate([lo, hi])
    dst = np.concatenate([hi, lo])
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    offsets = np.zeros(n_nodes + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n_nodes), out=offsets[1:])
    return CollabGraph(offsets, dst.astype(np.int32), node_attrs)


def build_graph(
    papers: Iterable[Sequence[int]],
    n_nodes: int,
    clique_guard: int = DEFAULT_CLIQUE_GUARD,
    node_attrs=None,
) -> CollabGraph:
    """Clique-expand each paper's author list into coauthorship edges.

    ``papers`` yields author scholar_id sequences. Papers with more than
    ``clique_guard`` authors contribute no edges (a CliqueGuardWarning is
    issued with the count).
    """
    chunks = []
    skipped = 0
    for authors in papers:
        a = np.unique(np.asarray(authors, dtype=np.int64))
        k = len(a)
        if k < 2:
            continue
        if k > clique_guard:
            skipped += 1
            continue
        i, j = np.triu_indices(k, 1)
        chunks.append(np.column_stack([a[i], a[j]]))
    if skipped:
        warnings.warn(
            f"{skipped} paper(s) exceed the {clique_guard}-author clique guard; "
            "their edges were not added",
            CliqueGuardWarning,
            stacklevel=2,
        )
    edges = np.concatenate(chunks) if chunks else np.empty((0, 2), dtype=np.int64)
    return from_edges(n_nodes, edges, node_attrs)


# --- traversal kernels -------------------------------------------------------


@numba.njit(cache=True, nogil=True)
def _bfs(offsets, adjacency, sources, dist, queue):
    """Multi-source BFS; ``dist`` must be pre-filled with -1."""
    head = 0
    tail = 0
    for s in sources:
        if dist[s] < 0:
            dist[s] = 0
            queue[tail] = s
            tail += 1
    while head < tail:
        v = queue[head]
        head += 1
        dv = dist[v] + 1
        for k in range(offsets[v], offsets[v + 1]):
            w = adjacency[k]
            if dist[w] < 0:
                dist[w] = dv
                queue[tail] = w
                tail += 1
    return tail


def bfs_distances(graph: CollabGraph, sources) -> np.ndarray:
    """Hop distance from the nearest source; -1 where unreachable."""
    src = np.asarray(sources, dtype=np.int64).reshape(-1)
    if len(src) and (src.min() < 0 or src.max() >= graph.n_nodes):
        raise IndexError("source node out of range")
    dist = np.full(graph.n_nodes, -1, dtype=np.int64)
    queue = np.empty(graph.n_nodes, dtype=np.int64)
    _bfs(graph.offsets, graph.adjacency, src, dist, queue)
    return dist


@numba.njit(cache=True, nogil=True)
def _components(offsets, adjacency, labels, queue):
    n = len(offsets) - 1
    comp = 0
    for start in range(n):
        if labels[start] >= 0:
            continue
        labels[start] = comp
        head = 0
        tail = 1
        queue[0] = start
        while head < tail:
            v = queue[head]
            head += 1
            for k in range(offsets[v], offsets[v + 1]):
                w = adjacency[k]
                if labels[w] < 0:
                    labels[w] = comp
                    queue[tail] = w
                    tail += 1
        comp += 1
    return comp


def connected_components(graph: CollabGraph) -> tuple[np.ndarray, np.ndarray]:
    """Component label per node and the size of each component.

    Labels are numbered in order of each component's smallest node id.
    """
    labels = np.full(graph.n_nodes, -1, dtype=np.int64)
    queue = np.empty(graph.n_nodes, dtype=np.int64)
    n_comp = _components(graph.offsets, graph.adjacency, labels, queue)
    return labels, np.bincount(labels, minlength=n_comp)


def largest_component(graph: CollabGraph) -> np.ndarray:
    """Sorted node ids of the largest component (lowest label wins ties)."""
    labels, sizes = connected_components(graph)
    if len(sizes) == 0:
        return np.empty(0, dtype=np.int64)
    return np.flatnonzero(labels == int(np.argmax(sizes)))


def subgraph(graph: CollabGraph, nodes) -> tuple[CollabGraph, np.ndarray]:
    """Induced subgraph on ``nodes``, relabelled to 0..k-1 in ascending old-id order.

    Returns the new graph and the array mapping new id -> old id.
    """
    keep = np.unique(np.asarray(nodes, dtype=np.int64))
    remap = np.full(graph.n_nodes, -1, dtype=np.int64)
    remap[keep] = np.arange(len(keep))
    e = graph.edges()
    e = remap[e]
    e = e[(e >= 0).all(axis=1)]
    return from_edges(len(keep), e), keep


def khop_nodes(graph: CollabGraph, seeds, radius: int) -> np.ndarray:
    """Nodes within ``radius`` hops of any seed."""
    dist = bfs_distances(graph, seeds)
    return np.flatnonzero((dist >= 0) & (dist <= radius))


# --- persistence -------------------------------------------------------------


def save_graph(graph: CollabGraph, path) -> None:
    offsets = graph.offsets.astype("<i8", copy=False)
    adjacency = graph.adjacency.astype("<i4", copy=False)
    body = (
        _HEADER.pack(MAGIC, FORMAT_VERSION, graph.n_nodes, len(adjacency))
        + offsets.tobytes()
        + adjacency.tobytes()
    )
    digest = hashlib.sha256(body).digest()
    try:
        Path(path).write_bytes(body + digest)
    except OSError as exc:
        raise InputError(f"cannot write graph cache {path}: {exc}") from exc


def load_graph(path) -> CollabGraph:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read graph cache {path}: {exc}") from exc
    if len(data) < _HEADER.size + _CHECKSUM_LEN:
        raise GraphFormatError(f"{path}: file too short to be a graph cache")
    magic, version, n_nodes, n_adj = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise GraphFormatError(f"{path}: bad magic bytes {magic!r}")
    if version != FORMAT_VERSION:
        raise GraphFormatError(
            f"{path}: format version {version} found, {FORMAT_VERSION} expected"
        )
    body, digest = data[:-_CHECKSUM_LEN], data[-_CHECKSUM_LEN:]
    expected_len = _HEADER.size + 8 * (n_nodes + 1) + 4 * n_adj
    if len(body) != expected_len or hashlib.sha256(body).digest() != digest:
        raise GraphFormatError(f"{path}: integrity check failed (truncated or corrupt)")
    pos = _HEADER.size
    offsets = np.frombuffer(data, dtype="<i8", count=n_nodes + 1, offset=pos)
    pos += 8 * (n_nodes + 1)
    adjacency = np.frombuffer(data, dtype="<i4", count=n_adj, offset=pos)
    return CollabGraph(offsets.astype(np.int64), adjacency.astype(np.int32))


def write_edge_list(graph: CollabGraph, path) -> None:
    """Plain-text ``u v`` lines with u < v."""
    with open(path, "w", encoding="ascii") as fh:
        for u, v in graph.edges():
            fh.write(f"{u} {v}\n")
