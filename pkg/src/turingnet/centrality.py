"""Degree, closeness, betweenness, eigenvector and load centrality on a CollabGraph.

The per-source kernels (closeness, Brandes betweenness, load) run over a
fixed partition of the sources into blocks. Blocks may execute on any number
of threads, but partial sums are always reduced in block order, so the
floating-point result does not depend on the thread count.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numba
import numpy as np
import scipy.sparse

from .errors import ConvergenceError, ValidationError
from .graph import CollabGraph, largest_component, subgraph
from .tn import TnResult

log = logging.getLogger(__name__)

N_BLOCKS = 64
DEFAULT_TOLERANCE = 1e-10
DEFAULT_MAX_ITERS = 1000


class Measure(str, Enum):
    DEGREE = "degree"
    CLOSENESS = "closeness"
    BETWEENNESS = "betweenness"
    EIGENVECTOR = "eigenvector"
    LOAD = "load"


MEASURES = tuple(m.value for m in Measure)


@dataclass(frozen=True, eq=False)
class CentralityScores:
    measure: Measure
    values: np.ndarray
    normalized_values: np.ndarray
    params: dict = field(default_factory=dict)


# --- kernels -----------------------------------------------------------------


@numba.njit(cache=True, nogil=True)
def _closeness_kernel(offsets, adjacency, sources, out):
    n = len(offsets) - 1
    dist = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for s in sources:
        dist[s] = 0
        queue[0] = s
        head = 0
        tail = 1
        total = 0
        while head < tail:
            v = queue[head]
            head += 1
            total += dist[v]
            for k in range(offsets[v], offsets[v + 1]):
                w = adjacency[k]
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue[tail] = w
                    tail += 1
        if total > 0 and n > 1:
            r = tail - 1
            out[s] = (r / total) * (r / (n - 1))
        for i in range(tail):
            dist[queue[i]] = -1


@numba.njit(cache=True, nogil=True)
def _brandes_kernel(offsets, adjacency, sources, out):
    """Accumulate source dependencies delta_s(v) into ``out`` (ordered pairs).

    The forward BFS records each node's shortest-path successors contiguously
    (grouped by BFS position) so the backward pass touches only DAG edges.
    """
    n = len(offsets) - 1
    dist = np.full(n, -1, dtype=np.int32)
    sigma = np.zeros(n)
    coef = np.zeros(n)
    order = np.empty(n, dtype=np.int32)
    succ = np.empty(len(adjacency), dtype=np.int32)
    succ_start = np.empty(n + 1, dtype=np.int64)
    for s in sources:
        dist[s] = 0
        sigma[s] = 1.0
        order[0] = s
        head = 0
        tail = 1
        ns = 0
        while head < tail:
            v = order[head]
            succ_start[head] = ns
            head += 1
            dn = dist[v] + 1
            sv = sigma[v]
            for k in range(offsets[v], offsets[v + 1]):
                w = adjacency[k]
                d = dist[w]
                if d < 0:
                    dist[w] = dn
                    order[tail] = w
                    tail += 1
                    sigma[w] = sv
                    succ[ns] = w
                    ns += 1
                elif d == dn:
                    sigma[w] += sv
                    succ[ns] = w
                    ns += 1
        succ_start[tail] = ns
        for i in range(tail - 1, 0, -1):
            v = order[i]
            acc = 0.0
            for j in range(succ_start[i], succ_start[i + 1]):
                acc += coef[succ[j]]
            dep = sigma[v] * acc
            out[v] += dep
            # (1 + delta(v)) / sigma(v), consumed by v's predecessors
            coef[v] = (1.0 + dep) / sigma[v]
        for i in range(tail):
            v = order[i]
            dist[v] = -1
            sigma[v] = 0.0
            coef[v] = 0.0


@numba.njit(cache=True, nogil=True)
def _linear_kernel(offsets, adjacency, sources, out):
    """Linearly scaled dependencies: pair (s, t) credits v with
    sigma_st(v)/sigma_st * d(s,v)/d(s,t). Summed over every source this
    reproduces betweenness over unordered pairs exactly, but pivots next to
    a hub no longer hand it a full unit per pair."""
    n = len(offsets) - 1
    dist = np.full(n, -1, dtype=np.int32)
    sigma = np.zeros(n)
    coef = np.zeros(n)
    order = np.empty(n, dtype=np.int32)
    succ = np.empty(len(adjacency), dtype=np.int32)
    succ_start = np.empty(n + 1, dtype=np.int64)
    for s in sources:
        dist[s] = 0
        sigma[s] = 1.0
        order[0] = s
        head = 0
        tail = 1
        ns = 0
        while head < tail:
            v = order[head]
            succ_start[head] = ns
            head += 1
            dn = dist[v] + 1
            sv = sigma[v]
            for k in range(offsets[v], offsets[v + 1]):
                w = adjacency[k]
                d = dist[w]
                if d < 0:
                    dist[w] = dn
                    order[tail] = w
                    tail += 1
                    sigma[w] = sv
                    succ[ns] = w
                    ns += 1
                elif d == dn:
                    sigma[w] += sv
                    succ[ns] = w
                    ns += 1
        succ_start[tail] = ns
        for i in range(tail - 1, 0, -1):
            v = order[i]
            acc = 0.0
            for j in range(succ_start[i], succ_start[i + 1]):
                acc += coef[succ[j]]
            # g(v) = sum_t sigma_st(v)/sigma_st / d(s,t); dependency is d(s,v) g(v)
            g = sigma[v] * acc
            out[v] += dist[v] * g
            coef[v] = (1.0 / dist[v] + g) / sigma[v]
        for i in range(tail):
            v = order[i]
            dist[v] = -1
            sigma[v] = 0.0
            coef[v] = 0.0


@numba.njit(cache=True)
def _two_best_neighbours(offsets, adjacency, rank):
    n = len(offsets) - 1
    best = np.full(n, n, dtype=np.int64)
    second = np.full(n, n, dtype=np.int64)
    for v in range(n):
        for k in range(offsets[v], offsets[v + 1]):
            r = rank[adjacency[k]]
            if r < best[v]:
                second[v] = best[v]
                best[v] = r
            elif r < second[v]:
                second[v] = r
    return best, second


def pivot_sample(graph: CollabGraph, samples: int, rng_seed: int = 0) -> np.ndarray:
    """Systematic pivot sample with a random start.

    Nodes are listed grouped by their highest-degree neighbour, then by
    their own degree and their second-best neighbour, and every
    (n/samples)-th entry is taken. Each node is included with probability
    exactly samples/n, as under uniform sampling, but each hub's
    neighbourhood is covered in proportion, which is where most of the
    estimator variance comes from.
    """
    n = graph.n_nodes
    deg = graph.degrees()
    ids = np.arange(n)
    rank = np.empty(n, dtype=np.int64)
    rank[np.lexsort((ids, -deg))] = ids
    best, second = _two_best_neighbours(graph.offsets, graph.adjacency, rank)
    listing = np.lexsort((ids, second, deg, best))
    step = n / samples
    start = np.random.default_rng(rng_seed).uniform(0.0, step)
    pos = np.floor(start + step * np.arange(samples)).astype(np.int64)
    return np.sort(listing[np.minimum(pos, n - 1)])


@numba.njit(cache=True, nogil=True)
def _load_kernel(offsets, adjacency, roots, out, absorbed):
    """Target-rooted load: every node sends one unit to ``root``; at each hop
    the packet splits evenly over the neighbours one step closer to it."""
    n = len(offsets) - 1
    dist = np.full(n, -1, dtype=np.int64)
    load = np.zeros(n)
    order = np.empty(n, dtype=np.int64)
    for t in roots:
        dist[t] = 0
        order[0] = t
        head = 0
        tail = 1
        while head < tail:
            v = order[head]
            head += 1
            for k in range(offsets[v], offsets[v + 1]):
                w = adjacency[k]
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    order[tail] = w
                    tail += 1
        for i in range(tail):
            load[order[i]] = 1.0
        for i in range(tail - 1, 0, -1):
            w = order[i]
            dp = dist[w] - 1
            npred = 0
            for k in range(offsets[w], offsets[w + 1]):
                if dist[adjacency[k]] == dp:
                    npred += 1
            share = load[w] / npred
            for k in range(offsets[w], offsets[w + 1]):
                v = adjacency[k]
                if dist[v] == dp:
                    load[v] += share
            out[w] += load[w] - 1.0
        absorbed[t] = load[t] - 1.0
        for i in range(tail):
            v = order[i]
            dist[v] = -1
            load[v] = 0.0


def _blocks(sources):
    return [b for b in np.array_split(sources, min(N_BLOCKS, max(len(sources), 1))) if len(b)]


def _run_blocked(kernel, graph, sources, threads, *extra):
    n = graph.n_nodes
    args = (graph.offsets, graph.adjacency)

    def work(block):
        out = np.zeros(n)
        kernel(*args, block, out, *extra)
        return out

    blocks = _blocks(np.asarray(sources, dtype=np.int64))
    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            partials = list(ex.map(work, blocks))
    else:
        partials = [work(b) for b in blocks]
    total = np.zeros(n)
    for p in partials:
        total += p
    return total


# --- measures ----------------------------------------------------------------


def degree_centrality(graph: CollabGraph) -> CentralityScores:
    deg = graph.degrees().astype(float)
    n = graph.n_nodes
    norm = deg / (n - 1) if n > 1 else np.zeros(n)
    return CentralityScores(Measure.DEGREE, deg, norm)


def closeness_centrality(graph: CollabGraph, threads: int = 1) -> CentralityScores:
    """(r-1)/sum(d) over the r nodes reachable from v, scaled by (r-1)/(n-1).

    On a connected graph this is exactly (|V|-1)/sum(d). Isolated nodes get 0.
    """
    n = graph.n_nodes
    out = np.zeros(n)
    args = (graph.offsets, graph.adjacency)

    def work(block):
        _closeness_kernel(*args, block, out)

    blocks = _blocks(np.arange(n, dtype=np.int64))
    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            list(ex.map(work, blocks))
    else:
        for b in blocks:
            work(b)
    return CentralityScores(Measure.CLOSENESS, out, out.copy())


def betweenness_centrality(
    graph: CollabGraph,
    samples: int | None = None,
    rng_seed: int = 0,
    threads: int = 1,
) -> CentralityScores:
    """Brandes betweenness over unordered pairs, endpoints excluded.

    With ``samples`` set, only that many pivot sources are expanded (see
    pivot_sample; each node is a pivot with probability samples/n), their
    linearly scaled dependencies are summed and scaled by n/samples. The
    estimate is unbiased for every node.
    """
    n = graph.n_nodes
    params = {"mode": "exact"}
    if samples is not None and samples < 1:
        raise ValidationError("samples must be >= 1")
    if samples is not None and samples >= n:
        if samples > n:
            log.warning("samples=%d exceeds n=%d; computing exact betweenness", samples, n)
        samples = None
    if samples is None:
        values = _run_blocked(_brandes_kernel, graph, np.arange(n, dtype=np.int64), threads)
        values *= 0.5
    else:
        sources = pivot_sample(graph, samples, rng_seed)
        values = _run_blocked(_linear_kernel, graph, sources, threads) * (n / samples)
        params = {"mode": "sampled", "samples": samples, "rng_seed": rng_seed,
                  "estimator": "linear-scaling", "pivots": "systematic"}
    denom = (n - 1) * (n - 2) / 2
    norm = values / denom if denom > 0 else np.zeros(n)
    return CentralityScores(Measure.BETWEENNESS, values, norm, params)


def load_flows(graph: CollabGraph, threads: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Raw through-load per node and the load absorbed at each root.

    The absorbed total at a root equals (size of its component) - 1.
    """
    n = graph.n_nodes
    absorbed = np.zeros(n)
    values = _run_blocked(_load_kernel, graph, np.arange(n, dtype=np.int64), threads,
                          absorbed)
    return values, absorbed


def load_centrality(graph: CollabGraph, threads: int = 1) -> CentralityScores:
    """Load over ordered pairs: each pair's unit splits evenly among the
    shortest-path next hops at every node; endpoints excluded."""
    n = graph.n_nodes
    values, _ = load_flows(graph, threads)
    denom = (n - 1) * (n - 2)
    norm = values / denom if denom > 0 else np.zeros(n)
    return CentralityScores(Measure.LOAD, values, norm)


def eigenvector_centrality(
    graph: CollabGraph,
    tolerance: float = DEFAULT_TOLERANCE,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> CentralityScores:
    """Principal adjacency eigenvector on the largest component (others 0).

    Iterates x <- (Ax + x)/||Ax + x|| so bipartite components cannot
    oscillate. Stops once successive iterates agree to ``tolerance`` in
    max-norm and ||Ax - lambda x||_2 <= 10 * tolerance.
    """
    n = graph.n_nodes
    if n == 0:
        raise ValidationError("eigenvector centrality of an empty graph")
    nodes = largest_component(graph)
    sub, _ = subgraph(graph, nodes)
    r = sub.n_nodes
    A = scipy.sparse.csr_matrix(
        (np.ones(len(sub.adjacency)), sub.adjacency, sub.offsets), shape=(r, r)
    )
    x = np.full(r, 1.0 / np.sqrt(r))
    residual = np.inf
    lam = 0.0
    for it in range(1, max_iters + 1):
        ax = A @ x
        y = ax + x
        y /= np.linalg.norm(y)
        diff = np.max(np.abs(y - x))
        x = y
        if diff < tolerance:
            ax = A @ x
            lam = float(x @ ax)
            residual = float(np.linalg.norm(ax - lam * x))
            if residual <= 10 * tolerance:
                break
    else:
        ax = A @ x
        residual = float(np.linalg.norm(ax - float(x @ ax) * x))
        raise ConvergenceError(max_iters, residual)
    values = np.zeros(n)
    values[nodes] = x
    params = {"tolerance": tolerance, "max_iters": max_iters, "iterations": it,
              "eigenvalue": lam, "residual": residual, "component_size": int(r)}
    return CentralityScores(Measure.EIGENVECTOR, values, values.copy(), params)


def compute(
    graph: CollabGraph,
    measure: str,
    *,
    samples: int | None = None,
    rng_seed: int = 0,
    tolerance: float = DEFAULT_TOLERANCE,
    max_iters: int = DEFAULT_MAX_ITERS,
    threads: int = 1,
) -> CentralityScores:
    m = Measure(measure)
    if m is Measure.DEGREE:
        return degree_centrality(graph)
    if m is Measure.CLOSENESS:
        return closeness_centrality(graph, threads)
    if m is Measure.BETWEENNESS:
        return betweenness_centrality(graph, samples, rng_seed, threads)
    if m is Measure.EIGENVECTOR:
        return eigenvector_centrality(graph, tolerance, max_iters)
    return load_centrality(graph, threads)


# --- aggregation by TN -------------------------------------------------------


@dataclass(frozen=True)
class TnBucket:
    tn: int
    n_nodes: int
    n_positive: int
    n_zero: int
    ln_stat: float | None


def centrality_by_tn(values, tn_result: TnResult, stat: str = "mean") -> list[TnBucket]:
    """Per-TN mean (or median) of ln(value) over reachable nodes with value > 0.

    Zero-valued nodes are counted in ``n_zero`` and never log-transformed;
    a bucket with no positive values reports ``ln_stat=None``.
    """
    if stat not in ("mean", "median"):
        raise ValidationError(f"unknown statistic {stat!r}")
    values = np.asarray(values, dtype=float)
    if len(values) != len(tn_result.tn):
        raise ValidationError("scores and TN cover different node sets")
    reach = tn_result.reachable
    agg = np.mean if stat == "mean" else np.median
    rows = []
    for t in sorted(tn_result.histogram):
        v = values[reach & (tn_result.tn == t)]
        pos = v[v > 0]
        rows.append(TnBucket(t, len(v), len(pos), len(v) - len(pos),
                             float(agg(np.log(pos))) if len(pos) else None))
    return rows
