"""Turing Number: hop distance to the nearest seed (laureate), its
distribution, and the random-seed null model."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .graph import CollabGraph, _bfs
from .errors import ValidationError

BAND = (2, 5)
DEFAULT_TRIALS = 100


@dataclass(frozen=True, eq=False)
class TnResult:
    """Per-node distance to the seed set.

    ``tn[v]`` is meaningful only where ``reachable[v]``; unreachable entries
    hold -1 as a placeholder and must never be read as a distance.
    """

    tn: np.ndarray
    reachable: np.ndarray
    seed_set: frozenset

    @property
    def n_unreachable(self) -> int:
        return int(len(self.reachable) - self.reachable.sum())

    @property
    def histogram(self) -> dict[int, int]:
        counts = np.bincount(self.tn[self.reachable])
        return {int(k): int(c) for k, c in enumerate(counts) if c}

    def values(self) -> np.ndarray:
        """TN as floats with NaN for unreachable nodes."""
        out = self.tn.astype(float)
        out[~self.reachable] = np.nan
        return out


def _check_seeds(graph, seeds):
    s = np.unique(np.asarray(sorted(seeds), dtype=np.int64))
    if len(s) == 0:
        raise ValidationError("seed set is empty")
    if s[0] < 0 or s[-1] >= graph.n_nodes:
        raise ValidationError("seed id out of range")
    return s


def _tn_array(graph, seeds, queue=None):
    dist = np.full(graph.n_nodes, -1, dtype=np.int64)
    if queue is None:
        queue = np.empty(graph.n_nodes, dtype=np.int64)
    _bfs(graph.offsets, graph.adjacency, seeds, dist, queue)
    return dist


def compute_tn(graph: CollabGraph, seed_set) -> TnResult:
    """Single multi-source BFS from every seed at once."""
    seeds = _check_seeds(graph, seed_set)
    dist = _tn_array(graph, seeds)
    return TnResult(dist, dist >= 0, frozenset(int(s) for s in seeds))


@dataclass(frozen=True)
class TnDistribution:
    histogram: dict[int, int]
    modal_tn: int | None
    band_share: float
    n_reachable: int
    n_unreachable: int
    band: tuple[int, int] = BAND

    def as_dict(self) -> dict:
        return {
            "histogram": {str(k): v for k, v in self.histogram.items()},
            "modal_tn": self.modal_tn,
            "band": list(self.band),
            "band_share": self.band_share,
            "n_reachable": self.n_reachable,
            "n_unreachable": self.n_unreachable,
        }


def tn_distribution(result: TnResult, band=BAND) -> TnDistribution:
    """Histogram, modal TN (smallest on ties) and the share of reachable
    scholars whose TN lies in the closed ``band``."""
    hist = result.histogram
    n = sum(hist.values())
    modal = max(hist, key=lambda k: (hist[k], -k)) if hist else None
    lo, hi = band
    in_band = sum(c for k, c in hist.items() if lo <= k <= hi)
    return TnDistribution(hist, modal, in_band / n if n else 0.0, n,
                          result.n_unreachable, tuple(band))


@dataclass(frozen=True, eq=False)
class NullModelResult:
    trials: int
    k: int
    rng_seed: int
    seed_sets: np.ndarray = field(repr=False)
    """(trials, k) sampled seed ids."""
    counts: np.ndarray = field(repr=False)
    """(trials, max_tn + 1) per-trial histogram."""
    n_unreachable: np.ndarray = field(repr=False)
    mean_tn: np.ndarray = field(repr=False)
    """Mean TN over reachable nodes, per trial."""

    @property
    def histograms(self) -> list[dict[int, int]]:
        return [{int(t): int(c) for t, c in enumerate(row) if c} for row in self.counts]

    @property
    def mean_counts(self) -> np.ndarray:
        return self.counts.mean(axis=0)

    @property
    def std_counts(self) -> np.ndarray:
        return self.counts.std(axis=0)

    def __eq__(self, other):
        if not isinstance(other, NullModelResult):
            return NotImplemented
        return (
            (self.trials, self.k, self.rng_seed) == (other.trials, other.k, other.rng_seed)
            and np.array_equal(self.seed_sets, other.seed_sets)
            and np.array_equal(self.counts, other.counts)
            and np.array_equal(self.n_unreachable, other.n_unreachable)
            and np.array_equal(self.mean_tn, other.mean_tn)
        )


def trial_rng(rng_seed: int, trial: int) -> np.random.Generator:
    """Independent generator for one trial, a pure function of (seed, trial)."""
    return np.random.default_rng(np.random.SeedSequence(rng_seed, spawn_key=(trial,)))


def null_model(
    graph: CollabGraph,
    k: int,
    trials: int = DEFAULT_TRIALS,
    rng_seed: int = 0,
    exclude=None,
    threads: int = 1,
) -> NullModelResult:
    """Repeat compute_tn with ``k`` uniformly drawn seeds per trial.

    Nodes in ``exclude`` (e.g. the real laureates) are never drawn. Results
    depend only on ``rng_seed``, not on ``threads``.
    """
    pool = np.arange(graph.n_nodes, dtype=np.int64)
    if exclude:
        pool = np.setdiff1d(pool, np.fromiter(exclude, dtype=np.int64))
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    if not 1 <= k <= len(pool):
        raise ValidationError(f"k={k} must be in [1, {len(pool)}]")

    def run(t):
        seeds = np.sort(trial_rng(rng_seed, t).choice(pool, size=k, replace=False))
        dist = _tn_array(graph, seeds)
        reach = dist[dist >= 0]
        return seeds, np.bincount(reach), len(dist) - len(reach), reach.mean()

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            out = list(ex.map(run, range(trials)))
    else:
        out = [run(t) for t in range(trials)]

    width = max(len(o[1]) for o in out)
    counts = np.zeros((trials, width), dtype=np.int64)
    for t, o in enumerate(out):
        counts[t, : len(o[1])] = o[1]
    return NullModelResult(
        trials=trials,
        k=k,
        rng_seed=rng_seed,
        seed_sets=np.stack([o[0] for o in out]),
        counts=counts,
        n_unreachable=np.array([o[2] for o in out], dtype=np.int64),
        mean_tn=np.array([o[3] for o in out], dtype=float),
    )
