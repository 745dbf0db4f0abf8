"""Timing run on a generated preferential-attachment graph.

    python scripts/bench_scale.py --nodes 50000 --m 6 --threads 8 [--exact]

Reports TN, sampled betweenness and (optionally) exact betweenness timings
and the top-10 relative error of the sampled estimate.
"""

import argparse
import time

import numpy as np

from turingnet import centrality
from turingnet.synthetic import barabasi_albert
from turingnet.tn import compute_tn


def timed(fn, *a, **kw):
    t0 = time.perf_counter()
    out = fn(*a, **kw)
    return out, time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nodes", type=int, default=50_000)
    ap.add_argument("--m", type=int, default=6)
    ap.add_argument("--seeds", type=int, default=65)
    ap.add_argument("--samples", type=int, default=2000)
    ap.add_argument("--threads", type=int, default=8)
    ap.add_argument("--rng-seed", type=int, default=2020)
    ap.add_argument("--exact", action="store_true")
    args = ap.parse_args()

    rng = np.random.default_rng(args.rng_seed)
    g = barabasi_albert(args.nodes, args.m, rng)
    print(f"graph: {g.n_nodes} nodes, {g.n_edges} edges")
    centrality.betweenness_centrality(barabasi_albert(50, 2, rng))  # warm the JIT cache

    seeds = set(rng.choice(g.n_nodes, args.seeds, replace=False).tolist())
    _, t = timed(compute_tn, g, seeds)
    print(f"tn: {t:.3f}s")
    s, t = timed(centrality.betweenness_centrality, g, samples=args.samples,
                 rng_seed=args.rng_seed, threads=args.threads)
    print(f"betweenness, {args.samples} pivots: {t:.1f}s")
    if args.exact:
        e, t = timed(centrality.betweenness_centrality, g, threads=args.threads)
        print(f"betweenness, exact: {t:.1f}s")
        top = np.argsort(-e.values)[:10]
        rel = np.abs(s.values[top] - e.values[top]) / e.values[top]
        print(f"top-10 relative error: max {rel.max():.2%}, mean {rel.mean():.2%}")


if __name__ == "__main__":
    main()
