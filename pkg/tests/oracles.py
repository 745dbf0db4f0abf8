"""Slow, obviously-correct reference implementations. Pure Python on adjacency
lists; nothing here calls into turingnet's kernels."""

import math
from collections import deque
from itertools import combinations


def adjacency_lists(n, edges):
    adj = [set() for _ in range(n)]
    for u, v in edges:
        u, v = int(u), int(v)
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    return [sorted(a) for a in adj]


def bfs(adj, s):
    """Distances from s; None where unreachable."""
    dist = [None] * len(adj)
    dist[s] = 0
    q = deque([s])
    while q:
        v = q.popleft()
        for w in adj[v]:
            if dist[w] is None:
                dist[w] = dist[v] + 1
                q.append(w)
    return dist


def path_counts(adj, s):
    """(dist, sigma) with exact integer shortest-path counts from s."""
    dist = bfs(adj, s)
    order = sorted((d, v) for v, d in enumerate(dist) if d is not None)
    sigma = [0] * len(adj)
    sigma[s] = 1
    for d, v in order:
        if v == s:
            continue
        sigma[v] = sum(sigma[u] for u in adj[v] if dist[u] == d - 1)
    return dist, sigma


def betweenness(adj):
    """Sum over unordered pairs {s,t} of sigma_st(v)/sigma_st, using
    sigma_st(v) = sigma_sv * sigma_vt whenever d(s,v) + d(v,t) = d(s,t)."""
    n = len(adj)
    info = [path_counts(adj, s) for s in range(n)]
    out = [0.0] * n
    for s, t in combinations(range(n), 2):
        ds, ss = info[s]
        dt, st = info[t]
        if ds[t] is None:
            continue
        for v in range(n):
            if v in (s, t) or ds[v] is None or dt[v] is None:
                continue
            if ds[v] + dt[v] == ds[t]:
                out[v] += ss[v] * st[v] / ss[t]
    return out


def load_pair_flow(adj, s, t, dist_t):
    """Push one unit from s to t, splitting evenly over next hops toward t.
    Returns {node: amount passing through} including s and t."""
    through = {s: 1.0}
    frontier = {s: 1.0}
    while frontier:
        nxt = {}
        for v, amount in frontier.items():
            if v == t:
                continue
            hops = [w for w in adj[v] if dist_t[w] is not None and dist_t[w] == dist_t[v] - 1]
            for w in hops:
                nxt[w] = nxt.get(w, 0.0) + amount / len(hops)
        for w, a in nxt.items():
            through[w] = through.get(w, 0.0) + a
        frontier = nxt
    return through


def load(adj):
    """Through-load per node over all ordered pairs, plus per-source absorbed totals."""
    n = len(adj)
    dists = [bfs(adj, t) for t in range(n)]
    out = [0.0] * n
    absorbed = [0.0] * n
    for s in range(n):
        for t in range(n):
            if s == t or dists[t][s] is None:
                continue
            flow = load_pair_flow(adj, s, t, dists[t])
            absorbed[s] += flow.get(t, 0.0)
            for v, a in flow.items():
                if v not in (s, t):
                    out[v] += a
    return out, absorbed


def closeness_connected(adj):
    """(|V| - 1) / sum of distances, for a connected graph."""
    n = len(adj)
    return [(n - 1) / sum(bfs(adj, v)) if n > 1 else 0.0 for v in range(n)]


def components(adj):
    """Partition as a set of frozensets, by BFS from every node."""
    return {frozenset(v for v, d in enumerate(bfs(adj, s)) if d is not None)
            for s in range(len(adj))}


def h_index(cites):
    return max(h for h in range(len(cites) + 1) if sum(c >= h for c in cites) >= h)


def pearson(x, y):
    n = len(x)
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    sxy = math.fsum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = math.fsum((a - mx) ** 2 for a in x)
    syy = math.fsum((b - my) ** 2 for b in y)
    return sxy / math.sqrt(sxx * syy)


def average_ranks(a):
    return [sum(b < v for b in a) + (sum(b == v for b in a) + 1) / 2 for v in a]


def kendall_tau_b(x, y):
    n = len(x)
    c = d = tx = ty = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = x[i] - x[j]
            dy = y[i] - y[j]
            if dx == 0:
                tx += 1
            if dy == 0:
                ty += 1
            if dx * dy > 0:
                c += 1
            elif dx * dy < 0:
                d += 1
    n0 = n * (n - 1) // 2
    return (c - d) / math.sqrt((n0 - tx) * (n0 - ty))
