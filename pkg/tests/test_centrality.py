import math

import numpy as np
import pytest

import oracles
from conftest import adj_of, random_graphs
from turingnet import centrality as C
from turingnet.errors import ConvergenceError, ValidationError
from turingnet.graph import from_edges, subgraph
from turingnet.synthetic import (
    complete_graph,
    connected_graph,
    cycle_graph,
    gnp_graph,
    path_graph,
    star_graph,
)
from turingnet.tn import TnResult


def _permuted(g, perm):
    e = perm[g.edges()]
    return from_edges(g.n_nodes, e)


# --- degree ------------------------------------------------------------------


def test_degree_examples():
    assert C.degree_centrality(complete_graph(3)).values.tolist() == [2, 2, 2]
    s = C.degree_centrality(star_graph(3))
    assert s.values.tolist() == [3, 1, 1, 1]
    assert s.normalized_values[0] == 1.0


# --- closeness ---------------------------------------------------------------


def test_closeness_star():
    v = C.closeness_centrality(star_graph(3)).values
    assert v[0] == 1.0 and v[1:] == pytest.approx([0.6] * 3, abs=1e-15)


def test_closeness_isolated_node():
    assert C.closeness_centrality(from_edges(1, [])).values.tolist() == [0.0]
    assert C.closeness_centrality(from_edges(3, [(0, 1)])).values[2] == 0.0


def test_closeness_matches_bfs_sum_oracle():
    for g in random_graphs(30, 100, seed=21, connected=True):
        want = oracles.closeness_connected(adj_of(g))
        got = C.closeness_centrality(g).values
        np.testing.assert_allclose(got, want, rtol=0, atol=1e-12)


def test_closeness_disconnected_scaling():
    # component {0,1,2} path inside n=5
    g = from_edges(5, [(0, 1), (1, 2), (3, 4)])
    v = C.closeness_centrality(g).values
    assert v[1] == pytest.approx((2 / 2) * (2 / 4))
    assert v[0] == pytest.approx((2 / 3) * (2 / 4))
    assert v[3] == pytest.approx((1 / 1) * (1 / 4))


# --- betweenness -------------------------------------------------------------


def test_betweenness_examples():
    assert C.betweenness_centrality(path_graph(3)).values.tolist() == [0, 1, 0]
    assert C.betweenness_centrality(star_graph(3)).values.tolist() == [3, 0, 0, 0]


def test_betweenness_normalized():
    s = C.betweenness_centrality(star_graph(3))
    assert s.normalized_values[0] == pytest.approx(1.0)


def test_betweenness_matches_path_count_oracle():
    for g in random_graphs(30, 60, seed=22):
        want = oracles.betweenness(adj_of(g))
        np.testing.assert_allclose(C.betweenness_centrality(g).values, want, atol=1e-9, rtol=0)


def test_betweenness_threads_bit_identical():
    g = gnp_graph(300, 0.02, np.random.default_rng(1))
    a = C.betweenness_centrality(g).values
    b = C.betweenness_centrality(g, threads=4).values
    assert np.array_equal(a, b)


def test_betweenness_samples_clamped(caplog):
    g = path_graph(5)
    with caplog.at_level("WARNING"):
        s = C.betweenness_centrality(g, samples=10)
    assert "exact" in caplog.text and s.params["mode"] == "exact"
    with pytest.raises(ValidationError):
        C.betweenness_centrality(g, samples=0)


def test_sampled_betweenness_estimator_mean():
    g = connected_graph(200, 0.02, np.random.default_rng(8))
    exact = C.betweenness_centrality(g).values
    runs = [C.betweenness_centrality(g, samples=150, rng_seed=s).values for s in range(50)]
    mean = np.mean(runs, axis=0)
    top = np.argsort(-exact)[:10]
    rel = np.abs(mean[top] - exact[top]) / exact[top]
    assert rel.max() < 0.05


def test_linear_dependencies_sum_to_exact():
    for g in random_graphs(20, 60, seed=25):
        total = np.zeros(g.n_nodes)
        C._linear_kernel(g.offsets, g.adjacency, np.arange(g.n_nodes), total)
        np.testing.assert_allclose(total, oracles.betweenness(adj_of(g)), atol=1e-9, rtol=0)


def test_pivot_sample_inclusion_probability():
    g = connected_graph(97, 0.05, np.random.default_rng(9))
    k, runs = 13, 4000
    hits = np.zeros(g.n_nodes)
    for seed in range(runs):
        piv = C.pivot_sample(g, k, seed)
        assert len(np.unique(piv)) == k
        hits[piv] += 1
    # binomial(runs, k/n) per node; 5 sigma band
    p = k / g.n_nodes
    assert np.all(np.abs(hits / runs - p) < 5 * np.sqrt(p * (1 - p) / runs))


def test_sampled_reproducible():
    g = gnp_graph(300, 0.02, np.random.default_rng(2))
    a = C.betweenness_centrality(g, samples=50, rng_seed=3)
    b = C.betweenness_centrality(g, samples=50, rng_seed=3, threads=4)
    assert np.array_equal(a.values, b.values)
    assert a.params["mode"] == "sampled" and a.params["samples"] == 50


# --- load --------------------------------------------------------------------


def test_load_single_edge():
    assert C.load_centrality(path_graph(2)).values.tolist() == [0, 0]


def test_load_path_matches_flow_oracle():
    want, _ = oracles.load(adj_of(path_graph(3)))
    assert C.load_centrality(path_graph(3)).values.tolist() == want == [0, 2, 0]


def test_load_cycle4():
    want, _ = oracles.load(adj_of(cycle_graph(4)))
    got = C.load_centrality(cycle_graph(4)).values
    np.testing.assert_allclose(got, want, atol=1e-12)
    # each node lies halfway on the two opposite-corner pairs, both directions
    np.testing.assert_allclose(got, [1.0] * 4)


def test_load_matches_flow_oracle_and_conserves():
    for g in random_graphs(25, 40, seed=23):
        want, want_abs = oracles.load(adj_of(g))
        got, absorbed = C.load_flows(g)
        np.testing.assert_allclose(got, want, atol=1e-9, rtol=0)
        np.testing.assert_allclose(absorbed, want_abs, atol=1e-9)


def test_load_conservation_component_sizes():
    g = gnp_graph(150, 0.015, np.random.default_rng(2))
    labels = np.unique(
        [min(v for v, d in enumerate(oracles.bfs(adj_of(g), s)) if d is not None)
         for s in range(g.n_nodes)], return_inverse=True)[1]
    sizes = np.bincount(labels)[labels]
    _, absorbed = C.load_flows(g)
    np.testing.assert_allclose(absorbed, sizes - 1, atol=1e-9)


# --- eigenvector -------------------------------------------------------------


def test_eigenvector_cycle():
    v = C.eigenvector_centrality(cycle_graph(5)).values
    np.testing.assert_allclose(v, 1 / math.sqrt(5), atol=1e-10)


def test_eigenvector_star_closed_form():
    v = C.eigenvector_centrality(star_graph(3)).values
    A = np.zeros((4, 4))
    A[0, 1:] = A[1:, 0] = 1
    w, vecs = np.linalg.eigh(A)
    ref = np.abs(vecs[:, np.argmax(w)])
    np.testing.assert_allclose(ref, [1 / math.sqrt(2)] + [1 / math.sqrt(6)] * 3, atol=1e-12)
    np.testing.assert_allclose(v, ref, atol=1e-9)


def test_eigenvector_residual_and_positivity():
    for g in random_graphs(30, 100, seed=24, connected=True, min_nodes=3):
        s = C.eigenvector_centrality(g)
        v = s.values
        A = np.zeros((g.n_nodes, g.n_nodes))
        e = g.edges()
        A[e[:, 0], e[:, 1]] = A[e[:, 1], e[:, 0]] = 1
        lam = v @ A @ v
        assert np.linalg.norm(A @ v - lam * v) <= 1e-8
        assert (v > 0).all()
        assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)


def test_eigenvector_largest_component_only():
    g = from_edges(6, [(0, 1), (2, 3), (3, 4), (4, 2)])
    v = C.eigenvector_centrality(g).values
    assert v[[0, 1, 5]].tolist() == [0, 0, 0]
    np.testing.assert_allclose(v[2:5], 1 / math.sqrt(3), atol=1e-10)


def test_eigenvector_nonconvergence_reports_residual():
    g = connected_graph(80, 0.05, np.random.default_rng(3))
    with pytest.raises(ConvergenceError) as ei:
        C.eigenvector_centrality(g, tolerance=1e-14, max_iters=3)
    assert ei.value.iterations == 3 and ei.value.residual > 0


# --- shared properties -------------------------------------------------------


def test_complete_graph():
    g = complete_graph(6)
    assert C.closeness_centrality(g).values.tolist() == [1.0] * 6
    assert C.betweenness_centrality(g).values.tolist() == [0.0] * 6
    assert C.load_centrality(g).values.tolist() == [0.0] * 6


@pytest.mark.parametrize("measure", C.MEASURES)
def test_permutation_equivariance(measure):
    rng = np.random.default_rng(31)
    g = connected_graph(60, 0.06, rng)
    perm = rng.permutation(g.n_nodes)
    a = C.compute(g, measure).values
    b = C.compute(_permuted(g, perm), measure).values
    np.testing.assert_allclose(b[perm], a, atol=1e-9)


@pytest.mark.parametrize("measure", C.MEASURES)
def test_values_finite_nonnegative(measure):
    g = gnp_graph(80, 0.03, np.random.default_rng(4))
    s = C.compute(g, measure)
    assert np.isfinite(s.values).all() and (s.values >= -1e-15).all()


def test_unknown_measure():
    with pytest.raises(ValueError):
        C.compute(path_graph(3), "katz")


# --- per-TN aggregation ------------------------------------------------------


def _tn(values):
    tn = np.asarray(values)
    return TnResult(tn, tn >= 0, frozenset(np.flatnonzero(tn == 0).tolist()))


def test_by_tn_ln_one():
    (b,) = C.centrality_by_tn([1.0, 1.0], _tn([0, 0]))
    assert b.ln_stat == 0.0 and b.n_positive == 2


def test_by_tn_mean_of_logs():
    rows = C.centrality_by_tn([5.0, math.e, math.e**2], _tn([0, 1, 1]))
    assert rows[1].ln_stat == pytest.approx(1.5)


def test_by_tn_zero_and_unreachable():
    rows = C.centrality_by_tn([0.0, 0.0, 2.0, 9.0], _tn([0, 1, 1, -1]))
    assert [(r.tn, r.n_nodes, r.n_zero) for r in rows] == [(0, 1, 1), (1, 2, 1)]
    assert rows[0].ln_stat is None
    assert rows[1].ln_stat == pytest.approx(math.log(2))


def test_by_tn_median():
    rows = C.centrality_by_tn([1.0, math.e, math.e**5], _tn([1, 1, 1]), "median")
    assert rows[0].ln_stat == pytest.approx(1.0)
    with pytest.raises(ValidationError):
        C.centrality_by_tn([1.0], _tn([0]), "mode")


def test_by_tn_matches_groupby_script():
    rng = np.random.default_rng(5)
    tn = rng.integers(-1, 6, size=400)
    vals = np.where(rng.random(400) < 0.2, 0.0, rng.exponential(size=400))
    groups = {}
    for t, x in zip(tn.tolist(), vals.tolist()):
        if t >= 0 and x > 0:
            groups.setdefault(t, []).append(math.log(x))
    for r in C.centrality_by_tn(vals, _tn(tn)):
        assert r.ln_stat == pytest.approx(math.fsum(groups[r.tn]) / len(groups[r.tn]), rel=1e-12)
