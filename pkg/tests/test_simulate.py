"""Monte Carlo engine tests.

Exact checks pin the deterministic skeleton (component kernel, full/zero
occupation, monotone coupling, reproducibility); statistical checks with
frozen seeds compare the two engines against each other and against the
analytics.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mxepi.errors import InputError
from mxepi.multiplex import MultiplexGraph
from mxepi.netgen import LayerSpec, independent_multiplex
from mxepi.simulate import (
    RateGrid,
    SimConfig,
    SimResult,
    _components,
    _components_impl,
    _prepared,
    _realization_rng,
    percolate_once,
    percolate_seed_fraction,
    phase_diagram,
    run_ensemble,
    sir_once,
)
from mxepi.theory import SpreadingRate


def union_components(n, edges):
    """Reference BFS component sizes for the union graph."""
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = [False] * n
    comp = [0] * n
    for start in range(n):
        if seen[start]:
            continue
        stack, members = [start], []
        seen[start] = True
        while stack:
            u = stack.pop()
            members.append(u)
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
        for u in members:
            comp[u] = len(members)
    return comp


# --- union-find kernel -------------------------------------------------------


def test_components_kernel_hand_oracle():
    eu = np.array([0, 1, 4], dtype=np.int64)
    ev = np.array([1, 2, 5], dtype=np.int64)
    for fn in (_components_impl, _components):
        largest, seed_size = fn(6, eu, ev, 4)
        assert largest == 3
        assert seed_size == 2
        _, alone = fn(6, eu, ev, 3)
        assert alone == 1


def test_components_kernel_no_edges():
    empty = np.empty(0, dtype=np.int64)
    for fn in (_components_impl, _components):
        largest, seed_size = fn(5, empty, empty, 2)
        assert largest == 1
        assert seed_size == 1


def test_components_jit_matches_python_and_bfs():
    rng = np.random.default_rng(31)
    for _ in range(10):
        n = int(rng.integers(2, 60))
        m = int(rng.integers(0, 3 * n))
        pairs = set()
        while len(pairs) < m:
            u, v = rng.integers(0, n, size=2)
            if u != v:
                pairs.add((min(u, v), max(u, v)))
        edges = sorted(pairs)
        if edges:
            eu = np.array([e[0] for e in edges], dtype=np.int64)
            ev = np.array([e[1] for e in edges], dtype=np.int64)
        else:
            eu = ev = np.empty(0, dtype=np.int64)
        comp = union_components(n, edges)
        seed = int(rng.integers(0, n))
        for fn in (_components_impl, _components):
            largest, seed_size = fn(n, eu, ev, seed)
            assert largest == max(comp)
            assert seed_size == comp[seed]


# --- single realizations ------------------------------------------------------


@pytest.fixture(scope="module")
def small_graph():
    return independent_multiplex(
        LayerSpec("er", 300, 5.0), LayerSpec("er", 300, 4.0), seed=12
    )


def test_full_occupation_matches_bfs(small_graph):
    g = small_graph
    comp = union_components(g.n, sorted(g.edges_a | g.edges_b))
    rate = SpreadingRate(1.0, 1.0)
    assert percolate_once(g, rate, 5) == max(comp) / g.n
    # seed component: replay the stream to learn which seed node was drawn
    rng = np.random.default_rng(5)
    seed_node = int(rng.integers(0, g.n))
    assert percolate_seed_fraction(g, rate, 5) == comp[seed_node] / g.n


def test_zero_rate_isolates_the_seed(small_graph):
    g = small_graph
    rate = SpreadingRate(0.0, 0.0)
    assert percolate_once(g, rate, 3) == 1 / g.n
    assert percolate_seed_fraction(g, rate, 3) == 1 / g.n
    assert sir_once(g, rate, 17, 3) == 1 / g.n


def test_sir_full_rate_covers_seed_component(small_graph):
    g = small_graph
    comp = union_components(g.n, sorted(g.edges_a | g.edges_b))
    for seed_node in (0, 10, 299):
        got = sir_once(g, SpreadingRate(1.0, 1.0), seed_node, 8)
        assert got == comp[seed_node] / g.n


def test_sir_seed_node_validation(small_graph):
    with pytest.raises(InputError):
        sir_once(small_graph, SpreadingRate(0.5, 0.5), -1, 0)
    with pytest.raises(InputError):
        sir_once(small_graph, SpreadingRate(0.5, 0.5), small_graph.n, 0)


def test_shared_edges_make_rates_interchangeable():
    # identical layers -> every edge is shared; only the combined rate matters,
    # so swapping (0.5, 0) for (0, 0.5) replays the exact same occupation
    layer = LayerSpec("er", 150, 4.0)
    base = independent_multiplex(layer, layer, seed=6, shuffle_b=False)
    g = MultiplexGraph.from_edges(base.n, base.edges_a, base.edges_a)
    for r in range(10):
        rng1 = _realization_rng(9, r)
        rng2 = _realization_rng(9, r)
        s1 = percolate_once(g, SpreadingRate(0.5, 0.0), rng1)
        s2 = percolate_once(g, SpreadingRate(0.0, 0.5), rng2)
        assert s1 == s2


def test_monotone_coupling_is_exact(small_graph):
    g = small_graph
    cfg = SimConfig(realizations=25, master_seed=14, keep_realizations=True)
    low = run_ensemble(g, SpreadingRate(0.10, 0.10), cfg).per_realization
    mid = run_ensemble(g, SpreadingRate(0.30, 0.10), cfg).per_realization
    high = run_ensemble(g, SpreadingRate(0.30, 0.30), cfg).per_realization
    for lo, me, hi in zip(low, mid, high):
        assert lo <= me <= hi


# --- ensembles ----------------------------------------------------------------


def test_run_ensemble_bitwise_deterministic(small_graph):
    cfg = SimConfig(realizations=40, master_seed=5)
    rate = SpreadingRate(0.12, 0.12)
    first = run_ensemble(small_graph, rate, cfg)
    second = run_ensemble(small_graph, rate, cfg)
    assert first == second


def test_run_ensemble_workers_do_not_change_results(small_graph):
    cfg = SimConfig(realizations=30, master_seed=5, keep_realizations=True)
    rate = SpreadingRate(0.15, 0.1)
    serial = run_ensemble(small_graph, rate, cfg, workers=None)
    parallel = run_ensemble(small_graph, rate, cfg, workers=3)
    assert serial == parallel


def test_single_realization_has_zero_stderr(small_graph):
    cfg = SimConfig(realizations=1, master_seed=2)
    res = run_ensemble(small_graph, SpreadingRate(0.2, 0.2), cfg)
    assert res.stderr_s == 0.0


def test_kept_realizations_reproduce_aggregates(small_graph):
    cfg = SimConfig(realizations=60, master_seed=9, keep_realizations=True)
    res = run_ensemble(small_graph, SpreadingRate(0.14, 0.1), cfg)
    vals = np.asarray(res.per_realization)
    assert len(vals) == 60
    assert res.mean_s == pytest.approx(vals.mean(), abs=1e-15)
    assert res.stderr_s == pytest.approx(vals.std(ddof=1) / math.sqrt(60), abs=1e-15)
    exceed = vals[vals > cfg.outbreak_cutoff]
    assert res.outbreak_probability == pytest.approx(exceed.size / 60, abs=1e-15)
    assert res.giant_fraction_mean == pytest.approx(exceed.mean(), abs=1e-15)


def test_subcritical_ensemble_has_no_outbreaks(small_graph):
    cfg = SimConfig(realizations=50, master_seed=3, outbreak_cutoff=0.05)
    res = run_ensemble(small_graph, SpreadingRate(0.01, 0.01), cfg)
    assert res.outbreak_probability == 0.0
    assert res.giant_fraction_mean == 0.0
    assert res.mean_s < 0.05


def test_sim_config_validation():
    with pytest.raises(InputError):
        SimConfig(realizations=0)
    with pytest.raises(InputError):
        SimConfig(mode="gossip")
    with pytest.raises(InputError):
        SimConfig(outbreak_cutoff=0.0)
    with pytest.raises(InputError):
        SimConfig(outbreak_cutoff=1.0)


def test_sir_agrees_with_percolation_seed_component():
    # with one-step recovery the SIR final set has the law of the seed's
    # percolation component; compare the two estimators on disjoint streams
    g = independent_multiplex(
        LayerSpec("er", 200, 4.0), LayerSpec("er", 200, 3.0), seed=9
    )
    rate = SpreadingRate(0.25, 0.25)
    reps = 400
    sir = run_ensemble(g, rate, SimConfig(realizations=reps, master_seed=21, mode="sir"))
    vals = np.asarray(
        [percolate_seed_fraction(g, rate, _realization_rng(77, r)) for r in range(reps)]
    )
    perc_mean = vals.mean()
    perc_se = vals.std(ddof=1) / math.sqrt(reps)
    combined = math.hypot(sir.stderr_s, perc_se)
    assert abs(sir.mean_s - perc_mean) < 3.0 * combined


# --- sweeps -------------------------------------------------------------------


def test_rate_grid_validation():
    with pytest.raises(InputError):
        RateGrid((0.0, 1.2), (0.0,))
    with pytest.raises(InputError):
        RateGrid((0.0,), (-0.1,))
    with pytest.raises(InputError):
        RateGrid.square(0.5, 0)
    grid = RateGrid.square(0.4, 5)
    assert grid.lambda_a_values == grid.lambda_b_values
    assert grid.lambda_a_values[0] == 0.0
    assert grid.lambda_a_values[-1] == pytest.approx(0.4)


def test_phase_diagram_rows_and_corners(small_graph):
    g = small_graph
    grid = RateGrid((0.0, 0.3), (0.0, 0.3))
    cfg = SimConfig(realizations=30, master_seed=1)
    sweep = phase_diagram(g, grid, cfg)
    assert len(sweep.rows) == 4
    assert [(r.lambda_a, r.lambda_b) for r in sweep.rows] == [
        (0.0, 0.0),
        (0.0, 0.3),
        (0.3, 0.0),
        (0.3, 0.3),
    ]
    origin = sweep.rows[0]
    assert origin.s_theory == pytest.approx(0.0, abs=1e-12)
    assert origin.s_sim == pytest.approx(1 / g.n, abs=1e-15)
    hot = sweep.rows[-1]
    assert abs(hot.s_sim - hot.s_theory) < 0.02
    assert hot.outbreak_prob == 1.0
    assert hot.realizations == 30


def test_phase_diagram_theory_only(small_graph):
    grid = RateGrid((0.2,), (0.0, 0.25))
    sweep = phase_diagram(small_graph, grid, SimConfig(realizations=5), theory_only=True)
    assert len(sweep.rows) == 2
    for row in sweep.rows:
        assert math.isnan(row.s_sim)
        assert math.isnan(row.stderr)
        assert math.isnan(row.outbreak_prob)
        assert row.realizations == 0
        assert 0.0 <= row.s_theory <= 1.0


def test_phase_diagram_reports_progress(small_graph):
    calls = []
    grid = RateGrid((0.1,), (0.1, 0.2))
    phase_diagram(
        small_graph,
        grid,
        SimConfig(realizations=2),
        theory_only=True,
        progress=lambda done, total: calls.append((done, total)),
    )
    assert calls == [(1, 2), (2, 2)]


# --- properties ---------------------------------------------------------------


@st.composite
def tiny_multiplexes(draw):
    n = draw(st.integers(min_value=2, max_value=12))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges_a = draw(st.sets(st.sampled_from(pairs), max_size=len(pairs)))
    edges_b = draw(st.sets(st.sampled_from(pairs), max_size=len(pairs)))
    return MultiplexGraph.from_edges(n, edges_a, edges_b)


@settings(max_examples=25, deadline=None)
@given(
    g=tiny_multiplexes(),
    la=st.floats(min_value=0.0, max_value=1.0),
    lb=st.floats(min_value=0.0, max_value=1.0),
    seed=st.integers(min_value=0, max_value=2**32 - 1),
)
def test_outcome_fractions_are_physical(g, la, lb, seed):
    rate = SpreadingRate(la, lb)
    rng1 = _realization_rng(seed, 0)
    rng2 = _realization_rng(seed, 0)
    largest = percolate_once(g, rate, rng1)
    from_seed = percolate_seed_fraction(g, rate, rng2)
    assert 1 / g.n <= largest <= 1.0
    assert 1 / g.n <= from_seed <= largest
    s = sir_once(g, rate, 0, seed)
    assert 1 / g.n <= s <= 1.0
