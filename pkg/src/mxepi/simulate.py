"""Monte Carlo engines: bond percolation and explicit two-route SIR.

Both engines treat the three edge classes the way the analytics do: A-only
edges transmit with lambda_a, B-only with lambda_b, and a shared edge gets
exactly one trial at the combined rate lambda_c (never two independent
per-layer chances).

Percolation mode occupies every edge independently and reads off connected
components with a union-find pass (numba-compiled when available).  SIR mode
runs synchronous discrete-time dynamics where every infected node attempts
each susceptible neighbor once and then recovers; with one-step recovery the
final infected set has exactly the law of the seed's component under bond
percolation, which the test suite checks statistically.

Reproducibility: realization r of a run with master seed s draws from a
counter-based Philox stream keyed by s with its counter block set to r, so
any subset of realizations can be computed in any order, or in parallel,
with bitwise-identical results.  Every realization consumes its stream in a
fixed order (seed node first, then one uniform per edge grouped by class),
which makes outcomes monotone in the rates realization-by-realization: the
same uniforms are just compared against higher thresholds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from multiprocessing import Pool

import numpy as np

from .errors import ConvergenceError, InputError
from .multiplex import MultiplexGraph, classify_edges, empirical_vector_distribution
from .theory import SpreadingRate, outbreak_size

__all__ = [
    "SimConfig",
    "SimResult",
    "RateGrid",
    "SweepRow",
    "SweepResult",
    "percolate_once",
    "percolate_seed_fraction",
    "sir_once",
    "run_ensemble",
    "phase_diagram",
]


def _components_impl(n, edge_u, edge_v, seed_node):
    # Union-find with path halving and union by size; returns the largest
    # component size and the size of the seed node's component.
    parent = np.arange(n, dtype=np.int64)
    size = np.ones(n, dtype=np.int64)
    for k in range(edge_u.shape[0]):
        x = edge_u[k]
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        y = edge_v[k]
        while parent[y] != y:
            parent[y] = parent[parent[y]]
            y = parent[y]
        if x == y:
            continue
        if size[x] < size[y]:
            x, y = y, x
        parent[y] = x
        size[x] += size[y]
    largest = np.int64(0)
    for i in range(n):
        if parent[i] == i and size[i] > largest:
            largest = size[i]
    s = seed_node
    while parent[s] != s:
        s = parent[s]
    return largest, size[s]


try:
    from numba import njit

    _components = njit(cache=True)(_components_impl)
except ImportError:  # pragma: no cover - numba is a hard dependency
    _components = _components_impl


@dataclass(frozen=True)
class _Prepared:
    """Graph unpacked into flat arrays, shared by all realizations."""

    n: int
    class_u: tuple[np.ndarray, np.ndarray, np.ndarray]
    class_v: tuple[np.ndarray, np.ndarray, np.ndarray]
    indptr: tuple[np.ndarray, np.ndarray, np.ndarray]
    neighbors: tuple[np.ndarray, np.ndarray, np.ndarray]


def _edge_arrays(edges):
    if not edges:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty.copy()
    arr = np.asarray(sorted(edges), dtype=np.int64)
    return np.ascontiguousarray(arr[:, 0]), np.ascontiguousarray(arr[:, 1])


def _csr(n, u, v):
    deg = np.zeros(n, dtype=np.int64)
    np.add.at(deg, u, 1)
    np.add.at(deg, v, 1)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(deg, out=indptr[1:])
    neighbors = np.empty(indptr[-1], dtype=np.int64)
    cursor = indptr[:-1].copy()
    for a, b in zip(u.tolist(), v.tolist()):
        neighbors[cursor[a]] = b
        cursor[a] += 1
        neighbors[cursor[b]] = a
        cursor[b] += 1
    return indptr, neighbors


@lru_cache(maxsize=8)
def _prepared(g: MultiplexGraph) -> _Prepared:
    cls = classify_edges(g)
    arrays = [_edge_arrays(cls.a_only), _edge_arrays(cls.b_only), _edge_arrays(cls.shared)]
    csr = [_csr(g.n, u, v) for u, v in arrays]
    return _Prepared(
        n=g.n,
        class_u=tuple(a[0] for a in arrays),
        class_v=tuple(a[1] for a in arrays),
        indptr=tuple(c[0] for c in csr),
        neighbors=tuple(c[1] for c in csr),
    )


def _realization_rng(master_seed: int, index: int) -> np.random.Generator:
    # One Philox counter block per realization: streams never overlap and
    # can be generated in any order.
    return np.random.Generator(np.random.Philox(key=int(master_seed), counter=index << 128))


def _occupied_components(prep: _Prepared, rate: SpreadingRate, rng: np.random.Generator):
    seed_node = int(rng.integers(0, prep.n))
    lam = (rate.lambda_a, rate.lambda_b, rate.lambda_c)
    keep_u, keep_v = [], []
    for i in range(3):
        draws = rng.random(prep.class_u[i].shape[0])
        mask = draws < lam[i]
        keep_u.append(prep.class_u[i][mask])
        keep_v.append(prep.class_v[i][mask])
    eu = np.concatenate(keep_u)
    ev = np.concatenate(keep_v)
    largest, seed_size = _components(prep.n, eu, ev, seed_node)
    return int(largest), int(seed_size), seed_node


def percolate_once(g: MultiplexGraph, rate: SpreadingRate, seed) -> float:
    """Occupy edges by class rate; return the largest component fraction."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    largest, _, _ = _occupied_components(_prepared(g), rate, rng)
    return largest / g.n


def percolate_seed_fraction(g: MultiplexGraph, rate: SpreadingRate, seed) -> float:
    """Same occupation process, but return the random seed node's component
    fraction (the percolation analogue of a single-seed outbreak)."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    _, seed_size, _ = _occupied_components(_prepared(g), rate, rng)
    return seed_size / g.n


def sir_once(g: MultiplexGraph, rate: SpreadingRate, seed_node: int, seed) -> float:
    """Synchronous SIR from one seed; returns the final recovered fraction.

    Each step: every currently infected node tries each still-susceptible
    neighbor once (per-class rates), then recovers.  Node order within a
    step is fixed (ascending), so a given random stream fully determines
    the outcome.
    """
    if not (0 <= seed_node < g.n):
        raise InputError(f"seed_node {seed_node} outside 0..{g.n - 1}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return _sir_from_prepared(_prepared(g), rate, seed_node, rng)


# --- ensembles --------------------------------------------------------------


@dataclass(frozen=True)
class SimConfig:
    """Ensemble settings: size, seeding, engine, and the small/giant cutoff."""

    realizations: int = 500
    master_seed: int = 0
    mode: str = "percolation"
    outbreak_cutoff: float = 0.01
    keep_realizations: bool = False

    def __post_init__(self):
        if self.realizations < 1:
            raise InputError(f"realizations must be >= 1, got {self.realizations}")
        if self.mode not in ("percolation", "sir"):
            raise InputError(f"mode must be 'percolation' or 'sir', got {self.mode!r}")
        if not (0.0 < self.outbreak_cutoff < 1.0):
            raise InputError(
                f"outbreak_cutoff must lie in (0, 1), got {self.outbreak_cutoff!r}"
            )


@dataclass(frozen=True)
class SimResult:
    """Ensemble aggregates.

    mean_s averages the per-realization outcome (largest-component fraction
    in percolation mode, recovered fraction in SIR mode).
    giant_fraction_mean conditions on realizations above the cutoff, which
    removes the early-extinction mass when seeds matter; it is 0.0 when no
    realization exceeded the cutoff.
    """

    mean_s: float
    stderr_s: float
    giant_fraction_mean: float
    outbreak_probability: float
    per_realization: tuple[float, ...] | None = None


def _single_realization(args) -> float:
    prep, la, lb, mode, master_seed, index = args
    rng = _realization_rng(master_seed, index)
    rate = SpreadingRate(la, lb)
    if mode == "percolation":
        largest, _, _ = _occupied_components(prep, rate, rng)
        return largest / prep.n
    seed_node = int(rng.integers(0, prep.n))
    return _sir_from_prepared(prep, rate, seed_node, rng)


def _sir_from_prepared(prep: _Prepared, rate: SpreadingRate, seed_node: int, rng) -> float:
    lam = (rate.lambda_a, rate.lambda_b, rate.lambda_c)
    status = np.zeros(prep.n, dtype=np.uint8)
    status[seed_node] = 1
    frontier = [seed_node]
    recovered = 0
    while frontier:
        fresh: list[int] = []
        for u in frontier:
            for i in range(3):
                lo, hi = prep.indptr[i][u], prep.indptr[i][u + 1]
                if lo == hi or lam[i] == 0.0:
                    continue
                block = prep.neighbors[i][lo:hi]
                candidates = block[status[block] == 0]
                if candidates.shape[0] == 0:
                    continue
                hits = candidates[rng.random(candidates.shape[0]) < lam[i]]
                for v in hits.tolist():
                    status[v] = 1
                    fresh.append(v)
        for u in frontier:
            status[u] = 2
        recovered += len(frontier)
        frontier = sorted(fresh)
    return recovered / prep.n


def _chunk_worker(args) -> list[float]:
    prep, la, lb, mode, master_seed, indices = args
    return [
        _single_realization((prep, la, lb, mode, master_seed, index)) for index in indices
    ]


def run_ensemble(
    g: MultiplexGraph, rate: SpreadingRate, cfg: SimConfig, workers: int | None = None
) -> SimResult:
    """Average cfg.realizations independent realizations.

    Per-realization streams are derived from (master_seed, index), and the
    reduction runs in index order, so the result is bitwise identical for
    any worker count.
    """
    prep = _prepared(g)
    indices = list(range(cfg.realizations))
    if workers is not None and workers > 1 and cfg.realizations > 1:
        chunks = [
            (prep, rate.lambda_a, rate.lambda_b, cfg.mode, cfg.master_seed, part)
            for part in _split(indices, workers)
        ]
        with Pool(processes=min(workers, len(chunks))) as pool:
            parts = pool.map(_chunk_worker, chunks)
        values = [v for part in parts for v in part]
    else:
        values = [
            _single_realization(
                (prep, rate.lambda_a, rate.lambda_b, cfg.mode, cfg.master_seed, index)
            )
            for index in indices
        ]
    return _aggregate(values, cfg)


def _split(indices: list[int], parts: int) -> list[list[int]]:
    # Contiguous index blocks, order preserved.
    parts = max(1, min(parts, len(indices)))
    step = math.ceil(len(indices) / parts)
    return [indices[i : i + step] for i in range(0, len(indices), step)]


def _aggregate(values: list[float], cfg: SimConfig) -> SimResult:
    arr = np.asarray(values)
    mean = float(arr.mean())
    stderr = float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else 0.0
    exceeding = arr[arr > cfg.outbreak_cutoff]
    return SimResult(
        mean_s=mean,
        stderr_s=stderr,
        giant_fraction_mean=float(exceeding.mean()) if exceeding.size else 0.0,
        outbreak_probability=float(exceeding.size / arr.size),
        per_realization=tuple(float(v) for v in values) if cfg.keep_realizations else None,
    )


# --- sweeps -----------------------------------------------------------------


@dataclass(frozen=True)
class RateGrid:
    """Rate pairs to evaluate: the cross product of the two axis value lists."""

    lambda_a_values: tuple[float, ...]
    lambda_b_values: tuple[float, ...]

    def __post_init__(self):
        for name, values in (
            ("lambda_a_values", self.lambda_a_values),
            ("lambda_b_values", self.lambda_b_values),
        ):
            for v in values:
                if not (0.0 <= v <= 1.0):
                    raise InputError(f"{name} entry {v!r} outside [0, 1]")

    @classmethod
    def square(cls, stop: float, steps: int) -> "RateGrid":
        if steps < 1:
            raise InputError(f"steps must be >= 1, got {steps}")
        axis = tuple(float(x) for x in np.linspace(0.0, stop, steps))
        return cls(lambda_a_values=axis, lambda_b_values=axis)


@dataclass(frozen=True)
class SweepRow:
    lambda_a: float
    lambda_b: float
    s_theory: float
    s_sim: float
    stderr: float
    outbreak_prob: float
    realizations: int


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]


def phase_diagram(
    g: MultiplexGraph,
    grid: RateGrid,
    cfg: SimConfig,
    theory_only: bool = False,
    workers: int | None = None,
    progress=None,
) -> SweepResult:
    """Evaluate theory and (optionally) the Monte Carlo ensemble on a rate
    grid.

    The theory column comes from the graph's own empirical vector-degree
    distribution, so simulation and analytics describe the same instance.
    Grid points sitting exactly on the critical surface can exhaust the
    fixed-point iteration budget; the last iterate is used there (the
    remaining error is far below simulation resolution).
    """
    dist = empirical_vector_distribution(g)
    rows = []
    total = len(grid.lambda_a_values) * len(grid.lambda_b_values)
    done = 0
    for la in grid.lambda_a_values:
        for lb in grid.lambda_b_values:
            rate = SpreadingRate(la, lb)
            try:
                s_theory = outbreak_size(dist, rate).s
            except ConvergenceError as err:
                s_theory = err.last.s
            if theory_only:
                rows.append(
                    SweepRow(la, lb, s_theory, math.nan, math.nan, math.nan, 0)
                )
            else:
                res = run_ensemble(g, rate, cfg, workers=workers)
                rows.append(
                    SweepRow(
                        la,
                        lb,
                        s_theory,
                        res.mean_s,
                        res.stderr_s,
                        res.outbreak_probability,
                        cfg.realizations,
                    )
                )
            done += 1
            if progress is not None:
                progress(done, total)
    return SweepResult(rows=tuple(rows))
