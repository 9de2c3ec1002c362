"""Layer generators and coupling constructions.

Two layer families:

* ER: uniform random graphs.  Plain generation is G(n, p); the coupling
  paths use exact-edge-count uniform sampling so coupling targets land
  deterministically.
* SF: preferential attachment.  Seed clique on m+1 nodes, then every new
  node attaches m edges to existing nodes with probability proportional to
  degree.  n=2000, m=2 gives exactly 3997 edges (mean degree 3.997).

Couplings:

* couple_asn builds a shared base of exactly the edge count that realizes
  the target neighbor-similarity, copies it into both layers, then tops up
  each layer with disjoint extra edges (uniform for ER, degree-preferential
  for SF).  Similarity = shared / union edge counts, so the target is hit
  by construction, not by search.
* couple_ddc relabels layer B by a permutation found with a hill climb over
  pairwise label swaps, moving the measured degree correlation toward the
  target without touching either layer's topology.

All randomness flows through a counter-based Philox generator; pass either
a seed integer or a ready Generator.  Same inputs, same graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleTargetError, InputError, UndefinedMetricError
from .multiplex import Edge, MultiplexGraph

__all__ = [
    "LayerSpec",
    "DdcResult",
    "RNG_NAME",
    "make_rng",
    "gen_er",
    "gen_sf",
    "sf_attachment",
    "sf_edge_count",
    "layer_edge_target",
    "independent_multiplex",
    "couple_asn",
    "couple_ddc",
]

RNG_NAME = "philox"


def make_rng(seed) -> np.random.Generator:
    """Philox generator from a seed, or pass a Generator through unchanged."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(int(seed)))


@dataclass(frozen=True)
class LayerSpec:
    """One layer to generate: family, node count, target mean degree."""

    kind: str
    n: int
    mean_degree: float

    def __post_init__(self):
        if self.kind not in ("er", "sf"):
            raise InputError(f"layer kind must be 'er' or 'sf', got {self.kind!r}")
        if self.n < 2:
            raise InputError(f"need n >= 2 nodes, got {self.n}")
        if not (0 < self.mean_degree < self.n - 1):
            raise InputError(
                f"mean_degree must lie in (0, n-1), got {self.mean_degree!r} for n={self.n}"
            )
        if self.kind == "sf" and self.mean_degree < 2:
            raise InputError("sf layers need mean_degree >= 2 (at least one edge per node)")


def gen_er(n: int, mean_degree: float, seed) -> frozenset[Edge]:
    """G(n, p) with p chosen to hit the target mean degree in expectation."""
    if n < 2:
        raise InputError(f"need n >= 2 nodes, got {n}")
    p = mean_degree / (n - 1)
    if not (0.0 <= p <= 1.0):
        raise InputError(
            f"mean_degree {mean_degree!r} needs edge probability {p!r} outside [0, 1]"
        )
    rng = make_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.shape[0]) < p
    return frozenset(zip(iu[keep].tolist(), ju[keep].tolist()))


def sf_attachment(mean_degree: float) -> int:
    """Edges attached per new node: m = round(mean_degree / 2)."""
    if mean_degree < 2:
        raise InputError(f"sf generation needs mean_degree >= 2, got {mean_degree!r}")
    return max(1, round(mean_degree / 2))


def sf_edge_count(n: int, m: int) -> int:
    """Exact edge count of the attachment process: seed clique plus m per
    added node."""
    if n <= m + 1:
        return n * (n - 1) // 2
    return m * (m + 1) // 2 + (n - m - 1) * m


def gen_sf(n: int, mean_degree: float, seed) -> frozenset[Edge]:
    """Preferential attachment with a complete seed on m+1 nodes.

    Every node beyond the seed picks m distinct existing targets with
    probability proportional to current degree (duplicate picks are
    resampled, keeping the graph simple).
    """
    m = sf_attachment(mean_degree)
    if n < 2:
        raise InputError(f"need n >= 2 nodes, got {n}")
    rng = make_rng(seed)
    edges: list[Edge] = []
    stubs: list[int] = []
    core = min(n, m + 1)
    for u in range(core):
        for v in range(u + 1, core):
            edges.append((u, v))
            stubs.append(u)
            stubs.append(v)
    for v in range(core, n):
        targets: set[int] = set()
        while len(targets) < m:
            targets.add(stubs[int(rng.integers(0, len(stubs)))])
        for u in sorted(targets):
            edges.append((u, v))
            stubs.append(u)
            stubs.append(v)
    return frozenset(edges)


def layer_edge_target(spec: LayerSpec) -> int:
    """Exact edge count the coupling paths aim for."""
    if spec.kind == "er":
        return round(spec.n * spec.mean_degree / 2)
    return sf_edge_count(spec.n, sf_attachment(spec.mean_degree))


def independent_multiplex(
    spec_a: LayerSpec, spec_b: LayerSpec, seed, shuffle_b: bool = True
) -> MultiplexGraph:
    """Two independently generated layers over one node set.

    shuffle_b applies a random relabeling to layer B, destroying any
    node-identity correlation the two constructions share (degree
    correlation ~ 0); with shuffle_b=False growth order aligns, which for
    two attachment processes leaves strongly correlated degrees.
    """
    if spec_a.n != spec_b.n:
        raise InputError(f"layer node counts differ: {spec_a.n} vs {spec_b.n}")
    rng = make_rng(seed)
    gen = {"er": gen_er, "sf": gen_sf}
    edges_a = gen[spec_a.kind](spec_a.n, spec_a.mean_degree, rng)
    edges_b = gen[spec_b.kind](spec_b.n, spec_b.mean_degree, rng)
    if shuffle_b:
        relabel = rng.permutation(spec_b.n)
        edges_b = frozenset(
            (int(relabel[u]), int(relabel[v]))
            if relabel[u] < relabel[v]
            else (int(relabel[v]), int(relabel[u]))
            for u, v in edges_b
        )
    return MultiplexGraph(n=spec_a.n, edges_a=frozenset(edges_a), edges_b=edges_b)


# --- asn coupling -----------------------------------------------------------


def _sample_uniform_pairs(
    n: int, count: int, rng: np.random.Generator, forbidden: set[Edge]
) -> set[Edge]:
    """Uniformly random simple edges avoiding `forbidden`, exactly `count`
    of them (rejection sampling; the graphs here are sparse)."""
    if count > n * (n - 1) // 2 - len(forbidden):
        raise InfeasibleTargetError(f"cannot place {count} extra edges on {n} nodes")
    picked: set[Edge] = set()
    while len(picked) < count:
        u = int(rng.integers(0, n))
        v = int(rng.integers(0, n))
        if u == v:
            continue
        e = (u, v) if u < v else (v, u)
        if e in forbidden or e in picked:
            continue
        picked.add(e)
    return picked


def _attachment_pool(n: int, need: int, rng: np.random.Generator) -> list[Edge]:
    """Edges of the smallest attachment growth with at least `need` edges,
    in deterministic sorted order."""
    m = 1
    while sf_edge_count(n, m) < need:
        if m >= n - 1:
            raise InfeasibleTargetError(
                f"cannot supply {need} attachment edges on {n} nodes"
            )
        m += 1
    return sorted(gen_sf(n, 2 * m, rng))


def couple_asn(
    spec_a: LayerSpec,
    spec_b: LayerSpec,
    target_asn: float,
    seed,
    tolerance: float = 0.01,
) -> MultiplexGraph:
    """Two same-family layers whose neighbor similarity hits the target
    while each layer keeps its family's degree structure.

    Both layers are edge subsets of one family-shaped pool: uniform random
    pairs for uniform layers, one larger attachment growth for heavy-tailed
    layers.  The shared part and the two layer-only parts are disjoint
    subsets of the pool, so the shared count (hence the similarity) is exact
    up to integer rounding, and layer topology does not drift as the target
    moves: only the overlap fraction changes.
    """
    if spec_a.n != spec_b.n:
        raise InputError(f"layer node counts differ: {spec_a.n} vs {spec_b.n}")
    if spec_a.kind != spec_b.kind:
        raise InputError("asn coupling requires both layers of the same kind")
    if not (0.0 <= target_asn <= 1.0):
        raise InputError(f"target_asn must lie in [0, 1], got {target_asn!r}")
    if tolerance <= 0:
        raise InputError(f"tolerance must be positive, got {tolerance!r}")

    n = spec_a.n
    rng = make_rng(seed)
    m_a = layer_edge_target(spec_a)
    m_b = layer_edge_target(spec_b)

    shared = round(target_asn * (m_a + m_b) / (1.0 + target_asn))
    feasible_max = min(m_a, m_b) / max(m_a, m_b)
    if shared > min(m_a, m_b):
        raise InfeasibleTargetError(
            f"target asn {target_asn} exceeds the maximum {feasible_max:.4f} "
            f"for layer edge counts {m_a} and {m_b}"
        )
    realized = shared / (m_a + m_b - shared)
    if abs(realized - target_asn) > tolerance:
        raise InfeasibleTargetError(
            f"target asn {target_asn} unreachable: closest integer shared count "
            f"gives {realized:.6f}"
        )

    if spec_a.kind == "er":
        base = _sample_uniform_pairs(n, shared, rng, forbidden=set())
        extras_a = _sample_uniform_pairs(n, m_a - shared, rng, forbidden=set(base))
        extras_b = _sample_uniform_pairs(
            n, m_b - shared, rng, forbidden=base | extras_a
        )
    else:
        # pool sized for zero overlap so the growth law is the same at every
        # target: layers are always equal-factor thins of one growth
        pool = _attachment_pool(n, m_a + m_b, rng)
        picked = rng.choice(len(pool), size=m_a + m_b - shared, replace=False)
        base = {pool[i] for i in picked[:shared].tolist()}
        extras_a = {pool[i] for i in picked[shared : m_a].tolist()}
        extras_b = {pool[i] for i in picked[m_a:].tolist()}

    return MultiplexGraph(
        n=n, edges_a=frozenset(base | extras_a), edges_b=frozenset(base | extras_b)
    )


# --- ddc coupling -----------------------------------------------------------


@dataclass(frozen=True)
class DdcResult:
    """Outcome of degree-correlation targeting.

    achieved is the measured correlation of the returned graph; target_met
    says whether it landed within tolerance (if not, the caller gets the
    best permutation found, not an error).
    """

    graph: MultiplexGraph
    achieved: float
    target_met: bool


def _degree_counts(n: int, edges: frozenset[Edge]) -> np.ndarray:
    d = np.zeros(n, dtype=np.int64)
    if edges:
        arr = np.asarray(sorted(edges), dtype=np.int64)
        np.add.at(d, arr[:, 0], 1)
        np.add.at(d, arr[:, 1], 1)
    return d


def _pearson_stats(da: np.ndarray, db: np.ndarray):
    var_a = float(da.var())
    var_b = float(db.var())
    if var_a <= 0 or var_b <= 0:
        raise UndefinedMetricError(
            "degree correlation undefined: a layer has constant degree"
        )
    return float(da.mean()), float(db.mean()), math.sqrt(var_a * var_b)


def couple_ddc(
    edges_a: frozenset[Edge],
    edges_b: frozenset[Edge],
    n: int,
    target_ddc: float,
    seed,
    tolerance: float = 0.02,
    swap_budget: int | None = None,
) -> DdcResult:
    """Relabel layer B so the cross-layer degree correlation approaches the
    target.

    Hill climb over pairwise label swaps: a swap of labels i, j changes the
    degree cross-moment by (da_i - da_j) * (db_perm_j - db_perm_i), an O(1)
    update, and is kept only if it strictly shrinks the distance to the
    target.  Starts from the best of identity / random / sorted / opposed
    assignments.  Both layers keep their internal topology; only B's node
    ids move.
    """
    if not (-1.0 <= target_ddc <= 1.0):
        raise InputError(f"target_ddc must lie in [-1, 1], got {target_ddc!r}")
    if tolerance <= 0:
        raise InputError(f"tolerance must be positive, got {tolerance!r}")
    rng = make_rng(seed)
    if swap_budget is None:
        swap_budget = 50 * n

    probe = MultiplexGraph.from_edges(n, edges_a, edges_b)
    da = _degree_counts(n, probe.edges_a).astype(np.float64)
    db = _degree_counts(n, probe.edges_b).astype(np.float64)
    mean_a, mean_b, sigma_ab = _pearson_stats(da, db)

    def beta_of(cross: float) -> float:
        return (cross / n - mean_a * mean_b) / sigma_ab

    # perm[i] = original B node whose role lands on node i.
    candidates = [
        np.arange(n),
        rng.permutation(n),
        np.argsort(db)[np.argsort(np.argsort(da))],
        np.argsort(db)[::-1][np.argsort(np.argsort(da))],
    ]
    best_perm, best_cross = None, None
    for cand in candidates:
        cross = float((da * db[cand]).sum())
        if best_cross is None or abs(beta_of(cross) - target_ddc) < abs(
            beta_of(best_cross) - target_ddc
        ):
            best_perm, best_cross = cand.copy(), cross

    perm, cross = best_perm, best_cross
    gap = abs(beta_of(cross) - target_ddc)
    if gap > tolerance:
        pairs = rng.integers(0, n, size=(swap_budget, 2))
        for i, j in pairs:
            if i == j:
                continue
            delta = (da[i] - da[j]) * (db[perm[j]] - db[perm[i]])
            new_gap = abs(beta_of(cross + delta) - target_ddc)
            if new_gap < gap:
                perm[i], perm[j] = perm[j], perm[i]
                cross += delta
                gap = new_gap
                if gap <= tolerance:
                    break

    position = np.empty(n, dtype=np.int64)
    position[perm] = np.arange(n)
    relabeled = frozenset(
        (int(position[u]), int(position[v]))
        if position[u] < position[v]
        else (int(position[v]), int(position[u]))
        for u, v in probe.edges_b
    )
    graph = MultiplexGraph(n=n, edges_a=probe.edges_a, edges_b=relabeled)
    achieved = beta_of(cross)
    return DdcResult(graph=graph, achieved=achieved, target_met=gap <= tolerance)
