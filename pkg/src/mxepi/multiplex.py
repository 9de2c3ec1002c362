"""Two-layer multiplex graph model.

A multiplex here is a pair of simple undirected graphs (layer A, layer B)
over the same node set 0..n-1.  Every edge falls into one of three classes:

* A-only: present in layer A but not layer B,
* B-only: present in layer B but not layer A,
* shared: present in both layers (one node pair, two routes).

Per node we track the vector degree (a_only, b_only, shared); its magnitude
a_only + b_only + shared counts distinct neighbors reachable through either
layer.  On top of that the module provides the two coupling metrics used
throughout the package:

* asn  -- average similarity of neighbors: total shared-degree over total
          vector-degree magnitude (1.0 for identical layers, 0.0 for
          edge-disjoint layers), and
* ddc  -- degree-degree correlation between a node's layer-A and layer-B
          degrees, in a symmetric "pearson" mode and an asymmetric
          "regression" mode (covariance over the variance of one layer).

File I/O uses the plain-text "multiplex-edgelist v1" format, see
`write_edgelist` / `load_edgelist`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from .errors import InputError, UndefinedMetricError

__all__ = [
    "VectorDegree",
    "MultiplexGraph",
    "EdgeClasses",
    "VectorDegreeDistribution",
    "JointDegreeDistribution",
    "classify_edges",
    "vector_degree",
    "degree_arrays",
    "empirical_vector_distribution",
    "joint_degree_distribution",
    "asn",
    "ddc",
    "ddc_of_graph",
    "write_edgelist",
    "load_edgelist",
]

Edge = tuple[int, int]


class VectorDegree(NamedTuple):
    """Per-node edge-class counts (A-only, B-only, shared)."""

    a_only: int
    b_only: int
    shared: int

    @property
    def magnitude(self) -> int:
        """Number of distinct neighbors over both layers."""
        return self.a_only + self.b_only + self.shared


class EdgeClasses(NamedTuple):
    a_only: frozenset[Edge]
    b_only: frozenset[Edge]
    shared: frozenset[Edge]


def _normalize_edges(n: int, edges: Iterable[Iterable[int]], label: str) -> frozenset[Edge]:
    out: set[Edge] = set()
    for e in edges:
        u, v = e
        u, v = int(u), int(v)
        if u == v:
            raise InputError(f"layer {label}: self-loop at node {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise InputError(f"layer {label}: edge ({u}, {v}) outside node range 0..{n - 1}")
        out.add((u, v) if u < v else (v, u))
    return frozenset(out)


@dataclass(frozen=True)
class MultiplexGraph:
    """Immutable two-layer multiplex on nodes 0..n-1.

    Edge sets hold normalized (u, v) pairs with u < v.  Build through
    `from_edges` unless the inputs are already normalized and validated.
    """

    n: int
    edges_a: frozenset[Edge]
    edges_b: frozenset[Edge]

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges_a: Iterable[Iterable[int]],
        edges_b: Iterable[Iterable[int]],
    ) -> "MultiplexGraph":
        if n <= 0:
            raise InputError(f"need at least one node, got n={n}")
        return cls(
            n=n,
            edges_a=_normalize_edges(n, edges_a, "A"),
            edges_b=_normalize_edges(n, edges_b, "B"),
        )

    def mean_degree_a(self) -> float:
        return 2.0 * len(self.edges_a) / self.n

    def mean_degree_b(self) -> float:
        return 2.0 * len(self.edges_b) / self.n


def classify_edges(g: MultiplexGraph) -> EdgeClasses:
    """Split the edge union into (A-only, B-only, shared) sets."""
    shared = g.edges_a & g.edges_b
    return EdgeClasses(g.edges_a - shared, g.edges_b - shared, frozenset(shared))


def degree_arrays(g: MultiplexGraph) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-node degree counts (k_a, k_b, k_shared) as int arrays of length n."""

    def degs(edges: frozenset[Edge]) -> np.ndarray:
        d = np.zeros(g.n, dtype=np.int64)
        if edges:
            arr = np.asarray(sorted(edges), dtype=np.int64)
            np.add.at(d, arr[:, 0], 1)
            np.add.at(d, arr[:, 1], 1)
        return d

    ka = degs(g.edges_a)
    kb = degs(g.edges_b)
    kc = degs(g.edges_a & g.edges_b)
    return ka, kb, kc


def vector_degree(g: MultiplexGraph, node: int) -> VectorDegree:
    """Edge-class counts of one node."""
    if not (0 <= node < g.n):
        raise InputError(f"node {node} outside 0..{g.n - 1}")
    ka = sum(1 for e in g.edges_a if node in e)
    kb = sum(1 for e in g.edges_b if node in e)
    kc = sum(1 for e in (g.edges_a & g.edges_b) if node in e)
    return VectorDegree(ka - kc, kb - kc, kc)


@dataclass
class VectorDegreeDistribution:
    """Probability distribution over vector degrees.

    `entries` maps VectorDegree -> probability; probabilities are
    non-negative and sum to one.  `mean_magnitude` is the expected number of
    distinct neighbors and is validated against the entries on construction.
    """

    entries: Mapping[VectorDegree, float]
    mean_magnitude: float
    _arrays: tuple | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not self.entries:
            raise InputError("empty vector-degree distribution")
        total = 0.0
        mean = 0.0
        for k, p in self.entries.items():
            if p < 0:
                raise InputError(f"negative probability {p} for {k}")
            total += p
            mean += p * k.magnitude
        if abs(total - 1.0) > 1e-12:
            raise InputError(f"probabilities sum to {total!r}, not 1")
        if abs(mean - self.mean_magnitude) > 1e-12:
            raise InputError(
                f"mean_magnitude {self.mean_magnitude!r} does not match entries ({mean!r})"
            )

    @classmethod
    def from_entries(cls, entries: Mapping[VectorDegree, float]) -> "VectorDegreeDistribution":
        mean = sum(p * k.magnitude for k, p in entries.items())
        return cls(entries=dict(entries), mean_magnitude=mean)

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Columns (a_only, b_only, shared, probability), sorted by key.

        Sorted order keeps floating-point reductions reproducible across
        runs regardless of dict insertion order.
        """
        if self._arrays is None:
            items = sorted(self.entries.items())
            a = np.array([k.a_only for k, _ in items], dtype=np.int64)
            b = np.array([k.b_only for k, _ in items], dtype=np.int64)
            c = np.array([k.shared for k, _ in items], dtype=np.int64)
            p = np.array([p for _, p in items], dtype=np.float64)
            self._arrays = (a, b, c, p)
        return self._arrays


def empirical_vector_distribution(g: MultiplexGraph) -> VectorDegreeDistribution:
    """Empirical vector-degree distribution of a graph (counts over n)."""
    ka, kb, kc = degree_arrays(g)
    counts: dict[VectorDegree, int] = {}
    for i in range(g.n):
        k = VectorDegree(int(ka[i] - kc[i]), int(kb[i] - kc[i]), int(kc[i]))
        counts[k] = counts.get(k, 0) + 1
    entries = {k: c / g.n for k, c in counts.items()}
    return VectorDegreeDistribution.from_entries(entries)


def asn(g: MultiplexGraph) -> float:
    """Average similarity of neighbors: sum of shared degrees over sum of
    vector-degree magnitudes.

    1.0 when the layers are identical, 0.0 when they are edge-disjoint.
    Undefined (error) when every node is isolated in both layers.
    """
    ka, kb, kc = degree_arrays(g)
    magnitude_total = int(ka.sum() + kb.sum() - kc.sum())
    if magnitude_total == 0:
        raise UndefinedMetricError("asn undefined: all nodes isolated in both layers")
    return float(kc.sum()) / magnitude_total


@dataclass
class JointDegreeDistribution:
    """Distribution over (layer-A degree, layer-B degree) node pairs."""

    entries: Mapping[tuple[int, int], float]

    def __post_init__(self):
        if not self.entries:
            raise InputError("empty joint degree distribution")
        total = sum(self.entries.values())
        if any(p < 0 for p in self.entries.values()):
            raise InputError("negative probability in joint degree distribution")
        if abs(total - 1.0) > 1e-12:
            raise InputError(f"joint degree probabilities sum to {total!r}, not 1")


def joint_degree_distribution(g: MultiplexGraph) -> JointDegreeDistribution:
    ka, kb, _ = degree_arrays(g)
    counts: dict[tuple[int, int], int] = {}
    for i in range(g.n):
        key = (int(ka[i]), int(kb[i]))
        counts[key] = counts.get(key, 0) + 1
    return JointDegreeDistribution({k: c / g.n for k, c in counts.items()})


def _joint_moments(j: JointDegreeDistribution) -> tuple[float, float, float, float, float]:
    """Returns (E[ka], E[kb], Var[ka], Var[kb], Cov[ka, kb]) in sorted key order."""
    items = sorted(j.entries.items())
    ea = sum(k[0] * p for k, p in items)
    eb = sum(k[1] * p for k, p in items)
    eaa = sum(k[0] * k[0] * p for k, p in items)
    ebb = sum(k[1] * k[1] * p for k, p in items)
    eab = sum(k[0] * k[1] * p for k, p in items)
    return ea, eb, eaa - ea * ea, ebb - eb * eb, eab - ea * eb


def ddc(j: JointDegreeDistribution, mode: str = "pearson") -> float:
    """Degree-degree correlation across layers.

    mode="pearson"    covariance over the product of both standard
                      deviations; symmetric in the two layers, range [-1, 1].
    mode="regression" covariance over the variance of the layer-B degree
                      alone; this is the least-squares slope of k_A on k_B
                      and is not symmetric.  Kept for comparison; all
                      experiment drivers use pearson.
    """
    ea, eb, var_a, var_b, cov = _joint_moments(j)
    if mode == "pearson":
        if var_a <= 0 or var_b <= 0:
            raise UndefinedMetricError("ddc undefined: a layer has constant degree")
        return cov / math.sqrt(var_a * var_b)
    if mode == "regression":
        if var_b <= 0:
            raise UndefinedMetricError("ddc undefined: layer-B degree is constant")
        return cov / var_b
    raise InputError(f"unknown ddc mode {mode!r} (expected 'pearson' or 'regression')")


def ddc_of_graph(g: MultiplexGraph, mode: str = "pearson") -> float:
    return ddc(joint_degree_distribution(g), mode=mode)


# --- multiplex-edgelist v1 ------------------------------------------------
#
# Line 1:        #multiplex-edgelist v1 n=<N>
# Extra headers: lines starting with '#' (metadata, ignored by the loader)
# Edge lines:    "<layer> <u> <v>" with layer in {A, B} and u < v.
# A shared edge appears twice, once under each layer.

_FORMAT_TAG = "#multiplex-edgelist v1"


def write_edgelist(g: MultiplexGraph, path, header_lines: Iterable[str] = ()) -> None:
    """Write a graph in multiplex-edgelist v1 format.

    `header_lines` are emitted after the format line; each is prefixed with
    '#' if not already.  Edges are written in sorted order so equal graphs
    produce byte-identical files.
    """
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{_FORMAT_TAG} n={g.n}\n")
        for line in header_lines:
            line = str(line).rstrip("\n")
            if not line.startswith("#"):
                line = "#" + line
            fh.write(line + "\n")
        for u, v in sorted(g.edges_a):
            fh.write(f"A {u} {v}\n")
        for u, v in sorted(g.edges_b):
            fh.write(f"B {u} {v}\n")


def load_edgelist(path) -> MultiplexGraph:
    """Load a multiplex-edgelist v1 file, validating the format strictly."""
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as err:
        raise InputError(f"cannot read graph file {path}: {err}") from None
    with fh:
        first = fh.readline().rstrip("\n")
        prefix = _FORMAT_TAG + " n="
        if not first.startswith(prefix):
            raise InputError(f"{path}: not a multiplex-edgelist v1 file (got {first!r})")
        try:
            n = int(first[len(prefix):])
        except ValueError:
            raise InputError(f"{path}: bad node count in header {first!r}") from None
        if n <= 0:
            raise InputError(f"{path}: node count must be positive, got {n}")

        edges: dict[str, set[Edge]] = {"A": set(), "B": set()}
        for lineno, raw in enumerate(fh, start=2):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 3 or parts[0] not in ("A", "B"):
                raise InputError(f"{path}:{lineno}: expected '<A|B> <u> <v>', got {line!r}")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise InputError(f"{path}:{lineno}: non-integer endpoint in {line!r}") from None
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"{path}:{lineno}: endpoint outside 0..{n - 1}")
            if u >= v:
                raise InputError(f"{path}:{lineno}: endpoints must satisfy u < v")
            if (u, v) in edges[parts[0]]:
                raise InputError(f"{path}:{lineno}: duplicate edge ({u}, {v}) in layer {parts[0]}")
            edges[parts[0]].add((u, v))

    return MultiplexGraph(n=n, edges_a=frozenset(edges["A"]), edges_b=frozenset(edges["B"]))
