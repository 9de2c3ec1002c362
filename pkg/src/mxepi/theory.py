"""Analytic percolation machinery for two-route spreading.

Final-state SIR with one-step recovery maps onto bond percolation: A-only
edges are occupied with probability lambda_a, B-only edges with lambda_b,
and shared edges with the composed rate lambda_c = 1-(1-lambda_a)(1-lambda_b)
(a shared edge gets one combined trial, never two independent ones).

Everything here runs on a VectorDegreeDistribution.  The central object is
the 3x3 branching matrix K: following a randomly chosen edge of class X into
a node, K[X, Y] is the expected number of *further* class-Y edges at that
node.  The arrival bias is by class-X stubs, so row X averages over the
distribution a*p/<a> (and the traversed edge is excluded from its own class
count).  With occupation rates folded in, J = diag(lambda_a, lambda_b,
lambda_c) @ K governs the edge-class branching process:

* spectral radius rho(J) < 1: outbreaks stay finite, mean size from the
  linear system (I - J) h = lambda,
* rho(J) = 1: the epidemic threshold,
* rho(J) > 1: a giant outbreak of relative size s > 0, from the monotone
  fixed point of the per-class escape probabilities u.

J is diag-positive-similar to a symmetric matrix, so its spectrum is real
and the Perron root is reached by deterministic power iteration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, InputError, SupercriticalError
from .multiplex import VectorDegreeDistribution

__all__ = [
    "SpreadingRate",
    "MomentSet",
    "ThresholdCurve",
    "OutbreakSolution",
    "compose_lambda_c",
    "moment_set",
    "branching_matrix",
    "growth_matrix",
    "perron_root",
    "threshold_point",
    "threshold_point_via_det",
    "threshold_lambda_a",
    "diagonal_threshold",
    "threshold_curve",
    "mean_outbreak",
    "outbreak_size",
]


def _check_prob(value: float, name: str) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0) or math.isnan(value):
        raise InputError(f"{name} must lie in [0, 1], got {value!r}")
    return value


def compose_lambda_c(lambda_a: float, lambda_b: float) -> float:
    """Combined rate on shared edges: infection through either route."""
    la = _check_prob(lambda_a, "lambda_a")
    lb = _check_prob(lambda_b, "lambda_b")
    return 1.0 - (1.0 - la) * (1.0 - lb)


@dataclass(frozen=True)
class SpreadingRate:
    """Per-contact transmission probabilities on the two routes.

    The shared-edge rate is always derived, never stored, so the three
    rates cannot drift out of consistency.
    """

    lambda_a: float
    lambda_b: float

    def __post_init__(self):
        _check_prob(self.lambda_a, "lambda_a")
        _check_prob(self.lambda_b, "lambda_b")

    @property
    def lambda_c(self) -> float:
        return compose_lambda_c(self.lambda_a, self.lambda_b)

    def as_vector(self) -> np.ndarray:
        """Rates ordered as (A-only, B-only, shared)."""
        return np.array([self.lambda_a, self.lambda_b, self.lambda_c])


# --- moments and branching matrices ----------------------------------------


@dataclass(frozen=True)
class MomentSet:
    """Magnitude-weighted restricted excess sums of a vector-degree
    distribution.

    sums[i, j] pairs source class i with target class j (order: A-only,
    B-only, shared): each term weights an entry by its magnitude |k| and the
    count of class-j edges available after arriving through a class-i edge,
    restricted to entries that have a class-i edge at all.  mean_magnitude
    is the plain expected magnitude.
    """

    mean_magnitude: float
    sums: np.ndarray

    def __post_init__(self):
        if self.sums.shape != (3, 3):
            raise InputError(f"sums must be 3x3, got shape {self.sums.shape}")
        if self.mean_magnitude < 0 or (self.sums < 0).any():
            raise InputError("moment sums must be non-negative")


def _dist_arrays(dist: VectorDegreeDistribution):
    a, b, c, p = dist.arrays()
    return a, b, c, p


def moment_set(dist: VectorDegreeDistribution) -> MomentSet:
    """Direct summation of the nine restricted sums over the distribution."""
    a, b, c, p = _dist_arrays(dist)
    weight = (a + b + c) * p
    counts = (a, b, c)
    sums = np.zeros((3, 3))
    for i in range(3):
        mask = counts[i] >= 1
        for j in range(3):
            excess = counts[j][mask] - (1 if i == j else 0)
            sums[i, j] = float((weight[mask] * excess).sum())
    return MomentSet(mean_magnitude=float(weight.sum()), sums=sums)


def branching_matrix(dist: VectorDegreeDistribution) -> np.ndarray:
    """Expected further edges per class after traversing an edge of each
    class.

    Row X averages over the class-X stub-biased distribution x*p/<x>; the
    diagonal subtracts the traversed edge.  A class with no edges at all
    gets a zero row (nothing is ever reached through it).
    """
    a, b, c, p = _dist_arrays(dist)
    counts = (a, b, c)
    means = [float((x * p).sum()) for x in counts]
    k = np.zeros((3, 3))
    for i in range(3):
        if means[i] <= 0:
            continue
        stub = counts[i] * p
        for j in range(3):
            excess = counts[j] - (1 if i == j else 0)
            k[i, j] = float((stub * excess).sum()) / means[i]
    return k


def growth_matrix(dist: VectorDegreeDistribution, rate: SpreadingRate) -> np.ndarray:
    """Occupation-weighted branching matrix diag(lambda) @ K."""
    return rate.as_vector()[:, None] * branching_matrix(dist)


def perron_root(matrix: np.ndarray, tol: float = 1e-12, max_iter: int = 10**4) -> float:
    """Largest eigenvalue of a non-negative matrix by power iteration.

    Iterates on (matrix + I): the shift keeps the dominant eigenvalue
    strictly positive and the iteration aperiodic, and the growth factor of
    the L1 norm converges to 1 + rho.  Deterministic start vector, fixed
    iteration cap; the matrices here are diag-similar to symmetric ones, so
    the spectrum is real and convergence is geometric.
    """
    matrix = np.asarray(matrix, dtype=float)
    if (matrix < 0).any():
        raise InputError("perron_root expects a non-negative matrix")
    n = matrix.shape[0]
    shifted = matrix + np.eye(n)
    v = np.full(n, 1.0 / n)
    estimate = 0.0
    for _ in range(max_iter):
        w = shifted @ v
        norm = float(w.sum())
        # norm >= v.sum() = 1 because shifted has a unit diagonal
        w /= norm
        if abs(norm - estimate) < tol and float(np.abs(w - v).max()) < tol:
            return norm - 1.0
        v = w
        estimate = norm
    # Cap exhausted: a defective dominant block (possible only for degenerate
    # zero-pattern inputs, not for occupation-weighted branching matrices)
    # makes the iteration O(1/t).  Fall back to the direct eigensolver; the
    # Perron root of a non-negative matrix is its largest real eigenvalue.
    return max(0.0, float(np.linalg.eigvals(matrix).real.max()))


# --- thresholds -------------------------------------------------------------


@dataclass(frozen=True)
class ThresholdCurve:
    """Critical rate pairs (lambda_a, lambda_b_critical), lambda_a ascending."""

    points: tuple[tuple[float, float], ...]
    grid_resolution: float

    def distance_to(self, lambda_a: float, lambda_b: float) -> float:
        """Euclidean distance from a rate pair to the curve polyline."""
        if not self.points:
            raise InputError("empty threshold curve")
        px, py = float(lambda_a), float(lambda_b)
        best = math.inf
        for (x1, y1), (x2, y2) in zip(self.points, self.points[1:]):
            dx, dy = x2 - x1, y2 - y1
            norm2 = dx * dx + dy * dy
            if norm2 == 0.0:
                t = 0.0
            else:
                t = max(0.0, min(1.0, ((px - x1) * dx + (py - y1) * dy) / norm2))
            best = min(best, math.hypot(px - (x1 + t * dx), py - (y1 + t * dy)))
        if len(self.points) == 1:
            x1, y1 = self.points[0]
            best = math.hypot(px - x1, py - y1)
        return best


def _require_edges(dist: VectorDegreeDistribution) -> None:
    if dist.mean_magnitude <= 0:
        raise InputError("degenerate distribution: no edges in either layer")


def _bisect_root(f, lo: float, hi: float, tol: float) -> float:
    # f(lo) < 0 <= f(hi); f monotone non-decreasing
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def threshold_point(
    dist: VectorDegreeDistribution, lambda_a: float, tol: float = 1e-8
) -> float | None:
    """Smallest lambda_b at which rho(J) reaches 1 for the given lambda_a.

    None when the system is already supercritical at lambda_b = 0 or still
    subcritical at lambda_b = 1.  rho(J) is non-decreasing in lambda_b
    (every matrix entry is), so bisection finds the unique crossing.
    """
    _require_edges(dist)
    la = _check_prob(lambda_a, "lambda_a")
    k = branching_matrix(dist)

    def excess(lb: float) -> float:
        rate = np.array([la, lb, compose_lambda_c(la, lb)])
        return perron_root(rate[:, None] * k) - 1.0

    if excess(0.0) >= 0.0:
        return 0.0 if excess(0.0) == 0.0 else None
    if excess(1.0) < 0.0:
        return None
    return _bisect_root(excess, 0.0, 1.0, tol)


def threshold_lambda_a(
    dist: VectorDegreeDistribution, lambda_b: float = 0.0, tol: float = 1e-8
) -> float | None:
    """Transposed search: smallest critical lambda_a at fixed lambda_b.

    With lambda_b = 0 this is the curve's lambda_a-axis endpoint; on a
    distribution whose layer B is empty it is the single-network threshold.
    """
    _require_edges(dist)
    lb = _check_prob(lambda_b, "lambda_b")
    k = branching_matrix(dist)

    def excess(la: float) -> float:
        rate = np.array([la, lb, compose_lambda_c(la, lb)])
        return perron_root(rate[:, None] * k) - 1.0

    if excess(0.0) >= 0.0:
        return 0.0 if excess(0.0) == 0.0 else None
    if excess(1.0) < 0.0:
        return None
    return _bisect_root(excess, 0.0, 1.0, tol)


def diagonal_threshold(dist: VectorDegreeDistribution, tol: float = 1e-8) -> float | None:
    """Critical common rate along lambda_a = lambda_b."""
    _require_edges(dist)
    k = branching_matrix(dist)

    def excess(lam: float) -> float:
        rate = np.array([lam, lam, compose_lambda_c(lam, lam)])
        return perron_root(rate[:, None] * k) - 1.0

    if excess(0.0) >= 0.0:
        return 0.0 if excess(0.0) == 0.0 else None
    if excess(1.0) < 0.0:
        return None
    return _bisect_root(excess, 0.0, 1.0, tol)


def threshold_point_via_det(
    dist: VectorDegreeDistribution, lambda_a: float, tol: float = 1e-8
) -> float | None:
    """Threshold located by the sign change of det(I - J) instead of the
    spectral radius.

    The spectrum of J is real with Perron root rho, so det(I - J) first
    vanishes exactly when rho reaches 1; both roots must agree to within
    bisection resolution.  Kept as an independent cross-check.
    """
    _require_edges(dist)
    la = _check_prob(lambda_a, "lambda_a")
    k = branching_matrix(dist)

    def negdet(lb: float) -> float:
        rate = np.array([la, lb, compose_lambda_c(la, lb)])
        return -float(np.linalg.det(np.eye(3) - rate[:, None] * k))

    if negdet(0.0) >= 0.0:
        return 0.0 if negdet(0.0) == 0.0 else None
    if negdet(1.0) < 0.0:
        return None
    return _bisect_root(negdet, 0.0, 1.0, tol)


def threshold_curve(
    dist: VectorDegreeDistribution, grid_resolution: float = 0.01, tol: float = 1e-8
) -> ThresholdCurve:
    """Sweep lambda_a over [0, 1] collecting critical lambda_b values.

    Grid points without a crossing (already supercritical at lambda_b = 0,
    or never critical) are omitted.
    """
    if not (0.0 < grid_resolution <= 0.5):
        raise InputError(f"grid_resolution must lie in (0, 0.5], got {grid_resolution!r}")
    steps = int(math.floor(1.0 / grid_resolution + 1e-9))
    points = []
    for i in range(steps + 1):
        la = min(i * grid_resolution, 1.0)
        lb = threshold_point(dist, la, tol=tol)
        if lb is not None:
            points.append((la, lb))
    return ThresholdCurve(points=tuple(points), grid_resolution=grid_resolution)


# --- outbreak sizes ---------------------------------------------------------


def mean_outbreak(dist: VectorDegreeDistribution, rate: SpreadingRate) -> float:
    """Mean small-outbreak size strictly below threshold.

    h solves (I - J) h = lambda; h_X is the expected number of nodes reached
    through one class-X edge.  The seed contributes 1, each of its edges a
    class-weighted h term.  Diverges at the threshold, hence the error.
    """
    a, b, c, p = _dist_arrays(dist)
    means = np.array([float((a * p).sum()), float((b * p).sum()), float((c * p).sum())])
    j = growth_matrix(dist, rate)
    if perron_root(j) >= 1.0:
        raise SupercriticalError(
            f"mean outbreak diverges at rate ({rate.lambda_a}, {rate.lambda_b})"
        )
    h = np.linalg.solve(np.eye(3) - j, rate.as_vector())
    if (h < 0).any():
        raise SupercriticalError("linear system left the physical branch (negative h)")
    return 1.0 + float(means @ h)


@dataclass(frozen=True)
class OutbreakSolution:
    """Giant-outbreak fixed point.

    u_a, u_b, u_c are escape probabilities: the chance that following one
    edge of that class does NOT lead into the giant outbreak.  s is the
    probability a random node joins the giant outbreak, i.e. its expected
    relative size.
    """

    u_a: float
    u_b: float
    u_c: float
    s: float
    iterations: int
    converged: bool

    @property
    def single_seed_mean(self) -> float:
        """Expected final outbreak fraction from one uniformly random seed.

        The giant outbreak (fraction s) is reached only when the seed itself
        lies in it, which happens with probability s; otherwise the outbreak
        is vanishingly small.  Hence s * s, the quantity a seed-averaged
        simulation measures.
        """
        return self.s * self.s


def outbreak_size(
    dist: VectorDegreeDistribution,
    rate: SpreadingRate,
    tol: float = 1e-12,
    max_iter: int = 10**6,
) -> OutbreakSolution:
    """Giant-outbreak size from the per-class escape fixed point.

    Iterates u_X <- 1 - lambda_X + lambda_X * E_X[u_a^a' u_b^b' u_c^c']
    (primes: edge counts at the reached node minus the traversed edge)
    upward from u = 0.  The map is monotone in u, so this converges to the
    least fixed point: below threshold that is u = (1, 1, 1) and s = 0.
    """
    if tol <= 0:
        raise InputError(f"tol must be positive, got {tol!r}")
    a, b, c, p = _dist_arrays(dist)
    counts = (a, b, c)
    lam = rate.as_vector()
    means = [float((x * p).sum()) for x in counts]

    # Per-class reached-node tables, restricted to entries that have an edge
    # of that class (avoids 0**-1 below).
    tables = []
    for i in range(3):
        if means[i] <= 0:
            tables.append(None)
            continue
        mask = counts[i] >= 1
        weights = counts[i][mask] * p[mask] / means[i]
        exps = [counts[j][mask] - (1 if i == j else 0) for j in range(3)]
        tables.append((weights, exps[0], exps[1], exps[2]))

    def step(u: np.ndarray) -> np.ndarray:
        out = np.ones(3)
        for i in range(3):
            if tables[i] is None:
                continue  # class absent: u fixed at 1 and never referenced
            weights, ea, eb, ec = tables[i]
            reach = float((weights * u[0] ** ea * u[1] ** eb * u[2] ** ec).sum())
            out[i] = 1.0 - lam[i] + lam[i] * reach
        return out

    u = np.zeros(3)
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        nxt = step(u)
        done = float(np.abs(nxt - u).max()) < tol
        u = nxt
        if done:
            converged = True
            break

    s = 1.0 - float((p * u[0] ** a * u[1] ** b * u[2] ** c).sum())
    s = min(max(s, 0.0), 1.0)
    solution = OutbreakSolution(
        u_a=float(u[0]),
        u_b=float(u[1]),
        u_c=float(u[2]),
        s=s,
        iterations=iterations,
        converged=converged,
    )
    if not converged:
        raise ConvergenceError(
            f"outbreak fixed point not converged after {max_iter} iterations", last=solution
        )
    return solution
