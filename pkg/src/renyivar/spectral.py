"""Structure and growth of nonnegative matrices.

The support digraph of a nonnegative d x d matrix ``M`` has an edge
``i -> j`` exactly when ``M[i, j] > 0`` (self-loops allowed).  The growth
rate

    rho(M) = lim_n (1/n) log sum_{i,j} (M^n)[i, j]

is ``-inf`` exactly when that digraph has no directed cycle (M is nilpotent),
and otherwise equals the log of the largest Perron root over the cyclic
strongly connected components.  This module computes the class structure, the
Perron data of a class (by shifted power iteration, certified by an explicit
eigen-residual), the growth rate both spectrally and by brute-force matrix
powers, and the maximal stationary edge measure supported inside the cyclic
classes.

Matrices produced by exponential tilts are passed around as elementwise logs
(``-inf`` marking structural zeros); the ``*_from_log`` entry points rescale
by a tropical (max-plus) diagonal balancing before exponentiating, so the
linear-algebra kernels only ever see blocks whose largest entry and Perron
root are both of order one, whatever the dynamic range of the input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

from .config import TOL
from .errors import (
    ClassStructureError,
    DimensionMismatchError,
    InputValidationError,
    PerronConvergenceError,
)
from .extreal import NEG_INF, ExtReal
from .numerics import log_matmul, log_matrix_power, logsumexp, safe_log

if TYPE_CHECKING:  # pragma: no cover - import cycle guard, typing only
    from .markov import PairMeasure

__all__ = [
    "NonnegMatrix",
    "ClassDecomposition",
    "PerronData",
    "classes",
    "has_cycle",
    "perron",
    "perron_from_log",
    "growth_rate",
    "growth_rate_from_log",
    "growth_rate_bruteforce",
    "log_mass_sequence",
    "compatible",
    "maximal_abs_cont",
]

_POWER_ITER_CAP = 10**6
_RAYLEIGH_RTOL = 1e-14


@dataclass(frozen=True, eq=False)
class NonnegMatrix:
    """A square matrix with finite nonnegative entries (stored read-only)."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise InputValidationError("entries must form a nonempty square matrix")
        if not np.all(np.isfinite(m)):
            raise InputValidationError("entries must be finite")
        if np.any(m < 0):
            raise InputValidationError("entries must be nonnegative")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)

    @property
    def d(self) -> int:
        return int(self.entries.shape[0])

    @property
    def support(self) -> np.ndarray:
        """Boolean adjacency of the support digraph."""
        return self.entries > 0


@dataclass(frozen=True, eq=False)
class ClassDecomposition:
    """Strongly connected components ("classes") of a support digraph.

    ``classes`` lists each component as a sorted tuple of states; components
    are ordered by their smallest state, which makes every downstream
    "maximizing class" selection deterministic.  ``class_of[i]`` is the index
    of the component containing state ``i`` (-1 for states outside the
    decomposed subset).  ``cyclic[k]`` says whether component k contains a
    directed cycle, i.e. has more than one state or carries a self-loop.
    """

    classes: tuple[tuple[int, ...], ...]
    class_of: np.ndarray
    cyclic: tuple[bool, ...]

    def cyclic_classes(self) -> list[tuple[int, ...]]:
        return [cls for cls, flag in zip(self.classes, self.cyclic) if flag]


@dataclass(frozen=True, eq=False)
class PerronData:
    """Certified dominant eigendata of one cyclic class.

    ``log_lam`` is the log of the Perron root of the matrix restricted to the
    class (kept in log form so exponentially tilted matrices cannot overflow
    it); ``lam`` exponentiates on demand.  ``left`` and ``right`` are full
    d-vectors, zero off the class, normalized so that ``sum(right) == 1`` and
    ``dot(left, right) == 1``.  The eigen-residuals of both vectors, measured
    on the rescaled class block, are at most ``1e-10`` relative to the root.
    """

    log_lam: float
    left: np.ndarray
    right: np.ndarray
    class_index: int

    @property
    def lam(self) -> float:
        return math.exp(self.log_lam)


def _restricted_adjacency(support: np.ndarray, states: Sequence[int]) -> dict[int, list[int]]:
    inside = set(states)
    return {i: [int(j) for j in np.flatnonzero(support[i]) if j in inside] for i in states}


def _tarjan(adj: dict[int, list[int]], nodes: Sequence[int]) -> list[list[int]]:
    """Iterative Tarjan strongly-connected-components over the given nodes."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    components: list[list[int]] = []

    for root in nodes:
        if root in index:
            continue
        work: list[tuple[int, Iterable[int]]] = []
        index[root] = low[root] = len(index)
        stack.append(root)
        on_stack.add(root)
        work.append((root, iter(adj[root])))
        while work:
            v, edge_iter = work[-1]
            advanced = False
            for w in edge_iter:
                if w not in index:
                    index[w] = low[w] = len(index)
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(adj[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                component = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    component.append(w)
                    if w == v:
                        break
                components.append(component)
    return components


def classes(m: NonnegMatrix, states: Sequence[int] | None = None) -> ClassDecomposition:
    """Decompose the support digraph (restricted to ``states``) into classes."""
    if states is None:
        node_list: list[int] = list(range(m.d))
    else:
        node_list = sorted(set(int(s) for s in states))
        if node_list and (node_list[0] < 0 or node_list[-1] >= m.d):
            raise InputValidationError("states outside the matrix index range")
    support = m.support
    adjacency = _restricted_adjacency(support, node_list)
    components = _tarjan(adjacency, node_list)
    ordered = sorted((tuple(sorted(c)) for c in components), key=lambda c: c[0])
    class_of = np.full(m.d, -1, dtype=int)
    cyclic_flags: list[bool] = []
    for k, component in enumerate(ordered):
        for i in component:
            class_of[i] = k
        if len(component) > 1:
            cyclic_flags.append(True)
        else:
            i = component[0]
            cyclic_flags.append(bool(support[i, i]))
    class_of.flags.writeable = False
    return ClassDecomposition(tuple(ordered), class_of, tuple(cyclic_flags))


def has_cycle(m: NonnegMatrix) -> bool:
    """True when the support digraph contains a directed cycle."""
    return any(classes(m).cyclic)


def _power_iteration(block: np.ndarray) -> tuple[float, np.ndarray, float]:
    """Dominant eigenpair of an irreducible nonnegative block.

    The block is shifted by ``c I`` with ``c = 1 + max diagonal entry``, which
    makes it primitive, so plain power iteration converges.  The iterate
    sequence is thinned eight-fold by stepping with the precomputed eighth
    power of the shifted block (the same sequence, sampled every eighth
    element), which cuts the step count without changing the limit.
    Convergence is declared when successive Rayleigh quotients along the
    thinned sequence differ by at most 1e-14 relatively; the returned pair
    additionally satisfies an explicit eigen-residual bound on the original
    unshifted block no looser than 1e-10 relative to the root.  Returns
    ``(lam, vector, residual)`` for the *unshifted* block.
    """
    n = block.shape[0]
    shift = 1.0 + float(np.max(np.diag(block)))
    shifted = block + shift * np.eye(n)
    squared = shifted @ shifted
    fourth = squared @ squared
    stepper = fourth @ fourth
    x = np.full(n, 1.0 / math.sqrt(n))
    previous = math.inf
    best_resid = math.inf
    best: tuple[float, np.ndarray] | None = None
    stable = 0
    window_resid = math.inf
    for _ in range(_POWER_ITER_CAP):
        y = stepper @ x
        quotient = float(x @ y)
        if abs(quotient - previous) <= _RAYLEIGH_RTOL * abs(quotient):
            stable += 1
            z = block @ x
            lam = float(x @ z)
            residual = float(np.max(np.abs(z - lam * x)))
            if lam > 0 and residual <= best_resid:
                best_resid = residual
                best = (lam, x)
            if lam > 0 and residual <= 1e-13 * lam:
                return lam, x, residual
            if stable % 32 == 0:
                # Rounding floor reached: accept the best certified pair if it
                # meets the guaranteed bound instead of burning the iteration cap.
                if residual > 0.9 * window_resid and best is not None:
                    if best_resid <= TOL.perron_resid * best[0]:
                        return best[0], best[1], best_resid
                window_resid = residual
        else:
            stable = 0
        previous = quotient
        norm = math.sqrt(float(y @ y))
        if norm == 0.0:  # impossible for an irreducible block, defensive only
            raise PerronConvergenceError("iteration collapsed to the zero vector")
        x = y / norm
    if best is not None and best_resid <= TOL.perron_resid * best[0]:
        return best[0], best[1], best_resid
    raise PerronConvergenceError(
        f"power iteration did not certify an eigenpair within {_POWER_ITER_CAP} iterations"
    )


def _tropical_balance(block_log: np.ndarray) -> tuple[float, np.ndarray]:
    """Max-plus eigendata of an irreducible class block given entrywise logs.

    Returns ``(mu, p)`` where ``mu`` is the maximum cycle mean of the log
    entries (Karp's recursion) and ``p`` are node potentials satisfying
    ``block_log[i, j] + p[j] - p[i] <= mu`` with equality along some cycle.
    Rescaling by ``exp(p)`` and ``exp(-mu)`` therefore yields a matrix with
    maximum entry one whose Perron root lies in ``[1, n]`` — the conditioning
    needed for power iteration to certify tiny relative residuals even when
    the original entries span hundreds of orders of magnitude.
    """
    n = block_log.shape[0]
    walk = np.zeros(n)
    best_mean = np.full(n, math.inf)
    history = [walk]
    for k in range(1, n + 1):
        walk = np.max(walk[:, None] + block_log, axis=0)
        history.append(walk)
    final = history[n]
    means = np.full(n, -math.inf)
    for v in range(n):
        if final[v] == -math.inf:
            continue
        best_mean[v] = math.inf
        for k in range(n):
            if history[k][v] == -math.inf:
                continue
            best_mean[v] = min(best_mean[v], (final[v] - history[k][v]) / (n - k))
        means[v] = best_mean[v]
    mu = float(np.max(means))
    if not math.isfinite(mu):
        raise ClassStructureError("max cycle mean undefined: the block carries no cycle")
    # longest-walk potentials for the zero-max-cycle-mean weights
    weights = block_log - mu
    p = np.zeros(n)
    for _ in range(2 * n + 2):
        relaxed = np.maximum(p, np.max(weights + p[None, :], axis=1))
        if np.array_equal(relaxed, p):
            break
        p = relaxed
    return mu, p


def _validate_cyclic_class(log_block: np.ndarray, states: Sequence[int]) -> None:
    block_support = log_block > -math.inf
    n = block_support.shape[0]
    adjacency = {i: list(np.flatnonzero(block_support[i])) for i in range(n)}
    components = _tarjan(adjacency, list(range(n)))
    if len(components) != 1:
        raise ClassStructureError(f"states {tuple(states)} do not form a single irreducible class")
    if n == 1 and not block_support[0, 0]:
        raise ClassStructureError(f"singleton class {tuple(states)} has no self-loop, hence no cycle")


def perron_from_log(log_entries: np.ndarray, cls: Sequence[int], class_index: int = 0) -> PerronData:
    """Perron data of a cyclic class given the elementwise log of the matrix.

    The class block is diagonally rescaled by its max-plus potentials before
    exponentiating (see :func:`_tropical_balance`), so arbitrarily tilted
    matrices stay in range and keep the Perron root of the same order as the
    largest entry; the rescaling is undone on the eigendata in log space.
    """
    log_entries = np.asarray(log_entries, dtype=float)
    d = log_entries.shape[0]
    idx = np.asarray(sorted(int(i) for i in cls), dtype=int)
    if idx.size == 0 or idx[0] < 0 or idx[-1] >= d:
        raise ClassStructureError("class states outside the matrix index range")
    block_log = log_entries[np.ix_(idx, idx)]
    _validate_cyclic_class(block_log, idx)
    mu, pot = _tropical_balance(block_log)
    block = np.exp(block_log + pot[None, :] - pot[:, None] - mu)
    lam_r, right_block, _ = _power_iteration(block)
    lam_l, left_block, _ = _power_iteration(block.T)
    lam = 0.5 * (lam_r + lam_l)
    log_lam = math.log(lam) + mu
    # undo the balancing in log space: right picks up +pot, left picks up -pot
    log_right = pot + safe_log(np.abs(right_block))
    log_right -= logsumexp(log_right)
    log_left = -pot + safe_log(np.abs(left_block))
    log_left -= logsumexp(log_left + log_right)
    right = np.zeros(d)
    left = np.zeros(d)
    right[idx] = np.exp(log_right)
    left[idx] = np.exp(log_left)
    right.flags.writeable = False
    left.flags.writeable = False
    return PerronData(log_lam=log_lam, left=left, right=right, class_index=class_index)


def perron(m: NonnegMatrix, cls: Sequence[int], class_index: int = 0) -> PerronData:
    """Certified Perron root and left/right eigenvectors of one cyclic class."""
    return perron_from_log(safe_log(m.entries), cls, class_index)


def _log_perron_root(log_entries: np.ndarray, cls: Sequence[int]) -> float:
    """Log Perron root of a cyclic class (right iteration only, no eigendata)."""
    idx = np.asarray(sorted(int(i) for i in cls), dtype=int)
    block_log = np.asarray(log_entries, dtype=float)[np.ix_(idx, idx)]
    mu, pot = _tropical_balance(block_log)
    lam, _, _ = _power_iteration(np.exp(block_log + pot[None, :] - pot[:, None] - mu))
    return math.log(lam) + mu


def growth_rate_from_log(log_entries: np.ndarray) -> ExtReal:
    """Growth rate of the matrix whose elementwise log is given."""
    log_entries = np.asarray(log_entries, dtype=float)
    support = NonnegMatrix(np.where(log_entries > -math.inf, 1.0, 0.0))
    decomposition = classes(support)
    best: float | None = None
    for k, cls in enumerate(decomposition.classes):
        if not decomposition.cyclic[k]:
            continue
        root = _log_perron_root(log_entries, cls)
        if best is None or root > best:
            best = root
    if best is None:
        return NEG_INF
    return ExtReal.finite(best)


def growth_rate(m: NonnegMatrix) -> ExtReal:
    """Spectral growth rate rho(M); -inf exactly when the support is acyclic."""
    return growth_rate_from_log(safe_log(m.entries))


def growth_rate_bruteforce(m: NonnegMatrix, n: int) -> ExtReal:
    """(1/n) log sum of the entries of M^n, in log space by repeated squaring."""
    if n < 1:
        raise InputValidationError("brute-force growth needs n >= 1")
    power = log_matrix_power(safe_log(m.entries), n)
    total = logsumexp(power)
    if total == -math.inf:
        return NEG_INF
    return ExtReal.finite(total / n)


def log_mass_sequence(m: NonnegMatrix, n_max: int) -> np.ndarray:
    """log sum of the entries of M^n for n = 1..n_max, by direct iteration.

    Entries are ``-inf`` once the matrix power vanishes (nilpotent supports).
    This is the successive-difference work horse: differences of consecutive
    entries approach the growth rate in aperiodic cases.
    """
    if n_max < 1:
        raise InputValidationError("need n_max >= 1")
    log_m = safe_log(m.entries)
    current = log_m
    out = np.empty(n_max)
    out[0] = logsumexp(current)
    for k in range(1, n_max):
        current = log_matmul(current, log_m)
        out[k] = logsumexp(current)
    return out


def compatible(m: NonnegMatrix, pair: "PairMeasure | np.ndarray") -> bool:
    """True when the pair measure's support equals the matrix support exactly."""
    entries = np.asarray(getattr(pair, "entries", pair), dtype=float)
    if entries.shape != m.entries.shape:
        raise DimensionMismatchError("support comparison needs identical shapes")
    return bool(np.array_equal(m.support, entries > 0))


def _cycle_through_edge(
    support: np.ndarray, inside: set[int], i: int, j: int
) -> list[tuple[int, int]]:
    """A directed cycle through edge (i, j), staying inside a strongly connected set.

    Returns the edge list: (i, j) followed by a shortest path j -> i found by
    breadth-first search.  For a self-loop the path is empty.
    """
    if i == j:
        return [(i, j)]
    parents: dict[int, int] = {j: -1}
    frontier = [j]
    while frontier:
        nxt: list[int] = []
        for u in frontier:
            for v in np.flatnonzero(support[u]):
                v = int(v)
                if v in inside and v not in parents:
                    parents[v] = u
                    if v == i:
                        path: list[tuple[int, int]] = []
                        while v != j:
                            path.append((parents[v], v))
                            v = parents[v]
                        path.reverse()
                        return [(i, j)] + path
                    nxt.append(v)
        frontier = nxt
    raise ClassStructureError(f"no return path {j} -> {i}; the set is not strongly connected")


def maximal_abs_cont(m: NonnegMatrix) -> "PairMeasure | None":
    """The stationary edge measure with the largest support dominated by M.

    Every stationary pair measure dominated by ``M`` must live on the cyclic
    classes, and conversely every intra-class edge supports a cycle measure;
    averaging a uniform cycle measure through each such edge (uniformly over
    edges, then uniformly over classes) produces a stationary measure whose
    support is exactly the union of intra-cyclic-class edges -- a maximum
    element for the absolute-continuity order.  Returns ``None`` when the
    support digraph is acyclic (no stationary measure is dominated at all).
    """
    from .markov import PairMeasure  # deferred: markov depends on this module

    decomposition = classes(m)
    cyclic = decomposition.cyclic_classes()
    if not cyclic:
        return None
    support = m.support
    accumulated = np.zeros_like(m.entries)
    for cls in cyclic:
        inside = set(cls)
        edges = [(int(i), int(j)) for i in cls for j in np.flatnonzero(support[i]) if int(j) in inside]
        block = np.zeros_like(accumulated)
        for (i, j) in edges:
            cycle = _cycle_through_edge(support, inside, i, j)
            weight = 1.0 / len(cycle)
            for (u, v) in cycle:
                block[u, v] += weight
        accumulated += block / (block.sum() * len(cyclic))
    return PairMeasure(accumulated)
