"""Independent finite-horizon oracles and random-search stress tests.

The closed-form machinery elsewhere in the library reduces limits to spectral
quantities.  This module approaches the same limits the slow, definitional
way -- explicit recursions over path space and blind random search over the
feasible sets -- sharing *no* code with the closed forms beyond the basic
kernel accessors, so agreement between the two routes is meaningful evidence
rather than a tautology.

Two convergence modes are reported for every rate:

* ``"cesaro"``: the values ``f(n) / n``, converging like O(1/n);
* ``"difference"``: the increments ``f(n+1) - f(n)``, converging
  geometrically for primitive tilted matrices (and *exactly* from the first
  step for the relative entropy rate -- the telescoping property).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import Alpha, Dist, rel_entropy, renyi_div
from .errors import InputValidationError
from .extreal import ExtReal
from .markov import PairMeasure, abs_cont_pair, kernel, rel_entropy_rate, renyi_rate
from .numerics import log_vecmat, logsumexp
from .spectral import NonnegMatrix, classes, growth_rate_from_log

__all__ = [
    "ConvergenceReport",
    "renyi_rate_oracle",
    "rel_entropy_rate_oracle",
    "easyvar_finite_n_oracle",
    "easyvar_oracle_report",
    "IIDVariationalProblem",
    "MarkovVariationalProblem",
    "RandomSearchReport",
    "random_search_extremum",
]


@dataclass(frozen=True, eq=False)
class ConvergenceReport:
    """A finite-horizon approach to a claimed limit.

    ``sequence`` holds ``(n, value)`` pairs in increasing ``n``; ``final_gap``
    is the distance from the last value to ``limit_claim``, with agreement at
    the same infinity counting as gap zero.
    """

    sequence: list[tuple[int, float]]
    limit_claim: ExtReal
    final_gap: float
    mode: str


def _gap(value: float, claim: ExtReal) -> float:
    if math.isfinite(value) and claim.is_finite:
        return abs(value - claim.raw)
    if value == claim.raw:
        return 0.0
    return math.inf


def _difference(later: float, earlier: float) -> float:
    """A sequence increment that treats two equal infinities as that infinity."""
    if math.isinf(later) and later == earlier:
        return later
    return later - earlier


def _mode_series(values: dict[int, float], mode: str) -> list[tuple[int, float]]:
    ns = sorted(values)
    if mode == "cesaro":
        return [(n, values[n] / n) for n in ns]
    if mode == "difference":
        return [(n, _difference(values[n + 1], values[n])) for n in ns[:-1]]
    raise InputValidationError(f"unknown mode {mode!r}; use 'cesaro' or 'difference'")


def _report(values: dict[int, float], claim: ExtReal, mode: str) -> ConvergenceReport:
    sequence = _mode_series(values, mode)
    return ConvergenceReport(sequence, claim, _gap(sequence[-1][1], claim), mode)


def renyi_rate_oracle(
    alpha: Alpha,
    nu: PairMeasure,
    theta: PairMeasure,
    n_max: int = 200,
    mode: str = "difference",
    claim: ExtReal | None = None,
) -> ConvergenceReport:
    """Approach the Renyi divergence rate through explicit path power sums.

    Computes ``R_a(nu_n || theta_n)`` for ``n = 2..n_max`` by a log-domain
    vector recursion over the tilted pair/kernel weights (cost ``O(n d^2)``,
    no spectral machinery), then reports the requested convergence mode
    against the claimed limit (default: what :func:`renyi_rate` returns).
    """
    if n_max < 3:
        raise InputValidationError("need n_max >= 3 for a nontrivial report")
    if claim is None:
        claim = renyi_rate(alpha, nu, theta)
    a = alpha.value
    if a < 0:  # definitional swap; the finite-n divergences agree exactly
        a, nu, theta = 1.0 - a, theta, nu
    if a > 1 and not abs_cont_pair(nu, theta):
        # Some path carries nu-mass outside theta's support already at n = 2,
        # so every finite-n divergence is infinite, matching the claim.
        values = {n: math.inf for n in range(2, n_max + 1)}
        return _report(values, claim, mode)
    scale = a * (a - 1.0)
    pair_mask = nu.edge_support & theta.edge_support
    log_pair = np.full(nu.entries.shape, -math.inf)
    log_pair[pair_mask] = a * np.log(nu.entries[pair_mask]) + (1.0 - a) * np.log(
        theta.entries[pair_mask]
    )
    k_nu = kernel(nu).rows
    k_theta = kernel(theta).rows
    step_mask = (k_nu > 0) & (k_theta > 0)
    log_step = np.full(k_nu.shape, -math.inf)
    log_step[step_mask] = a * np.log(k_nu[step_mask]) + (1.0 - a) * np.log(k_theta[step_mask])
    v = logsumexp(log_pair, axis=0)
    values = {2: logsumexp(v) / scale}
    for n in range(3, n_max + 1):
        v = log_vecmat(v, log_step)
        values[n] = logsumexp(v) / scale
    return _report(values, claim, mode)


def rel_entropy_rate_oracle(
    nu: PairMeasure,
    theta: PairMeasure,
    n_max: int = 200,
    mode: str = "difference",
    claim: ExtReal | None = None,
) -> ConvergenceReport:
    """Approach the relative entropy rate through exact finite-n entropies.

    ``D(nu_n || theta_n)`` is accumulated state by state: ``c_n(j)`` tracks
    the contribution of paths ending at ``j``, and one linear pass extends it
    to ``n + 1``.  In difference mode the increments equal the rate exactly
    (telescoping), up to roundoff.
    """
    if n_max < 3:
        raise InputValidationError("need n_max >= 3 for a nontrivial report")
    if claim is None:
        claim = rel_entropy_rate(nu, theta)
    if not abs_cont_pair(nu, theta):
        values = {n: math.inf for n in range(2, n_max + 1)}
        return _report(values, claim, mode)
    mask = nu.edge_support
    k_nu = kernel(nu).rows
    k_theta = kernel(theta).rows
    pair_ratio = np.zeros_like(nu.entries)
    pair_ratio[mask] = np.log(nu.entries[mask]) - np.log(theta.entries[mask])
    step_ratio = np.zeros_like(nu.entries)
    step_ratio[mask] = np.log(k_nu[mask]) - np.log(k_theta[mask])
    per_edge = nu.entries * step_ratio  # nu(i,j) log(nu(j|i)/theta(j|i))
    c = (nu.entries * pair_ratio).sum(axis=0)
    values = {2: float(c.sum())}
    for n in range(3, n_max + 1):
        c = k_nu.T @ c + per_edge.sum(axis=0)
        values[n] = float(c.sum())
    return _report(values, claim, mode)


def _tilt_matrix(g_values: np.ndarray, mu: PairMeasure) -> np.ndarray:
    rows = kernel(mu).rows
    out = np.full(rows.shape, -math.inf)
    on = rows > 0
    out[on] = g_values[on] + np.log(rows[on])
    return out


def easyvar_finite_n_oracle(g_values: np.ndarray, mu: PairMeasure, n: int) -> float:
    """(1/n) log E[exp(sum of g along a length-n path)] under the chain of mu."""
    if n < 1:
        raise InputValidationError("need n >= 1")
    g_values = np.asarray(g_values, dtype=float)
    if g_values.shape != mu.entries.shape:
        raise InputValidationError("edge-function shape must match the pair measure")
    marginal = mu.state_marginal
    v = np.full(mu.d, -math.inf)
    on = marginal > 0
    v[on] = np.log(marginal[on])
    log_step = _tilt_matrix(g_values, mu)
    for _ in range(n - 1):
        v = log_vecmat(v, log_step)
    return logsumexp(v) / n


def easyvar_oracle_report(
    g_values: np.ndarray,
    mu: PairMeasure,
    n_max: int = 200,
    mode: str = "difference",
) -> ConvergenceReport:
    """Finite-horizon approach to the growth rate of [e^{g} mu(j|i)].

    The claim is recomputed spectrally from the same tilted matrix; the
    sequence comes from the independent path recursion of
    :func:`easyvar_finite_n_oracle`.
    """
    if n_max < 2:
        raise InputValidationError("need n_max >= 2 for a nontrivial report")
    g_values = np.asarray(g_values, dtype=float)
    if g_values.shape != mu.entries.shape:
        raise InputValidationError("edge-function shape must match the pair measure")
    claim = growth_rate_from_log(_tilt_matrix(g_values, mu))
    marginal = mu.state_marginal
    v = np.full(mu.d, -math.inf)
    on = marginal > 0
    v[on] = np.log(marginal[on])
    log_step = _tilt_matrix(g_values, mu)
    values = {1: logsumexp(v)}
    for n in range(2, n_max + 1):
        v = log_vecmat(v, log_step)
        values[n] = logsumexp(v)
    return _report(values, claim, mode)


# ---------------------------------------------------------------------------
# Random search over the feasible sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IIDVariationalProblem:
    """Descriptor of a single-letter variational problem."""

    alpha: Alpha
    nu: Dist
    theta: Dist


@dataclass(frozen=True)
class MarkovVariationalProblem:
    """Descriptor of a per-step variational problem."""

    alpha: Alpha
    nu: PairMeasure
    theta: PairMeasure


@dataclass(frozen=True)
class RandomSearchReport:
    """What blind search found, versus the closed-form extremum.

    ``margin`` measures how far the search *beat* the claimed extremum
    (positive = the closed form was wrong somewhere); ``refinement_gap`` is
    the distance of the hill-climbed best from the claimed extremum.
    """

    target: ExtReal
    best_sampled: float
    best_refined: float
    margin: float
    refinement_gap: float
    trials: int
    seed: int
    passed: bool


def _beaten_by(regime: str, candidate: float, target: ExtReal) -> float:
    if not target.is_finite:
        # An infinite extremum cannot be beaten (sup) / is never undercut (inf).
        return -math.inf
    if regime == "alpha_in_01":
        return target.raw - candidate
    return candidate - target.raw


def _iid_objective(a: float, weights: np.ndarray, nu: Dist, theta: Dist) -> float:
    mu = Dist(weights)
    d_theta = rel_entropy(mu, theta)
    d_nu = rel_entropy(mu, nu)
    return d_theta.raw / a - d_nu.raw / (a - 1.0)


def _iid_feasible_mask(regime: str, nu: Dist, theta: Dist) -> np.ndarray:
    if regime == "alpha_gt_1":
        return nu.support
    if regime == "alpha_in_01":
        return nu.support & theta.support
    return theta.support


def _search_iid(
    problem: IIDVariationalProblem, trials: int, seed: int, hill_steps: int, tol: float
) -> RandomSearchReport:
    a = problem.alpha.value
    regime = problem.alpha.regime
    nu, theta = problem.nu, problem.theta
    mask = _iid_feasible_mask(regime, nu, theta)
    idx = np.flatnonzero(mask)
    if idx.size == 0:
        raise InputValidationError("the feasible set of the descriptor is empty")
    target = renyi_div(problem.alpha, nu, theta)
    better = max if regime != "alpha_in_01" else min
    rng = np.random.default_rng(seed)
    shapes = (1.0, 0.3, 3.0)
    best_val: float | None = None
    best_weights: np.ndarray | None = None
    for t in range(trials):
        chosen = idx
        if idx.size > 1 and rng.random() < 0.3:
            size = int(rng.integers(1, idx.size + 1))
            chosen = rng.choice(idx, size=size, replace=False)
        weights = np.zeros(nu.d)
        weights[chosen] = rng.gamma(shapes[t % len(shapes)], size=chosen.size)
        if weights.sum() <= 0:
            continue
        val = _iid_objective(a, weights, nu, theta)
        if best_val is None or better(val, best_val) == val:
            best_val, best_weights = val, weights / weights.sum()
    assert best_val is not None and best_weights is not None
    best_sampled = best_val
    # Coordinate tilts with step halving, restricted to the full feasible support.
    weights = np.zeros(nu.d)
    weights[idx] = np.maximum(best_weights[idx], 1e-12)
    current = _iid_objective(a, weights, nu, theta)
    step = 0.5
    for _ in range(hill_steps):
        improved = False
        for x in idx:
            for factor in (1.0 + step, 1.0 / (1.0 + step)):
                trial_w = weights.copy()
                trial_w[x] *= factor
                val = _iid_objective(a, trial_w, nu, theta)
                if better(val, current) == val and val != current:
                    current, weights = val, trial_w / trial_w.sum()
                    improved = True
        if not improved:
            step *= 0.5
            if step < 1e-12:
                break
    best_refined = better(best_sampled, current)
    margin = _beaten_by(regime, best_refined, target)
    refinement_gap = _gap(best_refined, target)
    return RandomSearchReport(
        target=target,
        best_sampled=best_sampled,
        best_refined=best_refined,
        margin=margin,
        refinement_gap=refinement_gap,
        trials=trials,
        seed=seed,
        passed=margin <= tol,
    )


def _stationary_law(rows: np.ndarray, states: np.ndarray) -> np.ndarray:
    """Stationary law of an irreducible kernel block, by direct linear solve.

    Solves ``pi (I - K) = 0`` with the first equation replaced by the
    normalization, then polishes with iterative refinement; power iteration
    is avoided because slowly mixing kernels can stall it far from balance.
    """
    block = rows[np.ix_(states, states)]
    n = states.size
    system = np.eye(n) - block.T
    system[0] = 1.0
    rhs = np.zeros(n)
    rhs[0] = 1.0
    pi = np.linalg.solve(system, rhs)
    for _ in range(3):
        residual = rhs - system @ pi
        if float(np.max(np.abs(residual))) <= 1e-16:
            break
        pi += np.linalg.solve(system, residual)
    pi = np.clip(pi, 0.0, None)
    pi /= pi.sum()
    full = np.zeros(rows.shape[0])
    full[states] = pi
    return full


def _markov_feasible_support(regime: str, nu: PairMeasure, theta: PairMeasure) -> np.ndarray:
    if regime == "alpha_gt_1":
        return nu.edge_support
    if regime == "alpha_in_01":
        return nu.edge_support & theta.edge_support
    return theta.edge_support


def _random_stationary(
    rng: np.random.Generator, edge_mask: np.ndarray, shape: float, state_pool: np.ndarray
) -> PairMeasure | None:
    """A random stationary pair measure on a random cyclic subgraph of the mask."""
    d = edge_mask.shape[0]
    sub_mask = np.zeros_like(edge_mask)
    sub_mask[np.ix_(state_pool, state_pool)] = edge_mask[np.ix_(state_pool, state_pool)]
    pattern = NonnegMatrix(sub_mask.astype(float))
    decomposition = classes(pattern)
    cyclic = decomposition.cyclic_classes()
    if not cyclic:
        return None
    picked = [cyclic[int(rng.integers(len(cyclic)))]] if rng.random() < 0.7 else cyclic
    entries = np.zeros((d, d))
    mix = rng.gamma(1.0, size=len(picked))
    mix /= mix.sum()
    for lam, cls in zip(mix, picked):
        states = np.asarray(cls, dtype=int)
        rows = np.zeros((d, d))
        for i in states:
            outs = np.flatnonzero(sub_mask[i][states])
            rows[i, states[outs]] = rng.gamma(shape, size=outs.size)
            total = rows[i].sum()
            if total <= 0:
                return None
            rows[i] /= total
        pi = _stationary_law(rows, states)
        entries += lam * (pi[:, None] * rows)
    return PairMeasure(entries)


def _markov_objective_value(
    a: float, mu: PairMeasure, nu: PairMeasure, theta: PairMeasure
) -> float:
    return rel_entropy_rate(mu, theta).raw / a - rel_entropy_rate(mu, nu).raw / (a - 1.0)


def _search_markov(
    problem: MarkovVariationalProblem, trials: int, seed: int, hill_steps: int, tol: float
) -> RandomSearchReport:
    a = problem.alpha.value
    regime = problem.alpha.regime
    nu, theta = problem.nu, problem.theta
    edge_mask = _markov_feasible_support(regime, nu, theta)
    pattern = NonnegMatrix(edge_mask.astype(float))
    all_cyclic = classes(pattern).cyclic_classes()
    if not all_cyclic:
        raise InputValidationError("the descriptor admits no stationary feasible candidate")
    target = renyi_rate(problem.alpha, nu, theta)
    better = max if regime != "alpha_in_01" else min
    rng = np.random.default_rng(seed)
    all_states = np.arange(nu.d)
    shapes = (1.0, 0.3, 3.0)
    best_val: float | None = None
    best_mu: PairMeasure | None = None
    for t in range(trials):
        pool = all_states
        if nu.d > 1 and rng.random() < 0.5:
            size = int(rng.integers(1, nu.d + 1))
            pool = np.sort(rng.choice(all_states, size=size, replace=False))
        candidate = _random_stationary(rng, edge_mask, shapes[t % len(shapes)], pool)
        if candidate is None:
            candidate = _random_stationary(rng, edge_mask, shapes[t % len(shapes)], all_states)
            if candidate is None:
                continue
        val = _markov_objective_value(a, candidate, nu, theta)
        if best_val is None or better(val, best_val) == val:
            best_val, best_mu = val, candidate
    assert best_val is not None and best_mu is not None
    best_sampled = best_val
    # Hill climb on kernel rows over the largest feasible class.
    cls = max(all_cyclic, key=len)
    states = np.asarray(cls, dtype=int)
    rows = np.zeros((nu.d, nu.d))
    for i in states:
        outs = np.flatnonzero(edge_mask[i][states])
        rows[i, states[outs]] = 1.0 / outs.size
    current_mu = PairMeasure(_stationary_law(rows, states)[:, None] * rows)
    current = _markov_objective_value(a, current_mu, nu, theta)
    if better(best_sampled, current) == best_sampled and best_mu.d == nu.d:
        # Prefer the sampled best as a starting point when it lives on the full class.
        sampled_rows = kernel(best_mu).rows
        if np.array_equal(sampled_rows > 0, rows > 0):
            rows = sampled_rows.copy()
            current_mu = best_mu
            current = best_sampled
    step = 0.5
    edges = [(int(i), int(j)) for i in states for j in states if edge_mask[i, j]]
    for _ in range(hill_steps):
        improved = False
        for (i, j) in edges:
            for factor in (1.0 + step, 1.0 / (1.0 + step)):
                trial_rows = rows.copy()
                trial_rows[i, j] *= factor
                trial_rows[i] /= trial_rows[i].sum()
                mu_try = PairMeasure(_stationary_law(trial_rows, states)[:, None] * trial_rows)
                val = _markov_objective_value(a, mu_try, nu, theta)
                if better(val, current) == val and val != current:
                    current, rows = val, trial_rows
                    improved = True
        if not improved:
            step *= 0.5
            if step < 1e-10:
                break
    best_refined = better(best_sampled, current)
    margin = _beaten_by(regime, best_refined, target)
    refinement_gap = _gap(best_refined, target)
    return RandomSearchReport(
        target=target,
        best_sampled=best_sampled,
        best_refined=best_refined,
        margin=margin,
        refinement_gap=refinement_gap,
        trials=trials,
        seed=seed,
        passed=margin <= tol,
    )


def random_search_extremum(
    problem: IIDVariationalProblem | MarkovVariationalProblem,
    trials: int = 10_000,
    seed: int = 0,
    hill_steps: int = 200,
    tol: float = 1e-8,
) -> RandomSearchReport:
    """Stress a closed-form extremum with blind random search plus hill climbing.

    Candidates are sampled from the regime's feasible set (Dirichlet-style
    points on random sub-supports; for chains, random kernels on random
    cyclic subgraphs converted to stationary pair measures via their
    stationary laws), then the best candidate is refined by coordinate tilts
    with step halving.  The report records whether anything beat the closed
    form beyond ``tol``.
    """
    if trials < 1:
        raise InputValidationError("need at least one trial")
    if isinstance(problem, IIDVariationalProblem):
        return _search_iid(problem, trials, seed, hill_steps, tol)
    if isinstance(problem, MarkovVariationalProblem):
        return _search_markov(problem, trials, seed, hill_steps, tol)
    raise InputValidationError(f"unknown problem descriptor {type(problem).__name__}")
