"""Variational characterizations of Markov divergence rates.

Everything single-letter in :mod:`renyivar.variational` has a per-step
analogue in which distributions become stationary pair measures, relative
entropies become relative entropy rates, and power sums become spectral
growth rates of tilted kernel matrices.  The candidate functional is::

    J_a(mu) = (1/a) * rate(mu || theta) - (1/(a-1)) * rate(mu || nu)

with the same three regimes (sup over mu << nu for a > 1, inf over doubly
dominated mu for 0 < a < 1, sup over mu << theta for a < 0), and the
divergence rate of order ``a`` is the extremal value.

Attaining measures are *eigenvector twists*: with ``M`` the tilted kernel
matrix restricted to a maximizing cyclic class, ``u, w`` its left and right
Perron vectors and ``lam`` its root, the pair measure

    mu*(i, j) = u(i) M(i, j) w(j) / Z

is stationary by the eigenvalue equations and attains the extremum.  The
maximizing class is selected deterministically: classes are ordered by their
smallest state, and the first class achieving the largest Perron root wins.

The per-step tilt identities mirror the scalar ones: the growth rate of
``[e^{g} mu(j|i)]`` is the supremum of ``sum g dtheta - rate(theta || mu)``
(:func:`varadhan_solve`), and the order-``a`` pair links
``(1/a) rho([e^{a g} theta(j|i)])`` with ``(1/(a-1)) rho([e^{(a-1) g}
nu(j|i)])`` through the divergence rate, with the sup side attained by
twisting ``[e^{g} theta(j|i)]`` on the class where the alpha-tilted matrix
grows fastest (:func:`markov_acd_sup`, :func:`markov_acd_inf`,
:func:`certify_markov_acd`), and two growth-rate identities tie the twisted
measure back to both ambient matrices (:func:`rho_identities_check`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import TOL
from .distributions import Alpha
from .errors import DimensionMismatchError, InfeasiblePointError, InputValidationError
from .extreal import POS_INF, ExtReal
from .markov import (
    PairMeasure,
    _tilted_log_kernel,
    abs_cont_pair,
    kernel,
    rel_entropy_rate,
    renyi_rate,
    support,
)
from .numerics import logsumexp, safe_log
from .spectral import (
    NonnegMatrix,
    PerronData,
    _log_perron_root,
    classes,
    growth_rate_from_log,
    perron_from_log,
)
from .variational import CertResult, _attainment_residual, _signed_gap

__all__ = [
    "EdgeFn",
    "MarkovVarSolution",
    "RhoIdentityReport",
    "markov_objective",
    "solve_markov_variational",
    "certify_markov_inequality",
    "varadhan_growth",
    "varadhan_solve",
    "markov_acd_sup",
    "markov_acd_inf",
    "rho_identities_check",
    "certify_markov_acd",
]


@dataclass(frozen=True, eq=False)
class EdgeFn:
    """A real-valued function on edges (i, j), given by a finite d x d array."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] == 0:
            raise InputValidationError("edge-function values must form a nonempty square matrix")
        if not np.all(np.isfinite(v)):
            raise InputValidationError("edge-function values must be finite")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def d(self) -> int:
        return int(self.values.shape[0])


@dataclass(frozen=True, eq=False)
class MarkovVarSolution:
    """Outcome of a per-step variational problem.

    ``optimizer`` is the attaining stationary pair measure when one exists;
    ``class_used`` names the cyclic class carrying it and ``perron`` the
    eigendata of the twisted matrix on that class.  ``residual`` is the
    verified attainment defect ``|value - J(optimizer)|`` (zero by convention
    when both sides agree at infinity).
    """

    value: ExtReal
    optimizer: PairMeasure | None
    class_used: tuple[int, ...] | None
    perron: PerronData | None
    residual: float


@dataclass(frozen=True)
class RhoIdentityReport:
    """Growth-rate identities satisfied by the twisted optimizer.

    With ``N = [e^{a g} theta(j|i)]``, ``M = [e^{g} theta(j|i)]`` and ``nu*``
    the twisted measure, the report rechecks

        rho([nu*(j|i)^a theta(j|i)^(1-a)]) = rho(N) - a rho(M)
        rho([e^{(a-1) g} nu*(j|i)])        = rho(N) - rho(M)

    by recomputing every growth rate from scratch.
    """

    rho_n: float
    rho_m: float
    mixture_growth: float
    mixture_drift: float
    recentred_growth: float
    recentred_drift: float
    passed: bool


def _check_dims(*pairs: PairMeasure) -> None:
    sizes = {p.d for p in pairs}
    if len(sizes) > 1:
        raise DimensionMismatchError(f"pair measures live on different state spaces: sizes {sorted(sizes)}")


def _objective(a: float, mu: PairMeasure, nu: PairMeasure, theta: PairMeasure) -> ExtReal:
    return rel_entropy_rate(mu, theta).scale(1.0 / a) - rel_entropy_rate(mu, nu).scale(1.0 / (a - 1.0))


def markov_objective(alpha: Alpha, mu: PairMeasure, nu: PairMeasure, theta: PairMeasure) -> ExtReal:
    """The candidate functional (1/a) rate(mu||theta) - (1/(a-1)) rate(mu||nu).

    Finiteness of both rates is classified before they are combined, and the
    undefined ``inf - inf`` raises.
    """
    _check_dims(mu, nu, theta)
    return _objective(alpha.value, mu, nu, theta)


def _cyclic_classes_of(log_m: np.ndarray) -> list[tuple[int, tuple[int, ...]]]:
    """Cyclic classes of the support digraph of a log-matrix, with their indices."""
    pattern = NonnegMatrix(np.where(log_m > -math.inf, 1.0, 0.0))
    decomposition = classes(pattern)
    return [
        (k, cls)
        for k, (cls, flag) in enumerate(zip(decomposition.classes, decomposition.cyclic))
        if flag
    ]


def _argmax_class(log_m: np.ndarray) -> tuple[int, tuple[int, ...], float] | None:
    """The first class (smallest-state order) with the largest Perron root."""
    best: tuple[int, tuple[int, ...], float] | None = None
    for k, cls in _cyclic_classes_of(log_m):
        root = _log_perron_root(log_m, cls)
        if best is None or root > best[2]:
            best = (k, cls, root)
    return best


def _twist(log_m: np.ndarray, cls: tuple[int, ...], class_index: int) -> tuple[PairMeasure, PerronData]:
    """The stationary pair measure u(i) M(i,j) w(j) / Z on one cyclic class."""
    data = perron_from_log(log_m, cls, class_index)
    idx = np.asarray(cls, dtype=int)
    block = log_m[np.ix_(idx, idx)]
    log_u = np.log(data.left[idx])
    log_w = np.log(data.right[idx])
    log_weights = log_u[:, None] + block + log_w[None, :]
    log_z = logsumexp(log_weights)
    entries = np.zeros_like(log_m)
    finite = block > -math.inf
    sub = np.zeros_like(block)
    sub[finite] = np.exp(log_weights[finite] - log_z)
    entries[np.ix_(idx, idx)] = sub
    return PairMeasure(entries), data


def _solve(a: float, nu: PairMeasure, theta: PairMeasure) -> MarkovVarSolution:
    if a < 0:
        # Order a < 0 is order 1 - a with the measures swapped; the candidate
        # functionals of the two problems agree term by term, so the solution
        # (value, optimizer, residual) transfers unchanged.
        return _solve(1.0 - a, theta, nu)
    if a > 1 and not abs_cont_pair(nu, theta):
        # Unbounded regime: nu itself is feasible and already gives +inf.
        residual = _attainment_residual(POS_INF, _objective(a, nu, nu, theta))
        return MarkovVarSolution(POS_INF, nu, None, None, residual)
    log_m = _tilted_log_kernel(a, nu, theta)
    located = _argmax_class(log_m)
    if located is None:
        # 0 < a < 1 with no common cycle: the feasible set of doubly
        # dominated stationary measures is empty, the infimum is +inf.
        return MarkovVarSolution(POS_INF, None, None, None, 0.0)
    class_index, cls, root = located
    mu_star, data = _twist(log_m, cls, class_index)
    value = ExtReal.finite(root / (a * (a - 1.0)))
    residual = _attainment_residual(value, _objective(a, mu_star, nu, theta))
    return MarkovVarSolution(value, mu_star, cls, data, residual)


def solve_markov_variational(alpha: Alpha, nu: PairMeasure, theta: PairMeasure) -> MarkovVarSolution:
    """Solve the per-step three-regime variational problem in closed form.

    The value always equals the divergence rate of order ``alpha``; when it
    is finite the optimizer is the eigenvector twist of the tilted kernel
    matrix on its maximizing class and the attainment residual is reported.
    """
    _check_dims(nu, theta)
    return _solve(alpha.value, nu, theta)


def _feasible(regime: str, mu: PairMeasure, nu: PairMeasure, theta: PairMeasure) -> bool:
    if regime == "alpha_gt_1":
        return abs_cont_pair(mu, nu)
    if regime == "alpha_in_01":
        return abs_cont_pair(mu, nu) and abs_cont_pair(mu, theta)
    return abs_cont_pair(mu, theta)


def certify_markov_inequality(
    alpha: Alpha,
    mu: PairMeasure,
    nu: PairMeasure,
    theta: PairMeasure,
    tol: float = TOL.attainment_markov,
) -> CertResult:
    """Check that a feasible stationary candidate never beats the rate.

    Sup regimes report ``rate - J(mu)``, the inf regime ``J(mu) - rate``;
    infeasible candidates (wrong support) are rejected, and an infinite rate
    against a finite candidate certifies trivially.
    """
    _check_dims(mu, nu, theta)
    regime = alpha.regime
    if not _feasible(regime, mu, nu, theta):
        raise InfeasiblePointError(f"candidate violates the support constraint of regime {regime}")
    value = renyi_rate(alpha, nu, theta)
    candidate = markov_objective(alpha, mu, nu, theta)
    if regime == "alpha_in_01":
        slack = _signed_gap(candidate, value)
    else:
        slack = _signed_gap(value, candidate)
    return CertResult(passed=slack >= -tol, slack=slack)


def _edge_tilt(g: EdgeFn, pair: PairMeasure, factor: float = 1.0) -> np.ndarray:
    """Elementwise log of [e^{factor * g(i,j)} pair(j|i)], -inf off the edge support."""
    rows = kernel(pair).rows
    out = np.full(rows.shape, -math.inf)
    on = rows > 0
    out[on] = factor * g.values[on] + np.log(rows[on])
    return out


def varadhan_growth(g: EdgeFn, mu: PairMeasure) -> ExtReal:
    """Growth rate of the tilted kernel matrix [e^{g(i,j)} mu(j|i)].

    Always finite: the support of a stationary pair measure decomposes into
    cyclic classes, so the tilted matrix is never nilpotent.
    """
    if g.d != mu.d:
        raise DimensionMismatchError("edge function and pair measure sizes differ")
    return growth_rate_from_log(_edge_tilt(g, mu))


def varadhan_solve(g: EdgeFn, mu: PairMeasure) -> MarkovVarSolution:
    """The per-step exponential-tilt identity with its attaining twist.

    The growth rate of ``[e^{g} mu(j|i)]`` equals the supremum over
    stationary ``theta << mu`` of ``sum g dtheta - rate(theta || mu)``,
    attained by the eigenvector twist of the tilted matrix on its maximizing
    class.  The reported residual evaluates that attainment independently.
    """
    if g.d != mu.d:
        raise DimensionMismatchError("edge function and pair measure sizes differ")
    log_m = _edge_tilt(g, mu)
    located = _argmax_class(log_m)
    assert located is not None  # stationary supports always carry a cycle
    class_index, cls, root = located
    theta_star, data = _twist(log_m, cls, class_index)
    value = ExtReal.finite(root)
    attained_mean = float(np.sum(theta_star.entries * g.values))
    rate = rel_entropy_rate(theta_star, mu)
    attained = ExtReal.finite(attained_mean) - rate
    residual = _attainment_residual(value, attained)
    return MarkovVarSolution(value, theta_star, cls, data, residual)


def markov_acd_sup(alpha: Alpha, g: EdgeFn, theta: PairMeasure) -> MarkovVarSolution:
    """Maximize (1/(a-1)) rho([e^{(a-1)g} nu(j|i)]) - rate_a(nu || theta) over nu.

    The maximum is ``(1/a) rho(N)`` with ``N = [e^{a g} theta(j|i)]``.  The
    attaining measure twists ``M = [e^{g} theta(j|i)]`` with its own Perron
    vectors on the class where ``N`` grows fastest.
    """
    if g.d != theta.d:
        raise DimensionMismatchError("edge function and pair measure sizes differ")
    a = alpha.value
    log_n = _edge_tilt(g, theta, factor=a)
    located = _argmax_class(log_n)
    assert located is not None
    class_index, cls, root_n = located
    log_m = _edge_tilt(g, theta)
    nu_star, data = _twist(log_m, cls, class_index)
    value = ExtReal.finite(root_n / a)
    recentred = growth_rate_from_log(_edge_tilt(g, nu_star, factor=a - 1.0))
    attained = recentred.scale(1.0 / (a - 1.0)) - renyi_rate(alpha, nu_star, theta)
    residual = _attainment_residual(value, attained)
    return MarkovVarSolution(value, nu_star, cls, data, residual)


def markov_acd_inf(alpha: Alpha, g: EdgeFn, nu: PairMeasure) -> MarkovVarSolution:
    """Minimize (1/a) rho([e^{a g} theta(j|i)]) + rate_a(nu || theta) over theta.

    The minimum is ``(1/(a-1)) rho([e^{(a-1) g} nu(j|i)])``, i.e. the sup
    problem at order ``1 - a`` with tilt ``-g``; the attaining measure is the
    twist of ``[e^{-g} nu(j|i)]`` on the class maximizing that same matrix.
    """
    if g.d != nu.d:
        raise DimensionMismatchError("edge function and pair measure sizes differ")
    a = alpha.value
    log_n = _edge_tilt(g, nu, factor=a - 1.0)
    located = _argmax_class(log_n)
    assert located is not None
    class_index, cls, root_n = located
    log_m = _edge_tilt(g, nu, factor=-1.0)
    theta_star, data = _twist(log_m, cls, class_index)
    value = ExtReal.finite(root_n / (a - 1.0))
    ambient = growth_rate_from_log(_edge_tilt(g, theta_star, factor=a))
    attained = ambient.scale(1.0 / a) + renyi_rate(alpha, nu, theta_star)
    residual = _attainment_residual(value, attained)
    return MarkovVarSolution(value, theta_star, cls, data, residual)


def rho_identities_check(
    alpha: Alpha, g: EdgeFn, theta: PairMeasure, tol: float = TOL.attainment_markov
) -> RhoIdentityReport:
    """Recheck the two growth-rate identities tying the twist to its ambients."""
    a = alpha.value
    solution = markov_acd_sup(alpha, g, theta)
    nu_star = solution.optimizer
    assert nu_star is not None
    rho_n = growth_rate_from_log(_edge_tilt(g, theta, factor=a)).raw
    rho_m = growth_rate_from_log(_edge_tilt(g, theta)).raw
    mixture_growth = growth_rate_from_log(_tilted_log_kernel(a, nu_star, theta)).raw
    recentred_growth = growth_rate_from_log(_edge_tilt(g, nu_star, factor=a - 1.0)).raw
    mixture_drift = abs(mixture_growth - (rho_n - a * rho_m))
    recentred_drift = abs(recentred_growth - (rho_n - rho_m))
    return RhoIdentityReport(
        rho_n=rho_n,
        rho_m=rho_m,
        mixture_growth=mixture_growth,
        mixture_drift=mixture_drift,
        recentred_growth=recentred_growth,
        recentred_drift=recentred_drift,
        passed=mixture_drift <= tol and recentred_drift <= tol,
    )


def certify_markov_acd(
    alpha: Alpha,
    g: EdgeFn,
    nu: PairMeasure,
    theta: PairMeasure,
    tol: float = TOL.attainment_markov,
) -> CertResult:
    """One-sidedness of the per-step order-a tilt inequality for any pair.

    slack = (1/a) rho([e^{a g} theta(j|i)])
            - (1/(a-1)) rho([e^{(a-1) g} nu(j|i)]) + rate_a(nu || theta) >= 0,

    with an infinite rate certifying trivially.
    """
    _check_dims(nu, theta)
    if g.d != nu.d:
        raise DimensionMismatchError("edge function and pair measure sizes differ")
    a = alpha.value
    lhs = growth_rate_from_log(_edge_tilt(g, theta, factor=a)).raw / a
    rhs = growth_rate_from_log(_edge_tilt(g, nu, factor=a - 1.0)).raw / (a - 1.0)
    rate = renyi_rate(alpha, nu, theta)
    if not rate.is_finite:
        return CertResult(passed=True, slack=math.inf)
    slack = lhs - rhs + rate.raw
    return CertResult(passed=slack >= -tol, slack=slack)
