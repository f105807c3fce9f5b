"""Probability distributions on finite alphabets and their divergences.

Conventions, fixed once for the whole library (natural logarithm throughout):

* relative entropy::

      D(nu || theta) = sum_{x : nu(x) > 0} nu(x) log(nu(x) / theta(x)),

  which is ``+inf`` unless ``nu`` is absolutely continuous with respect to
  ``theta``; the term convention is ``0 * log 0 = 0``.

* Renyi divergence of order ``a`` (``a`` outside ``{0, 1}``)::

      R_a(nu || theta) = (1 / (a (a - 1))) * log sum_x nu(x)^a theta(x)^(1-a),

  where the sum runs over ``nu(x) * theta(x) > 0`` only; no smoothing is ever
  applied.  For ``a > 1`` the value is ``+inf`` whenever ``nu`` is not
  absolutely continuous with respect to ``theta``.  For negative orders the
  skew identity ``R_a(nu || theta) = R_{1-a}(theta || nu)`` serves as the
  definition.  An empty sum (distributions with disjoint supports) gives
  ``+inf`` for every admissible order.  The chosen normalization keeps the
  divergence nonnegative for all admissible orders, including negative ones.

All order-``a`` power sums are evaluated in log space (see
:mod:`renyivar.numerics`), so extreme orders and tiny weights do not overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import TOL
from .errors import (
    AbsoluteContinuityError,
    DimensionMismatchError,
    InvalidAlphaError,
    InvalidDistributionError,
)
from .extreal import POS_INF, ExtReal
from .numerics import logsumexp, safe_log

__all__ = [
    "Dist",
    "Alpha",
    "abs_cont",
    "rel_entropy",
    "renyi_div",
    "renyi_via_reference",
]


@dataclass(frozen=True, eq=False)
class Dist:
    """A probability distribution on the alphabet {0, ..., d-1}.

    Construction accepts any nonnegative, not identically zero weight vector
    and normalizes it to total mass one (so distributions survive a JSON
    round-trip without accumulating drift).  Entries exactly zero stay
    exactly zero: support questions are answered by equality with 0, never by
    thresholding.  The stored array is read-only.
    """

    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise InvalidDistributionError("weights must be a nonempty 1-d array")
        if not np.all(np.isfinite(w)):
            raise InvalidDistributionError("weights must be finite")
        if np.any(w < 0):
            raise InvalidDistributionError("weights must be nonnegative")
        total = float(w.sum())
        if total <= 0.0:
            raise InvalidDistributionError("weights must not be identically zero")
        w = w / total
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @property
    def d(self) -> int:
        """Alphabet size."""
        return int(self.weights.shape[0])

    @property
    def support(self) -> np.ndarray:
        """Boolean mask of states carrying positive mass."""
        return self.weights > 0

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"Dist({np.array2string(self.weights, max_line_width=70)})"


@dataclass(frozen=True)
class Alpha:
    """A Renyi order: any real outside small excluded neighborhoods of 0 and 1.

    Orders within ``1e-12`` of the degenerate points 0 and 1 are rejected --
    the divergence formulas divide by ``a`` and ``a - 1``, and silently
    computing near-0/0 expressions would return garbage.  Magnitudes beyond
    ``1e6`` are rejected for the same conditioning reason.
    """

    value: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", float(self.value))
        v = self.value
        if not math.isfinite(v):
            raise InvalidAlphaError("order must be finite")
        if abs(v) < TOL.alpha_excluded or abs(v - 1.0) < TOL.alpha_excluded:
            raise InvalidAlphaError(f"order {v!r} is too close to the excluded points 0 and 1")
        if abs(v) > TOL.alpha_max:
            raise InvalidAlphaError(f"order {v!r} exceeds the supported magnitude {TOL.alpha_max:g}")

    @property
    def regime(self) -> str:
        """Which of the three variational regimes this order falls in."""
        if self.value > 1.0:
            return "alpha_gt_1"
        if self.value > 0.0:
            return "alpha_in_01"
        return "alpha_lt_0"


def _check_same_alphabet(*dists: Dist) -> None:
    sizes = {dist.d for dist in dists}
    if len(sizes) > 1:
        raise DimensionMismatchError(f"distributions live on different alphabets: sizes {sorted(sizes)}")


def abs_cont(nu: Dist, theta: Dist) -> bool:
    """True when nu is absolutely continuous w.r.t. theta (support containment)."""
    _check_same_alphabet(nu, theta)
    return bool(np.all(nu.weights[theta.weights == 0] == 0))


def rel_entropy(nu: Dist, theta: Dist) -> ExtReal:
    """Relative entropy D(nu || theta); +inf unless nu << theta."""
    if not abs_cont(nu, theta):
        return POS_INF
    mask = nu.support
    n = nu.weights[mask]
    t = theta.weights[mask]
    return ExtReal.finite(float(np.sum(n * (np.log(n) - np.log(t)))))


def _renyi(a: float, nu: Dist, theta: Dist) -> ExtReal:
    if a < 0:
        return _renyi(1.0 - a, theta, nu)
    if a > 1 and not abs_cont(nu, theta):
        return POS_INF
    mask = nu.support & theta.support
    if not mask.any():
        return POS_INF
    log_terms = a * np.log(nu.weights[mask]) + (1.0 - a) * np.log(theta.weights[mask])
    return ExtReal.finite(logsumexp(log_terms) / (a * (a - 1.0)))


def renyi_div(alpha: Alpha, nu: Dist, theta: Dist) -> ExtReal:
    """Renyi divergence R_alpha(nu || theta) under the library conventions."""
    _check_same_alphabet(nu, theta)
    return _renyi(alpha.value, nu, theta)


def renyi_via_reference(alpha: Alpha, nu: Dist, theta: Dist, eta: Dist) -> ExtReal:
    """Renyi divergence computed through densities w.r.t. a common reference.

    Evaluates (1/(a(a-1))) log sum (dnu/deta)^a (dtheta/deta)^(1-a) deta.  The
    result does not depend on the choice of ``eta`` as long as both measures
    are dominated by it; the direct formula is recovered with the counting
    reference.  Requires ``nu << eta`` and ``theta << eta``.
    """
    _check_same_alphabet(nu, theta, eta)
    if not abs_cont(nu, eta):
        raise AbsoluteContinuityError("nu is not absolutely continuous w.r.t. the reference")
    if not abs_cont(theta, eta):
        raise AbsoluteContinuityError("theta is not absolutely continuous w.r.t. the reference")
    return _renyi_via_reference(alpha.value, nu, theta, eta)


def _renyi_via_reference(a: float, nu: Dist, theta: Dist, eta: Dist) -> ExtReal:
    if a < 0:
        return _renyi_via_reference(1.0 - a, theta, nu, eta)
    if a > 1 and not abs_cont(nu, theta):
        return POS_INF
    mask = nu.support & theta.support
    if not mask.any():
        return POS_INF
    log_nu_density = np.log(nu.weights[mask]) - np.log(eta.weights[mask])
    log_theta_density = np.log(theta.weights[mask]) - np.log(eta.weights[mask])
    log_terms = a * log_nu_density + (1.0 - a) * log_theta_density + safe_log(eta.weights[mask])
    return ExtReal.finite(logsumexp(log_terms) / (a * (a - 1.0)))
