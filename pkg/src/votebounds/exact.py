"""Exact quantities for pairs of product Bernoulli laws on the hypercube.

Everything here is computed by full enumeration of {0, 1}^n with running
products kept in the linear domain. Probabilities of individual outcomes
may underflow to zero for extreme parameters; that is acceptable, the
aggregates of interest are sums of such terms. Enumeration is capped at
n_max coordinates (24 by default, about 16.7 million outcomes); larger
instances must go through the Monte Carlo estimators instead.

The traversal splits the cube on the first k coordinates into 2^k prefix
blocks. Blocks may be evaluated by parallel workers, but their partial
sums are always added in block order, so the result does not depend on
the worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _parallel
from .core import ExpertPanel, ProductBernoulli, ValidationError, fold_bias

__all__ = [
    "DEFAULT_N_MAX",
    "EnumerationLimitError",
    "AffinityResult",
    "min_mass",
    "tv_distance",
    "bhattacharyya",
    "affinity",
    "optimal_error",
    "complement_symmetry_check",
    "tensorization_gap",
]

DEFAULT_N_MAX = 24

# Suffix tables hold 2^18 outcome masses (2 MiB each); anything above
# that is handled by the prefix blocks.
_SUFFIX_BITS = 18

_NORM_ORDERS = (1.0, 2.0, math.inf)
_COMPLEMENT_N_MAX = 12


class EnumerationLimitError(ValueError):
    """Instance too large for exact enumeration; use the Monte Carlo module."""


def _mass_table(p: np.ndarray) -> np.ndarray:
    """Outcome masses of a product law over all 2^k points.

    Bit i of the outcome index is coordinate i, so table[j] is the
    probability of the vector whose i-th entry is the i-th bit of j.
    """
    out = np.ones(1, dtype=np.float64)
    for pi in p:
        out = np.concatenate((out * (1.0 - pi), out * pi))
    return out


def _check_pair(P: ProductBernoulli, Q: ProductBernoulli, n_max: int) -> int:
    if not isinstance(P, ProductBernoulli) or not isinstance(Q, ProductBernoulli):
        raise ValidationError("expected a pair of ProductBernoulli laws")
    if P.n != Q.n:
        raise ValidationError(f"dimension mismatch: {P.n} vs {Q.n} coordinates")
    if P.n > n_max:
        raise EnumerationLimitError(
            f"n = {P.n} exceeds the enumeration cap n_max = {n_max}; "
            "use the Monte Carlo estimators for panels this large"
        )
    return P.n


def _pairwise_sum(P: ProductBernoulli, Q: ProductBernoulli, combine, n_max: int,
                  workers: int | None) -> float:
    """Sum combine(P-masses, Q-masses) over the whole cube, blockwise."""
    n = _check_pair(P, Q, n_max)
    w = _parallel.resolve_workers(workers)
    k = max(0, n - _SUFFIX_BITS)
    sp = _mass_table(P.p[k:])
    sq = _mass_table(Q.p[k:])
    if k == 0:
        return float(combine(sp, sq))
    wp = _mass_table(P.p[:k])
    wq = _mass_table(Q.p[:k])

    def block(b: int) -> float:
        return float(combine(wp[b] * sp, wq[b] * sq))

    partials = _parallel.map_ordered(block, range(1 << k), w)
    return float(np.sum(np.asarray(partials)))


def _sum_min(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.sum(np.minimum(a, b)))


def _sum_absdiff(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.sum(np.abs(a - b)))


def min_mass(P: ProductBernoulli, Q: ProductBernoulli, *,
             n_max: int = DEFAULT_N_MAX, workers: int | None = None) -> float:
    """Mass of the pointwise minimum, sum over x of min(P(x), Q(x)).

    Equals 1 exactly when P = Q and 1 minus the total variation distance
    in general. Half this quantity is the error of the best possible
    binary test between P and Q under a fair coin prior.
    """
    return _pairwise_sum(P, Q, _sum_min, n_max, workers)


def tv_distance(P: ProductBernoulli, Q: ProductBernoulli, *,
                n_max: int = DEFAULT_N_MAX, workers: int | None = None) -> float:
    """Total variation distance, half the l1 distance between the laws."""
    return 0.5 * _pairwise_sum(P, Q, _sum_absdiff, n_max, workers)


def bhattacharyya(P: ProductBernoulli, Q: ProductBernoulli) -> float:
    """Bhattacharyya affinity, sum over x of sqrt(P(x) Q(x)).

    Factorizes over coordinates for product laws:
    prod_i [sqrt(p_i q_i) + sqrt((1-p_i)(1-q_i))], so no enumeration is
    needed and any dimension is fine.
    """
    if not isinstance(P, ProductBernoulli) or not isinstance(Q, ProductBernoulli):
        raise ValidationError("expected a pair of ProductBernoulli laws")
    if P.n != Q.n:
        raise ValidationError(f"dimension mismatch: {P.n} vs {Q.n} coordinates")
    factors = np.sqrt(P.p * Q.p) + np.sqrt((1.0 - P.p) * (1.0 - Q.p))
    return float(np.prod(factors))


@dataclass(frozen=True)
class AffinityResult:
    """Closeness measures for one pair of product laws.

    min_mass and tv are complementary (they sum to 1), and min_mass never
    exceeds the Bhattacharyya affinity. method records how the enumerated
    quantities were obtained.
    """

    min_mass: float
    tv: float
    bhattacharyya: float
    n: int
    method: str

    _TOL = 1e-9

    def __post_init__(self):
        if self.method not in ("enumeration", "closed_form"):
            raise ValidationError(f"unknown affinity method {self.method!r}")
        for name in ("min_mass", "tv", "bhattacharyya"):
            value = getattr(self, name)
            if not -self._TOL <= value <= 1.0 + self._TOL:
                raise ValidationError(f"{name} = {value} lies outside [0, 1]")
        if abs(self.min_mass + self.tv - 1.0) > 1e-12:
            raise ValidationError(
                f"min_mass + tv = {self.min_mass + self.tv} deviates from 1"
            )
        if self.min_mass > self.bhattacharyya + self._TOL:
            raise ValidationError(
                f"min_mass {self.min_mass} exceeds Bhattacharyya affinity "
                f"{self.bhattacharyya}"
            )


def affinity(P: ProductBernoulli, Q: ProductBernoulli, *,
             n_max: int = DEFAULT_N_MAX, workers: int | None = None) -> AffinityResult:
    """Bundle min-mass, total variation and Bhattacharyya affinity."""
    m = min_mass(P, Q, n_max=n_max, workers=workers)
    t = tv_distance(P, Q, n_max=n_max, workers=workers)
    return AffinityResult(
        min_mass=m, tv=t, bhattacharyya=bhattacharyya(P, Q), n=P.n,
        method="enumeration",
    )


def optimal_error(panel: ExpertPanel, *, n_max: int = DEFAULT_N_MAX,
                  workers: int | None = None) -> float:
    """Optimal aggregation error of the panel after bias folding.

    For an unbiased panel this is the error probability of the best
    possible rule, half the overlap of the two label-conditional vote
    laws. A biased prior is first absorbed into an extra expert and the
    value returned is the optimal error of that augmented unbiased
    problem, the quantity every closed-form bound here addresses. It
    averages the risks of the original problem at the prior and at its
    complement, so it matches the prior-weighted risk exactly for
    symmetric panels and may exceed it for asymmetric ones.
    """
    folded = fold_bias(panel)
    return 0.5 * min_mass(
        folded.law_given_one(), folded.law_given_zero(),
        n_max=n_max, workers=workers,
    )


def _norm(diff: np.ndarray, r: float) -> float:
    if r == math.inf:
        return float(np.max(np.abs(diff)))
    if r == 1.0:
        return float(np.sum(np.abs(diff)))
    return float(np.sum(np.abs(diff) ** r) ** (1.0 / r))


def complement_symmetry_check(psi: ProductBernoulli, eta: ProductBernoulli,
                              r: float) -> tuple[float, float]:
    """Both sides of the flip symmetry of sensitivity/specificity distances.

    Returns (||Ber(psi) - Ber(1-eta)||_r, ||Ber(1-psi) - Ber(eta)||_r) for
    r in {1, 2, inf}, norms taken over the 2^n outcome masses. Flipping
    every coordinate is a measure-preserving bijection of the cube that
    swaps the two pairs, so the two values agree. Capped at n = 12.
    """
    if float(r) not in _NORM_ORDERS:
        raise ValidationError(f"norm order must be 1, 2 or inf, got {r!r}")
    n = _check_pair(psi, eta, _COMPLEMENT_N_MAX)
    del n
    direct = _mass_table(psi.p) - _mass_table(1.0 - eta.p)
    flipped = _mass_table(1.0 - psi.p) - _mass_table(eta.p)
    return _norm(direct, float(r)), _norm(flipped, float(r))


def tensorization_gap(P: ProductBernoulli, P_alt: ProductBernoulli,
                      Q: ProductBernoulli, Q_alt: ProductBernoulli, *,
                      n_max: int = DEFAULT_N_MAX,
                      workers: int | None = None) -> float:
    """Super-multiplicativity slack of min-mass under products.

    min_mass(P x Q, P' x Q') - min_mass(P, P') * min_mass(Q, Q'), which is
    nonnegative: taking minima coordinate-block by coordinate-block before
    summing can only lose mass. P, P' share one dimension and Q, Q'
    another; the joint enumeration covers their sum.
    """
    if P.n != P_alt.n:
        raise ValidationError(f"dimension mismatch: {P.n} vs {P_alt.n} coordinates")
    if Q.n != Q_alt.n:
        raise ValidationError(f"dimension mismatch: {Q.n} vs {Q_alt.n} coordinates")
    if P.n + Q.n > n_max:
        raise EnumerationLimitError(
            f"joint dimension {P.n + Q.n} exceeds the enumeration cap {n_max}"
        )
    joint = min_mass(
        ProductBernoulli(np.concatenate((P.p, Q.p))),
        ProductBernoulli(np.concatenate((P_alt.p, Q_alt.p))),
        n_max=n_max, workers=workers,
    )
    split = min_mass(P, P_alt, n_max=n_max, workers=workers) * \
        min_mass(Q, Q_alt, n_max=n_max, workers=workers)
    return joint - split
