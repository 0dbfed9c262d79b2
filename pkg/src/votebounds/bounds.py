"""Closed-form bounds on the error of the optimal aggregation rule.

All bounds address a folded panel (prior exactly 1/2); fold a biased
panel first. The general bounds depend on the panel only through the
per-expert balanced accuracies pi_i = (psi_i + eta_i) / 2:

    upper:  (1/2) 2^n sqrt(prod_i pi_i (1 - pi_i))
    lower:  (1/2) prod_i 2 min(pi_i, 1 - pi_i)

The lower bound is the upper bound with the square-root products
replaced by exact minima, so the pair is tight simultaneously. For
symmetric panels (psi = eta = p entrywise) the lower bound sharpens to

    (1/2) 2^n sqrt(prod_i p_i (1 - p_i)) exp(-||w||_2 / 2),
    w_i = log(p_i / (1 - p_i)),

and that euclidean-norm exponent is a genuinely symmetric phenomenon:
the counterexample sweep exhibits an asymmetric panel where the
analogous expression fails to bound anything.

Quantities of the shape 2^n sqrt(prod ...) are assembled in the log
domain so they survive any panel size without overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    BalancedAccuracy,
    ExpertPanel,
    ProductBernoulli,
    ValidationError,
    fold_bias,
)
from .exact import DEFAULT_N_MAX, min_mass, optimal_error

__all__ = [
    "BoundsReport",
    "SweepRow",
    "upper_bound",
    "lower_bound",
    "symmetric_lower_bound",
    "committee_potential",
    "committee_potential_bounds",
    "manino_bounds",
    "hellinger_envelopes",
    "full_report",
    "counterexample_sweep",
]

_LOG2 = math.log(2.0)
_INV_SQRT2 = 1.0 / math.sqrt(2.0)

SWEEP_KINDS = ("asym", "sym")


def _require_folded(panel: ExpertPanel) -> None:
    if panel.p_y != 0.5:
        raise ValidationError(
            f"bounds expect a folded panel with p_y = 0.5, got p_y = {panel.p_y}; "
            "apply fold_bias first"
        )


def _balanced(panel: ExpertPanel) -> np.ndarray:
    _require_folded(panel)
    return 0.5 * (panel.psi + panel.eta)


def _symmetric_interior(panel: ExpertPanel) -> np.ndarray:
    _require_folded(panel)
    if not panel.symmetric:
        raise ValidationError("this bound requires psi = eta entrywise")
    p = panel.psi
    if np.any(p <= 0.0) or np.any(p >= 1.0):
        bad = int(np.flatnonzero((p <= 0.0) | (p >= 1.0))[0])
        raise ValidationError(
            f"this bound requires interior accuracies, entry {bad} is {p[bad]}"
        )
    return p


def upper_bound(panel: ExpertPanel) -> float:
    """Root-product upper bound from balanced accuracies.

    Zero whenever some balanced accuracy is exactly 0 or 1, since one
    such expert pins the label by itself.
    """
    pi = _balanced(panel)
    if np.any(pi == 0.0) or np.any(pi == 1.0):
        return 0.0
    log_term = panel.n * _LOG2 + 0.5 * float(np.sum(np.log(pi * (1.0 - pi))))
    return 0.5 * math.exp(log_term)


def lower_bound(panel: ExpertPanel) -> float:
    """Product-of-minima lower bound from balanced accuracies.

    Each factor 2 min(pi_i, 1 - pi_i) lies in [0, 1]; a boundary
    accuracy zeroes the product, matching the zero upper bound there.
    """
    pi = _balanced(panel)
    return 0.5 * float(np.prod(2.0 * np.minimum(pi, 1.0 - pi)))


def _symmetric_pieces(panel: ExpertPanel) -> tuple[float, float]:
    """(root-product base, euclidean-norm exponential) of a symmetric panel."""
    p = _symmetric_interior(panel)
    base = math.exp(panel.n * _LOG2 + 0.5 * float(np.sum(np.log(p * (1.0 - p)))))
    w = np.log(p / (1.0 - p))
    damp = math.exp(-0.5 * math.sqrt(float(np.sum(w * w))))
    return base, damp


def symmetric_lower_bound(panel: ExpertPanel) -> float:
    """Sharpened lower bound for symmetric panels.

    Replaces the product of per-expert penalties by a single euclidean
    norm of the log odds in the exponent, which can only help. Rejects
    asymmetric panels and boundary accuracies, no silent clamping.
    """
    base, damp = _symmetric_pieces(panel)
    return 0.5 * base * damp


def committee_potential(p) -> float:
    """sum_i (p_i - 1/2) log(p_i / (1 - p_i)) for interior accuracies p.

    Every summand is nonnegative: an accuracy above one half has positive
    log odds, one below has negative log odds, and the factors always
    share a sign.
    """
    arr = np.asarray(p, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValidationError("accuracies must form a nonempty 1-D sequence")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise ValidationError("accuracies must lie strictly inside (0, 1)")
    return float(np.sum((arr - 0.5) * np.log(arr / (1.0 - arr))))


def committee_potential_bounds(panel: ExpertPanel) -> tuple[float, float]:
    """Exponential sandwich driven by the committee potential.

    For a symmetric folded panel with potential F:

        lower = 3 / (4 (1 + exp(2 F + 4 sqrt(F))))
        upper = exp(-F / 2)

    Tight in the exponent as F grows but slack for small panels, which is
    what the root-product bounds fix.
    """
    p = _symmetric_interior(panel)
    potential = committee_potential(p)
    lower = 3.0 / (4.0 * (1.0 + math.exp(2.0 * potential + 4.0 * math.sqrt(potential))))
    upper = math.exp(-0.5 * potential)
    return lower, upper


def manino_bounds(panel: ExpertPanel) -> tuple[float, float]:
    """Earlier root-product sandwich for symmetric panels.

    Same shape as symmetric_lower_bound and upper_bound but with the
    lower constant 0.36 instead of 1/2:

        lower = 0.36 * 2^n sqrt(prod p (1-p)) * exp(-||w||_2 / 2)
        upper = 0.50 * 2^n sqrt(prod p (1-p))

    Kept as the comparison target that the 1/2 constant improves on.
    """
    base, damp = _symmetric_pieces(panel)
    return 0.36 * base * damp, 0.5 * base


def hellinger_envelopes(P: ProductBernoulli, Q: ProductBernoulli) -> tuple[float, float]:
    """Closed-form bracket around the Bhattacharyya affinity.

    With d_i = p_i - q_i:

        sqrt(prod_i (1 - d_i^2) / 2)  <=  affinity  <=  sqrt(prod_i (1 - d_i^2))

    The upper envelope is attained when p_i + q_i = 1 for every i; the
    lower one reflects that each factor of the affinity is at least
    1/sqrt(2) times its envelope.
    """
    if not isinstance(P, ProductBernoulli) or not isinstance(Q, ProductBernoulli):
        raise ValidationError("expected a pair of ProductBernoulli laws")
    if P.n != Q.n:
        raise ValidationError(f"dimension mismatch: {P.n} vs {Q.n} coordinates")
    d = P.p - Q.p
    factors = 1.0 - d * d
    if np.any(factors == 0.0):
        return 0.0, 0.0
    log_sum = float(np.sum(np.log(factors)))
    upper = math.exp(0.5 * log_sum)
    lower = math.exp(0.5 * (log_sum - P.n * _LOG2))
    return lower, upper


@dataclass(frozen=True)
class BoundsReport:
    """Every applicable bound for one panel, evaluated after folding.

    Symmetric-only entries are None for asymmetric or boundary panels,
    exact is None unless requested. When exact is present it must sit
    inside [lower, upper] up to 1e-9.
    """

    n: int
    pi: BalancedAccuracy
    upper: float
    lower: float
    hellinger_lower: float
    hellinger_upper: float
    symmetric_lower: float | None = None
    potential_lower: float | None = None
    potential_upper: float | None = None
    manino_lower: float | None = None
    manino_upper: float | None = None
    exact: float | None = None

    _TOL = 1e-9

    def __post_init__(self):
        for name in ("upper", "lower", "symmetric_lower", "potential_lower",
                     "potential_upper", "manino_lower", "manino_upper",
                     "hellinger_lower", "hellinger_upper", "exact"):
            value = getattr(self, name)
            if value is not None and not -self._TOL <= value <= 1.0 + self._TOL:
                raise ValidationError(f"{name} = {value} lies outside [0, 1]")
        if self.exact is not None:
            if not self.lower - self._TOL <= self.exact <= self.upper + self._TOL:
                raise ValidationError(
                    f"exact error {self.exact} escapes the bracket "
                    f"[{self.lower}, {self.upper}]"
                )

    def to_dict(self) -> dict:
        """Flat mapping with None for absent entries, ready for JSON."""
        return {
            "n": self.n,
            "pi": [float(x) for x in self.pi.pi],
            "upper": self.upper,
            "lower": self.lower,
            "symmetric_lower": self.symmetric_lower,
            "potential_lower": self.potential_lower,
            "potential_upper": self.potential_upper,
            "manino_lower": self.manino_lower,
            "manino_upper": self.manino_upper,
            "hellinger_lower": self.hellinger_lower,
            "hellinger_upper": self.hellinger_upper,
            "exact": self.exact,
        }


def full_report(panel: ExpertPanel, *, with_exact: bool = False,
                n_max: int = DEFAULT_N_MAX,
                workers: int | None = None) -> BoundsReport:
    """Evaluate all bounds that apply to a panel, folding the prior first.

    The report describes the folded panel, so n counts the extra expert
    a biased prior turns into. with_exact additionally runs the exact
    enumeration, which requires the folded size to stay within n_max.
    """
    folded = fold_bias(panel)
    interior = bool(np.all((folded.psi > 0.0) & (folded.psi < 1.0)))
    symmetric = folded.symmetric and interior

    if symmetric:
        sym_lower = symmetric_lower_bound(folded)
        pot_lower, pot_upper = committee_potential_bounds(folded)
        man_lower, man_upper = manino_bounds(folded)
    else:
        sym_lower = pot_lower = pot_upper = man_lower = man_upper = None

    hell_lower, hell_upper = hellinger_envelopes(
        folded.law_given_one(), folded.law_given_zero()
    )
    exact = None
    if with_exact:
        exact = optimal_error(folded, n_max=n_max, workers=workers)

    return BoundsReport(
        n=folded.n,
        pi=BalancedAccuracy.from_panel(folded),
        upper=upper_bound(folded),
        lower=lower_bound(folded),
        symmetric_lower=sym_lower,
        potential_lower=pot_lower,
        potential_upper=pot_upper,
        manino_lower=man_lower,
        manino_upper=man_upper,
        hellinger_lower=hell_lower,
        hellinger_upper=hell_upper,
        exact=exact,
    )


@dataclass(frozen=True)
class SweepRow:
    """One sweep point: true error mass next to a candidate bound value."""

    eps: float
    exact: float
    bound: float
    ratio: float


def _asym_candidate(eps: float) -> float:
    """Euclidean-norm sharpening applied to the asymmetric showcase panel.

    Evaluates sqrt(prod pi (1-pi)) * exp(-||log-odds(pi)||_2 / 2) for the
    balanced accuracies (1 - eps/2, eps/2). Not a valid bound: the sweep
    shows it overshoots the true minimum mass eps^2 without limit.
    """
    return (0.5 * eps) * (1.0 - 0.5 * eps) * (eps / (2.0 - eps)) ** _INV_SQRT2


def _sym_candidate(eps: float) -> float:
    """Root-product core sqrt(prod p (1-p)) * exp(-||w||_2 / 2) at p = (eps, eps).

    A valid lower-bound core for the symmetric showcase panel, but loose:
    the sweep shows it undershoots the true minimum mass 2 eps without
    limit.
    """
    return eps * (1.0 - eps) * (eps / (1.0 - eps)) ** _INV_SQRT2


def counterexample_sweep(kind: str, eps_grid) -> list[SweepRow]:
    """Trace the two showcase panels across a grid of eps values.

    kind "asym": experts (psi, eta) = ((1, 0), (1 - eps, eps)). The exact
    minimum mass is eps^2, the candidate value is the euclidean-norm
    sharpening of the balanced-accuracy bound, and ratio = bound / eps^2
    grows without limit as eps shrinks. This is why the sharpening is
    only available for symmetric panels.

    kind "sym": experts with psi = eta = (eps, eps). The exact minimum
    mass is 2 eps, the candidate is the root-product core, and
    ratio = bound / eps decays to zero, showing how loose the
    euclidean-norm exponent is here even though it is valid.

    Exact values are enumerated, not taken from the closed forms.
    """
    if kind not in SWEEP_KINDS:
        raise ValidationError(f"sweep kind must be one of {SWEEP_KINDS}, got {kind!r}")
    eps_list = [float(e) for e in eps_grid]
    if not eps_list:
        raise ValidationError("eps grid must contain at least one value")
    for e in eps_list:
        if not math.isfinite(e) or not 0.0 < e < 1.0:
            raise ValidationError(f"eps = {e!r} must lie strictly inside (0, 1)")

    rows = []
    for e in eps_list:
        if kind == "asym":
            exact = min_mass(
                ProductBernoulli(np.array([1.0, 0.0])),
                ProductBernoulli(np.array([e, 1.0 - e])),
            )
            bound = _asym_candidate(e)
            ratio = bound / (e * e)
        else:
            exact = min_mass(
                ProductBernoulli(np.array([e, e])),
                ProductBernoulli(np.array([1.0 - e, 1.0 - e])),
            )
            bound = _sym_candidate(e)
            ratio = bound / e
        rows.append(SweepRow(eps=e, exact=exact, bound=bound, ratio=ratio))
    return rows
