"""Domain types and elementary identities for panels of binary experts.

A panel bundles n conditionally independent binary experts. Expert i is
described by its sensitivity psi[i] (probability of voting 1 when the
hidden label is 1) and its specificity eta[i] (probability of voting 0
when the hidden label is 0), and the hidden label itself carries a prior
bias p_y = P(label = 1).

Sensitivities and specificities may sit on the boundary of [0, 1]; a
perfectly informative or perfectly anti-informative expert is a legal
input. The prior must be strictly interior.
"""

from __future__ import annotations

import json
import math
from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ValidationError",
    "ProductBernoulli",
    "ExpertPanel",
    "BalancedAccuracy",
    "validate_panel",
    "load_panel",
    "fold_bias",
    "min_identity",
    "balanced_min_inequality_gap",
]


class ValidationError(ValueError):
    """Raised when inputs fail a structural or range check."""


def _prob_vector(values, name: str) -> np.ndarray:
    """Coerce to a read-only 1-D float64 array of probabilities in [0, 1]."""
    try:
        arr = np.asarray(values, dtype=np.float64).copy()
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{name} is not a numeric sequence: {exc}") from None
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValidationError(f"{name} must contain at least one entry")
    if not np.all(np.isfinite(arr)):
        bad = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise ValidationError(f"{name}[{bad}] is not finite")
    outside = (arr < 0.0) | (arr > 1.0)
    if np.any(outside):
        bad = int(np.flatnonzero(outside)[0])
        raise ValidationError(f"{name}[{bad}] = {arr[bad]} lies outside [0, 1]")
    arr.setflags(write=False)
    return arr


def _interior_scalar(value, name: str) -> float:
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{name} must be a real number, got {value!r}") from None
    if not math.isfinite(x) or not 0.0 < x < 1.0:
        raise ValidationError(f"{name} = {value!r} must lie strictly inside (0, 1)")
    return x


@dataclass(frozen=True, eq=False)
class ProductBernoulli:
    """Product of independent Bernoulli coordinates on {0, 1}^n.

    Coordinate i takes value 1 with probability p[i]. The induced measure
    on the hypercube is the product of the coordinate marginals.
    """

    p: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p", _prob_vector(self.p, "p"))

    @property
    def n(self) -> int:
        return int(self.p.size)

    def complement(self) -> "ProductBernoulli":
        """The law of the coordinatewise flipped vector, parameters 1 - p."""
        return ProductBernoulli(1.0 - self.p)


@dataclass(frozen=True, eq=False)
class ExpertPanel:
    """A panel of conditionally independent binary experts.

    psi[i] = P(expert i votes 1 | label 1), eta[i] = P(votes 0 | label 0),
    p_y = P(label 1). Conditioned on the label the votes are independent.
    """

    psi: np.ndarray
    eta: np.ndarray
    p_y: float = 0.5

    def __post_init__(self):
        psi = _prob_vector(self.psi, "psi")
        eta = _prob_vector(self.eta, "eta")
        if psi.size != eta.size:
            raise ValidationError(
                f"psi and eta must have equal length, got {psi.size} and {eta.size}"
            )
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "p_y", _interior_scalar(self.p_y, "p_y"))

    @property
    def n(self) -> int:
        return int(self.psi.size)

    @property
    def symmetric(self) -> bool:
        """True when psi equals eta entrywise, exactly."""
        return bool(np.array_equal(self.psi, self.eta))

    def law_given_one(self) -> ProductBernoulli:
        """Law of the vote vector conditioned on label 1."""
        return ProductBernoulli(self.psi)

    def law_given_zero(self) -> ProductBernoulli:
        """Law of the vote vector conditioned on label 0.

        An expert with specificity eta votes 1 with probability 1 - eta
        when the label is 0.
        """
        return ProductBernoulli(1.0 - self.eta)


@dataclass(frozen=True, eq=False)
class BalancedAccuracy:
    """Per-expert balanced accuracies pi[i] = (psi[i] + eta[i]) / 2."""

    pi: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "pi", _prob_vector(self.pi, "pi"))

    @classmethod
    def from_panel(cls, panel: ExpertPanel) -> "BalancedAccuracy":
        return cls(0.5 * (panel.psi + panel.eta))


_PANEL_KEYS = frozenset({"psi", "eta", "p_y"})


def validate_panel(raw: Mapping) -> ExpertPanel:
    """Build a validated panel from mapping data.

    Expects keys "psi" and "eta" (equal-length probability vectors) and an
    optional "p_y" defaulting to 1/2. Unknown keys are rejected so typos
    do not pass silently; nothing is ever clamped.
    """
    if not isinstance(raw, Mapping):
        raise ValidationError(f"panel data must be a mapping, got {type(raw).__name__}")
    unknown = sorted(set(raw) - _PANEL_KEYS)
    if unknown:
        raise ValidationError(f"unknown panel keys: {', '.join(map(str, unknown))}")
    for key in ("psi", "eta"):
        if key not in raw:
            raise ValidationError(f"panel data is missing required key {key!r}")
    return ExpertPanel(psi=raw["psi"], eta=raw["eta"], p_y=raw.get("p_y", 0.5))


def load_panel(path) -> ExpertPanel:
    """Read a panel from a UTF-8 JSON file holding one panel object."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read panel file {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"panel file {path} is not valid JSON: {exc}") from None
    return validate_panel(raw)


def fold_bias(panel: ExpertPanel) -> ExpertPanel:
    """Absorb a biased prior into an extra expert, leaving an unbiased panel.

    A prior p_y = theta != 1/2 contributes the same evidence as one more
    expert with sensitivity and specificity both equal to theta voting on
    an unbiased label, so the optimal aggregation error is unchanged.
    Returns the panel itself when p_y is exactly 1/2.
    """
    if panel.p_y == 0.5:
        return panel
    theta = panel.p_y
    return ExpertPanel(
        psi=np.append(panel.psi, theta),
        eta=np.append(panel.eta, theta),
        p_y=0.5,
    )


def min_identity(u: float, v: float) -> float:
    """min(u, v) for positive u, v via sqrt(u v) * exp(-|log(u/v)| / 2).

    The geometric mean overshoots the minimum by exactly half the log gap
    in the exponent, which is what makes square-root-product bounds
    sharpen into exact minimum computations.
    """
    for name, value in (("u", u), ("v", v)):
        x = float(value)
        if not math.isfinite(x) or x <= 0.0:
            raise ValidationError(f"{name} = {value!r} must be finite and positive")
    u = float(u)
    v = float(v)
    return math.sqrt(u * v) * math.exp(-0.5 * abs(math.log(u / v)))


def balanced_min_inequality_gap(s: float, t: float) -> float:
    """Slack of min(s, 1-t) + min(t, 1-s) >= 2 min(u, 1-u) at u = (s+t)/2.

    Nonnegative for s, t in [0, 1], and zero exactly when s = t or
    s + t = 1. The two-point average is where an asymmetric pair and its
    balanced surrogate meet.
    """
    for name, value in (("s", s), ("t", t)):
        x = float(value)
        if not math.isfinite(x) or not 0.0 <= x <= 1.0:
            raise ValidationError(f"{name} = {value!r} must lie in [0, 1]")
    s = float(s)
    t = float(t)
    u = 0.5 * (s + t)
    return (min(s, 1.0 - t) + min(t, 1.0 - s)) - 2.0 * min(u, 1.0 - u)
