"""The optimal aggregation rule in log-likelihood form.

The best achievable rule weighs each vote by the log likelihood ratio of
that vote under the two labels and adds the prior log odds:

    score(x) = log(p_y / (1 - p_y))
             + sum_i [ x_i * log(psi_i / (1 - eta_i))
                     + (1 - x_i) * log((1 - psi_i) / eta_i) ]

and decides 1 exactly when the score is >= 0, so an exact tie goes to 1.
Boundary parameters would put infinities into the weights; instead they
are clamped into [clamp_epsilon, 1 - clamp_epsilon] before the logs are
taken. Interior parameters are never touched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ExpertPanel, ValidationError

__all__ = ["DecisionRule", "build_rule", "DEFAULT_CLAMP_EPSILON"]

DEFAULT_CLAMP_EPSILON = 1e-12

# largest clamp that still counts as a tie-breaking nudge rather than a
# change of model
_CLAMP_EPSILON_MAX = 1e-3


@dataclass(frozen=True, eq=False)
class DecisionRule:
    """Affine-in-the-votes scoring rule with threshold at zero."""

    offset: float
    vote_one_weights: np.ndarray
    vote_zero_weights: np.ndarray
    clamp_epsilon: float

    def __post_init__(self):
        w1 = np.asarray(self.vote_one_weights, dtype=np.float64).copy()
        w0 = np.asarray(self.vote_zero_weights, dtype=np.float64).copy()
        if w1.ndim != 1 or w0.ndim != 1 or w1.size != w0.size or w1.size == 0:
            raise ValidationError("weight vectors must be 1-D, nonempty, equal length")
        if not (np.all(np.isfinite(w1)) and np.all(np.isfinite(w0))):
            raise ValidationError("weights must be finite; clamp the panel first")
        if not math.isfinite(self.offset):
            raise ValidationError(f"offset {self.offset!r} must be finite")
        w1.setflags(write=False)
        w0.setflags(write=False)
        object.__setattr__(self, "vote_one_weights", w1)
        object.__setattr__(self, "vote_zero_weights", w0)
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def n(self) -> int:
        return int(self.vote_one_weights.size)

    def _check_bits(self, x) -> list[int]:
        try:
            bits = [int(b) for b in x]
        except (TypeError, ValueError):
            raise ValidationError(f"vote vector {x!r} is not a bit sequence") from None
        if len(bits) != self.n:
            raise ValidationError(
                f"vote vector has length {len(bits)}, rule expects {self.n}"
            )
        for i, b in enumerate(bits):
            if b not in (0, 1):
                raise ValidationError(f"vote {i} is {b}, expected 0 or 1")
        return bits

    def score(self, x) -> float:
        """Log odds of label 1 given the votes. Summed in index order."""
        bits = self._check_bits(x)
        w1 = self.vote_one_weights
        w0 = self.vote_zero_weights
        s = self.offset
        for i, b in enumerate(bits):
            s += w1[i] if b else w0[i]
        return s

    def decide(self, x) -> int:
        """The label guess for one vote vector, ties resolved to 1."""
        return 1 if self.score(x) >= 0.0 else 0

    def decide_batch(self, xs) -> list[int]:
        """decide applied elementwise; identical inputs give identical outputs."""
        out = []
        for idx, x in enumerate(xs):
            try:
                out.append(self.decide(x))
            except ValidationError as exc:
                raise ValidationError(f"input {idx}: {exc}") from None
        return out


def build_rule(panel: ExpertPanel,
               clamp_epsilon: float = DEFAULT_CLAMP_EPSILON) -> DecisionRule:
    """Compile a panel into its optimal decision rule.

    clamp_epsilon must lie in (0, 1e-3]. It only affects experts whose
    sensitivity or specificity sits within clamp_epsilon of 0 or 1; for
    such experts the weights become large but finite, preserving the
    decisions the boundary parameters dictate on outcomes of positive
    probability.
    """
    ce = float(clamp_epsilon)
    if not math.isfinite(ce) or not 0.0 < ce <= _CLAMP_EPSILON_MAX:
        raise ValidationError(
            f"clamp_epsilon = {clamp_epsilon!r} must lie in (0, {_CLAMP_EPSILON_MAX}]"
        )
    psi = np.clip(panel.psi, ce, 1.0 - ce)
    eta = np.clip(panel.eta, ce, 1.0 - ce)
    return DecisionRule(
        offset=math.log(panel.p_y / (1.0 - panel.p_y)),
        vote_one_weights=np.log(psi / (1.0 - eta)),
        vote_zero_weights=np.log((1.0 - psi) / eta),
        clamp_epsilon=ce,
    )
