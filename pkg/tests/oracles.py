"""Independent brute-force oracles for the test suite.

Everything here enumerates {0,1}^n with itertools and Python floats, on
purpose: these values must not share code with the library kernels they
check. Dimensions stay small enough that O(2^n) per call is fine.
"""

import itertools
import math

import numpy as np


def outcomes(n):
    """All bit vectors of length n as tuples, lexicographic."""
    return list(itertools.product((0, 1), repeat=n))


def product_mass(p, bits):
    """Probability of one outcome under a product Bernoulli law."""
    m = 1.0
    for b, pi in zip(bits, p):
        m *= pi if b else 1.0 - pi
    return m


def brute_masses(p):
    """Outcome masses over all of {0,1}^n, aligned with outcomes(n)."""
    return np.array([product_mass(p, bits) for bits in outcomes(len(p))])


def brute_min_mass(p, q):
    return float(np.minimum(brute_masses(p), brute_masses(q)).sum())


def brute_tv(p, q):
    return 0.5 * float(np.abs(brute_masses(p) - brute_masses(q)).sum())


def brute_bhattacharyya(p, q):
    return float(np.sqrt(brute_masses(p) * brute_masses(q)).sum())


def conditional_laws(panel):
    """(law of votes given label 1, law given label 0) as parameter lists."""
    psi = [float(v) for v in panel.psi]
    eta_bar = [1.0 - float(v) for v in panel.eta]
    return psi, eta_bar


def bayes_risk(panel):
    """Minimum error of any rule on the panel's own biased problem.

    sum over x of min(p_y * mu(x), (1-p_y) * nu(x)), the pointwise best
    decision under the actual prior.
    """
    psi, eta_bar = conditional_laws(panel)
    mu = brute_masses(psi)
    nu = brute_masses(eta_bar)
    return float(np.minimum(panel.p_y * mu, (1.0 - panel.p_y) * nu).sum())


def rule_risk(panel, decide_fn):
    """Error of an arbitrary rule by direct summation of misclassified mass."""
    psi, eta_bar = conditional_laws(panel)
    mu = brute_masses(psi)
    nu = brute_masses(eta_bar)
    total = 0.0
    for bits, m, v in zip(outcomes(panel.n), mu, nu):
        if decide_fn(bits):
            total += (1.0 - panel.p_y) * v
        else:
            total += panel.p_y * m
    return total


def best_rule_risk(panel):
    """Minimum error over ALL 2^(2^n) deterministic rules, exhaustively."""
    psi, eta_bar = conditional_laws(panel)
    mu = brute_masses(psi)
    nu = brute_masses(eta_bar)
    p_y = panel.p_y
    best = math.inf
    for assignment in itertools.product((0, 1), repeat=1 << panel.n):
        err = 0.0
        for g, m, v in zip(assignment, mu, nu):
            err += (1.0 - p_y) * v if g else p_y * m
        best = min(best, err)
    return best


def brute_norm(diff, r):
    if r == math.inf:
        return float(np.max(np.abs(diff)))
    return float(np.sum(np.abs(diff) ** r) ** (1.0 / r))


def min_score_margin(panel, build_rule_fn):
    """Smallest |score| over all outcomes; tie-freeness filter for suites."""
    rule = build_rule_fn(panel)
    return min(abs(rule.score(bits)) for bits in outcomes(panel.n))


def random_panel(rng, n, low=0.01, high=0.99, p_y=0.5, symmetric=False):
    from votebounds import ExpertPanel

    psi = rng.uniform(low, high, n)
    eta = psi.copy() if symmetric else rng.uniform(low, high, n)
    return ExpertPanel(psi=psi, eta=eta, p_y=p_y)
