"""Decision procedures on posterior scores.

- stepup: the data-driven rule that rejects the k smallest-T hypotheses where
  k is the largest index keeping the d-weighted running mean of T at or below
  alpha.
- oracle_cutoff_mc: Monte Carlo estimate of the largest threshold t whose
  weighted mFDR stays at or below alpha (the oracle cutoff), by bisection on
  the empirical rate curve.
- pvalue_oracle_cutoff: the classical two-sided competitor, |X| >= c with c
  solving unweighted mFDR(c) = alpha.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .error_rates import PooledMfdrStar
from .model import GAUSSIAN_MIXTURE, SeveritySpec, TwoGroupsModel, sample
from .numerics import bisect_root, normal_cdf
from .posterior import DecisionVector, PosteriorScores, posterior_scores


class StepupResult(NamedTuple):
    k: int
    decisions: DecisionVector
    threshold: float


def stepup(scores: PosteriorScores, alpha: float) -> StepupResult:
    """Reject the hypotheses holding the k smallest T order statistics, with
    k = max{j : sum_{i<=j} T_(i) d_(i) / sum_{i<=j} d_(i) <= alpha} (k = 0 when
    no prefix qualifies). Ties in T are ordered by original index; the running
    mean is non-decreasing in j, so the qualifying prefix is maximal.

    Returns (k, decisions, threshold) with threshold = T_(k), or 0 when k = 0.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    order = np.argsort(scores.T, kind="stable")
    d_sorted = scores.d[order]
    running = np.cumsum(scores.T[order] * d_sorted) / np.cumsum(d_sorted)
    qualifying = np.nonzero(running <= alpha)[0]
    k = int(qualifying[-1]) + 1 if qualifying.size else 0
    mask = np.zeros(scores.m, dtype=bool)
    mask[order[:k]] = True
    threshold = float(scores.T[order[k - 1]]) if k > 0 else 0.0
    return StepupResult(k, DecisionVector.from_mask(mask), threshold)


@dataclass(frozen=True)
class OracleCutoff:
    """Estimated oracle threshold; boundary is 'all' when even t = 1 controls
    the rate (reject everything), 'none' when no positive threshold does."""

    c_star: float
    boundary: str | None = None
    achieved_rate: float = float("nan")


def oracle_cutoff_mc(model: TwoGroupsModel, spec: SeveritySpec, alpha: float,
                     n_reps: int, m: int, seed: int,
                     t_tol: float = 1e-4) -> OracleCutoff:
    """Monte Carlo oracle cutoff sup{t : weighted mFDR(t) <= alpha}.

    Simulates n_reps replicates of m coordinates, scores them under the true
    model, and bisects the pooled empirical rate curve. The curve is
    non-decreasing in expectation, so bisection on the noisy curve localizes
    the crossing to within t_tol.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    if n_reps < 1 or m < 1:
        raise ValueError("need n_reps >= 1 and m >= 1")
    truth = [sample(model, m, seed, rep) for rep in range(n_reps)]
    pooled_x = np.concatenate([s.x for s in truth])
    scores = posterior_scores(model, spec, pooled_x)
    curve = PooledMfdrStar(scores, truth, spec)

    rate_at_one = curve(1.0)
    if rate_at_one <= alpha:
        return OracleCutoff(1.0, "all", rate_at_one)
    t_min = float(np.min(scores.T))
    if curve(t_min) > alpha:
        return OracleCutoff(0.0, "none", 0.0)

    lo, hi = t_min, 1.0
    while hi - lo > t_tol:
        mid = 0.5 * (lo + hi)
        if curve(mid) <= alpha:
            lo = mid
        else:
            hi = mid
    c_star = 0.5 * (lo + hi)
    return OracleCutoff(c_star, None, curve(lo))


def pvalue_rule_mfdr(model: TwoGroupsModel, c: float) -> float:
    """Unweighted mFDR of the two-sided rule "reject iff |X| >= c"."""
    if c < 0:
        raise ValueError("c must be nonnegative")
    alt = model.alt
    sd = np.sqrt(1.0 + alt.tau**2) if alt.kind == GAUSSIAN_MIXTURE else 1.0
    null_tail = 2.0 * normal_cdf(-c)
    centers = np.array(alt.centers)
    weights = np.array(alt.weights)
    alt_tails = (normal_cdf(-(c - centers) / sd) + normal_cdf(-(c + centers) / sd))
    alt_tail = float(np.sum(weights * alt_tails))
    num = model.pi0 * null_tail
    return num / (num + model.pi1 * alt_tail)


def pvalue_oracle_cutoff(model: TwoGroupsModel, alpha: float,
                         c_max: float = 40.0, c_tol: float = 1e-10) -> float:
    """Solve unweighted mFDR(c) = alpha for the two-sided threshold c.

    At c = 0 the rule rejects everything and its mFDR equals pi0, so any
    alpha in (0, pi0) has a root; the rate decays to 0 as c grows.
    """
    if not 0.0 < alpha < model.pi0:
        raise ValueError(f"alpha must lie in (0, pi0) = (0, {model.pi0})")

    def f(c):
        return pvalue_rule_mfdr(model, c) - alpha

    return bisect_root(f, 0.0, c_max, xtol=c_tol)
