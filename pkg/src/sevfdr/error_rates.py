"""Weighted marginal error rates.

A rejected true null counts 1 toward false discoveries; a missed signal of
size mu counts s(mu) toward false non-discoveries. With w*(theta, mu) = 1 for
nulls and s(mu) for signals, the two rates are ratios of expectations:

    weighted mFDR = E[sum delta_i (1 - theta_i)] / E[sum delta_i w*_i]
    weighted mFNR = E[sum (1 - delta_i) theta_i s(mu_i)] / E[sum (1 - delta_i) w*_i]

estimated by averaging numerator and denominator over replicates separately
(never averaging per-replicate ratios). Empty rejection or acceptance sets
report 0 by convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .model import SeveritySpec, SimulatedSample, severity
from .posterior import DecisionVector, PosteriorScores


@dataclass(frozen=True)
class ErrorRateEstimate:
    """Ratio-of-means estimate with its components; degenerate means the
    denominator averaged to zero and the value is the conventional 0."""

    value: float
    numerator_mean: float
    denominator_mean: float
    n_replicates: int
    degenerate: bool


def _star_weights(smp: SimulatedSample, spec: SeveritySpec) -> np.ndarray:
    return np.where(smp.theta == 1, severity(spec, smp.mu), 1.0)


def replicate_sums(decisions: Sequence[DecisionVector],
                   truth: Sequence[SimulatedSample],
                   spec: SeveritySpec):
    """Per-replicate numerator/denominator sums for both rates.

    Returns (fdr_num, fdr_den, fnr_num, fnr_den), each a float array with one
    entry per replicate.
    """
    if len(decisions) != len(truth) or not decisions:
        raise ValueError("need equal, nonempty decision and truth lists")
    n = len(decisions)
    fdr_num = np.empty(n)
    fdr_den = np.empty(n)
    fnr_num = np.empty(n)
    fnr_den = np.empty(n)
    for i, (dec, smp) in enumerate(zip(decisions, truth)):
        if dec.m != smp.m:
            raise ValueError(f"replicate {i}: decision and sample lengths differ")
        delta = dec.delta
        keep = 1 - delta
        wstar = _star_weights(smp, spec)
        signal_loss = np.where(smp.theta == 1, wstar, 0.0)
        fdr_num[i] = float(np.sum(delta * (1 - smp.theta)))
        fdr_den[i] = float(np.sum(delta * wstar))
        fnr_num[i] = float(np.sum(keep * signal_loss))
        fnr_den[i] = float(np.sum(keep * wstar))
    return fdr_num, fdr_den, fnr_num, fnr_den


def _ratio_estimate(nums: np.ndarray, dens: np.ndarray) -> ErrorRateEstimate:
    n = nums.size
    # fsum keeps the means exactly invariant under replicate-list duplication.
    num_mean = math.fsum(nums) / n
    den_mean = math.fsum(dens) / n
    if den_mean == 0.0:
        return ErrorRateEstimate(0.0, num_mean, den_mean, n, True)
    return ErrorRateEstimate(num_mean / den_mean, num_mean, den_mean, n, False)


def empirical_rates(decisions: Sequence[DecisionVector],
                    truth: Sequence[SimulatedSample],
                    spec: SeveritySpec) -> tuple[ErrorRateEstimate, ErrorRateEstimate]:
    """(weighted mFDR, weighted mFNR) from ground-truth replicates."""
    fdr_num, fdr_den, fnr_num, fnr_den = replicate_sums(decisions, truth, spec)
    return _ratio_estimate(fdr_num, fdr_den), _ratio_estimate(fnr_num, fnr_den)


def delta_method_se(nums: np.ndarray, dens: np.ndarray) -> float:
    """Standard error of the ratio-of-means estimate from per-replicate sums."""
    nums = np.asarray(nums, dtype=float)
    dens = np.asarray(dens, dtype=float)
    n = nums.size
    den_mean = dens.mean()
    if den_mean == 0.0 or n < 2:
        return 0.0
    est = nums.mean() / den_mean
    resid = nums - est * dens
    return float(np.sqrt(resid.var(ddof=1) / n) / den_mean)


def posterior_mfdr_star(scores: PosteriorScores, t: float) -> float:
    """Posterior estimate of the weighted mFDR of the rule "reject iff T <= t":
    sum_{T_i <= t} T_i d_i / sum_{T_i <= t} d_i, or 0 for an empty set."""
    mask = scores.T <= t
    if not mask.any():
        return 0.0
    den = float(np.sum(scores.d[mask]))
    return float(np.sum(scores.T[mask] * scores.d[mask])) / den


class MfdrStarCurve(NamedTuple):
    points: list[tuple[float, float]]
    max_violation: float


def mfdr_star_curve(evaluator: Callable[[float], float], grid) -> MfdrStarCurve:
    """Evaluate a threshold -> rate map on an increasing grid and report the
    largest monotonicity violation max(value_j - value_{j+1}, 0)."""
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 1:
        raise ValueError("grid must be a nonempty 1-d array")
    if np.any(np.diff(grid) <= 0) or grid[0] < 0 or grid[-1] > 1:
        raise ValueError("grid must be strictly increasing within [0, 1]")
    values = np.array([evaluator(t) for t in grid])
    violation = 0.0
    if values.size > 1:
        violation = float(np.maximum(values[:-1] - values[1:], 0.0).max())
    return MfdrStarCurve(list(zip(grid.tolist(), values.tolist())), violation)


class PooledMfdrStar:
    """Empirical weighted-mFDR evaluator for threshold rules on a fixed pool
    of simulated coordinates, with delta-method standard errors.

    Precomputes cumulative sums along the T order, so each evaluation is a
    binary search. Matches empirical_rates applied to the same pool (all
    replicates pooled) up to floating-point reassociation.
    """

    def __init__(self, scores: PosteriorScores, truth: Sequence[SimulatedSample],
                 spec: SeveritySpec):
        theta = np.concatenate([s.theta for s in truth])
        mu = np.concatenate([s.mu for s in truth])
        if theta.size != scores.m:
            raise ValueError("scores and pooled truth lengths differ")
        order = np.argsort(scores.T, kind="stable")
        self._T = scores.T[order]
        wstar = np.where(theta == 1, severity(spec, mu), 1.0)[order]
        is_null = (theta[order] == 0).astype(float)
        self._n = theta.size
        self._cum_null = np.cumsum(is_null)
        self._cum_w = np.cumsum(wstar)
        self._cum_w2 = np.cumsum(wstar * wstar)

    def _sums(self, t: float):
        j = int(np.searchsorted(self._T, t, side="right"))
        if j == 0:
            return 0, 0.0, 0.0, 0.0
        return j, self._cum_null[j - 1], self._cum_w[j - 1], self._cum_w2[j - 1]

    def __call__(self, t: float) -> float:
        j, s_null, s_w, _ = self._sums(t)
        if j == 0 or s_w == 0.0:
            return 0.0
        return s_null / s_w

    def standard_error(self, t: float) -> float:
        """Coordinate-level delta-method SE of the estimate at threshold t."""
        j, s_null, s_w, s_w2 = self._sums(t)
        if j == 0 or s_w == 0.0:
            return 0.0
        n = self._n
        est = s_null / s_w
        a_mean = s_null / n
        b_mean = s_w / n
        # For a rejected null the weight is 1, so a*b = a and a^2 = a.
        second_moment = a_mean - 2.0 * est * a_mean + est * est * (s_w2 / n)
        var = max(second_moment, 0.0)
        return float(np.sqrt(var / n) / b_mean)
