"""Per-hypothesis posterior quantities under the independence model.

For each observation x the key outputs are

    fdr(x) = P(null | x)                      local false discovery rate
    w(x)   = E[s(mu) | non-null, x]           posterior mean severity
    T(x)   = fdr / (fdr + w * (1 - fdr))      severity-adjusted local fdr
    d(x)   = fdr + w * (1 - fdr)              step-up weight (= fdr / T)

and the posterior-loss-minimizing decision rule: reject when
fdr < (w / lambda) * (1 - fdr).

Closed forms cover point-mass alternatives (any severity) and Gaussian-mixture
alternatives with squared-error severity; other severities fall back to
deterministic adaptive quadrature. Densities are evaluated in log space so the
tails at |x| ~ 30 stay finite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .model import (
    CONSTANT,
    GAUSSIAN_MIXTURE,
    POWER,
    TWO_POINT,
    AlternativeSpec,
    SeveritySpec,
    TwoGroupsModel,
    severity,
)
from .numerics import adaptive_simpson, log_normal_pdf

QUAD_REL_TOL = 1e-9
QUAD_MAX_DEPTH = 60


@dataclass(frozen=True)
class PosteriorScores:
    """Aligned per-hypothesis vectors (fdr, w, T, d).

    Construction checks the defining identities d = fdr + w (1 - fdr) and
    T = fdr / d (with the boundary conventions of glfdr_scores) to a small
    tolerance, so externally computed posteriors are accepted but wired-up
    inconsistencies are not.
    """

    fdr: np.ndarray
    w: np.ndarray
    T: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        arrays = {}
        for name in ("fdr", "w", "T", "d"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.ndim != 1:
                raise ValueError(f"{name} must be 1-d")
            arrays[name] = arr
        if len({a.size for a in arrays.values()}) != 1:
            raise ValueError("fdr, w, T, d must share one length")
        fdr, w, T, d = (arrays[n] for n in ("fdr", "w", "T", "d"))
        if np.any((fdr < 0) | (fdr > 1)):
            raise ValueError("fdr values must lie in [0, 1]")
        if np.any(w < 0):
            raise ValueError("severity weights must be nonnegative")
        d_expected = fdr + w * (1.0 - fdr)
        t_expected = np.where(fdr > 0, fdr / np.where(fdr > 0, d_expected, 1.0), 0.0)
        if (np.abs(d - d_expected).max(initial=0.0) > 1e-9
                or np.abs(T - t_expected).max(initial=0.0) > 1e-9):
            raise ValueError("T and d are inconsistent with fdr and w")
        for name, arr in arrays.items():
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def m(self) -> int:
        return self.fdr.size


@dataclass(frozen=True)
class DecisionVector:
    """Binary reject indicators (1 = reject) and their count."""

    delta: np.ndarray
    num_rejected: int

    def __post_init__(self):
        delta = np.asarray(self.delta, dtype=np.int64)
        if delta.ndim != 1 or not np.isin(delta, (0, 1)).all():
            raise ValueError("delta must be a 1-d 0/1 vector")
        if int(delta.sum()) != self.num_rejected:
            raise ValueError("num_rejected must equal sum(delta)")
        delta.flags.writeable = False
        object.__setattr__(self, "delta", delta)

    @classmethod
    def from_mask(cls, mask) -> "DecisionVector":
        mask = np.asarray(mask).astype(bool)
        return cls(delta=mask.astype(np.int64), num_rejected=int(mask.sum()))

    @property
    def m(self) -> int:
        return self.delta.size


def _marginal_components(alt: AlternativeSpec):
    """(weights, centers, sd) of the marginal X-distribution given non-null."""
    sd = np.sqrt(1.0 + alt.tau**2) if alt.kind == GAUSSIAN_MIXTURE else 1.0
    return np.array(alt.weights), np.array(alt.centers), sd


def _check_finite(x: np.ndarray):
    if not np.all(np.isfinite(x)):
        raise ValueError("observations must be finite")


def log_alt_density(model: TwoGroupsModel, x) -> np.ndarray:
    """log f1(x): marginal density of X given non-null."""
    x = np.asarray(x, dtype=float)
    weights, centers, sd = _marginal_components(model.alt)
    return np.logaddexp(
        np.log(weights[0]) + log_normal_pdf(x, centers[0], sd),
        np.log(weights[1]) + log_normal_pdf(x, centers[1], sd),
    )


def lfdr_vec(model: TwoGroupsModel, x) -> np.ndarray:
    """P(null | x) coordinatewise: pi0 f0(x) / (pi0 f0(x) + pi1 f1(x))."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    _check_finite(x)
    log_null = np.log(model.pi0) + log_normal_pdf(x)
    log_alt = np.log(model.pi1) + log_alt_density(model, x)
    return expit(log_null - log_alt)


def _component_posteriors(model: TwoGroupsModel, x: np.ndarray) -> np.ndarray:
    """P(component = minus | non-null, x), from the marginal mixture."""
    weights, centers, sd = _marginal_components(model.alt)
    lw_minus = np.log(weights[0]) + log_normal_pdf(x, centers[0], sd)
    lw_plus = np.log(weights[1]) + log_normal_pdf(x, centers[1], sd)
    return expit(lw_minus - lw_plus)


def _posterior_second_moment(alt: AlternativeSpec, x: np.ndarray, q_minus: np.ndarray):
    """E[mu^2 | non-null, x] for a Gaussian-mixture alternative.

    Within component k, mu | x ~ N((tau^2 x + mu_k) / (1 + tau^2),
    tau^2 / (1 + tau^2)); the second moment is variance + mean^2.
    """
    shrink = 1.0 + alt.tau**2
    v = alt.tau**2 / shrink
    m_minus = (alt.tau**2 * x + alt.mu_minus) / shrink
    m_plus = (alt.tau**2 * x + alt.mu_plus) / shrink
    return q_minus * (v + m_minus**2) + (1.0 - q_minus) * (v + m_plus**2)


def _quad_range(alt: AlternativeSpec) -> tuple[float, float]:
    lo = min(alt.mu_minus, alt.mu_plus) - 10.0 * alt.tau
    hi = max(alt.mu_minus, alt.mu_plus) + 10.0 * alt.tau
    return lo, hi


def _alt_pdf(alt: AlternativeSpec, mu: float) -> float:
    return (alt.pi11 * np.exp(log_normal_pdf(mu, alt.mu_minus, alt.tau))
            + alt.pi12 * np.exp(log_normal_pdf(mu, alt.mu_plus, alt.tau)))


def _weight_by_quadrature(model: TwoGroupsModel, spec: SeveritySpec, x: float) -> float:
    alt = model.alt
    lo, hi = _quad_range(alt)

    def num(mu):
        return severity(spec, mu) * np.exp(log_normal_pdf(x - mu)) * _alt_pdf(alt, mu)

    def den(mu):
        return np.exp(log_normal_pdf(x - mu)) * _alt_pdf(alt, mu)

    total_num = adaptive_simpson(num, lo, hi, rel_tol=QUAD_REL_TOL, max_depth=QUAD_MAX_DEPTH)
    total_den = adaptive_simpson(den, lo, hi, rel_tol=QUAD_REL_TOL, max_depth=QUAD_MAX_DEPTH)
    return total_num / total_den


def severity_weight_by_quadrature(model: TwoGroupsModel, spec: SeveritySpec,
                                  x: float) -> float:
    """Quadrature route for w(x), kept independent of the closed forms so the
    two can be checked against each other. Gaussian-mixture alternatives only;
    point atoms are summed exactly and have no quadrature route."""
    if model.alt.kind != GAUSSIAN_MIXTURE:
        raise ValueError("quadrature route applies to gaussian_mixture alternatives")
    return _weight_by_quadrature(model, spec, float(x))


def weighted_alt_density_by_quadrature(model: TwoGroupsModel, spec: SeveritySpec,
                                       x: float) -> float:
    """Quadrature route for H(x); see severity_weight_by_quadrature."""
    if model.alt.kind != GAUSSIAN_MIXTURE:
        raise ValueError("quadrature route applies to gaussian_mixture alternatives")
    alt = model.alt
    lo, hi = _quad_range(alt)
    x = float(x)

    def num(mu):
        return severity(spec, mu) * np.exp(log_normal_pdf(x - mu)) * _alt_pdf(alt, mu)

    return adaptive_simpson(num, lo, hi, rel_tol=QUAD_REL_TOL, max_depth=QUAD_MAX_DEPTH)


def severity_weight_vec(model: TwoGroupsModel, spec: SeveritySpec, x) -> np.ndarray:
    """w(x) = E[s(mu) | non-null, x] coordinatewise."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    _check_finite(x)
    alt = model.alt
    if spec.kind == CONSTANT:
        return np.ones_like(x)
    if alt.kind == TWO_POINT:
        q_minus = _component_posteriors(model, x)
        s_minus, s_plus = severity(spec, alt.mu_minus), severity(spec, alt.mu_plus)
        return q_minus * s_minus + (1.0 - q_minus) * s_plus
    if spec.kind == POWER and spec.power == 2.0:
        q_minus = _component_posteriors(model, x)
        return _posterior_second_moment(alt, x, q_minus)
    return np.array([_weight_by_quadrature(model, spec, xi) for xi in x])


def weighted_alt_density(model: TwoGroupsModel, spec: SeveritySpec, x: float) -> float:
    """H(x) = E_h[s(mu) * phi(x - mu)] = f1(x) * w(x), the severity-tilted
    alternative density (unnormalized)."""
    x = float(x)
    _check_finite(np.asarray(x))
    alt = model.alt
    if spec.kind == CONSTANT:
        return float(np.exp(log_alt_density(model, x)))
    if alt.kind == TWO_POINT:
        s = severity(spec, np.array(alt.centers))
        return float(np.sum(np.array(alt.weights) * s
                            * np.exp(log_normal_pdf(x - np.array(alt.centers)))))
    if spec.kind == POWER and spec.power == 2.0:
        weights, centers, sd = _marginal_components(alt)
        dens = np.exp(log_normal_pdf(x, centers, sd))
        shrink = 1.0 + alt.tau**2
        v = alt.tau**2 / shrink
        means = (alt.tau**2 * x + centers) / shrink
        return float(np.sum(weights * dens * (v + means**2)))
    return weighted_alt_density_by_quadrature(model, spec, x)


def glfdr_scores(fdr, w) -> PosteriorScores:
    """Assemble scores from aligned fdr and severity-weight vectors.

    T = fdr / (fdr + w (1 - fdr)) with the boundary conventions fdr = 0 -> T = 0
    and (fdr > 0, w = 0) -> T = 1 (both are the formula's limits); d is stored
    as fdr + w (1 - fdr), which equals fdr / T without any 0/0 hazard.
    """
    fdr = np.atleast_1d(np.asarray(fdr, dtype=float))
    w = np.atleast_1d(np.asarray(w, dtype=float))
    if fdr.shape != w.shape:
        raise ValueError("fdr and w must have equal length")
    if np.any((fdr < 0) | (fdr > 1)):
        raise ValueError("fdr values must lie in [0, 1]")
    if np.any(w < 0):
        raise ValueError("severity weights must be nonnegative")
    d = fdr + w * (1.0 - fdr)
    # For fdr > 0, d >= fdr > 0, so the division is safe; fdr = 0 maps to T = 0.
    T = np.where(fdr > 0, fdr / np.where(fdr > 0, d, 1.0), 0.0)
    return PosteriorScores(fdr=fdr, w=w, T=T, d=d)


def posterior_scores(model: TwoGroupsModel, spec: SeveritySpec, x) -> PosteriorScores:
    """Full scoring pipeline: lfdr and severity weights from the model, then T and d."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return glfdr_scores(lfdr_vec(model, x), severity_weight_vec(model, spec, x))


def bayes_rule(scores: PosteriorScores, lam: float) -> DecisionVector:
    """Posterior-loss-minimizing rule: reject i iff fdr_i < (w_i / lam)(1 - fdr_i).

    lam is the cost of a false rejection relative to the baseline cost of a
    miss. Exact ties are resolved to acceptance.
    """
    if not lam > 0:
        raise ValueError("lam must be positive")
    reject = scores.fdr < (scores.w / lam) * (1.0 - scores.fdr)
    return DecisionVector.from_mask(reject)
