"""Closed-form oracle machinery for point-mass alternatives.

For a two-atom alternative the level set {x : T(x) = t} of the severity-
adjusted local fdr is the pair of real roots of

    g(z) = t pi1 [pi11 s- e^{mu- z - mu-^2/2} + pi12 s+ e^{mu+ z - mu+^2/2}]
           - pi0 (1 - t),

with s-, s+ the severities of the two atoms: g is strictly convex, blows up at
both ends (mu- < 0 < mu+), and is negative exactly on the acceptance interval
(c_l, c_u). Given the cutoffs, every error rate reduces to two-sided normal
tail masses psi(a, b) = 1 - Phi(b) + Phi(a).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .model import TWO_POINT, SeveritySpec, TwoGroupsModel, severity
from .numerics import NumericalError, bisect_root, golden_section_min, normal_cdf

REGION_OUTSIDE = "outside"
REGION_ALL = "all"
REGION_NONE = "none"

_Z_SPAN = 60.0
_ROOT_XTOL = 1e-12


@dataclass(frozen=True)
class CutoffPair:
    """Acceptance interval (c_l, c_u) on the observation scale.

    region 'outside' rejects X <= c_l or X >= c_u; 'all' rejects everything
    (empty acceptance interval); 'none' rejects nothing. The cut fields are
    NaN unless region is 'outside'.
    """

    c_l: float
    c_u: float
    region: str

    def __post_init__(self):
        if self.region not in (REGION_OUTSIDE, REGION_ALL, REGION_NONE):
            raise ValueError(f"unknown region {self.region!r}")
        if self.region == REGION_OUTSIDE and not self.c_l < self.c_u:
            raise ValueError("need c_l < c_u for an 'outside' rejection region")

    @classmethod
    def outside(cls, c_l: float, c_u: float) -> "CutoffPair":
        return cls(float(c_l), float(c_u), REGION_OUTSIDE)

    @classmethod
    def reject_all(cls) -> "CutoffPair":
        return cls(float("nan"), float("nan"), REGION_ALL)

    @classmethod
    def reject_none(cls) -> "CutoffPair":
        return cls(float("nan"), float("nan"), REGION_NONE)


def psi(a: float, b: float) -> float:
    """Two-sided standard normal tail mass 1 - Phi(b) + Phi(a), a <= b."""
    if a > b:
        raise ValueError("need a <= b")
    return float(normal_cdf(-b) + normal_cdf(a))


def _atom_severities(model: TwoGroupsModel, spec: SeveritySpec) -> tuple[float, float]:
    if model.alt.kind != TWO_POINT:
        raise ValueError("closed forms require a two-point alternative")
    return (float(severity(spec, model.alt.mu_minus)),
            float(severity(spec, model.alt.mu_plus)))


def cutoff_roots(t: float, model: TwoGroupsModel, spec: SeveritySpec) -> CutoffPair:
    """Acceptance interval of the threshold rule "reject iff T(x) <= t".

    Locates the minimizer of g by golden section on [-60, 60], then bisects
    each side for the two roots. If g never goes negative the rule rejects
    everything (region 'all').
    """
    if not 0.0 < t < 1.0:
        raise ValueError("t must lie in (0, 1)")
    alt = model.alt
    s_minus, s_plus = _atom_severities(model, spec)
    a_minus = t * model.pi1 * alt.pi11 * s_minus * math.exp(-0.5 * alt.mu_minus**2)
    a_plus = t * model.pi1 * alt.pi12 * s_plus * math.exp(-0.5 * alt.mu_plus**2)
    rhs = model.pi0 * (1.0 - t)

    def g(z):
        return (a_minus * math.exp(alt.mu_minus * z)
                + a_plus * math.exp(alt.mu_plus * z) - rhs)

    z_min = golden_section_min(g, -_Z_SPAN, _Z_SPAN)
    if g(z_min) >= 0.0:
        return CutoffPair.reject_all()
    if not (g(-_Z_SPAN) > 0.0 and g(_Z_SPAN) > 0.0):
        raise NumericalError(f"no sign change of g on [-{_Z_SPAN}, {_Z_SPAN}] at t={t}")
    c_l = bisect_root(g, -_Z_SPAN, z_min, xtol=_ROOT_XTOL)
    c_u = bisect_root(g, z_min, _Z_SPAN, xtol=_ROOT_XTOL)
    return CutoffPair.outside(c_l, c_u)


def _tail_masses(cuts: CutoffPair, model: TwoGroupsModel):
    """Rejection probabilities (psi_null, psi_minus, psi_plus) for the cuts."""
    if cuts.region == REGION_ALL:
        return 1.0, 1.0, 1.0
    if cuts.region == REGION_NONE:
        return 0.0, 0.0, 0.0
    alt = model.alt
    return (psi(cuts.c_l, cuts.c_u),
            psi(cuts.c_l - alt.mu_minus, cuts.c_u - alt.mu_minus),
            psi(cuts.c_l - alt.mu_plus, cuts.c_u - alt.mu_plus))


def _closed_rates(cuts: CutoffPair, model: TwoGroupsModel,
                  s_minus: float, s_plus: float) -> tuple[float, float]:
    """(weighted mFDR, weighted mFNR) of the cuts for given atom severities."""
    alt = model.alt
    psi0, psi_m, psi_p = _tail_masses(cuts, model)
    reject_signal = model.pi1 * (alt.pi11 * s_minus * psi_m + alt.pi12 * s_plus * psi_p)
    accept_signal = model.pi1 * (alt.pi11 * s_minus * (1.0 - psi_m)
                                 + alt.pi12 * s_plus * (1.0 - psi_p))
    fdr_den = model.pi0 * psi0 + reject_signal
    mfdr = (model.pi0 * psi0 / fdr_den) if fdr_den > 0.0 else 0.0
    fnr_den = model.pi0 * (1.0 - psi0) + accept_signal
    mfnr = (accept_signal / fnr_den) if fnr_den > 0.0 else 0.0
    return mfdr, mfnr


def mfdr_star_closed(cuts: CutoffPair, model: TwoGroupsModel, spec: SeveritySpec) -> float:
    """Weighted mFDR of the cuts; 0 by convention when nothing is rejected."""
    s_minus, s_plus = _atom_severities(model, spec)
    return _closed_rates(cuts, model, s_minus, s_plus)[0]


def mfnr_star_closed(cuts: CutoffPair, model: TwoGroupsModel, spec: SeveritySpec) -> float:
    """Weighted mFNR of the cuts; 0 by convention when everything is rejected."""
    s_minus, s_plus = _atom_severities(model, spec)
    return _closed_rates(cuts, model, s_minus, s_plus)[1]


def mfnr_closed(cuts: CutoffPair, model: TwoGroupsModel) -> float:
    """Unweighted mFNR of the cuts (unit atom severities)."""
    if model.alt.kind != TWO_POINT:
        raise ValueError("closed forms require a two-point alternative")
    return _closed_rates(cuts, model, 1.0, 1.0)[1]


def reject_all_mfdr_star(model: TwoGroupsModel, spec: SeveritySpec) -> float:
    """Weighted mFDR of the reject-everything rule: the attainable supremum."""
    return mfdr_star_closed(CutoffPair.reject_all(), model, spec)


class TStarResult(NamedTuple):
    t_star: float
    cuts: CutoffPair


def find_tstar(model: TwoGroupsModel, spec: SeveritySpec, alpha: float,
               rate_tol: float = 1e-8, max_iter: int = 200) -> TStarResult:
    """Largest threshold whose closed-form weighted mFDR equals alpha.

    Bisection on t in (0, 1): the rate is continuous and non-decreasing in t,
    rising from 0 to the reject-all value. Stops once |rate - alpha| <= rate_tol.
    """
    attainable = reject_all_mfdr_star(model, spec)
    if not 0.0 < alpha < attainable:
        raise ValueError(
            f"alpha={alpha} is outside the attainable interval (0, {attainable})")
    lo, hi = 0.0, 1.0
    for _ in range(max_iter):
        t = 0.5 * (lo + hi)
        cuts = cutoff_roots(t, model, spec)
        rate = mfdr_star_closed(cuts, model, spec)
        if abs(rate - alpha) <= rate_tol:
            return TStarResult(t, cuts)
        if rate > alpha:
            hi = t
        else:
            lo = t
    raise NumericalError(f"threshold search did not reach rate_tol={rate_tol}")
