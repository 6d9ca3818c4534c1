"""Two-groups mixture model, severity functions, and the seeded simulator.

Observations follow X_i ~ Normal(mu_i, 1) where mu_i = 0 with probability pi0
(the null) and otherwise is drawn from a two-component alternative (point
atoms or a Gaussian mixture). Missed signals are penalized by a severity
function s(mu): either s(mu) = |mu|^p or the constant 1 (which recovers the
classical unweighted error rates).

All types are immutable after construction; sampling is a pure function of
(model, m, seed, rep_index).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_POINT = "two_point"
GAUSSIAN_MIXTURE = "gaussian_mixture"

CONSTANT = "constant"
POWER = "power"

_U64 = (1 << 64) - 1


@dataclass(frozen=True)
class SeveritySpec:
    """Severity weight s(mu) applied to a missed signal of size mu."""

    kind: str
    power: float = 2.0

    def __post_init__(self):
        if self.kind not in (CONSTANT, POWER):
            raise ValueError(f"unknown severity kind {self.kind!r}")
        if self.kind == POWER and not self.power > 0:
            raise ValueError("power severity needs a positive exponent")

    @classmethod
    def constant(cls) -> "SeveritySpec":
        return cls(CONSTANT)

    @classmethod
    def power_law(cls, power: float = 2.0) -> "SeveritySpec":
        return cls(POWER, power=float(power))

    @property
    def is_constant(self) -> bool:
        return self.kind == CONSTANT


def severity(spec: SeveritySpec, mu):
    """Evaluate s(mu); accepts scalars or arrays, total on all reals."""
    mu = np.asarray(mu, dtype=float)
    if spec.kind == CONSTANT:
        out = np.ones_like(mu)
    else:
        out = np.abs(mu) ** spec.power
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class AlternativeSpec:
    """Signal-size distribution given a non-null: atoms at mu_minus/mu_plus,
    or Normal(mu_minus, tau^2) / Normal(mu_plus, tau^2) components, mixed with
    weights pi11/pi12."""

    kind: str
    pi11: float
    pi12: float
    mu_minus: float
    mu_plus: float
    tau: float = 0.0

    def __post_init__(self):
        if self.kind not in (TWO_POINT, GAUSSIAN_MIXTURE):
            raise ValueError(f"unknown alternative kind {self.kind!r}")
        if self.pi11 < 0 or self.pi12 < 0:
            raise ValueError("component weights must be nonnegative")
        if abs(self.pi11 + self.pi12 - 1.0) > 1e-12:
            raise ValueError("component weights must sum to 1")
        if not (self.mu_minus < 0.0 < self.mu_plus):
            raise ValueError("need mu_minus < 0 < mu_plus")
        if self.kind == GAUSSIAN_MIXTURE and not self.tau > 0:
            raise ValueError("gaussian_mixture needs tau > 0")

    @classmethod
    def two_point(cls, pi11: float, mu_minus: float, mu_plus: float) -> "AlternativeSpec":
        return cls(TWO_POINT, pi11, 1.0 - pi11, mu_minus, mu_plus)

    @classmethod
    def gaussian_mixture(cls, pi11: float, mu_minus: float, mu_plus: float,
                         tau: float) -> "AlternativeSpec":
        return cls(GAUSSIAN_MIXTURE, pi11, 1.0 - pi11, mu_minus, mu_plus, tau)

    @property
    def centers(self) -> tuple[float, float]:
        return (self.mu_minus, self.mu_plus)

    @property
    def weights(self) -> tuple[float, float]:
        return (self.pi11, self.pi12)


@dataclass(frozen=True)
class TwoGroupsModel:
    """Null proportion pi0 and the alternative signal distribution.

    The null mean is fixed at 0; data with a nonzero null should be shifted
    before entering the pipeline.
    """

    pi0: float
    alt: AlternativeSpec

    def __post_init__(self):
        if not 0.0 < self.pi0 < 1.0:
            raise ValueError("pi0 must lie strictly inside (0, 1)")

    @property
    def pi1(self) -> float:
        return 1.0 - self.pi0


@dataclass(frozen=True)
class SimulatedSample:
    """One simulated replicate: observations x, true means mu, and null/non-null
    indicators theta, plus the (seed, rep_index) pair that generated it."""

    x: np.ndarray
    mu: np.ndarray
    theta: np.ndarray
    seed: int
    rep_index: int

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        mu = np.asarray(self.mu, dtype=float)
        theta = np.asarray(self.theta, dtype=np.int64)
        if not (x.shape == mu.shape == theta.shape) or x.ndim != 1:
            raise ValueError("x, mu, theta must be 1-d arrays of one length")
        if not np.isin(theta, (0, 1)).all():
            raise ValueError("theta must be 0/1")
        if np.any(mu[theta == 0] != 0.0):
            raise ValueError("null coordinates must have mu = 0")
        for name, arr in (("x", x), ("mu", mu), ("theta", theta)):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def m(self) -> int:
        return self.x.size


def _rng_for(seed: int, rep_index: int) -> np.random.Generator:
    # Counter-style substream: one PCG64 stream per (seed, rep_index) key.
    return np.random.default_rng(np.random.SeedSequence((seed & _U64, int(rep_index))))


def sample(model: TwoGroupsModel, m: int, seed: int, rep_index: int = 0) -> SimulatedSample:
    """Draw one replicate of m independent coordinates from the model.

    theta_i ~ Bernoulli(1 - pi0); given theta_i = 1, mu_i comes from the
    alternative (component chosen with weights pi11/pi12); X_i ~ N(mu_i, 1).
    Deterministic given (model, m, seed, rep_index).
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if rep_index < 0:
        raise ValueError("rep_index must be >= 0")
    rng = _rng_for(seed, rep_index)
    theta = (rng.random(m) < model.pi1).astype(np.int64)
    signal = theta == 1
    n1 = int(signal.sum())
    mu = np.zeros(m)
    alt = model.alt
    take_minus = rng.random(n1) < alt.pi11
    centers = np.where(take_minus, alt.mu_minus, alt.mu_plus)
    if alt.kind == GAUSSIAN_MIXTURE:
        centers = centers + alt.tau * rng.standard_normal(n1)
    mu[signal] = centers
    x = mu + rng.standard_normal(m)
    return SimulatedSample(x=x, mu=mu, theta=theta, seed=seed, rep_index=rep_index)
