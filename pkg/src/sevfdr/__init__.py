"""Severity-weighted multiple hypothesis testing.

Scores each hypothesis by a severity-adjusted local false discovery rate,
controls the severity-weighted marginal FDR, and reproduces the two bundled
numerical studies (ranking comparison and closed-form oracle comparison).
"""

from .analytic_oracle import (
    CutoffPair,
    TStarResult,
    cutoff_roots,
    find_tstar,
    mfdr_star_closed,
    mfnr_closed,
    mfnr_star_closed,
    psi,
    reject_all_mfdr_star,
)
from .error_rates import (
    ErrorRateEstimate,
    MfdrStarCurve,
    PooledMfdrStar,
    delta_method_se,
    empirical_rates,
    mfdr_star_curve,
    posterior_mfdr_star,
    replicate_sums,
)
from .experiments import (
    DEFAULT_PI11_GRID,
    DEFAULT_SEED,
    CheckResult,
    Study1Result,
    Study2Row,
    VerifyReport,
    run_study1,
    run_study2,
    study1_model,
    study2_model,
    verify_suite,
)
from .model import (
    AlternativeSpec,
    SeveritySpec,
    SimulatedSample,
    TwoGroupsModel,
    sample,
    severity,
)
from .numerics import NumericalError
from .posterior import (
    DecisionVector,
    PosteriorScores,
    bayes_rule,
    glfdr_scores,
    lfdr_vec,
    posterior_scores,
    severity_weight_vec,
    weighted_alt_density,
)
from .procedures import (
    OracleCutoff,
    StepupResult,
    oracle_cutoff_mc,
    pvalue_oracle_cutoff,
    pvalue_rule_mfdr,
    stepup,
)

__version__ = "0.1.0"

__all__ = [
    "AlternativeSpec",
    "CheckResult",
    "CutoffPair",
    "DecisionVector",
    "DEFAULT_PI11_GRID",
    "DEFAULT_SEED",
    "ErrorRateEstimate",
    "MfdrStarCurve",
    "NumericalError",
    "OracleCutoff",
    "PooledMfdrStar",
    "PosteriorScores",
    "SeveritySpec",
    "SimulatedSample",
    "StepupResult",
    "Study1Result",
    "Study2Row",
    "TStarResult",
    "TwoGroupsModel",
    "VerifyReport",
    "bayes_rule",
    "cutoff_roots",
    "delta_method_se",
    "empirical_rates",
    "find_tstar",
    "glfdr_scores",
    "lfdr_vec",
    "mfdr_star_closed",
    "mfdr_star_curve",
    "mfnr_closed",
    "mfnr_star_closed",
    "oracle_cutoff_mc",
    "posterior_mfdr_star",
    "posterior_scores",
    "psi",
    "pvalue_oracle_cutoff",
    "pvalue_rule_mfdr",
    "reject_all_mfdr_star",
    "replicate_sums",
    "run_study1",
    "run_study2",
    "sample",
    "severity",
    "severity_weight_vec",
    "stepup",
    "study1_model",
    "study2_model",
    "verify_suite",
    "weighted_alt_density",
]
