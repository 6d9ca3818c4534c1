"""End-to-end numerical studies and the cross-module verification suite.

Study 1 compares hypothesis rankings: order hypotheses by the severity-
adjusted score T and by the plain lfdr, and for each rejection budget R track
the expected severity mass of the signals left undiscovered.

Study 2 compares three oracle rules on a two-atom model over a grid of atom
weights: the severity-weighted oracle, its constant-severity special case
(the classical lfdr oracle), and the two-sided p-value rule. Each row carries
its acceptance interval and closed-form rates.

verify_suite bundles the independent cross-checks (brute-force Bayes
optimality, tilted-distribution ratio law, monotonicity, closed-form vs Monte
Carlo and vs quadrature agreement) behind one pass/fail report.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import partial

import numpy as np

from ._workers import parallel_map
from .analytic_oracle import (
    CutoffPair,
    cutoff_roots,
    find_tstar,
    mfdr_star_closed,
    mfnr_closed,
    mfnr_star_closed,
)
from .error_rates import (
    PooledMfdrStar,
    delta_method_se,
    empirical_rates,
    mfdr_star_curve,
    replicate_sums,
)
from .model import (
    TWO_POINT,
    AlternativeSpec,
    SeveritySpec,
    TwoGroupsModel,
    _rng_for,
    sample,
    severity,
)
from .posterior import (
    DecisionVector,
    bayes_rule,
    glfdr_scores,
    posterior_scores,
    severity_weight_by_quadrature,
    severity_weight_vec,
    weighted_alt_density,
    weighted_alt_density_by_quadrature,
)
from .procedures import pvalue_oracle_cutoff, stepup

DEFAULT_SEED = 20240801
DEFAULT_PI11_GRID = tuple(round(0.05 * i, 2) for i in range(1, 20))

PROC_GLFDR = "glfdr_oracle"
PROC_SUNCAI = "suncai_oracle"
PROC_PVALUE = "pvalue_oracle"


def study1_model() -> TwoGroupsModel:
    """Sparse Gaussian-mixture setting: pi0 = 0.95, centers -1.5 / 1, tau = 0.5."""
    return TwoGroupsModel(0.95, AlternativeSpec.gaussian_mixture(0.2, -1.5, 1.0, 0.5))


def study2_model(pi11: float) -> TwoGroupsModel:
    """Two-atom setting: pi0 = 0.8, atoms at -3 and 4 with weights pi11/1-pi11."""
    return TwoGroupsModel(0.8, AlternativeSpec.two_point(pi11, -3.0, 4.0))


@dataclass(frozen=True)
class Study1Result:
    R: int
    beta_star_glfdr: float
    beta_star_lfdr: float
    n_reps: int


@dataclass(frozen=True)
class Study2Row:
    pi11: float
    procedure: str
    c_l: float
    c_u: float
    mfdr_star: float
    mfnr: float
    mfnr_star: float


def _study1_replicate(model, spec, m, seed, rep):
    smp = sample(model, m, seed, rep)
    scores = posterior_scores(model, spec, smp.x)
    loss = np.where(smp.theta == 1, severity(spec, smp.mu), 0.0)
    curves = []
    for ranking in (scores.T, scores.fdr):
        order = np.argsort(ranking, kind="stable")
        prefix = np.concatenate([[0.0], np.cumsum(loss[order])])
        curves.append(prefix[-1] - prefix)  # missed severity mass after R rejections
    return curves[0], curves[1]


def study1_matrices(model: TwoGroupsModel, spec: SeveritySpec, m: int,
                    n_reps: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-replicate missed-severity curves, shape (n_reps, m + 1), for the
    T ranking and the lfdr ranking."""
    if m < 1 or n_reps < 1:
        raise ValueError("need m >= 1 and n_reps >= 1")
    rows = parallel_map(partial(_study1_replicate, model, spec, m, seed), range(n_reps))
    bg = np.vstack([r[0] for r in rows])
    bl = np.vstack([r[1] for r in rows])
    return bg, bl


def run_study1(model: TwoGroupsModel | None = None,
               spec: SeveritySpec | None = None,
               m: int = 1000, n_reps: int = 2000,
               seed: int = DEFAULT_SEED) -> list[Study1Result]:
    """Average missed-severity curves beta*(R) for R = 0..m under both rankings."""
    model = model or study1_model()
    spec = spec or SeveritySpec.power_law(2.0)
    bg, bl = study1_matrices(model, spec, m, n_reps, seed)
    mean_g = bg.mean(axis=0)
    mean_l = bl.mean(axis=0)
    return [Study1Result(r, float(mean_g[r]), float(mean_l[r]), n_reps)
            for r in range(m + 1)]


def _cuts_rates(cuts: CutoffPair, model: TwoGroupsModel, spec: SeveritySpec):
    return (mfdr_star_closed(cuts, model, spec),
            mfnr_closed(cuts, model),
            mfnr_star_closed(cuts, model, spec))


def _study2_rows_for(alpha, pi0, mu_minus, mu_plus, spec, pi11):
    model = TwoGroupsModel(pi0, AlternativeSpec.two_point(pi11, mu_minus, mu_plus))
    rows = []
    _, cuts_g = find_tstar(model, spec, alpha)
    rows.append(Study2Row(pi11, PROC_GLFDR, cuts_g.c_l, cuts_g.c_u,
                          *_cuts_rates(cuts_g, model, spec)))
    _, cuts_sc = find_tstar(model, SeveritySpec.constant(), alpha)
    rows.append(Study2Row(pi11, PROC_SUNCAI, cuts_sc.c_l, cuts_sc.c_u,
                          *_cuts_rates(cuts_sc, model, spec)))
    c = pvalue_oracle_cutoff(model, alpha)
    cuts_pv = CutoffPair.outside(-c, c)
    rows.append(Study2Row(pi11, PROC_PVALUE, cuts_pv.c_l, cuts_pv.c_u,
                          *_cuts_rates(cuts_pv, model, spec)))
    return rows


def run_study2(alpha: float = 0.05, pi11_grid=None,
               pi0: float = 0.8, mu_minus: float = -3.0, mu_plus: float = 4.0,
               spec: SeveritySpec | None = None) -> list[Study2Row]:
    """One row per (pi11, procedure): the severity-weighted oracle, the
    constant-severity oracle evaluated under both weightings, and the
    two-sided p-value rule."""
    spec = spec or SeveritySpec.power_law(2.0)
    grid = DEFAULT_PI11_GRID if pi11_grid is None else tuple(pi11_grid)
    if not grid or any(not 0.0 < p < 1.0 for p in grid):
        raise ValueError("pi11 grid values must lie in (0, 1)")
    per_point = parallel_map(
        partial(_study2_rows_for, alpha, pi0, mu_minus, mu_plus, spec), grid)
    return [row for rows in per_point for row in rows]


# ---------------------------------------------------------------------------
# Verification checks. Each returns a measured margin; the suite compares it
# against a tolerance. They are also exercised directly by the test suite.
# ---------------------------------------------------------------------------

def bayes_bruteforce_excess(lam_values=(0.5, 1.0, 2.0, 10.0),
                            m_values=(1, 2, 3)) -> float:
    """Worst posterior-loss excess of bayes_rule over exhaustive enumeration.

    Uses a fully discretized setting (two atoms, five-point observation grid)
    where per-coordinate posteriors are exact, so the minimum over all 2^m
    decision vectors is computable and the excess must be exactly 0.
    """
    pi0, pi1 = 0.7, 0.3
    atoms = np.array([-2.0, 1.5])
    atom_w = np.array([0.3, 0.7])
    grid = np.linspace(-4.0, 4.0, 5)

    def grid_pmf(center):
        dens = np.exp(-0.5 * (grid - center) ** 2)
        return dens / dens.sum()

    p0 = grid_pmf(0.0)
    p_comp = np.vstack([grid_pmf(a) for a in atoms])
    f1 = atom_w @ p_comp
    fdr_grid = pi0 * p0 / (pi0 * p0 + pi1 * f1)
    post_comp = (atom_w[:, None] * p_comp) / f1
    w_grid = (atoms**2) @ post_comp

    worst = 0.0
    for m in m_values:
        deltas = np.array(list(itertools.product((0, 1), repeat=m)), dtype=float)
        for idx in itertools.product(range(grid.size), repeat=m):
            fdr = fdr_grid[list(idx)]
            w = w_grid[list(idx)]
            scores = glfdr_scores(fdr, w)
            for lam in lam_values:
                losses = (lam * deltas * fdr + (1.0 - deltas) * w * (1.0 - fdr)).mean(axis=1)
                decided = bayes_rule(scores, lam).delta.astype(float)
                bayes_loss = float((lam * decided * fdr
                                    + (1.0 - decided) * w * (1.0 - fdr)).mean())
                worst = max(worst, bayes_loss - float(losses.min()))
    return worst


def tilted_ratio_max_sigma(model: TwoGroupsModel, spec: SeveritySpec, n: int, seed: int,
                     edges=None, score_spec: SeveritySpec | None = None) -> float:
    """Tilted-distribution ratio law check, in standard-error units.

    Draw T once under the null density and once under the severity-tilted
    alternative; per histogram bin, the tilted bin mass must match the
    null-sample estimate reweighted by rho(t) = pi0 (1 - t) / (pi1 beta t),
    where beta is the mean severity of a signal. score_spec lets mutation
    tests score with a deliberately different severity than the law assumes.
    """
    alt = model.alt
    if alt.kind != TWO_POINT:
        raise ValueError("tilted sampling is implemented for two-point alternatives")
    edges = np.linspace(0.05, 0.95, 10) if edges is None else np.asarray(edges)
    score_spec = spec if score_spec is None else score_spec
    s_minus = float(severity(spec, alt.mu_minus))
    s_plus = float(severity(spec, alt.mu_plus))
    beta = alt.pi11 * s_minus + alt.pi12 * s_plus

    rng0 = _rng_for(seed, 900001)
    x0 = rng0.standard_normal(n)
    rng1 = _rng_for(seed, 900002)
    take_minus = rng1.random(n) < alt.pi11 * s_minus / beta
    x1 = np.where(take_minus, alt.mu_minus, alt.mu_plus) + rng1.standard_normal(n)

    t0 = posterior_scores(model, score_spec, x0).T
    t1 = posterior_scores(model, score_spec, x1).T
    rho0 = model.pi0 * (1.0 - t0) / (model.pi1 * beta * t0)

    worst = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        in0 = (t0 >= lo) & (t0 < hi)
        in1 = (t1 >= lo) & (t1 < hi)
        direct = in1.mean()
        reweighted = (in0 * rho0).mean()
        se = np.sqrt(in1.var() / n + (in0 * rho0).var() / n)
        if se == 0.0:
            if direct != reweighted:
                return float("inf")
            continue
        worst = max(worst, abs(direct - reweighted) / se)
    return float(worst)


def analytic_curve_max_violation(model: TwoGroupsModel, spec: SeveritySpec,
                                 n_grid: int = 200) -> float:
    """Largest monotonicity violation of the closed-form rate curve."""
    grid = np.linspace(0.005, 0.995, n_grid)
    curve = mfdr_star_curve(
        lambda t: mfdr_star_closed(cutoff_roots(t, model, spec), model, spec), grid)
    return curve.max_violation


def mc_curve_max_violation_sigma(model: TwoGroupsModel, spec: SeveritySpec,
                                 n_reps: int, m: int, seed: int,
                                 n_grid: int = 100) -> float:
    """Largest monotonicity violation of the pooled empirical rate curve, in
    units of the local delta-method standard error."""
    truth = [sample(model, m, seed, rep) for rep in range(n_reps)]
    scores = posterior_scores(model, spec, np.concatenate([s.x for s in truth]))
    evaluator = PooledMfdrStar(scores, truth, spec)
    grid = np.linspace(0.005, 0.995, n_grid)
    values = np.array([evaluator(t) for t in grid])
    ses = np.array([evaluator.standard_error(t) for t in grid])
    worst = 0.0
    for j in range(n_grid - 1):
        violation = values[j] - values[j + 1]
        if violation <= 0.0:
            continue
        se = max(ses[j], ses[j + 1])
        worst = max(worst, violation / se) if se > 0 else float("inf")
    return worst


def _threshold_decisions(truth, cuts: CutoffPair):
    return [DecisionVector.from_mask((s.x <= cuts.c_l) | (s.x >= cuts.c_u))
            for s in truth]


def closed_vs_mc_max_sigma(pi11: float, alpha: float, n_reps: int, m: int,
                           seed: int, spec: SeveritySpec | None = None) -> float:
    """Closed-form rates vs ground-truth Monte Carlo at the solved cutoffs,
    in standard-error units (weighted mFDR/mFNR and unweighted mFNR)."""
    spec = spec or SeveritySpec.power_law(2.0)
    model = study2_model(pi11)
    _, cuts = find_tstar(model, spec, alpha)
    truth = [sample(model, m, seed, rep) for rep in range(n_reps)]
    decisions = _threshold_decisions(truth, cuts)
    worst = 0.0
    for check_spec, closed in (
            (spec, (mfdr_star_closed(cuts, model, spec),
                    mfnr_star_closed(cuts, model, spec))),
            (SeveritySpec.constant(), (mfdr_star_closed(cuts, model, SeveritySpec.constant()),
                                       mfnr_closed(cuts, model)))):
        fdr_num, fdr_den, fnr_num, fnr_den = replicate_sums(decisions, truth, check_spec)
        for nums, dens, target in ((fdr_num, fdr_den, closed[0]),
                                   (fnr_num, fnr_den, closed[1])):
            est = nums.mean() / dens.mean()
            se = delta_method_se(nums, dens)
            worst = max(worst, abs(est - target) / se) if se > 0 else worst
    return worst


def stepup_mfdr_star(model: TwoGroupsModel, spec: SeveritySpec, alpha: float,
                     n_reps: int, m: int, seed: int) -> tuple[float, float]:
    """Realized weighted mFDR of the step-up rule under true-model scores,
    with its delta-method standard error."""
    truth = [sample(model, m, seed, rep) for rep in range(n_reps)]
    decisions = [stepup(posterior_scores(model, spec, s.x), alpha).decisions
                 for s in truth]
    fdr_num, fdr_den, _, _ = replicate_sums(decisions, truth, spec)
    mfdr, _ = empirical_rates(decisions, truth, spec)
    return mfdr.value, delta_method_se(fdr_num, fdr_den)


def constant_reduction_max_err(model: TwoGroupsModel, n: int, seed: int) -> float:
    """With constant severity, T must collapse to the lfdr and d to 1."""
    x = _rng_for(seed, 900003).uniform(-8.0, 8.0, n)
    scores = posterior_scores(model, SeveritySpec.constant(), x)
    return float(max(np.abs(scores.T - scores.fdr).max(),
                     np.abs(scores.d - 1.0).max()))


def closedform_vs_quadrature_max_rel(model: TwoGroupsModel, spec: SeveritySpec,
                                     xs) -> float:
    """Relative disagreement between the closed forms and the quadrature route
    for the tilted density H(x) and the posterior severity weight w(x)."""
    worst = 0.0
    for x in np.asarray(xs, dtype=float):
        h_closed = weighted_alt_density(model, spec, x)
        h_quad = weighted_alt_density_by_quadrature(model, spec, x)
        worst = max(worst, abs(h_closed - h_quad) / max(abs(h_quad), 1e-300))
        w_closed = float(severity_weight_vec(model, spec, np.array([x]))[0])
        w_quad = severity_weight_by_quadrature(model, spec, x)
        worst = max(worst, abs(w_closed - w_quad) / max(abs(w_quad), 1e-300))
    return worst


def study1_ranking_check(m: int, n_reps: int, seed: int):
    """(worst dominance violation, best strict improvement), both in SE units,
    plus the R = 0 curve value and its SE."""
    bg, bl = study1_matrices(study1_model(), SeveritySpec.power_law(2.0), m, n_reps, seed)
    diff = bg.mean(axis=0) - bl.mean(axis=0)
    se = (bg - bl).std(axis=0, ddof=1) / np.sqrt(n_reps)
    with np.errstate(invalid="ignore", divide="ignore"):
        sigmas = np.where(se > 0, diff / se, 0.0)
    worst_violation = float(np.maximum(sigmas, 0.0).max())
    best_improvement = float(np.maximum(-sigmas, 0.0).max())
    beta0 = float(bg[:, 0].mean())
    beta0_se = float(bg[:, 0].std(ddof=1) / np.sqrt(n_reps))
    return worst_violation, best_improvement, beta0, beta0_se


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    tolerance: float
    detail: str = ""


@dataclass(frozen=True)
class VerifyReport:
    budget: str
    checks: tuple[CheckResult, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


_BUDGETS = {
    "small": dict(tilt_n=150_000, mc_reps=200, mc_m=500, rate_reps=40,
                  rate_m=10_000, stepup_reps=100, stepup_m=1000,
                  study1_m=1000, study1_reps=200, quad_points=41),
    "full": dict(tilt_n=400_000, mc_reps=600, mc_m=1000, rate_reps=200,
                 rate_m=10_000, stepup_reps=400, stepup_m=1000,
                 study1_m=1000, study1_reps=500, quad_points=121),
}


def verify_suite(budget: str = "small", seed: int = DEFAULT_SEED) -> VerifyReport:
    """Run every cross-module check at the requested budget; failures are
    collected, never raised."""
    if budget not in _BUDGETS:
        raise ValueError(f"budget must be one of {sorted(_BUDGETS)}")
    size = _BUDGETS[budget]
    power2 = SeveritySpec.power_law(2.0)
    s2_model = study2_model(0.5)
    checks: list[CheckResult] = []

    def record(name, value, tolerance, detail=""):
        checks.append(CheckResult(name, bool(value <= tolerance), float(value),
                                  float(tolerance), detail))

    record("bayes_rule_bruteforce", bayes_bruteforce_excess(), 0.0,
           "max posterior-loss excess over exhaustive enumeration")
    record("constant_reduction",
           constant_reduction_max_err(s2_model, 20_000, seed), 1e-12,
           "max |T - lfdr| and |d - 1| under constant severity")
    record("closedform_vs_quadrature",
           closedform_vs_quadrature_max_rel(
               study1_model(), power2, np.linspace(-6.0, 6.0, size["quad_points"])),
           1e-6, "max relative error of H(x) and w(x)")
    record("tilted_ratio_law",
           tilted_ratio_max_sigma(s2_model, power2, size["tilt_n"], seed), 5.0,
           "max per-bin deviation of the tilted-ratio law, in SE units")
    record("analytic_monotonicity",
           analytic_curve_max_violation(s2_model, power2), 1e-10,
           "max decrease of the closed-form rate curve on a 200-point grid")
    record("mc_monotonicity",
           mc_curve_max_violation_sigma(s2_model, power2, size["mc_reps"],
                                        size["mc_m"], seed), 3.0,
           "max decrease of the pooled empirical rate curve, in SE units")
    record("closedform_vs_mc",
           closed_vs_mc_max_sigma(0.5, 0.05, size["rate_reps"], size["rate_m"], seed),
           3.0, "closed-form rates vs ground-truth Monte Carlo, in SE units")
    est, se = stepup_mfdr_star(s2_model, power2, 0.05, size["stepup_reps"],
                               size["stepup_m"], seed)
    record("stepup_calibration", abs(est - 0.05), 0.01,
           f"realized weighted mFDR {est:.5f} (SE {se:.5f}) vs target 0.05")
    violation, improvement, beta0, beta0_se = study1_ranking_check(
        size["study1_m"], size["study1_reps"], seed)
    ranking_ok = violation <= 3.0 and improvement > 3.0
    checks.append(CheckResult(
        "study1_ranking", ranking_ok, violation, 3.0,
        f"worst violation {violation:.2f} SE, best improvement {improvement:.1f} SE, "
        f"beta*(0) = {beta0:.2f} +- {beta0_se:.2f}"))
    return VerifyReport(budget, tuple(checks))
