import math

import numpy as np
import pytest
from scipy import integrate
from scipy.stats import norm

import sevfdr as sv
from sevfdr.analytic_oracle import CutoffPair, reject_all_mfdr_star
from sevfdr.model import AlternativeSpec, TwoGroupsModel
from sevfdr.posterior import posterior_scores


def _g(model, spec, t, z):
    """The level-set function, re-derived independently of the solver."""
    alt = model.alt
    s_minus = sv.severity(spec, alt.mu_minus)
    s_plus = sv.severity(spec, alt.mu_plus)
    bracket = (alt.pi11 * s_minus * math.exp(alt.mu_minus * z - 0.5 * alt.mu_minus**2)
               + alt.pi12 * s_plus * math.exp(alt.mu_plus * z - 0.5 * alt.mu_plus**2))
    return t * model.pi1 * bracket - model.pi0 * (1.0 - t)


def test_psi_examples():
    assert sv.psi(-40.0, 40.0) <= 1e-12
    assert sv.psi(0.0, 0.0) == 1.0
    assert abs(sv.psi(-1.959964, 1.959964) - 0.05) <= 1e-6
    with pytest.raises(ValueError):
        sv.psi(1.0, 0.0)


def test_cutoff_roots_residuals_and_score_consistency(study2, power2):
    for t in (0.1, 0.3, 0.5, 0.7, 0.9):
        cuts = sv.cutoff_roots(t, study2, power2)
        assert cuts.region == "outside"
        assert abs(_g(study2, power2, t, cuts.c_l)) <= 1e-9
        assert abs(_g(study2, power2, t, cuts.c_u)) <= 1e-9
        # the cuts are exactly the level set T(x) = t
        scores = posterior_scores(study2, power2, [cuts.c_l, cuts.c_u])
        np.testing.assert_allclose(scores.T, [t, t], atol=1e-8)


def test_cutoff_roots_region_all_near_one(study2, power2):
    assert sv.cutoff_roots(1.0 - 1e-9, study2, power2).region == "all"


def test_cutoff_roots_symmetric_model(power2):
    model = TwoGroupsModel(0.8, AlternativeSpec.two_point(0.5, -2.0, 2.0))
    cuts = sv.cutoff_roots(0.5, model, power2)
    assert abs(cuts.c_l + cuts.c_u) <= 1e-9


def test_cutoff_roots_validation(study1, power2):
    with pytest.raises(ValueError):
        sv.cutoff_roots(0.0, sv.study2_model(0.5), power2)
    with pytest.raises(ValueError):
        sv.cutoff_roots(0.5, study1, power2)  # needs a two-point alternative


def test_mfdr_star_closed_conventions(study2, power2, constant):
    assert sv.mfdr_star_closed(CutoffPair.reject_all(), study2, power2) == \
        pytest.approx(0.8 / 3.3, rel=1e-12)
    assert sv.mfdr_star_closed(CutoffPair.reject_none(), study2, power2) == 0.0
    assert sv.mfdr_star_closed(CutoffPair.reject_all(), study2, constant) == \
        pytest.approx(0.8, rel=1e-12)


def test_mfnr_star_closed_conventions(study2, power2):
    assert sv.mfnr_star_closed(CutoffPair.reject_none(), study2, power2) == \
        pytest.approx(2.5 / 3.3, rel=1e-12)
    assert sv.mfnr_star_closed(CutoffPair.reject_all(), study2, power2) == 0.0
    wide = CutoffPair.outside(-40.0, 40.0)
    np.testing.assert_allclose(sv.mfnr_star_closed(wide, study2, power2),
                               2.5 / 3.3, rtol=1e-12)


def test_mfnr_closed_conventions(study2):
    assert sv.mfnr_closed(CutoffPair.reject_none(), study2) == pytest.approx(0.2, rel=1e-12)
    assert sv.mfnr_closed(CutoffPair.reject_all(), study2) == 0.0


def test_mfnr_closed_against_quadrature():
    # symmetric cuts on a symmetric model, checked against direct integration
    # of the acceptance probabilities
    model = TwoGroupsModel(0.7, AlternativeSpec.two_point(0.5, -2.5, 2.5))
    cuts = CutoffPair.outside(-1.8, 1.8)

    def accept_prob(center):
        val, _ = integrate.quad(lambda x: norm.pdf(x - center), cuts.c_l, cuts.c_u)
        return val

    acc_null = accept_prob(0.0)
    acc_alt = 0.5 * accept_prob(-2.5) + 0.5 * accept_prob(2.5)
    expected = 0.3 * acc_alt / (0.7 * acc_null + 0.3 * acc_alt)
    np.testing.assert_allclose(sv.mfnr_closed(cuts, model), expected, rtol=1e-9)


def test_interval_nesting(study2, power2):
    previous = None
    for t in np.linspace(0.05, 0.95, 19):
        cuts = sv.cutoff_roots(t, study2, power2)
        if previous is not None:
            assert cuts.c_l >= previous.c_l - 1e-12
            assert cuts.c_u <= previous.c_u + 1e-12
        previous = cuts


def test_find_tstar_self_consistent(study2, power2):
    t_star, cuts = sv.find_tstar(study2, power2, 0.05)
    assert abs(sv.mfdr_star_closed(cuts, study2, power2) - 0.05) <= 1e-8
    assert 0.0 < t_star < 1.0
    assert cuts.region == "outside"


def test_find_tstar_near_reject_all(study2, power2):
    sup = reject_all_mfdr_star(study2, power2)
    t_star, cuts = sv.find_tstar(study2, power2, sup - 1e-12)
    assert abs(sv.mfdr_star_closed(cuts, study2, power2) - sup) <= 1e-8
    assert t_star > 0.9


def test_find_tstar_unattainable_alpha(study2, power2):
    sup = reject_all_mfdr_star(study2, power2)
    with pytest.raises(ValueError, match="attainable"):
        sv.find_tstar(study2, power2, sup + 0.01)


def test_find_tstar_constant_dominated_by_power2(power2, constant):
    # tuning with constant severity can only lose weighted power
    for pi11 in (0.1, 0.5, 0.9):
        model = sv.study2_model(pi11)
        _, cuts_p = sv.find_tstar(model, power2, 0.05)
        _, cuts_c = sv.find_tstar(model, constant, 0.05)
        assert sv.mfnr_star_closed(cuts_p, model, power2) <= \
            sv.mfnr_star_closed(cuts_c, model, power2) + 1e-10


def test_analytic_curve_monotone(study2, power2):
    from sevfdr.experiments import analytic_curve_max_violation
    assert analytic_curve_max_violation(study2, power2, n_grid=200) <= 1e-10
