import numpy as np
import pytest

import sevfdr as sv
from sevfdr.model import AlternativeSpec, TwoGroupsModel


def test_severity_examples(power2, constant):
    assert sv.severity(power2, 0.0) == 0.0
    assert sv.severity(constant, 7.3) == 1.0
    assert sv.severity(power2, -3.0) == 9.0


@pytest.mark.parametrize("p", [1.0, 2.0, 3.5])
def test_severity_even_and_monotone(p):
    spec = sv.SeveritySpec.power_law(p)
    grid = np.linspace(0.0, 6.0, 200)
    values = sv.severity(spec, grid)
    assert values[0] == 0.0
    assert np.all(np.diff(values) >= 0)
    np.testing.assert_array_equal(sv.severity(spec, -grid), values)


def test_spec_validation():
    with pytest.raises(ValueError):
        sv.SeveritySpec.power_law(0.0)
    with pytest.raises(ValueError):
        sv.SeveritySpec("exotic")
    with pytest.raises(ValueError):
        AlternativeSpec.two_point(1.5, -1.0, 1.0)
    with pytest.raises(ValueError):
        AlternativeSpec.two_point(0.5, 1.0, 2.0)  # both centers positive
    with pytest.raises(ValueError):
        AlternativeSpec.gaussian_mixture(0.5, -1.0, 1.0, tau=0.0)
    with pytest.raises(ValueError):
        TwoGroupsModel(1.0, AlternativeSpec.two_point(0.5, -1.0, 1.0))
    with pytest.raises(ValueError):
        TwoGroupsModel(0.0, AlternativeSpec.two_point(0.5, -1.0, 1.0))


def test_sample_rejects_bad_sizes(study2):
    with pytest.raises(ValueError):
        sv.sample(study2, 0, seed=1)
    with pytest.raises(ValueError):
        sv.sample(study2, 10, seed=1, rep_index=-1)


def test_sample_reproducible(study2):
    a = sv.sample(study2, 500, seed=123, rep_index=7)
    b = sv.sample(study2, 500, seed=123, rep_index=7)
    np.testing.assert_array_equal(a.x, b.x)
    np.testing.assert_array_equal(a.mu, b.mu)
    np.testing.assert_array_equal(a.theta, b.theta)
    c = sv.sample(study2, 500, seed=123, rep_index=8)
    assert not np.array_equal(a.x, c.x)


def test_sample_invariants(study1):
    smp = sv.sample(study1, 20_000, seed=5)
    assert smp.m == 20_000
    assert np.all(smp.mu[smp.theta == 0] == 0.0)
    assert not smp.x.flags.writeable


def test_sample_degenerate_null():
    model = TwoGroupsModel(1.0 - 1e-12, AlternativeSpec.two_point(0.5, -3.0, 4.0))
    smp = sv.sample(model, 1000, seed=11)
    assert smp.theta.sum() == 0
    assert np.all(smp.mu == 0.0)


def test_sample_signal_fraction_study2(study2):
    # law of large numbers at m = 1e6: 5-sigma band around pi1 = 0.2
    smp = sv.sample(study2, 1_000_000, seed=2024)
    assert abs(smp.theta.mean() - 0.2) <= 0.002


def test_sample_weighted_signal_mass_study1(study1, power2):
    # E[theta * mu^2] = 0.05 * (0.2 (1.5^2 + 0.25) + 0.8 (1 + 0.25)) = 0.075,
    # verified against direct numerical integration of the mixture moments
    smp = sv.sample(study1, 1_000_000, seed=2025)
    mass = float(np.mean(smp.theta * smp.mu**2))
    assert abs(mass - 0.075) <= 0.001


def test_sample_component_split(study2):
    smp = sv.sample(study2, 1_000_000, seed=77)
    at_minus = smp.mu[smp.theta == 1] == -3.0
    n1 = at_minus.size
    se = np.sqrt(0.5 * 0.5 / n1)
    assert abs(at_minus.mean() - 0.5) <= 5 * se
