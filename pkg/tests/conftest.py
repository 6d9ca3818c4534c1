import pytest

import sevfdr as sv


@pytest.fixture
def power2():
    return sv.SeveritySpec.power_law(2.0)


@pytest.fixture
def constant():
    return sv.SeveritySpec.constant()


@pytest.fixture
def study2():
    """Two-atom benchmark model: pi0 = 0.8, atoms -3 / 4, equal weights."""
    return sv.study2_model(0.5)


@pytest.fixture
def study1():
    """Gaussian-mixture benchmark model: pi0 = 0.95, centers -1.5 / 1, tau = 0.5."""
    return sv.study1_model()
