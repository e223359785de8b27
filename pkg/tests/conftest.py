import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from scipy import stats

from airsea_owc.empirical import EmpiricalPdf

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# Filled by tests/test_acceptance.py, printed at the end of the run.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def synthetic_pdf(dist, step=0.5, stop=90.0) -> EmpiricalPdf:
    """Tabulate a frozen scipy.stats density on [0, stop] (degrees)."""
    x = np.arange(0.0, stop + step / 2, step)
    return EmpiricalPdf(x, dist.pdf(x), {"synthetic": True})


@pytest.fixture(scope="session")
def weibull_pdf():
    return synthetic_pdf(stats.weibull_min(c=1.84, scale=15.61))


@pytest.fixture(scope="session")
def gamma_pdf():
    return synthetic_pdf(stats.gamma(a=4.0, scale=3.5))
