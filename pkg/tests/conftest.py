import numpy as np
import pytest

from growthtrend.dataio import CountrySeries

YEARS = tuple(range(1960, 2014))

# criterion number -> (label, outcome line); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[str, str]] = {}


def linear_series(seed, n=len(YEARS), a=100.0, b=2.0, sd=1.0, sid="lin"):
    """Levels a + b t plus a Gaussian random walk."""
    rng = np.random.default_rng(seed)
    t = np.arange(n)
    y = a + b * t + np.cumsum(rng.normal(0.0, sd, n))
    return CountrySeries(sid, YEARS[:n], y)


def exponential_series(seed, n=len(YEARS), c=100.0, rate=0.03, sd=0.001, sid="exp"):
    """c (1 + rate)^t with multiplicative log-normal noise."""
    rng = np.random.default_rng(seed)
    t = np.arange(n)
    y = c * (1.0 + rate) ** t * np.exp(rng.normal(0.0, sd, n))
    return CountrySeries(sid, YEARS[:n], y)


@pytest.fixture
def record_acceptance():
    def record(number, label, passed, detail=""):
        status = "SKIP" if passed is None else "PASS" if passed else "FAIL"
        ACCEPTANCE[number] = (label, f"{status}  {detail}".rstrip())

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        label, outcome = ACCEPTANCE[number]
        terminalreporter.write_line(f"[{number}] {label}: {outcome}")
