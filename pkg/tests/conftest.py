import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo", deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def chain(seed: int, m: int = 10000, w: float = 0.8) -> np.ndarray:
    """``x1 = w * x0 + e`` with uniform sources, as an ``m x 2`` array."""
    rng = np.random.default_rng(seed)
    x0 = rng.uniform(size=m)
    x1 = w * x0 + rng.uniform(size=m)
    return np.column_stack([x0, x1])
