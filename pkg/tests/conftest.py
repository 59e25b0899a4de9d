import numpy as np
import pytest

_ACCEPTANCE_LINES = []


def record_acceptance(label, passed, detail):
    _ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  {label}: {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_ball_points(rng, d, count, radius=0.95):
    g = rng.standard_normal((count, d))
    g /= np.linalg.norm(g, axis=1)[:, None]
    return g * (radius * rng.uniform(0.0, 1.0, count) ** (1.0 / d))[:, None]


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
