import numpy as np
import pytest


def positive_corpus(count=200, max_len=50, seed=20240611):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(2, max_len + 1))
        out.append(rng.uniform(0.05, 10.0, size=n))
    return out


@pytest.fixture(scope="session")
def corpus():
    return positive_corpus()


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import ACCEPTANCE_LINES

    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
