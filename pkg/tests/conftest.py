import numpy as np
import pytest

from itlinq.channel import SnrTable


def random_snr_table(rng: np.random.Generator, n: int, snr_db=(10, 60), inr_db=(-10, 40)) -> SnrTable:
    snr = 10 ** (rng.uniform(*snr_db, n) / 10)
    inr = 10 ** (rng.uniform(*inr_db, (n, n)) / 10)
    return SnrTable(snr, inr)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
