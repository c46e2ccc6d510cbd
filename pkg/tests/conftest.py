import numpy as np
import pytest

from netchange import generate, make_setting
from netchange.simulation import SimSetting, equal_partition


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def setting_data(setting_id, p, T, seed):
    """Scenario draw and its series, both reproducible from ``seed``."""
    ss = np.random.SeedSequence(seed)
    a, b = ss.spawn(2)
    s = make_setting(setting_id, p, T, np.random.default_rng(a))
    return s, generate(s, np.random.default_rng(b))


def single_regime(p, T, seed, k=2):
    s = SimSetting(0, p, T, (), (equal_partition(p, k),))
    return generate(s, np.random.default_rng(seed))


def two_block_correlation(p, within=0.9, between=0.0):
    half = p // 2
    labels = np.repeat([0, 1], [half, p - half])
    A = np.where(labels[:, None] == labels[None, :], within, between)
    np.fill_diagonal(A, 1.0)
    return A, labels


def same_partition(a, b):
    """Labels equal up to a relabelling of communities."""
    a, b = np.asarray(a), np.asarray(b)
    fwd = {}
    back = {}
    for x, y in zip(a.tolist(), b.tolist()):
        if fwd.setdefault(x, y) != y or back.setdefault(y, x) != x:
            return False
    return True


_ACCEPTANCE = []


@pytest.fixture
def verdict():
    """Record one acceptance line: ``verdict(label, passed, detail)``."""

    def record(label, passed, detail):
        line = f"{'PASS' if passed else 'FAIL'}  {label}: {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
