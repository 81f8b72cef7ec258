from __future__ import annotations

import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from wittlift import corpus
from wittlift.groups import FiniteGroup

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def groups():
    return {name: corpus.group(name) for name in corpus.GROUP_SPECS}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def small_groups():
    """Corpus groups of order <= 8, by name."""
    return [n for n in corpus.GROUP_SPECS if corpus.group(n).order <= 8]


def cyclic(n: int) -> FiniteGroup:
    return FiniteGroup.cyclic(n)


_CRITERIA = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    out = yield
    rep = out.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n = mark.args[0]
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _CRITERIA[n] = ("PASS" if rep.passed else "FAIL", rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        verdict, dt = _CRITERIA[n]
        terminalreporter.write_line(f"{verdict} criterion {n} ({dt:.1f} s)")
