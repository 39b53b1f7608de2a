from __future__ import annotations

import itertools

import pytest

from abelscert.nilpotent import BlockPattern, Kind

from .oracles import dim_u

# every 2-4 block size tuple with entries in 1..4 and dim u <= 40
SMALL_SIZES = [
    s for k in (2, 3, 4) for s in itertools.product(range(1, 5), repeat=k) if dim_u(s) <= 40
]


def standard_like(sizes) -> BlockPattern:
    return BlockPattern.standard(sizes)


def all_sl(sizes) -> BlockPattern:
    return BlockPattern(sizes, (Kind.SL,) * len(sizes))


def pat(*sizes, prime=None) -> BlockPattern:
    return BlockPattern.standard(sizes, prime)


_acceptance: dict[str, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call":
        return
    number, title = marker.args
    _acceptance[str(number)] = (title, "PASS" if rep.passed else "FAIL")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance, key=int):
        title, status = _acceptance[number]
        terminalreporter.write_line(f"criterion {number:>2}  {status}  {title}")
