import numpy as np
import pytest

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion exercised by a test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    key = (str(mark.args[0]), item.name)
    _CRITERIA[key] = (mark.args[1], rep.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")

    def order(k):
        num = "".join(ch for ch in k[0] if ch.isdigit())
        return (int(num or 0), k[0], k[1])

    for key in sorted(_CRITERIA, key=order):
        text, outcome = _CRITERIA[key]
        tag = "PASS" if outcome == "passed" else "FAIL"
        tr.write_line(f"[{tag}] criterion {key[0]}: {text}  ({key[1]})")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
