import os
import random

import pytest
from hypothesis import HealthCheck, settings

SEED = int(os.environ.get("POLYQUANT_SEED", "0"))

settings.register_profile(
    "polyquant",
    max_examples=60,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.large_base_example],
)
settings.load_profile("polyquant")


@pytest.fixture
def seed() -> int:
    return SEED


@pytest.fixture
def rng() -> random.Random:
    return random.Random(SEED)


# one summary line per acceptance criterion, printed after the run
_ACCEPTANCE: dict[str, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    label = item.get_closest_marker("criterion")
    if label is None or (rep.when != "call" and rep.passed):
        return
    status = "PASS" if rep.passed else "FAIL"
    if label.args[0] not in _ACCEPTANCE or status == "FAIL":
        detail = getattr(item, "criterion_detail", "")
        _ACCEPTANCE[label.args[0]] = (status, detail)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion reported in the summary")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[0])):
        status, detail = _ACCEPTANCE[name]
        terminalreporter.write_line(f"{status}  {name}" + (f"  ({detail})" if detail else ""))
