import random

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "gbx",
    deadline=None,
    derandomize=True,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("gbx")


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, (verdict, failures) in sorted(module.RESULTS.items()):
        detail = f"  ({'; '.join(failures)})" if failures else ""
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}{detail}")
