import pytest
from hypothesis import HealthCheck, settings

from quatcusp.orders import make_named_order
from quatcusp.quadfield import QQ, QuadraticField

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

# criterion number -> (title, passed, detail); filled by test_acceptance
ACCEPTANCE: dict = {}


@pytest.fixture(scope="session")
def hurwitz_q():
    return make_named_order("hurwitz", QQ)


@pytest.fixture(scope="session")
def lipschitz_q():
    return make_named_order("lipschitz", QQ)


@pytest.fixture(scope="session")
def fields():
    return {n: QuadraticField(n) for n in (2, 3, 5, 13)}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
