from __future__ import annotations

import mpmath
import pytest
from hypothesis import HealthCheck, settings

from periodzeros import PrecisionContext
from periodzeros.suites import eisenstein_for_weight, forms_for_weight

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(autouse=True)
def _mp_prec():
    with mpmath.workprec(200):
        yield


@pytest.fixture(scope="session")
def ctx():
    return PrecisionContext(200)


@pytest.fixture(scope="session")
def delta(ctx):
    return forms_for_weight(12, ctx, 3)[0]


@pytest.fixture(scope="session")
def e12(ctx):
    return eisenstein_for_weight(12, ctx, 3)


@pytest.fixture(scope="session")
def delta_long(ctx):
    # enough terms for q-series evaluation down to Im tau = 1/2
    from periodzeros.forms import hecke_eigenforms

    return hecke_eigenforms(12, 100, ctx).forms[0]


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import CRITERIA
    except ImportError:
        return
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for n in sorted(CRITERIA):
            terminalreporter.write_line(CRITERIA[n])
