import pytest

from lensurg.obstruction import Options, enumerate_reports


@pytest.fixture(scope="session")
def sweep():
    return enumerate_reports(31, 60)


@pytest.fixture(scope="session")
def sweep_toggles():
    return {
        "no-delta-lambda": enumerate_reports(31, 60, Options(delta_lambda=False)),
        "closed": enumerate_reports(31, 60, Options(dm_source="closed")),
        "lspace-all-m": enumerate_reports(31, 60, Options(lspace_all_m=True)),
    }


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
