import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", deadline=None, max_examples=400)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance[report.nodeid] = (report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    from test_acceptance import CRITERIA

    terminalreporter.section("acceptance criteria")
    for name, title in CRITERIA.items():
        hit = [v for k, v in _acceptance.items() if k.endswith("::" + name)]
        if not hit:
            continue
        outcome, seconds = hit[0]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {title}  ({seconds:.2f}s)")
