import pytest

_criteria: dict[str, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if item.module.__name__.endswith("test_acceptance") and item.name.startswith("test_criterion_"):
        doc = (item.function.__doc__ or "").strip().splitlines()
        label = doc[0] if doc else item.name
        if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
            _criteria[item.name] = ("PASS" if rep.passed else "FAIL", label)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria):
        status, label = _criteria[name]
        number = name.split("_")[2]
        terminalreporter.write_line(f"criterion {int(number):>2}: {status}  {label}")
