import re

_results: dict[int, tuple[str, str]] = {}
_PATTERN = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")


def pytest_runtest_logreport(report):
    m = _PATTERN.search(report.nodeid)
    if not m:
        return
    num, label = int(m.group(1)), m.group(2).replace("_", " ")
    if report.failed:
        _results[num] = ("FAIL", label)
    elif report.when == "call" and num not in _results:
        _results[num] = ("PASS", label)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_results):
        verdict, label = _results[num]
        terminalreporter.write_line(f"criterion {num:2d}: {verdict}  {label}")
