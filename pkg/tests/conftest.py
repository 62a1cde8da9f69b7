import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_criteria: dict[int, dict] = {}


def pytest_addoption(parser):
    parser.addoption("--full-sturm", action="store_true", default=False,
                     help="also run the identity checks to 1440 steps")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--full-sturm"):
        return
    skip = pytest.mark.skip(reason="needs --full-sturm")
    for item in items:
        if "full_sturm" in item.keywords:
            item.add_marker(skip)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or rep.when not in ("setup", "call"):
        return
    number, title = mark.args
    entry = _criteria.setdefault(number, {"title": title, "failed": [], "ran": 0})
    if rep.when == "call":
        entry["ran"] += 1
    if rep.failed:
        entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        if entry["ran"] == 0 and not entry["failed"]:
            continue
        status = "FAIL" if entry["failed"] else "PASS"
        line = f"{status} criterion {number:>2}: {entry['title']}"
        if entry["failed"]:
            line += f"  [failing: {', '.join(entry['failed'])}]"
        tr.write_line(line)
