import json
import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

DATA = HERE / "data"

_criteria: dict[str, tuple[int, str]] = {}
_outcomes: dict[int, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion check")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _criteria[item.nodeid] = (m.args[0], m.args[1])


def pytest_runtest_logreport(report):
    if report.nodeid not in _criteria:
        return
    num = _criteria[report.nodeid][0]
    if report.when == "call" or report.failed:
        _outcomes.setdefault(num, []).append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    titles = {}
    for num, title in _criteria.values():
        titles.setdefault(num, title)
    terminalreporter.section("acceptance criteria")
    for num in sorted(titles):
        outs = _outcomes.get(num)
        if not outs:
            status = "NOT RUN"
        elif all(o == "passed" for o in outs):
            status = "PASS"
        else:
            status = "FAIL"
        terminalreporter.write_line(f"criterion {num:2d} {status:7s} {titles[num]}")


def load_json(path: Path):
    return json.loads(path.read_text())


@pytest.fixture(scope="session")
def complexes():
    from tropcong import io

    return {p.stem: io.complex_from_json(load_json(p)) for p in sorted((DATA / "complexes").glob("*.json"))}


@pytest.fixture(scope="session")
def unions():
    from tropcong import io

    return {p.stem: io.union_from_json(load_json(p)) for p in sorted((DATA / "unions").glob("*.json"))}
