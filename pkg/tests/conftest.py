from __future__ import annotations

from pathlib import Path

import pytest

from ncspace.presentation import parse

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

_CRITERIA: dict[int, tuple[str, str]] = {}


def load(name: str, strict: bool = True):
    return parse((FIXTURES / name).read_text(), strict=strict)


def valid_fixtures() -> list[str]:
    out = []
    for p in sorted(FIXTURES.glob("*.ncs")):
        try:
            parse(p.read_text())
        except Exception:
            continue
        out.append(p.name)
    return out


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        status = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        prev = _CRITERIA.get(num)
        if prev is None:
            _CRITERIA[num] = (title.split(":")[0], status)
        elif prev[1] == "PASS":
            _CRITERIA[num] = (prev[0], status)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, status = _CRITERIA[num]
        terminalreporter.write_line(f"criterion {num}: {status}  {title}")
