from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from citmesh.corpus import attach_times_cited, link_by_pmid  # noqa: E402
from citmesh.medline import parse_medline  # noqa: E402
from citmesh.wos import parse_wos  # noqa: E402

DATA = Path(__file__).parent / "data"

_acceptance: dict[int, list[str]] = {}


@pytest.fixture(scope="session")
def medline_path() -> Path:
    return DATA / "fixture_medline.txt"


@pytest.fixture(scope="session")
def wos_path() -> Path:
    return DATA / "fixture_wos.txt"


@pytest.fixture(scope="session")
def medline_records(medline_path):
    return parse_medline(medline_path.read_bytes())


@pytest.fixture(scope="session")
def wos_records(wos_path):
    return parse_wos(wos_path.read_bytes())


@pytest.fixture(scope="session")
def corpus(medline_records, wos_records):
    return attach_times_cited(link_by_pmid(medline_records, wos_records), wos_records)


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None or call.when not in ("setup", "call"):
        return
    if call.when == "setup" and call.excinfo is None:
        return
    n = marker.args[0]
    if call.excinfo is None:
        outcome = "PASS"
    elif call.excinfo.errisinstance(pytest.skip.Exception):
        outcome = "SKIP"
    else:
        outcome = "FAIL"
    _acceptance.setdefault(n, []).append(f"{outcome} {item.name}")


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_acceptance):
        results = _acceptance[n]
        if any(r.startswith("FAIL") for r in results):
            verdict = "FAIL"
        elif all(r.startswith("SKIP") for r in results):
            verdict = "SKIP"
        else:
            verdict = "PASS"
        terminalreporter.write_line(f"criterion {n:>2}: {verdict}  ({'; '.join(results)})")
