import os
from pathlib import Path

import pytest

from proofscope import sample_corpus_path
from proofscope.corpus import parse_corpus

ACCEPTANCE_RESULTS = {}
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def sample_text():
    return sample_corpus_path().read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def sample(sample_text):
    return parse_corpus(sample_text)


@pytest.fixture
def golden():
    """Compare text against tests/golden/<name>; UPDATE_GOLDEN=1 rewrites the file."""
    def check(name, text):
        path = GOLDEN / name
        if os.environ.get("UPDATE_GOLDEN") == "1":
            path.write_text(text, encoding="utf-8")
        assert text == path.read_text(encoding="utf-8")
    return check


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker and report.when == "call":
        ACCEPTANCE_RESULTS[marker.args[0]] = (report.passed, marker.args[1])
    elif marker and report.when == "setup" and report.failed:
        ACCEPTANCE_RESULTS[marker.args[0]] = (False, marker.args[1])


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        ok, title = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(f"AC{n} {'PASS' if ok else 'FAIL'}  {title}")
