from pathlib import Path

import pytest

from lsmseg.text_model import NormalizationConfig, parse_document

DATA = Path(__file__).parent / "data"

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call" and not rep.failed:
        return
    number, title = marker.args
    ok = rep.passed if rep.when == "call" else False
    prev = _criteria.get(number, (True, title))[0]
    _criteria[number] = (prev and ok, title)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        ok, title = _criteria[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}")


def make_doc(sentences, headings=(), doc_id="t", config=None):
    """Build a document from sentence strings; ``headings`` are positions."""
    if config is None:
        config = NormalizationConfig.from_words([], stem=False)
    lines = []
    for i, s in enumerate(sentences, 1):
        if i in headings:
            lines.append(f"## section {i}")
        lines.append(s)
    return parse_document("\n".join(lines) + "\n", doc_id, config)


@pytest.fixture
def guinea():
    return parse_document((DATA / "guinea.txt").read_bytes(), "guinea")


@pytest.fixture
def plain_config():
    return NormalizationConfig.from_words([], stem=False)
