from __future__ import annotations

import pytest

from homatch.corpus import generate_corpus, unsolvable_perturbations

_RESULTS: list[tuple[int, str, bool, str]] = []


@pytest.fixture(scope="session")
def record():
    """Collect one pass/fail line per acceptance criterion for the summary."""

    def _rec(num: int, desc: str, ok: bool, detail: str = "") -> None:
        _RESULTS.append((num, desc, ok, detail))

    return _rec


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for num, desc, ok, detail in sorted(_RESULTS):
        line = f"{'PASS' if ok else 'FAIL'} criterion {num}: {desc}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def corpus():
    return generate_corpus()


@pytest.fixture(scope="session")
def unsolvables(corpus):
    return unsolvable_perturbations(corpus, 100)
