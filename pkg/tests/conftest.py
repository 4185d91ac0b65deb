import random

import pytest
from hypothesis import strategies as st

from covertab.cover import CoverDatum, validate_datum

III_STAR = ((2, 1, 2, 1, 0), (0, 0, 1, 1, 1))
III_STARSTAR = ((2, 2, 3, 1, 0), (0, 0, 1, 1, 2))


@pytest.fixture
def iii_star() -> CoverDatum:
    return validate_datum(3, III_STAR)


@pytest.fixture
def iii_starstar() -> CoverDatum:
    return validate_datum(4, III_STARSTAR)


def random_datum(rng: random.Random, N_max=12, m_max=3, s_max=8, s_min=3) -> CoverDatum:
    """Uniform-ish valid datum: random rows closed up to sum 0, retried until every column is nonzero."""
    while True:
        N = rng.randint(2, N_max)
        m = rng.randint(1, m_max)
        s = rng.randint(s_min, s_max)
        rows = []
        for _ in range(m):
            head = [rng.randrange(N) for _ in range(s - 1)]
            rows.append(head + [(-sum(head)) % N])
        if all(any(r[j] for r in rows) for j in range(s)):
            return validate_datum(N, rows)


@st.composite
def data(draw, N_max=8, m_max=2, s_max=6, s_min=3):
    N = draw(st.integers(2, N_max))
    m = draw(st.integers(1, m_max))
    s = draw(st.integers(s_min, s_max))
    rows = []
    for _ in range(m):
        head = draw(st.lists(st.integers(0, N - 1), min_size=s - 1, max_size=s - 1))
        rows.append(head + [(-sum(head)) % N])
    for j in range(s):
        if not any(r[j] for r in rows):
            # force a nonzero column while keeping the row sum
            rows[0][j] = 1
            rows[0][(j + 1) % s] = (rows[0][(j + 1) % s] - 1) % N
    from hypothesis import assume

    assume(all(any(r[j] for r in rows) for j in range(s)))
    return validate_datum(N, rows)


_acceptance: list[tuple[str, str, str]] = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        detail = "; ".join(
            line.split(": ", 1)[1] for line in report.capstdout.splitlines() if line.startswith("criterion")
        )
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome, detail))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, detail in _acceptance:
        tag = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{tag}] {name}" + (f"  ({detail})" if detail else ""))
