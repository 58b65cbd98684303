"""Shared fixtures: the running example poset, kernel warmup, and the
acceptance summary printed at the end of the run."""

from __future__ import annotations

import pytest

from orderlevel import (
    add_bounds,
    check_level,
    check_level_alcoved,
    from_covers,
    hstar,
    order_polytope_as_alcoved,
    potentials_to_point,
)

ACCEPTANCE_LINES: list[str] = []


def record_acceptance(name: str, ok: bool, detail: str = "") -> None:
    """One pass/fail line per criterion, shown in the terminal summary."""
    state = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    ACCEPTANCE_LINES.append(f"{state}: {name}{suffix}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


FINK_COVERS = (
    ("1", "2"),
    ("2", "3"),
    ("3", "4"),
    ("5", "6"),
    ("6", "7"),
    ("8", "9"),
    ("9", "10"),
    ("10", "11"),
    ("5", "3"),
    ("9", "7"),
)


def make_fink():
    return from_covers([str(i) for i in range(1, 12)], FINK_COVERS)


@pytest.fixture(scope="session")
def fink():
    return make_fink()


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile (or load from cache) every hot kernel before any timed test."""
    poset = from_covers(["a", "b", "c"], [("a", "b")])
    add_bounds(poset)
    check_level(poset)
    potentials_to_point(poset)
    hstar(poset)
    check_level_alcoved(order_polytope_as_alcoved(poset))
    yield
