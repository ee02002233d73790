from __future__ import annotations

import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
DATA = HERE / "data"
sys.path.insert(0, str(HERE))

from eojeolbank.bracketed import parse_bracketed  # noqa: E402


def read(name: str) -> str:
    return (DATA / name).read_text(encoding="utf-8")


@pytest.fixture
def fig1():
    return parse_bracketed(read("fig1_sejong.txt"), "sejong").trees[0]


@pytest.fixture
def fig2():
    return parse_bracketed(read("fig2_penn.txt"), "penn").trees[0]


@pytest.fixture
def fig3():
    return parse_bracketed(read("fig3_kaist.txt"), "kaist").trees[0]


@pytest.fixture
def fig3_raw():
    return read("fig3_raw.txt").strip()


@pytest.fixture
def fig5_text():
    return read("fig5_joint.txt")


@pytest.fixture
def fig6():
    return parse_bracketed(read("fig6_normalized.txt")).trees[0]


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, title = RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}")
