from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import settings

from mknf_aft.syntax import load_kb

ROOT = Path(__file__).resolve().parent.parent
KB_DIR = ROOT / "kb_examples"

sys.path.insert(0, str(Path(__file__).resolve().parent))

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def kb_dir() -> Path:
    return KB_DIR


@pytest.fixture
def load():
    return lambda name: load_kb(KB_DIR / f"{name}.kb")


def corpus_kb_files() -> list[Path]:
    return sorted(KB_DIR.glob("*.kb"))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
