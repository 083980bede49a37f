from functools import lru_cache
from pathlib import Path

import pytest
from hypothesis import settings

from ringforge.planfod import read_plan, solve_bfs, solve_gbfs
from ringforge.planfond import solve_strong
from ringforge.ringdomain import builtin_task

settings.register_profile("repo", deadline=None, derandomize=True, max_examples=60)
settings.load_profile("repo")

FIXTURES = Path(__file__).parent / "fixtures"


@lru_cache(maxsize=None)
def task_for(key):
    return builtin_task(key)


@lru_cache(maxsize=None)
def solved(key, solver, closure="by-contradiction"):
    """Solve a builtin once per session; the deep benchmarks take tens of seconds."""
    task, _ = task_for(key)
    if solver == "bfs":
        return solve_bfs(task)
    if solver == "gbfs":
        return solve_gbfs(task)
    return solve_strong(task, closure)


def fixture_plan(name, task):
    return read_plan((FIXTURES / f"{name}.plan").read_text(), task)


@pytest.fixture
def uai():
    return task_for("unique-additive-inverse")


ACCEPTANCE = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} {detail}"
    ACCEPTANCE[criterion] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
