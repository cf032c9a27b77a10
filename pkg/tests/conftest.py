import sys
from pathlib import Path

import pytest

from horn_arena.runner import BENCHMARK_PLACEHOLDER, SolverSpec

STUB = Path(__file__).parent / "stubs" / "stub_solver.py"


def stub_spec(mode: str, name: str | None = None, **kw) -> SolverSpec:
    return SolverSpec(name or mode, "default", (sys.executable, str(STUB), mode, BENCHMARK_PLACEHOLDER), **kw)


@pytest.fixture
def bench_file(tmp_path):
    p = tmp_path / "b.smt2"
    p.write_text("(set-logic HORN)\n(check-sat)\n")
    return p


LIA_LIN_SAFE = """(set-logic HORN)
(declare-fun inv (Int) Bool)
(assert (forall ((x Int)) (=> (= x 0) (inv x))))
(assert (forall ((x Int) (y Int)) (=> (and (inv x) (= y (+ x 1))) (inv y))))
(assert (forall ((x Int)) (=> (and (inv x) (< x 0)) false)))
(check-sat)
"""


# filled by the acceptance tests, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
