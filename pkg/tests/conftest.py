import numpy as np
import pytest

from pfq.state import H, V, Frequency, Mode, PhotonState


def random_state(rng: np.random.Generator, paths=(1, 2), max_k=4, pols=(H, V), size=6) -> PhotonState:
    """Normalized random superposition over a small mode set."""
    amps = {}
    for _ in range(size):
        md = Mode(Frequency(int(rng.integers(max_k)), int(rng.integers(-1, 2))),
                  paths[int(rng.integers(len(paths)))], pols[int(rng.integers(len(pols)))])
        amps[md] = amps.get(md, 0j) + complex(rng.normal(), rng.normal())
    state = PhotonState(amps)
    return state * (1 / np.sqrt(state.power()))


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Run one acceptance check, log a PASS/FAIL line, then assert."""

    def run(number: int, title: str, check):
        try:
            ok, detail = check()
        except Exception as err:  # a crash is a failed criterion, not a skipped one
            ok, detail = False, f"{type(err).__name__}: {err}"
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}  {title}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return run


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
