import math
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from balkit.measures import DiscreteCharge  # noqa: E402

settings.register_profile("balkit", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("balkit")


finite = st.floats(min_value=-50, max_value=50, allow_nan=False, allow_infinity=False)
masses = st.floats(min_value=-5, max_value=5, allow_nan=False).filter(lambda m: abs(m) > 1e-3)


@st.composite
def charges(draw, max_atoms=25, positive=False, axis_atoms=True, min_modulus=1e-3):
    n = draw(st.integers(0, max_atoms))
    atoms = []
    for _ in range(n):
        kind = draw(st.sampled_from(["plane", "plane", "plane", "axis"] if axis_atoms else ["plane"]))
        if kind == "axis":
            z = complex(0.0, draw(finite))
        else:
            z = complex(draw(finite), draw(finite))
        if abs(z) < min_modulus:
            z = complex(1.0, 0.0)
        m = draw(masses)
        atoms.append((z, abs(m) if positive else m))
    return DiscreteCharge.from_atoms(atoms, origin_excluded=True)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def rel(a, b):
    return abs(a - b) / max(1.0, abs(b))


# one line per acceptance criterion, echoed at the end of the run
ACCEPTANCE: list[str] = []


def record(criterion: int, ok: bool, text: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {text}"
    ACCEPTANCE.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
