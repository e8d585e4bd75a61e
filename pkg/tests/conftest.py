import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from gevrey_ns import SpectralVectorField, TruncatedLattice, random_divfree_field

settings.register_profile("default", max_examples=25, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def shear_field(lattice, amp=0.5):
    """u = (0, cos x1, 0): independent of the direction it advects along."""
    k = [1] + [0] * (lattice.dim - 1)
    v = np.zeros(lattice.dim)
    v[1] = amp
    return SpectralVectorField.from_modes(lattice, {tuple(k): v})


def rel(a, b):
    """Relative L2 distance between coefficient arrays (b is the reference)."""
    a, b = np.asarray(a), np.asarray(b)
    nb = np.linalg.norm(b)
    return np.linalg.norm(a - b) / (nb if nb > 0 else 1.0)


@pytest.fixture
def lat2():
    return TruncatedLattice(2, 8)


@pytest.fixture
def lat3():
    return TruncatedLattice(3, 4)


@pytest.fixture
def random2(lat2):
    return random_divfree_field(lat2, (1.0, 2.0, 1.0), seed=11)


@pytest.fixture
def random3(lat3):
    return random_divfree_field(lat3, (1.0, 2.0, 1.0), seed=12)


ACCEPTANCE_LINES = []


def record_criterion(number, title, ok, detail):
    """Log a one-line acceptance verdict; the lines are echoed in the terminal summary."""
    line = f"criterion {number:>2} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
