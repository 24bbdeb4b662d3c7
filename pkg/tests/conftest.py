import itertools
import math

import numpy as np
import pytest
from hypothesis import strategies as st

from cutoff_lab.polyroots import RecurrenceSpec, polynomial_from_roots


def random_roots(rng: np.random.Generator, p: int, max_mod: float = 0.95) -> list[complex]:
    """Roots with moduli <= max_mod, closed under conjugation."""
    roots: list[complex] = []
    while len(roots) < p:
        if p - len(roots) >= 2 and rng.random() < 0.5:
            rho = rng.uniform(0.05, max_mod)
            ang = rng.uniform(0.1, math.pi - 0.1)
            z = rho * complex(math.cos(ang), math.sin(ang))
            roots += [z, z.conjugate()]
        else:
            mag = rng.uniform(0.05, max_mod)
            roots.append(complex(mag if rng.random() < 0.5 else -mag))
    return roots


def random_stable_spec(rng: np.random.Generator, p: int, eps: float = 1.0) -> RecurrenceSpec:
    phi = polynomial_from_roots(random_roots(rng, p))
    init = tuple(rng.uniform(-2, 2, size=p))
    return RecurrenceSpec(phi, init, eps)


def random_spec_set(n: int = 50, seed: int = 2024) -> list[RecurrenceSpec]:
    rng = np.random.default_rng(seed)
    return [random_stable_spec(rng, (1, 2, 3)[i % 3]) for i in range(n)]


def psi_by_compositions(phi, s: int) -> float:
    """psi_s as a sum over compositions of s into parts from {1..p}."""
    p = len(phi)
    total = 0.0
    for n_parts in range(1, s + 1):
        for parts in itertools.product(range(1, p + 1), repeat=n_parts):
            if sum(parts) == s:
                total += math.prod(phi[k - 1] for k in parts)
    return 1.0 if s == 0 else total


@st.composite
def stable_specs(draw, max_p: int = 3):
    seed = draw(st.integers(0, 2**32 - 1))
    p = draw(st.integers(1, max_p))
    return random_stable_spec(np.random.default_rng(seed), p)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[n])
