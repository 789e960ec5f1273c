import sys
import random

import pytest

from kumcount.lattice import KummerLattice, identity


def random_root(lattice, rng, sign, box=2, delta_box=1):
    """Random u with (u,u) = sign (sign in {2, -2}).

    All coordinates but one hyperbolic pair are drawn from a box; the last
    pair is solved so that u has the requested square.
    """
    n = lattice.n
    while True:
        coords = [rng.randint(-box, box) for _ in range(6)] + [rng.randint(-delta_box, delta_box)]
        k = rng.randrange(3)
        rest = sum(coords[2 * i] * coords[2 * i + 1] for i in range(3) if i != k)
        target = sign // 2 + (n + 1) * coords[6] ** 2 - rest
        unit = rng.choice((1, -1))
        first, second = (2 * k, 2 * k + 1) if rng.random() < 0.5 else (2 * k + 1, 2 * k)
        coords[first] = unit
        coords[second] = target * unit
        assert lattice.square(coords) == sign
        return tuple(coords)


def random_word(lattice, rng, length):
    """Product of ``length`` random reflections of mixed type; returns (matrix, types)."""
    m = identity(lattice)
    types = []
    for _ in range(length):
        s = rng.choice((2, -2))
        types.append(s)
        m = m @ lattice.reflection(random_root(lattice, rng, s))
    return m, types


@pytest.fixture
def rng():
    return random.Random(20261016)


@pytest.fixture(params=[2, 3, 5, 7])
def lattice(request):
    return KummerLattice(request.param)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
