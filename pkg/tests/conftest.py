import random

import pytest
from hypothesis import strategies as st

from trinet.core import ColoredTrinet, is_connected, make_cube, make_k33
from trinet.rules import SPACE_SIZE


def make_k4() -> ColoredTrinet:
    # the three perfect matchings of K4, one per color
    return ColoredTrinet.from_edges(4, [(0, 1, 0), (2, 3, 0), (0, 2, 1), (1, 3, 1),
                                        (0, 3, 2), (1, 2, 2)])


BASES = {"k4": make_k4, "k33": make_k33, "cube": make_cube}


def random_trinet(seed: int, max_n: int = 12) -> ColoredTrinet:
    """A connected trinet grown from a small base by expansions and exchanges."""
    rng = random.Random(seed)
    G = BASES[rng.choice(sorted(BASES))]()
    for _ in range(rng.randint(0, 6)):
        if G.n + 2 <= max_n and rng.random() < 0.5:
            G._expand(rng.randrange(G.n))
            continue
        c = rng.randrange(3)
        a, x = rng.sample(range(G.n), 2)
        b, y = G.nbr[3 * a + c], G.nbr[3 * x + c]
        if len({a, b, x, y}) < 4:
            continue
        H = G.copy()
        H._exchange(a, b, x, y, c)
        if is_connected(H):
            G = H
    G.validate()
    return G


trinets = st.integers(0, 10 ** 6).map(random_trinet)
rule_ids = st.integers(0, SPACE_SIZE - 1)


@pytest.fixture
def cube():
    return make_cube()


@pytest.fixture
def k33():
    return make_k33()


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.VERDICTS:
        return
    terminalreporter.section("acceptance")
    for n in sorted(mod.VERDICTS):
        terminalreporter.write_line(mod.VERDICTS[n])
