import cmath
import random

import pytest

from skeinhard.braid import BraidWord, PlatPresentation
from skeinhard.params import BracketParams


def random_word(rng: random.Random, n: int, max_len: int) -> BraidWord:
    length = rng.randint(0, max_len) if n > 1 else 0
    return BraidWord(n, tuple((rng.randint(1, n - 1), rng.choice((1, -1))) for _ in range(length)))


def random_plat(rng: random.Random, max_strands: int = 6, max_len: int = 12) -> PlatPresentation:
    n = rng.choice([k for k in (2, 4, 6, 8) if k <= max_strands])
    return PlatPresentation(random_word(rng, n, max_len))


def generic_points(seed: int = 7, count: int = 5) -> list[BracketParams]:
    rng = random.Random(seed)
    return [BracketParams.generic(cmath.exp(1j * rng.uniform(-3.0, 3.0))) for _ in range(count)]


def close(a: complex, b: complex, rel: float = 1e-9, floor: float = 1e-12) -> bool:
    return abs(a - b) <= rel * max(abs(a), abs(b)) + floor


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(scope="session")
def r5():
    return BracketParams.root_of_unity(5)


@pytest.fixture(scope="session")
def r7():
    return BracketParams.root_of_unity(7)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import VERDICTS
    except ImportError:
        return
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in VERDICTS:
            terminalreporter.write_line(line)
