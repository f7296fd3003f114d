import random
from fractions import Fraction

import pytest

from pcswave.filters import Filter1D, filter_1d


def random_lowpass_1d(rng: random.Random, p: int, max_taps: int = 5) -> Filter1D:
    """Random rational lowpass filter: tap sum forced to p."""
    while True:
        positions = rng.sample(range(-6, 7), k=rng.randint(2, max_taps))
        taps = {k: Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for k in positions}
        taps = {k: v for k, v in taps.items() if v}
        if len(taps) < 2:
            continue
        k0 = sorted(taps)[0]
        rest = sum(v for k, v in taps.items() if k != k0)
        taps[k0] = p - rest
        if taps[k0]:
            return filter_1d(p, taps)


def random_interpolatory_1d(rng: random.Random, p: int, max_taps: int = 5) -> Filter1D:
    """Random rational interpolatory lowpass filter: H(0)=1, support off pZ, sum p."""
    while True:
        pool = [k for k in range(-8, 9) if k % p]
        positions = rng.sample(pool, k=rng.randint(1, max_taps))
        taps = {k: Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for k in positions}
        taps = {k: v for k, v in taps.items() if v}
        if not taps:
            continue
        total = sum(taps.values())
        if not total:
            continue
        scale = Fraction(p - 1) / total
        taps = {k: v * scale for k, v in taps.items()}
        taps[0] = Fraction(1)
        return filter_1d(p, taps)


@pytest.fixture
def rng():
    return random.Random(20260809)
