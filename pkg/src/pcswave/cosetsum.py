"""The prime coset sum: 1-D lowpass filters lifted to n-D non-separable ones.

The n-D filter h built from a 1-D lowpass filter H with prime dilation p is

    h(0) = (p - p^n + (p^n - 1) H(0)) / (p - 1)
    h(k) = (1/(p-1)) * sum of H(l) over all l != 0 with k = l * nu, nu in Gamma'

for k != 0. The l-sum is never materialized as a set: iterating over pairs
(nu, l) in Gamma' x (supp H \\ 0) and accumulating at k = l * nu reproduces it
exactly, because for a fixed l there is at most one nu with k = l * nu. Taps
that cancel to zero are dropped.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Tuple

from .arith import Cyclotomic
from .errors import DimensionMismatch, NotLowpass
from .filters import Filter1D, FilterND, filter_nd
from .lattice import CosetSystem

MultiIndex = Tuple[int, ...]


def _require_compatible(H: Filter1D, n: int, sys: CosetSystem) -> None:
    if sys.p != H.p:
        raise DimensionMismatch(f"filter dilation {H.p} != coset system dilation {sys.p}")
    if sys.n != n:
        raise DimensionMismatch(f"requested dimension {n} != coset system dimension {sys.n}")
    if H.tap_sum != H.p:
        raise NotLowpass(f"1-D filter tap sum is {H.tap_sum}, lowpass needs {H.p}")


def prime_coset_sum(H: Filter1D, n: int, sys: CosetSystem) -> FilterND:
    """Lift the 1-D lowpass filter H to an n-D lowpass filter with dilation p*I_n."""
    _require_compatible(H, n, sys)
    p = sys.p
    inv = Fraction(1, p - 1)
    taps: Dict[MultiIndex, Fraction] = {}
    h0 = inv * (p - p ** n + (p ** n - 1) * H.taps.get(0, Fraction(0)))
    if h0:
        taps[(0,) * n] = h0
    for nu in sys.gamma_prime:
        for l, v in H.taps.items():
            if l == 0:
                continue
            k = tuple(l * x for x in nu)
            taps[k] = taps.get(k, Fraction(0)) + inv * v
    return filter_nd(p, n, taps)


def coset_sum_mask_eval(H: Filter1D, n: int, sys: CosetSystem, g) -> Cyclotomic:
    """Evaluate the lifted mask at (2*pi/p) * g straight from the 1-D mask.

    This is the mask-domain route; it must agree with
    ``mask_eval(prime_coset_sum(H, n, sys), g)`` for every g, which the tests
    check pointwise.
    """
    _require_compatible(H, n, sys)
    g = tuple(g)
    if len(g) != n:
        raise DimensionMismatch(f"g has length {len(g)}, expected {n}")
    p = sys.p
    acc = Cyclotomic.from_rational(p, 1 - p ** (n - 1))
    for nu in sys.gamma_prime:
        m = sum(a * b for a, b in zip(g, nu))
        coords = [Fraction(0)] * p
        for k, v in H.taps.items():
            coords[(k * m) % p] += v
        acc = acc + Cyclotomic(p, coords) * Fraction(1, p)
    return acc * Fraction(1, (p - 1) * p ** (n - 1))
