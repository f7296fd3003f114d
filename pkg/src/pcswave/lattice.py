"""Coset representative systems for Z^n / p Z^n and the index maps they induce.

A :class:`CosetSystem` holds the representative set Gamma of Z^n / p Z^n (with
0 first) and F_p = {0, ..., p-1} for Z / p Z. Frequencies gamma in Gamma* are
never materialized as angles: a frequency is an integer vector g standing for
(2*pi/p) * g, which keeps every mask evaluation inside Q(zeta_p).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Tuple

from .arith import is_prime
from .errors import CompositeDilation, DomainError, InvalidConvention, ZeroResidue

MultiIndex = Tuple[int, ...]

STANDARD = "standard"
CENTERED = "centered"


@dataclass(frozen=True)
class CosetSystem:
    """Immutable representative system for a scalar dilation p on Z^n."""

    p: int
    n: int
    convention: str
    gamma: Tuple[MultiIndex, ...]          # Gamma, gamma[0] == 0
    fp: Tuple[int, ...]                    # F_p, fp[0] == 0
    _index: dict = field(repr=False, compare=False, default_factory=dict)

    @property
    def q(self) -> int:
        return self.p ** self.n

    @property
    def gamma_prime(self) -> Tuple[MultiIndex, ...]:
        return self.gamma[1:]

    @property
    def zero(self) -> MultiIndex:
        return self.gamma[0]

    def rep(self, v) -> MultiIndex:
        """Representative in Gamma of the residue class of v."""
        return self.gamma[self._index[tuple(x % self.p for x in v)]]

    def index_of(self, v) -> int:
        """Position in the Gamma ordering of v's residue class."""
        return self._index[tuple(x % self.p for x in v)]


def _center(r: int, p: int) -> int:
    return r if r <= (p - 1) // 2 else r - p


def make_coset_system(p: int, n: int, convention: str = STANDARD, *,
                      allow_composite: bool = False) -> CosetSystem:
    """Build the coset system for dilation p * I_n.

    Gamma is ordered lexicographically by standard residue vector, so the zero
    class always comes first. ``allow_composite`` skips the primality check;
    it exists only so diagnostics can demonstrate how the p^(n-1) count fails
    for composite moduli, and none of the constructions accept such a system.
    """
    if n < 1:
        raise DomainError(f"dimension must be >= 1, got {n}")
    if not allow_composite and not is_prime(p):
        raise CompositeDilation(f"dilation must be prime, got {p}")
    if convention not in (STANDARD, CENTERED):
        raise InvalidConvention(f"unknown convention {convention!r}")
    if convention == CENTERED and p % 2 == 0:
        raise InvalidConvention("centered representatives need an odd p")

    residues = list(itertools.product(range(p), repeat=n))
    if convention == STANDARD:
        gamma = tuple(residues)
    else:
        gamma = tuple(tuple(_center(r, p) for r in res) for res in residues)
    index = {res: i for i, res in enumerate(residues)}
    if len(index) != p ** n:
        raise DomainError("representative set does not cover Z^n / p Z^n")
    return CosetSystem(p=p, n=n, convention=convention, gamma=gamma,
                       fp=tuple(range(p)), _index=index)


def mult_inverse(l: int, p: int) -> int:
    """rho(l): the inverse of l modulo p, returned in {1, ..., p-1}."""
    if l % p == 0:
        raise ZeroResidue(f"{l} has no inverse modulo {p}")
    return pow(l, -1, p)


def eta(sys: CosetSystem, l: int, nu: MultiIndex) -> MultiIndex:
    """The element of Gamma' congruent to rho(l) * nu modulo p, componentwise."""
    if l not in sys.fp or l == 0:
        raise DomainError(f"l={l} is not in F_p' for p={sys.p}")
    nu = tuple(nu)
    if nu not in sys.gamma or nu == sys.zero:
        raise DomainError(f"nu={nu} is not in Gamma'")
    r = mult_inverse(l, sys.p)
    return sys.rep(r * x for x in nu)


def coset_zero_count(sys: CosetSystem, g) -> int:
    """#{nu in Gamma : g . nu == 0 (mod p)}, by brute-force enumeration.

    g is an integer vector standing for the frequency (2*pi/p) * g; it must be
    nonzero modulo p in at least one coordinate.
    """
    g = tuple(g)
    if len(g) != sys.n:
        raise DomainError(f"g has length {len(g)}, expected {sys.n}")
    if all(x % sys.p == 0 for x in g):
        raise DomainError("g must be nonzero modulo p")
    p = sys.p
    return sum(1 for nu in sys.gamma
               if sum(a * b for a, b in zip(g, nu)) % p == 0)
