"""Stock 1-D generator filters and the banks built from them.

These are the small filters the documentation, fixtures, and test corpus lean
on: box (Haar-type) lowpass filters for any prime dilation, and a dilation-3
interpolatory filter with fourth-order accuracy whose lifted bank keeps
5-tap highpass filters.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError
from .filterbank import WaveletFilterBank, build_pcs_bank
from .filters import Filter1D, filter_1d
from .lattice import CENTERED, STANDARD


def box_filter_1d(p: int, centered: bool = True) -> Filter1D:
    """All-ones lowpass filter with dilation p (the Haar-type generator).

    Centered taps sit on -(p-1)/2 .. (p-1)/2 (odd p only); non-centered taps
    on 0 .. p-1. Either way the filter is interpolatory and lowpass.
    """
    if centered:
        if p % 2 == 0:
            raise DomainError("centered box filter needs an odd p")
        half = (p - 1) // 2
        return filter_1d(p, {k: 1 for k in range(-half, half + 1)})
    return filter_1d(p, {k: 1 for k in range(p)})


def interp_deg4_filter_1d() -> Filter1D:
    """Interpolatory dilation-3 lowpass filter with accuracy (and flatness) 4."""
    c = Fraction(1, 81)
    return filter_1d(3, {
        -5: -4 * c, -4: -5 * c, -2: 30 * c, -1: 60 * c,
        0: 1,
        1: 60 * c, 2: 30 * c, 4: -5 * c, 5: -4 * c,
    })


def box_bank(p: int, n: int) -> WaveletFilterBank:
    """Bank generated by the box filter on both sides (centered when p is odd)."""
    centered = p % 2 == 1
    H = box_filter_1d(p, centered=centered)
    return build_pcs_bank(H, H, n, CENTERED if centered else STANDARD)


def deg4_bank(n: int = 2) -> WaveletFilterBank:
    """Bank pairing the centered box filter with the accuracy-4 interpolatory one."""
    return build_pcs_bank(box_filter_1d(3), interp_deg4_filter_1d(), n, CENTERED)
