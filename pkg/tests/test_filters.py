from fractions import Fraction

import pytest

from pcswave.arith import Cyclotomic
from pcswave.cosetsum import prime_coset_sum
from pcswave.errors import DimensionMismatch, FormatError
from pcswave.filters import (diagnostics, filter_1d, filter_from_json,
                             filter_nd, filter_to_json, is_biorthogonal,
                             is_interpolatory, mask_eval, to_1d)
from pcswave.lattice import make_coset_system
from pcswave.presets import box_filter_1d, interp_deg4_filter_1d

from conftest import random_interpolatory_1d, random_lowpass_1d


def box2d_centered():
    sys = make_coset_system(3, 2, "centered")
    return prime_coset_sum(box_filter_1d(3), 2, sys)


def test_mask_eval_at_zero_is_one_for_box():
    h = box2d_centered()
    assert mask_eval(h, (0, 0)) == 1


def test_mask_eval_haar_zero_at_nonzero_frequency():
    H = box_filter_1d(3).to_nd()
    assert mask_eval(H, (1,)).is_zero()
    assert mask_eval(H, (2,)).is_zero()


def test_mask_eval_deg4_zero_at_nonzero_frequency():
    U = interp_deg4_filter_1d().to_nd()
    assert mask_eval(U, (1,)).is_zero()


def test_mask_eval_matches_tap_sum_at_zero():
    f = filter_nd(3, 2, {(0, 0): Fraction(5, 2), (1, 2): Fraction(7, 3)})
    assert mask_eval(f, (0, 0)) == Cyclotomic.from_rational(3, f.tap_sum / 9)


def test_interpolatory_box2d():
    assert is_interpolatory(box2d_centered())


def test_interpolatory_lifted_deg4():
    sys = make_coset_system(3, 2, "centered")
    h = prime_coset_sum(interp_deg4_filter_1d(), 2, sys)
    assert is_interpolatory(h)


def test_interpolatory_fails_for_shifted_box():
    # all-ones on {0,1,2}^2 shifted by (1,0): tap at (3,0) lands on 3Z^2 \ 0
    shifted = filter_nd(3, 2, {(k1 + 1, k2): 1 for k1 in range(3) for k2 in range(3)})
    assert shifted.taps[(3, 0)] == 1
    assert not is_interpolatory(shifted)


def test_biorthogonality_centered_vs_standard_box():
    cen = box2d_centered()
    assert is_biorthogonal(cen, cen)
    sys = make_coset_system(3, 2, "standard")
    std = prime_coset_sum(box_filter_1d(3, centered=False), 2, sys)
    assert not is_biorthogonal(std, std)


def _biorthogonal_oracle(h, g):
    """Direct summation over an explicit l-box, independent of the library route."""
    p, n = h.p, h.dim
    lo = [min(k[a] for k in list(h.taps) + list(g.taps)) for a in range(n)]
    hi = [max(k[a] for k in list(h.taps) + list(g.taps)) for a in range(n)]
    import itertools
    rngs = [range((lo[a] - hi[a]) // p - 1, (hi[a] - lo[a]) // p + 2) for a in range(n)]
    for l in itertools.product(*rngs):
        s = sum((v * g.taps.get(tuple(k[a] + p * l[a] for a in range(n)), Fraction(0))
                 for k, v in h.taps.items()), Fraction(0))
        if l == (0,) * n:
            if s != p ** n:
                return False
        elif s:
            return False
    return True


def test_biorthogonality_against_bruteforce_oracle(rng):
    sys = make_coset_system(3, 2, "centered")
    for _ in range(10):
        h = prime_coset_sum(random_interpolatory_1d(rng, 3), 2, sys)
        g = prime_coset_sum(random_lowpass_1d(rng, 3), 2, sys)
        assert is_biorthogonal(h, g) == _biorthogonal_oracle(h, g)
        assert is_biorthogonal(h, g) == is_biorthogonal(g, h)


def test_biorthogonality_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        is_biorthogonal(box2d_centered(), box_filter_1d(3).to_nd())


def test_diagnostics_box_1d():
    d = diagnostics(box_filter_1d(3).to_nd())
    assert d.accuracy == 1
    assert d.is_lowpass
    assert d.is_interpolatory
    assert d.vanishing_moments == 0
    assert d.flatness == 2
    assert d.support_size == 3


def test_diagnostics_deg4():
    d = diagnostics(interp_deg4_filter_1d().to_nd(), max_order=8)
    assert d.accuracy == 4
    assert d.flatness == 4
    assert d.is_lowpass and d.is_interpolatory


def test_diagnostics_wavelet_tap_pair():
    # +1 at nu, -1 at 0: tap sum 0, so one vanishing moment at least; exactly 1
    f = filter_nd(3, 2, {(1, 1): 1, (0, 0): -1})
    d = diagnostics(f)
    assert not d.is_lowpass
    assert d.vanishing_moments == 1
    assert d.flatness == 0


def test_wavelet_mask_criterion(rng):
    for _ in range(20):
        f = random_lowpass_1d(rng, 3).to_nd()
        assert diagnostics(f, max_order=3).vanishing_moments == 0
        taps = dict(f.taps)
        k0 = sorted(taps)[0]
        taps[k0] = taps[k0] - f.tap_sum          # force the sum to zero
        g = filter_nd(3, 1, taps)
        if g.taps:
            assert diagnostics(g, max_order=3).vanishing_moments >= 1


def test_interpolatory_flatness_dominates_accuracy(rng):
    # interpolatory masks satisfy 1 - R(w) = sum of R(w + gamma) over the
    # nonzero coset shifts, so flatness >= accuracy always; for p = 2 the sum
    # has a single term and the two orders coincide exactly
    for _ in range(15):
        f = random_interpolatory_1d(rng, 3).to_nd()
        d = diagnostics(f, max_order=6)
        assert d.flatness >= d.accuracy
    for _ in range(15):
        f = random_interpolatory_1d(rng, 2).to_nd()
        d = diagnostics(f, max_order=6)
        assert d.accuracy == d.flatness


def test_centered_box_p3_orders():
    # the canonical case where flatness strictly exceeds accuracy
    d = diagnostics(box_filter_1d(3).to_nd())
    assert (d.accuracy, d.flatness) == (1, 2)


def test_max_order_saturation():
    # the zero-sum filter with all moments zero up to the bound reports the bound
    d = diagnostics(box_filter_1d(3).to_nd(), max_order=1)
    assert d.accuracy == 1
    assert d.max_order_searched == 1


def test_filter_json_roundtrip():
    f = interp_deg4_filter_1d().to_nd()
    doc = filter_to_json(f)
    assert doc["taps"][0]["v"] == "-4/81"
    back = filter_from_json(doc)
    assert back == f
    assert to_1d(back).taps == interp_deg4_filter_1d().taps


def test_filter_json_rejects_zero_tap():
    doc = {"p": 3, "dim": 1, "taps": [{"k": [0], "v": "0"}]}
    with pytest.raises(FormatError):
        filter_from_json(doc)


def test_filter_json_rejects_bad_entries():
    with pytest.raises(FormatError):
        filter_from_json({"p": 3, "dim": 1, "taps": [{"k": [0, 1], "v": "1"}]})
    with pytest.raises(FormatError):
        filter_from_json({"p": 3, "dim": 1, "taps": [{"k": [0], "v": "a"}]})
    with pytest.raises(FormatError):
        filter_from_json({"p": 3, "taps": []})
