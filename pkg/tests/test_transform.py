import os
import random
from fractions import Fraction

import numpy as np
import pytest

from pcswave.errors import (DomainError, ShapeMismatch, ShapeNotDivisible,
                            WrongProvenance)
from pcswave.filterbank import build_general
from pcswave.kernels import HAS_NUMBA
from pcswave.lattice import make_coset_system
from pcswave.presets import box_bank, deg4_bank
from pcswave.cosetsum import prime_coset_sum
from pcswave.tensor import Tensor
from pcswave.transform import (bank_tables, count_ops, decompose_direct,
                               decompose_fast, pcs_complexity_constant,
                               reconstruct_direct, reconstruct_fast)

from conftest import random_interpolatory_1d, random_lowpass_1d


def rational_tensor(rng, shape):
    size = 1
    for s in shape:
        size *= s
    vals = [Fraction(rng.randint(-40, 40), rng.randint(1, 7)) for _ in range(size)]
    return Tensor(shape, "rational", vals)


def coeffs_equal(a, b):
    return a.coarse == b.coarse and set(a.details) == set(b.details) and \
        all(a.details[k] == b.details[k] for k in a.details)


def test_constant_signal_has_zero_details():
    bank = box_bank(3, 2)
    y = Tensor((9, 9), "rational", [Fraction(7, 3)] * 81)
    c = decompose_fast(y, bank, 1)
    for t in c.details.values():
        assert all(v == 0 for v in t.data)
    assert all(v == Fraction(7, 3) for v in c.coarse.data)
    assert coeffs_equal(c, decompose_direct(y, bank, 1))


def test_impulse_fast_equals_direct():
    for bank in (box_bank(3, 2), deg4_bank(2)):
        y = Tensor.impulse((9, 9), at=(4, 7), mode="rational")
        assert coeffs_equal(decompose_fast(y, bank, 1), decompose_direct(y, bank, 1))


def test_origin_impulse_27x27_deg4():
    bank = deg4_bank(2)
    y = Tensor.impulse((27, 27), mode="rational")
    assert coeffs_equal(decompose_fast(y, bank, 1), decompose_direct(y, bank, 1))


def test_fast_roundtrip_exact_rational(rng):
    bank = box_bank(3, 2)
    y = rational_tensor(rng, (9, 9))
    c = decompose_fast(y, bank, 2)
    assert reconstruct_fast(c, bank) == y


def test_direct_roundtrip_exact_rational(rng):
    for bank in (box_bank(3, 2), deg4_bank(2)):
        y = rational_tensor(rng, (9, 9))
        c = decompose_direct(y, bank, 1)
        assert reconstruct_direct(c, bank) == y


def test_direct_roundtrip_general_provenance(rng):
    # the direct route works for banks without 1-D generators
    sys = make_coset_system(3, 2, "standard")
    g = prime_coset_sum(random_lowpass_1d(rng, 3), 2, sys)
    h = prime_coset_sum(random_interpolatory_1d(rng, 3), 2, sys)
    bank = build_general(g, h, sys)
    y = rational_tensor(rng, (9, 9))
    c = decompose_direct(y, bank, 1)
    assert reconstruct_direct(c, bank) == y
    with pytest.raises(WrongProvenance):
        decompose_fast(y, bank, 1)


def test_cross_route_roundtrips(rng):
    # the two routes compute the same linear maps, so they invert each other
    bank = deg4_bank(2)
    y = rational_tensor(rng, (9, 9))
    c = decompose_fast(y, bank, 1)
    assert reconstruct_direct(c, bank) == y
    assert reconstruct_fast(decompose_direct(y, bank, 1), bank) == y


def test_zero_detail_reconstruction_matches_direct():
    bank = box_bank(3, 2)
    c = decompose_fast(Tensor((9, 9), "rational",
                              [Fraction(1)] * 81), bank, 1)
    for t in c.details.values():
        t.data[:] = [Fraction(0)] * len(t.data)
    assert reconstruct_fast(c, bank) == reconstruct_direct(c, bank)


def test_lowpass_branch_keeps_constants():
    bank = box_bank(3, 2)
    y = Tensor((9, 9), "rational", [Fraction(5)] * 81)
    c = decompose_direct(y, bank, 2)
    assert all(v == 5 for v in c.coarse.data)


def test_1d_and_3d_transforms(rng):
    b1 = box_bank(3, 1)
    y1 = rational_tensor(rng, (27,))
    assert reconstruct_fast(decompose_fast(y1, b1, 2), b1) == y1
    b3 = box_bank(3, 3)
    y3 = rational_tensor(rng, (9, 3, 3))
    c3 = decompose_fast(y3, b3, 1)
    assert coeffs_equal(c3, decompose_direct(y3, b3, 1))
    assert reconstruct_fast(c3, b3) == y3


def test_dyadic_transforms(rng):
    for n, shape in ((1, (16,)), (2, (8, 8)), (3, (4, 4, 4))):
        bank = box_bank(2, n)
        y = rational_tensor(rng, shape)
        c = decompose_fast(y, bank, 2)
        assert coeffs_equal(c, decompose_direct(y, bank, 2))
        assert reconstruct_fast(c, bank) == y


def test_nonsquare_shapes(rng):
    bank = deg4_bank(2)
    y = rational_tensor(rng, (3, 9))
    c = decompose_fast(y, bank, 1)
    assert coeffs_equal(c, decompose_direct(y, bank, 1))
    assert reconstruct_fast(c, bank) == y
    data = np.random.default_rng(8).standard_normal((9, 27))
    r = reconstruct_fast(decompose_fast(Tensor.from_numpy(data), bank, 1), bank)
    assert np.max(np.abs(r.data - data)) <= 1e-12 * np.max(np.abs(data))


def test_p7_bank_roundtrip(rng):
    bank = box_bank(7, 1)
    y = rational_tensor(rng, (49,))
    c = decompose_fast(y, bank, 2)
    assert coeffs_equal(c, decompose_direct(y, bank, 2))
    assert reconstruct_fast(c, bank) == y


def test_float64_roundtrip_error_bound():
    rng = np.random.default_rng(42)
    data = rng.standard_normal((81, 81))
    for bank in (box_bank(3, 2), deg4_bank(2)):
        y = Tensor.from_numpy(data)
        c = decompose_fast(y, bank, 2)
        r = reconstruct_fast(c, bank)
        assert np.max(np.abs(r.data - data)) <= 1e-12 * np.max(np.abs(data))


def test_float64_fast_matches_direct():
    rng = np.random.default_rng(3)
    data = rng.standard_normal((9, 9))
    bank = box_bank(3, 2)
    cf = decompose_fast(Tensor.from_numpy(data), bank, 1)
    cd = decompose_direct(Tensor.from_numpy(data), bank, 1)
    assert cf.coarse.max_abs_diff(cd.coarse) <= 1e-12
    for k, t in cf.details.items():
        assert t.max_abs_diff(cd.details[k]) <= 1e-12


def test_float64_matches_rational_ground_truth():
    rng = np.random.default_rng(11)
    ints = rng.integers(-8, 9, size=(9, 9))
    bank = deg4_bank(2)
    cf = decompose_fast(Tensor.from_numpy(ints.astype(float)), bank, 1)
    cr = decompose_fast(Tensor((9, 9), "rational",
                               [Fraction(int(v)) for v in ints.ravel()]), bank, 1)
    assert cf.coarse.max_abs_diff(cr.coarse) <= 1e-12
    for k, t in cf.details.items():
        assert t.max_abs_diff(cr.details[k]) <= 1e-12


@pytest.mark.skipif(not HAS_NUMBA, reason="numba unavailable")
def test_backends_agree_bitwise(monkeypatch):
    rng = np.random.default_rng(5)
    data = rng.standard_normal((27, 27))
    bank = deg4_bank(2)
    monkeypatch.setenv("PCSWAVE_BACKEND", "numba")
    c1 = decompose_fast(Tensor.from_numpy(data), bank, 2)
    r1 = reconstruct_fast(c1, bank)
    monkeypatch.setenv("PCSWAVE_BACKEND", "numpy")
    c2 = decompose_fast(Tensor.from_numpy(data), bank, 2)
    r2 = reconstruct_fast(c2, bank)
    assert np.array_equal(c1.coarse.data, c2.coarse.data)
    for k in c1.details:
        assert np.array_equal(c1.details[k].data, c2.details[k].data)
    assert np.array_equal(r1.data, r2.data)


@pytest.mark.skipif(not HAS_NUMBA, reason="numba unavailable")
def test_thread_cap_is_deterministic(monkeypatch):
    rng = np.random.default_rng(6)
    data = rng.standard_normal((27, 27))
    bank = box_bank(3, 2)
    monkeypatch.setenv("PCSWAVE_BACKEND", "numba")
    monkeypatch.delenv("PCSWAVE_THREADS", raising=False)
    base = decompose_fast(Tensor.from_numpy(data), bank, 1)
    rbase = reconstruct_fast(base, bank)
    monkeypatch.setenv("PCSWAVE_THREADS", "4")
    threaded = decompose_fast(Tensor.from_numpy(data), bank, 1)
    rthreaded = reconstruct_fast(threaded, bank)
    assert np.array_equal(base.coarse.data, threaded.coarse.data)
    for k in base.details:
        assert np.array_equal(base.details[k].data, threaded.details[k].data)
    assert np.array_equal(rbase.data, rthreaded.data)


def test_shape_validation():
    bank = box_bank(3, 2)
    with pytest.raises(ShapeNotDivisible):
        decompose_fast(Tensor.zeros((10, 9)), bank, 1)
    with pytest.raises(ShapeNotDivisible):
        decompose_fast(Tensor.zeros((9, 9)), bank, 3)
    with pytest.raises(DomainError):
        decompose_fast(Tensor.zeros((9, 9)), bank, 0)


def test_coeffs_bank_consistency(rng):
    bank = box_bank(3, 2)
    y = rational_tensor(rng, (9, 9))
    c = decompose_fast(y, bank, 1)
    other = box_bank(2, 2)
    with pytest.raises(ShapeMismatch):
        reconstruct_fast(c, other)
    c.details.pop(((1, 0), 0))
    with pytest.raises(ShapeMismatch):
        reconstruct_fast(c, bank)


def test_tables_respect_lattice_congruence():
    for bank in (box_bank(3, 2), box_bank(2, 3), deg4_bank(2)):
        for tb in bank_tables(bank):
            p = bank.p
            for off, _ in tb.hi:
                assert len(off) == bank.n
            for sh, _ in tb.lo:
                # shifts were divided by p exactly; rebuild and verify
                assert all(isinstance(x, int) for x in sh)


@pytest.mark.parametrize("p,n,shape", [(2, 2, (8, 8)), (3, 2, (27, 27)),
                                       (3, 3, (9, 9, 9)), (5, 2, (25, 25))])
def test_count_matches_closed_form(p, n, shape):
    oc = count_ops(box_bank(p, n), shape, 1)
    assert oc.multiplicative_ops == oc.predicted


def test_count_deg4_bank():
    oc = count_ops(deg4_bank(2), (27, 27), 1)
    assert oc.multiplicative_ops == oc.predicted
    assert (oc.alpha, oc.beta, oc.alpha_tilde) == (3, 9, 2)
    assert oc.pcs_constant == Fraction(18 * 8 + 4 * 8 + 6, 9)
    assert oc.pcs_constant <= 21


def test_count_levels_additive():
    bank = box_bank(3, 2)
    one = count_ops(bank, (27, 27), 1)
    two = count_ops(bank, (27, 27), 2)
    inner = count_ops(bank, (9, 9), 1)
    assert two.multiplicative_ops == one.multiplicative_ops + inner.multiplicative_ops
    assert two.predicted == one.predicted + inner.predicted


def test_box_bank_constants_bounded():
    for p in (2, 3, 5):
        bank = box_bank(p, 2)
        oc = count_ops(bank, (p * p, p * p), 1)
        assert (oc.alpha, oc.beta, oc.alpha_tilde) == (p, p, p - 1)
        assert oc.pcs_constant <= 4 * p - 1


def test_dyadic_constant_beats_tensor_model():
    # C_PCS = alpha + 2 beta + 2 <= (alpha + beta) n whenever alpha >= 2, n >= 2
    for alpha in range(2, 9):
        for beta in range(1, 9):
            for n in range(2, 6):
                assert alpha + 2 * beta + 2 <= (alpha + beta) * n
    # and the closed-form per-sample constant is below the dyadic bound
    for n in (2, 3):
        bank = box_bank(2, n)
        oc = count_ops(bank, (4,) * n, 1)
        assert oc.pcs_constant <= oc.alpha + 2 * oc.beta + 2
        assert pcs_complexity_constant(oc.alpha_tilde, oc.beta, 2, n) == oc.pcs_constant
