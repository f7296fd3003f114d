import numpy as np
import pytest

from pcswave.dataio import read_coeffs, read_tensor, write_coeffs, write_tensor
from pcswave.errors import DomainError, FormatError, ShapeMismatch
from pcswave.presets import box_bank
from pcswave.tensor import Tensor
from pcswave.transform import decompose_fast, reconstruct_fast


def test_tensor_roundtrip(tmp_path):
    rng = np.random.default_rng(1)
    t = Tensor.from_numpy(rng.standard_normal((6, 4, 2)))
    path = tmp_path / "t.pcst"
    write_tensor(path, t)
    back = read_tensor(path)
    assert back.shape == (6, 4, 2)
    assert np.array_equal(back.data, t.data)


def test_tensor_header_layout(tmp_path):
    t = Tensor.from_numpy(np.arange(6.0).reshape(2, 3))
    path = tmp_path / "t.pcst"
    write_tensor(path, t)
    raw = path.read_bytes()
    assert raw[:4] == b"PCST"
    assert raw[4:6] == (1).to_bytes(2, "little")      # version
    assert raw[6] == 0                                 # float64 scalar code
    assert raw[7] == 2                                 # ndim
    assert int.from_bytes(raw[8:16], "little") == 2
    assert int.from_bytes(raw[16:24], "little") == 3
    assert len(raw) == 24 + 6 * 8


def test_tensor_bad_magic(tmp_path):
    path = tmp_path / "bad.pcst"
    path.write_bytes(b"NOPE" + bytes(20))
    with pytest.raises(FormatError):
        read_tensor(path)


def test_tensor_truncated(tmp_path):
    t = Tensor.from_numpy(np.zeros((3, 3)))
    path = tmp_path / "t.pcst"
    write_tensor(path, t)
    path.write_bytes(path.read_bytes()[:-5])
    with pytest.raises(FormatError):
        read_tensor(path)


def test_rational_tensor_not_serializable(tmp_path):
    with pytest.raises(DomainError):
        write_tensor(tmp_path / "r.pcst", Tensor.zeros((3,), "rational"))


def test_coeffs_roundtrip(tmp_path):
    bank = box_bank(3, 2)
    rng = np.random.default_rng(2)
    y = Tensor.from_numpy(rng.standard_normal((27, 27)))
    c = decompose_fast(y, bank, 2)
    path = tmp_path / "c.pcsc"
    write_coeffs(path, c)
    back = read_coeffs(path, bank)
    assert back.levels == 2
    assert np.array_equal(back.coarse.data, c.coarse.data)
    assert set(back.details) == set(c.details)
    for k in c.details:
        assert np.array_equal(back.details[k].data, c.details[k].data)
    r = reconstruct_fast(back, bank)
    assert np.max(np.abs(r.data - y.data)) <= 1e-12 * np.max(np.abs(y.data))


def test_coeffs_deterministic_bytes(tmp_path):
    bank = box_bank(3, 2)
    y = Tensor.from_numpy(np.random.default_rng(3).standard_normal((9, 9)))
    c = decompose_fast(y, bank, 1)
    p1, p2 = tmp_path / "a.pcsc", tmp_path / "b.pcsc"
    write_coeffs(p1, c)
    write_coeffs(p2, decompose_fast(y, bank, 1))
    assert p1.read_bytes() == p2.read_bytes()


def test_coeffs_wrong_bank(tmp_path):
    bank = box_bank(3, 2)
    y = Tensor.from_numpy(np.zeros((9, 9)))
    path = tmp_path / "c.pcsc"
    write_coeffs(path, decompose_fast(y, bank, 1))
    with pytest.raises(ShapeMismatch):
        read_coeffs(path, box_bank(2, 2))


def test_coeffs_trailing_garbage(tmp_path):
    bank = box_bank(3, 2)
    path = tmp_path / "c.pcsc"
    write_coeffs(path, decompose_fast(Tensor.from_numpy(np.zeros((9, 9))), bank, 1))
    path.write_bytes(path.read_bytes() + b"x")
    with pytest.raises(FormatError):
        read_coeffs(path, bank)
