"""Binary formats for tensors (PCST) and multiresolution coefficients (PCSC).

PCST: magic b"PCST", u16 version = 1, u8 scalar code (0 = float64
little-endian), u8 n, then n x u64 shape, then the row-major payload.

PCSC: magic b"PCSC", u16 version = 1, u8 p, u8 n, u8 levels, then n x u64
input shape, then one record per subband. Each record is a u16 level and a
u16 coset index (position in the bank's Gamma ordering; 0 is the coarse
tensor at level 0) followed by a complete PCST block. Records are written
coarse first, then details ordered by (level, coset index), so identical
inputs serialize byte-identically.

All integers are little-endian. Only float64 tensors are serialized; rational
tensors are a verification device, not an interchange format.
"""

from __future__ import annotations

import struct
from typing import Dict, Tuple

import numpy as np

from .errors import DomainError, FormatError, ShapeMismatch
from .filterbank import WaveletFilterBank
from .tensor import FLOAT64, MultiresCoeffs, Tensor

TENSOR_MAGIC = b"PCST"
COEFFS_MAGIC = b"PCSC"
VERSION = 1
SCALAR_FLOAT64 = 0


def _write_tensor(fh, t: Tensor) -> None:
    if t.mode != FLOAT64:
        raise DomainError("only float64 tensors have a binary form")
    fh.write(TENSOR_MAGIC)
    fh.write(struct.pack("<HBB", VERSION, SCALAR_FLOAT64, t.ndim))
    fh.write(struct.pack("<" + "Q" * t.ndim, *t.shape))
    fh.write(np.ascontiguousarray(t.data, dtype="<f8").tobytes())


def _read_exact(fh, count: int) -> bytes:
    buf = fh.read(count)
    if len(buf) != count:
        raise FormatError(f"truncated stream: wanted {count} bytes, got {len(buf)}")
    return buf


def _read_tensor(fh) -> Tensor:
    magic = _read_exact(fh, 4)
    if magic != TENSOR_MAGIC:
        raise FormatError(f"bad tensor magic {magic!r}")
    version, scalar, ndim = struct.unpack("<HBB", _read_exact(fh, 4))
    if version != VERSION:
        raise FormatError(f"unsupported tensor version {version}")
    if scalar != SCALAR_FLOAT64:
        raise FormatError(f"unsupported scalar code {scalar}")
    shape = struct.unpack("<" + "Q" * ndim, _read_exact(fh, 8 * ndim))
    size = 1
    for s in shape:
        size *= s
    raw = _read_exact(fh, 8 * size)
    data = np.frombuffer(raw, dtype="<f8").reshape(shape).copy()
    return Tensor(shape, FLOAT64, data)


def write_tensor(path, t: Tensor) -> None:
    with open(path, "wb") as fh:
        _write_tensor(fh, t)


def read_tensor(path) -> Tensor:
    with open(path, "rb") as fh:
        return _read_tensor(fh)


def write_coeffs(path, c: MultiresCoeffs) -> None:
    if c.mode != FLOAT64:
        raise DomainError("only float64 coefficients have a binary form")
    q = len(c.gamma)
    if len(c.details) != c.levels * (q - 1):
        raise ShapeMismatch(f"expected {c.levels * (q - 1)} detail tensors, "
                            f"have {len(c.details)}")
    shape = c.input_shape()
    nu_index = {nu: i for i, nu in enumerate(c.gamma)}
    with open(path, "wb") as fh:
        fh.write(COEFFS_MAGIC)
        fh.write(struct.pack("<HBBB", VERSION, c.p, c.n, c.levels))
        fh.write(struct.pack("<" + "Q" * c.n, *shape))
        fh.write(struct.pack("<HH", 0, 0))
        _write_tensor(fh, c.coarse)
        records = sorted(((level, nu_index[nu]) for (nu, level) in c.details),
                         key=lambda rc: rc)
        for level, idx in records:
            nu = c.gamma[idx]
            fh.write(struct.pack("<HH", level, idx))
            _write_tensor(fh, c.details[(nu, level)])


def read_coeffs(path, bank: WaveletFilterBank) -> MultiresCoeffs:
    """Load a PCSC file against the bank that will consume it.

    The header carries p, n, levels, and shape; the coset indices refer to
    the bank's Gamma ordering, so the bank (or at least its coset system) is
    required to give the records meaning.
    """
    with open(path, "rb") as fh:
        magic = _read_exact(fh, 4)
        if magic != COEFFS_MAGIC:
            raise FormatError(f"bad coefficient magic {magic!r}")
        version, p, n, levels = struct.unpack("<HBBB", _read_exact(fh, 5))
        if version != VERSION:
            raise FormatError(f"unsupported coefficient version {version}")
        if p != bank.p or n != bank.n:
            raise ShapeMismatch(
                f"file is for p={p}, n={n}; bank has p={bank.p}, n={bank.n}")
        shape = struct.unpack("<" + "Q" * n, _read_exact(fh, 8 * n))
        for axis, s in enumerate(shape):
            if s % bank.p ** levels:
                raise FormatError(f"axis {axis} extent {s} not divisible by p^levels")

        level, idx = struct.unpack("<HH", _read_exact(fh, 4))
        if (level, idx) != (0, 0):
            raise FormatError("first record must be the coarse tensor")
        coarse = _read_tensor(fh)
        want_coarse = tuple(s // bank.p ** levels for s in shape)
        if coarse.shape != want_coarse:
            raise ShapeMismatch(f"coarse shape {coarse.shape}, expected {want_coarse}")

        details: Dict[Tuple[Tuple[int, ...], int], Tensor] = {}
        q = bank.q
        for _ in range(levels * (q - 1)):
            level, idx = struct.unpack("<HH", _read_exact(fh, 4))
            if not (0 <= level < levels) or not (1 <= idx < q):
                raise FormatError(f"record tag (level={level}, index={idx}) out of range")
            nu = bank.sys.gamma[idx]
            t = _read_tensor(fh)
            want = tuple(s // bank.p ** (levels - level) for s in shape)
            if t.shape != want:
                raise ShapeMismatch(
                    f"detail (nu={nu}, level={level}) shape {t.shape}, expected {want}")
            if (nu, level) in details:
                raise FormatError(f"duplicate record (level={level}, index={idx})")
            details[(nu, level)] = t
        if fh.read(1):
            raise FormatError("trailing bytes after the last record")
    return MultiresCoeffs(p=bank.p, n=bank.n, gamma=bank.sys.gamma,
                          levels=levels, coarse=coarse, details=details)
