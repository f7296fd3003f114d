"""float64 execution backends for the fast transform inner loops.

Two interchangeable implementations of the per-level update steps: numba-jitted
scalar loops (the default whenever numba imports) and a vectorized pure-numpy
fallback built on roll-and-decimate. Selection:

    PCSWAVE_BACKEND=numba|numpy   force a backend (default: numba if available)
    PCSWAVE_THREADS=k             run per-coset jitted loops on k threads

The jitted kernels release the GIL and write disjoint outputs, so results are
identical for any worker count. Both backends accumulate tap sums in the same
order and apply the normalization once per output sample, so they agree with
each other to the last bit on the same input.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import DomainError

try:
    from numba import njit
    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is an install-time choice
    njit = None
    HAS_NUMBA = False

NUMBA = "numba"
NUMPY = "numpy"


def default_backend() -> str:
    env = os.environ.get("PCSWAVE_BACKEND", "").strip()
    if env:
        if env not in (NUMBA, NUMPY):
            raise DomainError(f"PCSWAVE_BACKEND must be 'numba' or 'numpy', got {env!r}")
        if env == NUMBA and not HAS_NUMBA:
            raise DomainError("PCSWAVE_BACKEND=numba but numba is not importable")
        return env
    return NUMBA if HAS_NUMBA else NUMPY


def worker_count() -> int:
    env = os.environ.get("PCSWAVE_THREADS", "").strip()
    if not env:
        return 1
    try:
        return max(1, int(env))
    except ValueError as exc:
        raise DomainError(f"PCSWAVE_THREADS must be an integer, got {env!r}") from exc


if HAS_NUMBA:

    @njit(cache=True, nogil=True)
    def _detail_kernel(yflat, shape, strides, oshape, ostrides, p, nu, offs, hvals, inv):
        # w(k) = y(pk+nu) - inv * sum_t h_t * y(pk+nu-off_t), indices periodic
        ndim = shape.shape[0]
        osize = 1
        for a in range(ndim):
            osize *= oshape[a]
        out = np.empty(osize, np.float64)
        kc = np.empty(ndim, np.int64)
        ntaps = hvals.shape[0]
        for fi in range(osize):
            t = fi
            for a in range(ndim - 1, -1, -1):
                kc[a] = t % oshape[a]
                t //= oshape[a]
            base = 0
            for a in range(ndim):
                base += ((p * kc[a] + nu[a]) % shape[a]) * strides[a]
            s = 0.0
            for ti in range(ntaps):
                idx = 0
                for a in range(ndim):
                    idx += ((p * kc[a] + nu[a] - offs[ti, a]) % shape[a]) * strides[a]
                s += hvals[ti] * yflat[idx]
            out[fi] = yflat[base] - inv * s
        return out

    @njit(cache=True, nogil=True)
    def _coarse_kernel(yflat, shape, strides, oshape, ostrides, p, wstack, shifts, gvals, inv):
        # y0(k) = y(pk) + inv * sum_nu sum_t g_t * w_nu(k - d_{nu,t})
        ndim = shape.shape[0]
        osize = 1
        for a in range(ndim):
            osize *= oshape[a]
        out = np.empty(osize, np.float64)
        kc = np.empty(ndim, np.int64)
        nnu = wstack.shape[0]
        ntaps = gvals.shape[0]
        for fi in range(osize):
            t = fi
            for a in range(ndim - 1, -1, -1):
                kc[a] = t % oshape[a]
                t //= oshape[a]
            base = 0
            for a in range(ndim):
                base += ((p * kc[a]) % shape[a]) * strides[a]
            s = 0.0
            for vi in range(nnu):
                for ti in range(ntaps):
                    idx = 0
                    for a in range(ndim):
                        idx += ((kc[a] - shifts[vi, ti, a]) % oshape[a]) * ostrides[a]
                    s += gvals[ti] * wstack[vi, idx]
            out[fi] = yflat[base] + inv * s
        return out

    @njit(cache=True, nogil=True)
    def _expand_zero_kernel(y0, shape, strides, oshape, ostrides, p, wstack, shifts, gvals, inv, yflat):
        # y(pk) = y0(k) - inv * (same correction as the coarse kernel)
        ndim = shape.shape[0]
        osize = y0.shape[0]
        kc = np.empty(ndim, np.int64)
        nnu = wstack.shape[0]
        ntaps = gvals.shape[0]
        for fi in range(osize):
            t = fi
            for a in range(ndim - 1, -1, -1):
                kc[a] = t % oshape[a]
                t //= oshape[a]
            base = 0
            for a in range(ndim):
                base += ((p * kc[a]) % shape[a]) * strides[a]
            s = 0.0
            for vi in range(nnu):
                for ti in range(ntaps):
                    idx = 0
                    for a in range(ndim):
                        idx += ((kc[a] - shifts[vi, ti, a]) % oshape[a]) * ostrides[a]
                    s += gvals[ti] * wstack[vi, idx]
            yflat[base] = y0[fi] - inv * s

    @njit(cache=True, nogil=True)
    def _expand_coset_kernel(yflat, shape, strides, oshape, ostrides, p, nu, offs, hvals, inv, w):
        # y(pk+nu) = w(k) + inv * sum_t h_t * y(pk+nu-off_t); the gathered
        # entries all sit on the zero coset, which is final before this runs
        ndim = shape.shape[0]
        osize = w.shape[0]
        kc = np.empty(ndim, np.int64)
        ntaps = hvals.shape[0]
        for fi in range(osize):
            t = fi
            for a in range(ndim - 1, -1, -1):
                kc[a] = t % oshape[a]
                t //= oshape[a]
            s = 0.0
            for ti in range(ntaps):
                idx = 0
                for a in range(ndim):
                    idx += ((p * kc[a] + nu[a] - offs[ti, a]) % shape[a]) * strides[a]
                s += hvals[ti] * yflat[idx]
            tgt = 0
            for a in range(ndim):
                tgt += ((p * kc[a] + nu[a]) % shape[a]) * strides[a]
            yflat[tgt] = w[fi] + inv * s


def _roll_decimate(y: np.ndarray, p: int, shift) -> np.ndarray:
    """y[(p*k + shift) % shape] for k over the decimated grid."""
    r = np.roll(y, tuple(int(-s) for s in shift), axis=tuple(range(y.ndim)))
    return r[(slice(None, None, p),) * y.ndim]


def _np_detail(y: np.ndarray, p: int, nu, offs, hvals, inv: float) -> np.ndarray:
    acc = None
    for off, hv in zip(offs, hvals):
        g = _roll_decimate(y, p, [a - b for a, b in zip(nu, off)])
        acc = hv * g if acc is None else acc + hv * g
    base = _roll_decimate(y, p, nu)
    if acc is None:
        return base.copy()
    return base - inv * acc


def _np_correction(wlist, shifts, gvals) -> np.ndarray:
    acc = np.zeros_like(wlist[0])
    axes = tuple(range(wlist[0].ndim))
    for vi, w in enumerate(wlist):
        for sh, gv in zip(shifts[vi], gvals):
            acc = acc + gv * np.roll(w, tuple(int(s) for s in sh), axis=axes)
    return acc


class _NuTapsF64:
    """Per-coset tap tables in array form, shared by both backends."""

    __slots__ = ("nu", "offs", "hvals")

    def __init__(self, nu, offs, hvals):
        self.nu = np.asarray(nu, dtype=np.int64)
        self.offs = np.asarray(offs, dtype=np.int64).reshape(len(hvals), len(nu))
        self.hvals = np.asarray(hvals, dtype=np.float64)


class LevelKernels:
    """Backend dispatcher for one bank's float64 per-level steps."""

    def __init__(self, p, n, nu_tables, shifts, gvals, inv_pm1, inv_corr, backend=None):
        self.p = int(p)
        self.n = int(n)
        self.nus = [_NuTapsF64(nu, offs, hvals) for nu, offs, hvals in nu_tables]
        nnu = len(self.nus)
        ntaps = len(gvals)
        self.shifts = np.asarray(shifts, dtype=np.int64).reshape(nnu, ntaps, n)
        self.gvals = np.asarray(gvals, dtype=np.float64)
        self.inv_pm1 = float(inv_pm1)
        self.inv_corr = float(inv_corr)
        self.backend = backend or default_backend()

    def _geom(self, shape):
        shape = np.asarray(shape, dtype=np.int64)
        oshape = shape // self.p
        strides = np.ones(len(shape), dtype=np.int64)
        ostrides = np.ones(len(shape), dtype=np.int64)
        for a in range(len(shape) - 2, -1, -1):
            strides[a] = strides[a + 1] * shape[a + 1]
            ostrides[a] = ostrides[a + 1] * oshape[a + 1]
        return shape, oshape, strides, ostrides

    def decompose_level(self, y: np.ndarray):
        """One level down: returns (coarse, [detail per nu]) as nd arrays."""
        p = self.p
        if self.backend == NUMPY:
            details = [_np_detail(y, p, t.nu, t.offs, t.hvals, self.inv_pm1)
                       for t in self.nus]
            corr = _np_correction(details, self.shifts, self.gvals)
            coarse = _roll_decimate(y, p, (0,) * y.ndim) + self.inv_corr * corr
            return coarse, details

        shape, oshape, strides, ostrides = self._geom(y.shape)
        yflat = np.ascontiguousarray(y).ravel()

        def run(t):
            return _detail_kernel(yflat, shape, strides, oshape, ostrides,
                                  p, t.nu, t.offs, t.hvals, self.inv_pm1)

        workers = worker_count()
        if workers > 1 and len(self.nus) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                flat_details = list(pool.map(run, self.nus))
        else:
            flat_details = [run(t) for t in self.nus]
        wstack = np.stack(flat_details)
        coarse = _coarse_kernel(yflat, shape, strides, oshape, ostrides, p,
                                wstack, self.shifts, self.gvals, self.inv_corr)
        oshape_t = tuple(int(s) for s in oshape)
        return coarse.reshape(oshape_t), [d.reshape(oshape_t) for d in flat_details]

    def reconstruct_level(self, coarse: np.ndarray, details):
        """One level up: inverse of decompose_level."""
        p = self.p
        shape_t = tuple(s * p for s in coarse.shape)
        if self.backend == NUMPY:
            out = np.empty(shape_t, dtype=np.float64)
            corr = _np_correction(details, self.shifts, self.gvals)
            out[(slice(None, None, p),) * len(shape_t)] = coarse - self.inv_corr * corr
            axes = tuple(range(len(shape_t)))
            for t, w in zip(self.nus, details):
                acc = None
                for off, hv in zip(t.offs, t.hvals):
                    g = _roll_decimate(out, p, [a - b for a, b in zip(t.nu, off)])
                    acc = hv * g if acc is None else acc + hv * g
                vals = w + self.inv_pm1 * acc if acc is not None else w.copy()
                r = np.roll(out, tuple(int(-x) for x in t.nu), axis=axes)
                r[(slice(None, None, p),) * len(shape_t)] = vals
                out = np.roll(r, tuple(int(x) for x in t.nu), axis=axes)
            return out

        shape, oshape, strides, ostrides = self._geom(shape_t)
        yflat = np.empty(int(np.prod(shape)), dtype=np.float64)
        wstack = np.stack([np.ascontiguousarray(w).ravel() for w in details])
        _expand_zero_kernel(np.ascontiguousarray(coarse).ravel(), shape, strides,
                            oshape, ostrides, p, wstack, self.shifts, self.gvals,
                            self.inv_corr, yflat)

        def run(pair):
            t, w = pair
            _expand_coset_kernel(yflat, shape, strides, oshape, ostrides, p,
                                 t.nu, t.offs, t.hvals, self.inv_pm1, w)

        pairs = list(zip(self.nus, wstack))
        workers = worker_count()
        if workers > 1 and len(pairs) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                list(pool.map(run, pairs))
        else:
            for pair in pairs:
                run(pair)
        return yflat.reshape(shape_t)
