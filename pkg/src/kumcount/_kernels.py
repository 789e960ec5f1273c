"""Batch integer kernels for grid sweeps.

Each kernel has a numba ``@njit`` implementation and a pure-numpy one. The
numba path is used when numba imports and ``KUMCOUNT_DISABLE_NUMBA`` is unset
(or ``0``). Both work in int64; inputs that could overflow are routed to an
exact Python-int loop instead.
"""
from __future__ import annotations

import os
from math import gcd

import numpy as np

ENV_FLAG = "KUMCOUNT_DISABLE_NUMBA"
_INT64_SAFE = 2**62

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and os.environ.get(ENV_FLAG, "0") in ("", "0")


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


# --- isotropic residues ----------------------------------------------------
#
# For each triple (n, d, t) collect every c in [0, t) with gcd(c, t) = 1 and
# 2d + c^2 (2n+2) = 0 mod 2t^2.  Output is CSR: residues[offsets[i]:offsets[i+1]].


def _isotropic_csr_python(ns, ds, ts):
    offsets = [0]
    residues = []
    for n, d, t in zip(ns, ds, ts):
        n, d, t = int(n), int(d), int(t)
        mod = 2 * t * t
        for c in range(t):
            if gcd(c, t) == 1 and (2 * d + c * c * (2 * n + 2)) % mod == 0:
                residues.append(c)
        offsets.append(len(residues))
    return np.asarray(offsets, dtype=np.int64), np.asarray(residues, dtype=np.int64)


def _isotropic_csr_numpy(ns, ds, ts):
    offsets = np.zeros(len(ts) + 1, dtype=np.int64)
    chunks = []
    for i in range(len(ts)):
        n, d, t = ns[i], ds[i], ts[i]
        c = np.arange(t, dtype=np.int64)
        ok = (np.gcd(c, t) == 1) & ((2 * d + c * c * (2 * n + 2)) % (2 * t * t) == 0)
        hits = c[ok]
        chunks.append(hits)
        offsets[i + 1] = offsets[i] + hits.size
    residues = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)
    return offsets, residues.astype(np.int64)


if HAVE_NUMBA:

    @numba.njit(cache=True)
    def _gcd_nb(a, b):
        while b:
            a, b = b, a % b
        return a

    @numba.njit(cache=True)
    def _isotropic_csr_numba(ns, ds, ts):
        m = ts.shape[0]
        offsets = np.zeros(m + 1, dtype=np.int64)
        for i in range(m):
            n, d, t = ns[i], ds[i], ts[i]
            mod = 2 * t * t
            k = 0
            for c in range(t):
                if _gcd_nb(c, t) == 1 and (2 * d + c * c * (2 * n + 2)) % mod == 0:
                    k += 1
            offsets[i + 1] = offsets[i] + k
        residues = np.empty(offsets[m], dtype=np.int64)
        for i in range(m):
            n, d, t = ns[i], ds[i], ts[i]
            mod = 2 * t * t
            j = offsets[i]
            for c in range(t):
                if _gcd_nb(c, t) == 1 and (2 * d + c * c * (2 * n + 2)) % mod == 0:
                    residues[j] = c
                    j += 1
        return offsets, residues

else:  # pragma: no cover
    _isotropic_csr_numba = None


def _int64_or_none(values, shape_tail=None):
    """int64 array of ``values`` when every entry fits, else None."""
    try:
        arr = np.asarray(values, dtype=np.int64)
    except (OverflowError, TypeError):
        return None
    return arr if shape_tail is None else arr.reshape((-1,) + shape_tail)


def isotropic_residues_batch(triples, use_numba=None):
    """CSR ``(offsets, residues)`` of isotropic unit residues per ``(n, d, t)``."""
    if len(triples) == 0:
        return np.zeros(1, dtype=np.int64), np.zeros(0, dtype=np.int64)
    arr = _int64_or_none(triples, (3,))
    if arr is not None:
        ns, ds, ts = arr[:, 0], arr[:, 1], arr[:, 2]
        # float estimate with a wide margin; only the bound matters
        worst = np.max(ts.astype(float) ** 2 * (2.0 * ns + 2.0) + 2.0 * ds)
    if arr is None or worst >= _INT64_SAFE / 4:
        ns, ds, ts = zip(*triples)
        return _isotropic_csr_python(ns, ds, ts)
    if use_numba is None:
        use_numba = USE_NUMBA
    if use_numba:
        return _isotropic_csr_numba(ns, ds, ts)
    return _isotropic_csr_numpy(ns, ds, ts)


# --- divisibility of many vectors of Lambda_n ---------------------------------


def _divisibility_numpy(vectors, gram):
    pairings = np.abs(vectors @ gram)
    return np.gcd.reduce(pairings, axis=1)


if HAVE_NUMBA:

    @numba.njit(cache=True)
    def _divisibility_numba(vectors, gram):
        m, r = vectors.shape
        out = np.empty(m, dtype=np.int64)
        for i in range(m):
            acc = 0
            for j in range(r):
                s = 0
                for k in range(r):
                    s += vectors[i, k] * gram[k, j]
                acc = _gcd_nb(acc, abs(s))
            out[i] = acc
        return out

else:  # pragma: no cover
    _divisibility_numba = None


def divisibility_batch(vectors, gram, use_numba=None):
    """gcd of the pairings of each row of ``vectors`` with every basis vector.

    Zero rows give 0; callers reject them beforehand.
    """
    v64 = _int64_or_none(vectors)
    g64 = _int64_or_none(gram)
    if v64 is not None and v64.ndim != 2:
        raise ValueError("vectors must be a 2-d array")
    if v64 is not None and v64.size == 0:
        return np.zeros(v64.shape[0], dtype=np.int64)
    if v64 is None or g64 is None or (
        float(np.max(np.abs(v64))) * float(np.max(np.abs(g64))) * v64.shape[1] >= _INT64_SAFE / 4
    ):
        pair = np.asarray(vectors, dtype=object) @ np.asarray(gram, dtype=object)
        return np.array([_gcd_row(row) for row in pair], dtype=object)
    if use_numba is None:
        use_numba = USE_NUMBA
    if use_numba:
        return _divisibility_numba(np.ascontiguousarray(v64), np.ascontiguousarray(g64))
    return _divisibility_numpy(v64, g64)


def _gcd_row(row):
    acc = 0
    for x in row:
        acc = gcd(acc, int(x))
    return acc
