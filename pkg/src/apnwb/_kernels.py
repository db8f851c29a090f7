"""Compiled inner loops over all 2^{2n} (direction, point) pairs."""

import os

import numba
import numpy as np

# the bundled TBB is too old on some systems and numba warns when probing it
if "NUMBA_THREADING_LAYER" not in os.environ:
    numba.config.THREADING_LAYER = "omp"


@numba.njit(cache=True)
def apn_kernel(tt):
    # x and x^d give the same derivative value, so f is APN iff the values
    # over the half x < x^d are pairwise distinct for every d.
    size = tt.shape[0]
    stamp = np.zeros(size, np.int32)
    for d in range(1, size):
        for x in range(size):
            y = x ^ d
            if y < x:
                continue
            v = tt[x] ^ tt[y]
            if stamp[v] == d:
                return False
            stamp[v] = d
    return True


@numba.njit(cache=True)
def differential_histogram(tt):
    """hist[k] = number of pairs (d != 0, b) with exactly k solutions."""
    size = tt.shape[0]
    cnt = np.zeros(size, np.int64)
    hist = np.zeros(size + 1, np.int64)
    for d in range(1, size):
        cnt[:] = 0
        for x in range(size):
            cnt[tt[x] ^ tt[x ^ d]] += 1
        for b in range(size):
            hist[cnt[b]] += 1
    return hist


@numba.njit(cache=True, parallel=True)
def apn_batch(tables):
    """apn_kernel applied to every row of a 2-D array of truth tables."""
    k = tables.shape[0]
    out = np.zeros(k, np.bool_)
    for i in numba.prange(k):
        out[i] = apn_kernel(tables[i])
    return out



@numba.njit(cache=True)
def _walsh_row(tt, b, exp, log, trace, out):
    """Add the |Walsh| histogram of x -> Tr(b f(x)) into ``out``."""
    size = tt.shape[0]
    order = size - 1
    w = np.empty(size, np.int64)
    lb = log[b]
    for x in range(size):
        v = tt[x]
        t = 0 if v == 0 else trace[exp[(lb + log[v]) % order]]
        w[x] = 1 - 2 * t
    h = 1
    while h < size:
        for i in range(0, size, 2 * h):
            for j in range(i, i + h):
                p = w[j]
                r = w[j + h]
                w[j] = p + r
                w[j + h] = p - r
        h *= 2
    for x in range(size):
        out[abs(w[x])] += 1


@numba.njit(cache=True, parallel=True)
def walsh_histogram(tt, exp, log, trace):
    """hist[w] = number of (u, b != 0) with |sum_x (-1)^(Tr(b f(x)) + <u, x>)| = w."""
    size = tt.shape[0]
    rows = np.zeros((size, size + 1), np.int64)
    for b in numba.prange(1, size):
        _walsh_row(tt, b, exp, log, trace, rows[b])
    hist = np.zeros(size + 1, np.int64)
    for b in range(size):
        for k in range(size + 1):
            hist[k] += rows[b, k]
    return hist

def set_workers(count):
    """Cap the number of threads used by parallel kernels."""
    numba.set_num_threads(max(1, min(int(count), numba.config.NUMBA_NUM_THREADS)))


@numba.njit(cache=True)
def gamma_rows(tt, n):
    """Bit-packed rows (a, b) -> {(x, b + f(x + a))} of the graph incidence matrix."""
    size = 1 << n
    words = (size * size + 63) // 64
    out = np.zeros((size * size, words), dtype=np.uint64)
    for a in range(size):
        for b in range(size):
            r = a * size + b
            for x in range(size):
                col = x * size + (b ^ tt[x ^ a])
                out[r, col >> 6] |= np.uint64(1) << np.uint64(col & 63)
    return out


@numba.njit(cache=True)
def gf2_rank_packed(rows, ncols):
    """Rank over GF(2) of a bit-packed matrix; destroys ``rows``."""
    nrows = rows.shape[0]
    rank = 0
    for col in range(ncols):
        w = col >> 6
        bit = np.uint64(1) << np.uint64(col & 63)
        piv = -1
        for r in range(rank, nrows):
            if rows[r, w] & bit:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for k in range(w, rows.shape[1]):
                t = rows[piv, k]
                rows[piv, k] = rows[rank, k]
                rows[rank, k] = t
        for r in range(rank + 1, nrows):
            if rows[r, w] & bit:
                for k in range(w, rows.shape[1]):
                    rows[r, k] ^= rows[rank, k]
        rank += 1
        if rank == nrows:
            break
    return rank
