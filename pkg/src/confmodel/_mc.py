"""Vectorized Monte Carlo kernels for collision statistics.

Each replicate gets its own xoshiro256** stream (256-bit state) derived
from (seed, replicate index) through splitmix64, so results depend only on
the seed and the replicate's global index: batching and thread count never
change the output. A replicate shuffles the half-edge owner array in place
(Fisher-Yates with exact mask-rejection draws), pairs consecutive entries,
and counts loops and parallel-edge pairs with a stamped open-addressing
hash table, avoiding any per-replicate sort.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

__all__ = ["collision_counts_batch", "collision_counts_batch_bipartite"]

_U1 = np.uint64(1)


@njit(inline="always")
def _rotl(x, k):
    return np.uint64((x << np.uint64(k)) | (x >> np.uint64(64 - k)))


@njit(inline="always")
def _splitmix64(state):
    state = np.uint64(state + np.uint64(0x9E3779B97F4A7C15))
    z = state
    z = np.uint64((z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9))
    z = np.uint64((z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB))
    return state, np.uint64(z ^ (z >> np.uint64(31)))


@njit(inline="always")
def _stream_state(seed, index):
    """256-bit xoshiro state for stream `index`, expanded via splitmix64."""
    st = np.uint64(seed)
    st, _ = _splitmix64(st)
    st = np.uint64(st ^ (np.uint64(index) * np.uint64(0xD1B54A32D192ED03)))
    st, s0 = _splitmix64(st)
    st, s1 = _splitmix64(st)
    st, s2 = _splitmix64(st)
    st, s3 = _splitmix64(st)
    if s0 == 0 and s1 == 0 and s2 == 0 and s3 == 0:
        s0 = _U1
    return s0, s1, s2, s3


@njit(inline="always")
def _xo_next(s0, s1, s2, s3):
    out = np.uint64(_rotl(np.uint64(s1 * np.uint64(5)), 7) * np.uint64(9))
    t = np.uint64(s1 << np.uint64(17))
    s2 = np.uint64(s2 ^ s0)
    s3 = np.uint64(s3 ^ s1)
    s1 = np.uint64(s1 ^ s2)
    s0 = np.uint64(s0 ^ s3)
    s2 = np.uint64(s2 ^ t)
    s3 = _rotl(s3, 45)
    return out, s0, s1, s2, s3


@njit(inline="always")
def _hash_slot(key, mask):
    h = np.uint64(key) * np.uint64(0x9E3779B97F4A7C15)
    h = np.uint64(h ^ (h >> np.uint64(29)))
    return np.int64(h & mask)


@njit(cache=True, parallel=True)
def _collision_kernel(owners, n_labels, seed, base_index, n_rep, n_chunks):
    N = owners.size
    n_edges = N // 2
    tsize = np.int64(16)
    while tsize < 2 * n_edges:
        tsize *= 2
    tmask = np.uint64(tsize - 1)
    z_out = np.empty(n_rep, np.int64)
    for c in prange(n_chunks):
        lo = c * n_rep // n_chunks
        hi = (c + 1) * n_rep // n_chunks
        row = np.empty(N, np.int64)
        t_key = np.empty(tsize, np.int64)
        t_stamp = np.full(tsize, -1, np.int64)
        t_cnt = np.empty(tsize, np.int64)
        for r in range(lo, hi):
            idx = base_index + r
            s0, s1, s2, s3 = _stream_state(seed, idx)
            row[:] = owners
            m = _U1
            while m < np.uint64(N - 1):
                m = (m << _U1) | _U1
            for k in range(N - 1, 0, -1):
                ku = np.uint64(k)
                if (m >> _U1) >= ku:
                    m >>= _U1
                while True:
                    x, s0, s1, s2, s3 = _xo_next(s0, s1, s2, s3)
                    j = x & m
                    if j <= ku:
                        break
                ji = np.int64(j)
                tmp = row[k]
                row[k] = row[ji]
                row[ji] = tmp
            loops = np.int64(0)
            ypairs = np.int64(0)
            for e in range(n_edges):
                a = row[2 * e]
                b = row[2 * e + 1]
                if a == b:
                    loops += 1
                    continue
                if a < b:
                    key = a * n_labels + b
                else:
                    key = b * n_labels + a
                slot = _hash_slot(key, tmask)
                while True:
                    if t_stamp[slot] != idx:
                        t_stamp[slot] = idx
                        t_key[slot] = key
                        t_cnt[slot] = 1
                        break
                    if t_key[slot] == key:
                        ypairs += t_cnt[slot]
                        t_cnt[slot] += 1
                        break
                    slot = (slot + 1) & np.int64(tmask)
            z_out[r] = loops + ypairs
    return z_out


@njit(cache=True, parallel=True)
def _collision_kernel_bipartite(left, right, n_right, seed, base_index, n_rep, n_chunks):
    N = right.size
    tsize = np.int64(16)
    while tsize < 2 * N:
        tsize *= 2
    tmask = np.uint64(tsize - 1)
    z_out = np.empty(n_rep, np.int64)
    for c in prange(n_chunks):
        lo = c * n_rep // n_chunks
        hi = (c + 1) * n_rep // n_chunks
        row = np.empty(N, np.int64)
        t_key = np.empty(tsize, np.int64)
        t_stamp = np.full(tsize, -1, np.int64)
        t_cnt = np.empty(tsize, np.int64)
        for r in range(lo, hi):
            idx = base_index + r
            s0, s1, s2, s3 = _stream_state(seed, idx)
            row[:] = right
            m = _U1
            while m < np.uint64(N - 1):
                m = (m << _U1) | _U1
            for k in range(N - 1, 0, -1):
                ku = np.uint64(k)
                if (m >> _U1) >= ku:
                    m >>= _U1
                while True:
                    x, s0, s1, s2, s3 = _xo_next(s0, s1, s2, s3)
                    j = x & m
                    if j <= ku:
                        break
                ji = np.int64(j)
                tmp = row[k]
                row[k] = row[ji]
                row[ji] = tmp
            ypairs = np.int64(0)
            for e in range(N):
                key = left[e] * n_right + row[e]
                slot = _hash_slot(key, tmask)
                while True:
                    if t_stamp[slot] != idx:
                        t_stamp[slot] = idx
                        t_key[slot] = key
                        t_cnt[slot] = 1
                        break
                    if t_key[slot] == key:
                        ypairs += t_cnt[slot]
                        t_cnt[slot] += 1
                        break
                    slot = (slot + 1) & np.int64(tmask)
            z_out[r] = ypairs
    return z_out


def _chunk_count(n_rep: int) -> int:
    # Enough chunks to balance threads; chunking never affects the draws.
    return max(1, min(n_rep, 64))


def collision_counts_batch(
    owners: np.ndarray, n_labels: int, seed: int, n_rep: int, base_index: int = 0
) -> np.ndarray:
    """Collision counts of `n_rep` independent uniform pairings of `owners`.

    `owners` maps half-edge slot to vertex label; entry r of the result uses
    the stream indexed `base_index + r`, so disjoint index windows give
    independent, reproducible draws.
    """
    if owners.size % 2 != 0:
        raise ValueError("owner array must have even length")
    if n_rep <= 0:
        return np.empty(0, np.int64)
    if owners.size == 0:
        return np.zeros(n_rep, np.int64)
    return _collision_kernel(
        np.ascontiguousarray(owners, np.int64),
        np.int64(n_labels),
        np.uint64(seed & 0xFFFFFFFFFFFFFFFF),
        np.int64(base_index),
        np.int64(n_rep),
        np.int64(_chunk_count(n_rep)),
    )


def collision_counts_batch_bipartite(
    left_owners: np.ndarray,
    right_owners: np.ndarray,
    n_right: int,
    seed: int,
    n_rep: int,
    base_index: int = 0,
) -> np.ndarray:
    """Collision counts for uniform left-to-right half-edge bijections.

    Left owners stay in slot order; the right owner array is shuffled per
    replicate. Streams are indexed as in :func:`collision_counts_batch`.
    """
    if left_owners.size != right_owners.size:
        raise ValueError("left and right half-edge counts differ")
    if n_rep <= 0:
        return np.empty(0, np.int64)
    if right_owners.size == 0:
        return np.zeros(n_rep, np.int64)
    return _collision_kernel_bipartite(
        np.ascontiguousarray(left_owners, np.int64),
        np.ascontiguousarray(right_owners, np.int64),
        np.int64(n_right),
        np.uint64(seed & 0xFFFFFFFFFFFFFFFF),
        np.int64(base_index),
        np.int64(n_rep),
        np.int64(_chunk_count(n_rep)),
    )
