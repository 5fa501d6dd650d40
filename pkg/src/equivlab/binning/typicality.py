"""Robust joint typicality on integer sequences.

A tuple of sequences is typical for a law p when every symbol tuple ``a``
satisfies ``|N(a) - n p(a)| <= eps n p(a)``.  Tuples with ``p(a) = 0`` must not
occur at all.
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import combinations, product
from typing import Sequence

import numpy as np

from ..errors import InputError, ResourceError

# absorbs rounding in n*p(a); counts are integers so this never admits a real violation
COUNT_TOL = 1e-9
COMPLETION_LIMIT = 1 << 22


def _stack(seqs) -> np.ndarray:
    arrs = [np.asarray(s) for s in seqs]
    if not arrs:
        raise InputError("no sequences given")
    n = arrs[0].shape[-1]
    if any(a.shape[-1] != n for a in arrs):
        raise InputError("sequence lengths differ")
    return arrs


def _flat_index(arrs, shape) -> np.ndarray:
    idx = np.zeros(np.broadcast_shapes(*(a.shape for a in arrs)), dtype=np.int64)
    for a, c in zip(arrs, shape):
        if a.size and (a.min() < 0 or a.max() >= c):
            raise InputError(f"symbol outside alphabet of size {c}")
        idx = idx * c + a
    return idx


def counts_ok(counts: np.ndarray, n: int, p: np.ndarray, eps: float, slack: float = 0.0) -> np.ndarray:
    """Row-wise robust typicality test on a ``(..., K)`` array of tuple counts."""
    dev = np.abs(counts - n * p)
    return np.all(dev <= eps * n * p + COUNT_TOL + slack, axis=-1)


def joint_counts(idx: np.ndarray, k: int) -> np.ndarray:
    """Counts of each value in ``range(k)`` along the last axis of ``idx``."""
    idx = np.asarray(idx, dtype=np.int64)
    rows = idx.reshape(-1, idx.shape[-1])
    off = rows + k * np.arange(rows.shape[0])[:, None]
    c = np.bincount(off.ravel(), minlength=k * rows.shape[0]).reshape(rows.shape[0], k)
    return c.reshape(idx.shape[:-1] + (k,))


def jointly_typical(seqs: Sequence, joint, eps: float) -> bool:
    """Whether the sequences in ``seqs`` are jointly typical for ``joint``.

    ``joint`` is an array whose axes follow the order of ``seqs``.
    """
    if eps <= 0:
        raise InputError("typicality slack must be positive")
    joint = np.asarray(joint, dtype=float)
    arrs = _stack(seqs)
    if joint.ndim != len(arrs):
        raise InputError(f"law has {joint.ndim} axes for {len(arrs)} sequences")
    n = arrs[0].shape[-1]
    idx = _flat_index(arrs, joint.shape)
    c = joint_counts(idx, joint.size)
    return bool(counts_ok(c, n, joint.ravel(), eps))


def typical(seq, dist, eps: float) -> bool:
    return jointly_typical([seq], dist, eps)


def _multinomial(m: int, counts) -> int:
    out, left = 1, m
    for c in counts:
        out *= math.comb(left, c)
        left -= c
    return out


@lru_cache(maxsize=4096)
def _arrangements(m: int, counts: tuple[int, ...]) -> np.ndarray:
    """All length-m sequences with ``counts[a]`` copies of symbol ``a``."""
    if len(counts) == 1:
        out = np.zeros((1, m), dtype=np.int64)
    else:
        rest = _arrangements(m - counts[0], counts[1:]) + 1
        combos = list(combinations(range(m), counts[0]))
        out = np.empty((len(combos) * rest.shape[0], m), dtype=np.int64)
        r = rest.shape[0]
        for i, c in enumerate(combos):
            mask = np.ones(m, dtype=bool)
            mask[list(c)] = False
            block = out[i * r:(i + 1) * r]
            block[:, ~mask] = 0
            block[:, mask] = rest
    out.flags.writeable = False
    return out


def typical_completions(cond: Sequence, joint, eps: float, slack: float = 0.0,
                        limit: int = COMPLETION_LIMIT) -> np.ndarray:
    """Every sequence ``t`` with ``(*cond, t)`` jointly typical for ``joint``.

    The last axis of ``joint`` is the completed variable.  Positions sharing a
    conditioning symbol tuple are constrained independently, so the answer is
    a product of per-class arrangements.  ``slack`` widens the count window,
    which yields a superset for prefiltering.
    """
    joint = np.asarray(joint, dtype=float)
    arrs = _stack(cond) if cond else []
    if joint.ndim != len(arrs) + 1:
        raise InputError("law must have one axis per conditioning sequence plus one")
    k = joint.shape[-1]
    n = arrs[0].shape[-1] if arrs else None
    if n is None:
        raise InputError("need at least one conditioning sequence")
    cls = _flat_index(arrs, joint.shape[:-1])
    pj = joint.reshape(-1, k)
    classes = []
    total = 1
    for b in np.unique(cls):
        pos = np.flatnonzero(cls == b)
        m = pos.size
        ranges = []
        for a in range(k):
            npa = n * pj[b, a]
            lo = max(0, math.ceil(npa - eps * npa - COUNT_TOL - slack))
            hi = min(m, math.floor(npa + eps * npa + COUNT_TOL + slack))
            ranges.append(range(lo, hi + 1))
        counts = [c for c in product(*ranges) if sum(c) == m]
        if not counts:
            return np.zeros((0, n), dtype=np.int64)
        total *= sum(_multinomial(m, c) for c in counts)
        classes.append((pos, counts))
    if total > limit:
        raise ResourceError(f"typical set of {total} sequences exceeds enumeration limit {limit}")
    blocks = []
    for pos, counts in classes:
        parts = [_arrangements(pos.size, c) for c in counts]
        blocks.append((pos, np.concatenate(parts) if len(parts) > 1 else parts[0]))
    out = np.empty((total, n), dtype=np.int64)
    rep = total
    tile = 1
    for pos, blk in blocks:
        rep //= blk.shape[0]
        out[:, pos] = np.tile(np.repeat(blk, rep, axis=0), (tile, 1))
        tile *= blk.shape[0]
    return out
