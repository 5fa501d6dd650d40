"""Exact H(X^n | J_x) / n for a drawn code, by enumeration.

Model one: J_x = m_X is a function of x^n, so H(X^n|J_x) = n H(X) - H(J_x).

Model two: J_x = (s_U, m_X) depends on x^n and on the helper index l(y^n).
Then H(X^n|J_x) = H(X^n, S_U) - H(S_U, M_X), with p(x^n, s) built from
p(l | x^n) and the deterministic u-search s(x^n, l).
"""

from __future__ import annotations

import math

import numpy as np

from ..infomeasures import entropy
from .codes import BinningCode, SimConfig, all_sequences, seq_keys, typical_x_given, u_search
from .typicality import COUNT_TOL, counts_ok, joint_counts, typical_completions

_CHUNK = 1 << 18


def _h(p: np.ndarray) -> float:
    p = p[p > 0]
    return -math.fsum((p * np.log2(p)).tolist())


def _seq_probs(seqs: np.ndarray, p: np.ndarray) -> np.ndarray:
    return np.prod(p[seqs], axis=1)


def bin_entropy(code: BinningCode, px: np.ndarray) -> float:
    """H(m_X(X^n)) for i.i.d. X ~ px."""
    nx, n = px.size, code.n
    total = nx ** n
    mass: dict[int, float] = {}
    for s in range(0, total, _CHUNK):
        seqs = all_sequences(nx, n, s, min(total, s + _CHUNK))
        b = code.x_bin_map(seqs)
        ub, inv = np.unique(b, return_inverse=True)
        w = np.bincount(inv, weights=_seq_probs(seqs, px))
        for key, val in zip(ub.tolist(), w.tolist()):
            mass[key] = mass.get(key, 0.0) + val
    return _h(np.array(sorted(mass.values())))


def helper_index_table(code: BinningCode) -> tuple[np.ndarray, np.ndarray]:
    """(l(y), ok(y)) for every y^n in mixed-radix order."""
    law = code.laws["vy"]
    ny, n = law.shape[1], code.n
    l_of = np.full(ny ** n, -1, dtype=np.int64)
    for l, v in enumerate(code.helper_codebook):
        ys = typical_completions([v], law, code.eps, slack=COUNT_TOL)
        if ys.shape[0] == 0:
            continue
        idx = (v[None, :] * ny) + ys
        ys = ys[counts_ok(joint_counts(idx, law.size), n, law.ravel(), code.eps)]
        keys = seq_keys(ys, ny)
        free = keys[l_of[keys] < 0]
        l_of[free] = l
    ok = l_of >= 0
    l_of[~ok] = 0
    return l_of, ok


def _equivocation_two(code: BinningCode, cfg: SimConfig) -> float:
    pxy = code.laws["xy"]
    nx, ny = pxy.shape
    n = code.n
    px = pxy.sum(axis=1)
    pyx = np.divide(pxy, px[:, None], out=np.zeros_like(pxy), where=px[:, None] > 0)
    l_of, _ = helper_index_table(code)
    all_y = all_sequences(ny, n)
    ys_by_l: dict[int, np.ndarray] = {}
    order = np.argsort(l_of, kind="stable")
    bounds = np.flatnonzero(np.diff(l_of[order])) + 1
    for grp in np.split(order, bounds):
        if grp.size:
            ys_by_l[int(l_of[grp[0]])] = grp
    s_fallback = int(code.u_bins[0])
    xs_keys, ss, ws = [], [], []
    for l, ykeys in ys_by_l.items():
        v = code.helper_codebook[l]
        xs = typical_x_given(code, [v], code.laws["vx"], code.eps)
        if xs.shape[0] == 0:
            continue
        j = u_search(code, xs, v)
        good = j >= 0
        if not np.any(good):
            continue
        xs, j = xs[good], j[good]
        ys = all_y[ykeys]
        # p(l | x^n) = sum over y^n with l(y^n) = l of prod_t p(y_t | x_t)
        p_l = np.zeros(xs.shape[0])
        step = max(1, (1 << 22) // max(1, ys.shape[0] * n))
        for a in range(0, xs.shape[0], step):
            blk = xs[a:a + step]
            p_l[a:a + step] = np.prod(pyx[blk[:, None, :], ys[None, :, :]], axis=2).sum(axis=1)
        xs_keys.append(seq_keys(xs, nx))
        ss.append(code.u_bins[j])
        ws.append(_seq_probs(xs, px) * p_l)
    total = nx ** n
    xk = np.concatenate(xs_keys) if xs_keys else np.zeros(0, dtype=np.int64)
    sv = np.concatenate(ss) if ss else np.zeros(0, dtype=np.int64)
    wv = np.concatenate(ws) if ws else np.zeros(0)
    all_x = all_sequences(nx, n)
    p_all = _seq_probs(all_x, px)
    fallback = np.maximum(p_all - np.bincount(xk, weights=wv, minlength=total), 0.0)
    xk = np.concatenate([xk, np.arange(total, dtype=np.int64)])
    sv = np.concatenate([sv, np.full(total, s_fallback, dtype=np.int64)])
    wv = np.concatenate([wv, fallback])
    m_all = code.x_bin_map(all_x)
    pairs_xs = np.stack([xk, sv], axis=1)
    _, inv = np.unique(pairs_xs, axis=0, return_inverse=True)
    h_xs = _h(np.bincount(inv.ravel(), weights=wv))
    pairs_sm = np.stack([sv, m_all[xk]], axis=1)
    _, inv = np.unique(pairs_sm, axis=0, return_inverse=True)
    h_sm = _h(np.bincount(inv.ravel(), weights=wv))
    return (h_xs - h_sm) / n


def exact_equivocation(code: BinningCode, cfg: SimConfig) -> float:
    """Bits per symbol of Eve's uncertainty about X^n given Alice's message."""
    cfg.check_guard()
    if code.model == "one":
        px = code.laws["xy"].sum(axis=1)
        h_x = entropy(cfg.source.joint, "X")
        return (code.n * h_x - bin_entropy(code, px)) / code.n
    return _equivocation_two(code, cfg)
