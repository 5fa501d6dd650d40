"""Projected block ascent over conditional channels.

A problem is a joint table ``base * ch_1 * ... * ch_k`` laid out on a fixed
axis order, where every channel is a row-stochastic matrix broadcast onto its
(inputs, outputs) axes.  Objectives are built from entropies of marginals of
that joint, so their gradients with respect to the joint are sums of
``-log2(marginal)`` terms and flow back to each channel by contraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

_TINY = 1e-300

Combo = Mapping[tuple[int, ...], float]


def project_rows(y: np.ndarray) -> np.ndarray:
    """Euclidean projection of every row onto the probability simplex."""
    n = y.shape[1]
    u = -np.sort(-y, axis=1)
    css = np.cumsum(u, axis=1) - 1.0
    ind = np.arange(1, n + 1)
    cond = u - css / ind > 0
    rho = n - 1 - np.argmax(cond[:, ::-1], axis=1)
    theta = css[np.arange(y.shape[0]), rho] / (rho + 1)
    return np.maximum(y - theta[:, None], 0.0)


def entropy_combo(*terms: tuple[float, Sequence[int]]) -> dict[tuple[int, ...], float]:
    out: dict[tuple[int, ...], float] = {}
    for coef, axes in terms:
        key = tuple(sorted(axes))
        out[key] = out.get(key, 0.0) + coef
    return out


def cmi(a: Sequence[int], b: Sequence[int], c: Sequence[int] = ()) -> dict[tuple[int, ...], float]:
    """I(a; b | c) as a signed sum of joint entropies over axis sets."""
    a, b, c = list(a), list(b), list(c)
    return entropy_combo((1.0, a + c), (1.0, b + c), (-1.0, a + b + c), (-1.0, c))


def cond_h(a: Sequence[int], b: Sequence[int] = ()) -> dict[tuple[int, ...], float]:
    a, b = list(a), list(b)
    return entropy_combo((1.0, a + b), (-1.0, b))


@dataclass
class Channel:
    axes: tuple[int, ...]   # input axes then output axes, increasing
    n_in: int               # number of input axes


class FactorModel:
    """Evaluate entropy combinations of ``base * channels`` and their gradients."""

    def __init__(self, base: np.ndarray, shape: Sequence[int], channels: Sequence[Channel],
                 quantities: Mapping[str, Combo]):
        self.shape = tuple(int(s) for s in shape)
        self.ndim = len(self.shape)
        self.base = np.asarray(base, dtype=float)
        self.channels = list(channels)
        self.quantities = {k: dict(v) for k, v in quantities.items()}
        self._sets = sorted({s for q in self.quantities.values() for s in q if s})
        self._view_shapes = []
        self._row_shapes = []
        for ch in self.channels:
            vs = [1] * self.ndim
            for a in ch.axes:
                vs[a] = self.shape[a]
            self._view_shapes.append(tuple(vs))
            n_rows = math.prod(self.shape[a] for a in ch.axes[: ch.n_in])
            n_out = math.prod(self.shape[a] for a in ch.axes[ch.n_in:])
            self._row_shapes.append((n_rows, n_out))

    def row_shape(self, k: int) -> tuple[int, int]:
        return self._row_shapes[k]

    def joint(self, rows: Sequence[np.ndarray]) -> np.ndarray:
        j = self.base
        for r, vs in zip(rows, self._view_shapes):
            j = j * r.reshape(vs)
        return j

    def _marginals(self, joint):
        out = {}
        for s in self._sets:
            drop = tuple(i for i in range(self.ndim) if i not in s)
            out[s] = joint.sum(axis=drop, keepdims=True) if drop else joint
        return out

    @staticmethod
    def _h(m):
        p = m[m > 0]
        return float(-np.sum(p * np.log2(p)))

    def values(self, rows: Sequence[np.ndarray]) -> dict[str, float]:
        margs = self._marginals(self.joint(rows))
        ent = {s: self._h(m) for s, m in margs.items()}
        ent[()] = 0.0
        return {k: sum(c * ent[s] for s, c in q.items()) for k, q in self.quantities.items()}

    def values_and_grads(self, rows: Sequence[np.ndarray],
                         weigh: Callable[[dict[str, float]], tuple[float, dict[str, float]]]):
        """Objective value and per-channel gradients; ``weigh`` maps quantity values
        to (objective, d objective / d quantity)."""
        joint = self.joint(rows)
        margs = self._marginals(joint)
        ent = {s: self._h(m) for s, m in margs.items()}
        ent[()] = 0.0
        vals = {k: sum(c * ent[s] for s, c in q.items()) for k, q in self.quantities.items()}
        obj, weights = weigh(vals)
        coef: dict[tuple[int, ...], float] = {}
        for k, w in weights.items():
            if w == 0.0:
                continue
            for s, c in self.quantities[k].items():
                if s:
                    coef[s] = coef.get(s, 0.0) + w * c
        g = np.zeros(self.shape)
        for s, c in coef.items():
            if c != 0.0:
                g = g - c * np.log2(np.maximum(margs[s], _TINY))
        grads = []
        for k, ch in enumerate(self.channels):
            acc = g * self.base
            for j, (r, vs) in enumerate(zip(rows, self._view_shapes)):
                if j != k:
                    acc = acc * r.reshape(vs)
            drop = tuple(i for i in range(self.ndim) if i not in ch.axes)
            gk = acc.sum(axis=drop) if drop else acc
            grads.append(gk.reshape(self._row_shapes[k]))
        return obj, vals, grads


def _direction(grad: np.ndarray) -> np.ndarray:
    d = grad - grad.mean(axis=1, keepdims=True)
    scale = np.max(np.abs(d), axis=1, keepdims=True)
    return np.divide(d, scale, out=np.zeros_like(d), where=scale > 0)


def ascend(model: FactorModel, rows: list[np.ndarray],
           weigh: Callable[[dict[str, float]], tuple[float, dict[str, float]]],
           max_passes: int = 300, tol: float = 1e-8, min_step: float = 1e-9,
           frozen: Sequence[int] = ()) -> tuple[list[np.ndarray], float]:
    """Block-coordinate projected gradient ascent with backtracking.

    Each pass visits every free channel once; a step is accepted only if it
    strictly improves the objective, otherwise it is halved.  Stops once a
    full pass gains less than ``tol``.
    """
    rows = [r.copy() for r in rows]
    val = weigh(model.values(rows))[0]
    steps = [0.5] * len(rows)
    for _ in range(max_passes):
        start = val
        for k in range(len(rows)):
            if k in frozen:
                continue
            _, _, grads = model.values_and_grads(rows, weigh)
            d = _direction(grads[k])
            if not np.any(d):
                continue
            s = steps[k]
            while s >= min_step:
                trial = list(rows)
                trial[k] = project_rows(rows[k] + s * d)
                new = weigh(model.values(trial))[0]
                if new > val:
                    rows, val = trial, new
                    steps[k] = min(1.0, 2.0 * s)
                    break
                s *= 0.5
            else:
                steps[k] = 0.5
        if val - start < tol:
            break
    return rows, val


def mix_to_feasible(model: FactorModel, rows: list[np.ndarray], k: int,
                    violation: Callable[[dict[str, float]], float], iters: int = 80) -> list[np.ndarray]:
    """Blend channel ``k`` toward its output marginal until ``violation <= 0``.

    At full blend the channel outputs are independent of its inputs, which
    zeroes every information term that flows through it.
    """
    if violation(model.values(rows)) <= 0:
        return rows
    joint = model.joint(rows)
    ch = model.channels[k]
    drop = tuple(i for i in range(model.ndim) if i not in ch.axes[ch.n_in:])
    q = joint.sum(axis=drop).reshape(1, -1)
    q = q / q.sum()

    def blend(t):
        out = list(rows)
        out[k] = (1.0 - t) * rows[k] + t * q
        return out

    lo, hi = 0.0, 1.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if violation(model.values(blend(mid))) <= 0:
            hi = mid
        else:
            lo = mid
    cand = blend(hi)
    if violation(model.values(cand)) <= 0:
        return cand
    for t in np.linspace(hi, 1.0, 65)[1:]:
        cand = blend(float(t))
        if violation(model.values(cand)) <= 0:
            return cand
    return blend(1.0)
