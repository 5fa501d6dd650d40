"""Finite-alphabet joint distributions, channels and Shannon information measures.

All information quantities are in bits.  A :class:`JointDist` keeps its
variables sorted by name, so two tables describing the same law compare
equal element-wise regardless of how they were assembled.
"""

from __future__ import annotations

import math
from itertools import product
from typing import Callable, Iterable, NamedTuple, Sequence, Union

import numpy as np

from .errors import InputError

VAR_NAMES = ("X", "Y", "W", "Z", "V", "V1", "V2", "U", "N", "E")

NORM_TOL = 1e-9
ANALYTIC_TOL = 1e-12

Names = Union[str, Iterable[str]]


class VarId(NamedTuple):
    name: str
    card: int


def _as_var(v) -> VarId:
    if isinstance(v, VarId):
        var = v
    else:
        try:
            name, card = v
        except (TypeError, ValueError):
            raise InputError(f"cannot interpret {v!r} as a (name, cardinality) pair") from None
        var = VarId(str(name), int(card))
    if var.name not in VAR_NAMES:
        raise InputError(f"unknown variable name {var.name!r}; expected one of {VAR_NAMES}")
    if var.card < 1:
        raise InputError(f"variable {var.name} needs cardinality >= 1, got {var.card}")
    return var


def _as_names(arg: Names) -> tuple[str, ...]:
    if isinstance(arg, str):
        return (arg,)
    if isinstance(arg, VarId):
        return (arg.name,)
    return tuple(a.name if isinstance(a, VarId) else str(a) for a in arg)


def _format_vars(vs: Sequence[VarId]) -> str:
    return ",".join(f"{v.name}:{v.card}" for v in vs)


def _parse_vars(text: str) -> tuple[VarId, ...]:
    text = text.strip()
    if not text:
        return ()
    out = []
    for item in text.split(","):
        try:
            name, card = item.split(":")
            out.append(_as_var((name.strip(), int(card))))
        except ValueError:
            raise InputError(f"bad variable declaration {item!r}") from None
    return tuple(out)


class JointDist:
    """Dense joint probability table over named finite variables.

    ``probs`` may be given either with one axis per variable (in the order of
    ``vars``) or flat in row-major order.  The stored table is read-only and
    its axes follow the alphabetical order of the variable names.
    """

    __slots__ = ("vars", "probs")

    def __init__(self, vars, probs, tol: float = NORM_TOL):
        vs = tuple(_as_var(v) for v in vars)
        names = [v.name for v in vs]
        if len(set(names)) != len(names):
            raise InputError(f"duplicate variable names in {names}")
        shape = tuple(v.card for v in vs)
        arr = np.array(probs, dtype=float)
        if arr.size != math.prod(shape):
            raise InputError(f"table has {arr.size} entries, variables {names} need {math.prod(shape)}")
        arr = arr.reshape(shape)
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise InputError("probabilities must be finite and nonnegative")
        total = arr.sum()
        if abs(total - 1.0) > tol:
            raise InputError(f"probabilities sum to {total!r}, not 1")
        order = sorted(range(len(vs)), key=lambda i: vs[i].name)
        arr = np.ascontiguousarray(np.transpose(arr, order))
        arr.setflags(write=False)
        self.vars = tuple(vs[i] for i in order)
        self.probs = arr

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.vars)

    def var(self, name: str) -> VarId:
        for v in self.vars:
            if v.name == name:
                return v
        raise InputError(f"variable {name!r} not in {self.names}")

    def axes(self, names: Names) -> tuple[int, ...]:
        idx = {v.name: i for i, v in enumerate(self.vars)}
        out = []
        for n in _as_names(names):
            if n not in idx:
                raise InputError(f"variable {n!r} not in {self.names}")
            out.append(idx[n])
        return tuple(out)

    def table(self, names: Sequence[str]) -> np.ndarray:
        """Marginal table with axes in the requested order."""
        names = _as_names(names)
        ax = self.axes(names)
        if len(set(ax)) != len(ax):
            raise InputError(f"repeated variable in {names}")
        drop = tuple(i for i in range(len(self.vars)) if i not in ax)
        m = self.probs.sum(axis=drop) if drop else self.probs
        kept = sorted(ax)
        return np.transpose(m, [kept.index(a) for a in ax])

    def __eq__(self, other):
        if not isinstance(other, JointDist):
            return NotImplemented
        return self.vars == other.vars and np.array_equal(self.probs, other.probs)

    def __repr__(self):
        return f"JointDist({_format_vars(self.vars)})"

    def to_text(self) -> str:
        lines = [f"vars: {_format_vars(self.vars)}"]
        lines += [format(float(p), ".16e") for p in self.probs.ravel()]
        return "\n".join(lines) + "\n"

    @classmethod
    def uniform(cls, *vars) -> "JointDist":
        vs = [_as_var(v) for v in vars]
        n = math.prod(v.card for v in vs)
        return cls(vs, np.full(n, 1.0 / n))

    @classmethod
    def point_mass(cls, var, value: int = 0) -> "JointDist":
        var = _as_var(var)
        p = np.zeros(var.card)
        p[value] = 1.0
        return cls([var], p)


class CondChannel:
    """Conditional law p(outputs | inputs).

    ``table`` has one axis per input followed by one axis per output; each
    slice over the output axes is a probability distribution.
    """

    __slots__ = ("inputs", "outputs", "table")

    def __init__(self, inputs, outputs, table, tol: float = NORM_TOL):
        ins = tuple(_as_var(v) for v in inputs)
        outs = tuple(_as_var(v) for v in outputs)
        names = [v.name for v in ins + outs]
        if len(set(names)) != len(names):
            raise InputError(f"channel variables must be distinct, got {names}")
        if not outs:
            raise InputError("channel needs at least one output")
        shape = tuple(v.card for v in ins + outs)
        arr = np.array(table, dtype=float)
        if arr.size != math.prod(shape):
            raise InputError(f"channel table has {arr.size} entries, expected shape {shape}")
        arr = arr.reshape(shape)
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise InputError("channel entries must be finite and nonnegative")
        rows = arr.reshape(-1, math.prod(v.card for v in outs)).sum(axis=1)
        if np.any(np.abs(rows - 1.0) > tol):
            raise InputError(f"channel rows must sum to 1 (worst row sums to {rows[np.argmax(np.abs(rows - 1))]!r})")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        self.inputs = ins
        self.outputs = outs
        self.table = arr

    @property
    def rows(self) -> np.ndarray:
        """2-D view: one row per input tuple (row-major), one column per output tuple."""
        n_out = math.prod(v.card for v in self.outputs)
        return self.table.reshape(-1, n_out)

    def __repr__(self):
        return f"CondChannel({_format_vars(self.outputs)} | {_format_vars(self.inputs)})"

    def __eq__(self, other):
        if not isinstance(other, CondChannel):
            return NotImplemented
        return (self.inputs == other.inputs and self.outputs == other.outputs
                and np.array_equal(self.table, other.table))

    def to_text(self) -> str:
        lines = [f"vars: {_format_vars(self.inputs + self.outputs)}",
                 f"given: {','.join(v.name for v in self.inputs)}"]
        lines += [format(float(p), ".16e") for p in self.table.ravel()]
        return "\n".join(lines) + "\n"

    @classmethod
    def deterministic(cls, inputs, output, fn: Callable[..., int]) -> "CondChannel":
        """Channel putting all mass on ``fn(*input_symbols)``."""
        ins = tuple(_as_var(v) for v in inputs)
        out = _as_var(output)
        arr = np.zeros(tuple(v.card for v in ins) + (out.card,))
        for idx in product(*(range(v.card) for v in ins)):
            arr[idx + (int(fn(*idx)),)] = 1.0
        return cls(ins, (out,), arr)

    @classmethod
    def constant(cls, inputs, output) -> "CondChannel":
        out = _as_var(output)
        return cls.deterministic(inputs, (out.name, out.card), lambda *a: 0)

    @classmethod
    def copy(cls, source, name: str) -> "CondChannel":
        src = _as_var(source)
        return cls.deterministic([src], (name, src.card), lambda a: a)

    @classmethod
    def bsc(cls, source, name: str, crossover: float) -> "CondChannel":
        src = _as_var(source)
        if src.card != 2:
            raise InputError("binary symmetric channel needs a binary input")
        if not 0.0 <= crossover <= 1.0:
            raise InputError(f"crossover {crossover} outside [0, 1]")
        a = crossover
        return cls([src], [(name, 2)], [[1 - a, a], [a, 1 - a]])


def dumps(obj: Union[JointDist, CondChannel]) -> str:
    return obj.to_text()


def loads(text: str) -> Union[JointDist, CondChannel]:
    """Parse the plain-text format written by :func:`dumps`."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("vars:"):
        raise InputError("expected a 'vars:' header line")
    vs = _parse_vars(lines[0][len("vars:"):])
    given = None
    body = lines[1:]
    if body and body[0].startswith("given:"):
        given = [s.strip() for s in body[0][len("given:"):].split(",") if s.strip()]
        body = body[1:]
    try:
        values = [float(s) for s in body]
    except ValueError as exc:
        raise InputError(f"bad probability line: {exc}") from None
    if given is None:
        return JointDist(vs, values)
    if [v.name for v in vs[:len(given)]] != given:
        raise InputError("channel inputs must lead the 'vars:' header")
    return CondChannel(vs[:len(given)], vs[len(given):], values)


def load(path) -> Union[JointDist, CondChannel]:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def save(obj: Union[JointDist, CondChannel], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(obj))


def _entropy_of(table: np.ndarray) -> float:
    p = table[table > 0]
    return float(-np.sum(p * np.log2(p)))


def _check_disjoint(*groups: tuple[str, ...]) -> None:
    seen: set[str] = set()
    for g in groups:
        if len(set(g)) != len(g) or seen & set(g):
            raise InputError(f"variable sets must be disjoint: {groups}")
        seen |= set(g)


def entropy(d: JointDist, subset: Names) -> float:
    names = _as_names(subset)
    if not names:
        return 0.0
    ax = d.axes(names)
    drop = tuple(i for i in range(len(d.vars)) if i not in ax)
    return _entropy_of(d.probs.sum(axis=drop) if drop else d.probs)


def cond_entropy(d: JointDist, a: Names, b: Names, clamp: bool = True) -> float:
    """H(a | b)."""
    a, b = _as_names(a), _as_names(b)
    _check_disjoint(a, b)
    val = entropy(d, a + b) - entropy(d, b)
    return max(val, 0.0) if clamp else val


def mutual_info(d: JointDist, a: Names, b: Names, clamp: bool = True) -> float:
    """I(a; b)."""
    a, b = _as_names(a), _as_names(b)
    _check_disjoint(a, b)
    val = entropy(d, a) + entropy(d, b) - entropy(d, a + b)
    return max(val, 0.0) if clamp else val


def cond_mutual_info(d: JointDist, a: Names, b: Names, c: Names, clamp: bool = True) -> float:
    """I(a; b | c) = H(a|c) - H(a|b,c)."""
    a, b, c = _as_names(a), _as_names(b), _as_names(c)
    _check_disjoint(a, b, c)
    val = (entropy(d, a + c) - entropy(d, c)) - (entropy(d, a + b + c) - entropy(d, b + c))
    return max(val, 0.0) if clamp else val


def marginalize(d: JointDist, keep: Names) -> JointDist:
    names = _as_names(keep)
    if not names:
        raise InputError("marginalize needs at least one variable to keep")
    ax = d.axes(names)
    if len(set(ax)) != len(ax):
        raise InputError(f"repeated variable in {names}")
    kept = sorted(set(ax))
    drop = tuple(i for i in range(len(d.vars)) if i not in kept)
    table = d.probs.sum(axis=drop) if drop else d.probs
    return JointDist([d.vars[i] for i in kept], table)


def extend(d: JointDist, ch: CondChannel) -> JointDist:
    """Joint law of ``d.vars`` and the channel outputs, p(all) = p(d) * ch(out | in)."""
    idx = {v.name: i for i, v in enumerate(d.vars)}
    for v in ch.inputs:
        if v.name not in idx:
            raise InputError(f"channel input {v.name} not in {d.names}")
        if d.vars[idx[v.name]].card != v.card:
            raise InputError(f"cardinality mismatch for {v.name}: {d.vars[idx[v.name]].card} vs {v.card}")
    for v in ch.outputs:
        if v.name in idx:
            raise InputError(f"channel output {v.name} collides with an existing variable")
    letters = [chr(ord("a") + i) for i in range(len(d.vars) + len(ch.outputs))]
    d_sub = "".join(letters[: len(d.vars)])
    out_sub = "".join(letters[len(d.vars):])
    ch_sub = "".join(letters[idx[v.name]] for v in ch.inputs) + out_sub
    table = np.einsum(f"{d_sub},{ch_sub}->{d_sub}{out_sub}", d.probs, ch.table)
    return JointDist(d.vars + ch.outputs, table)


def is_markov(d: JointDist, a: Names, b: Names, c: Names, tol: float = 1e-10) -> bool:
    """True iff a -> b -> c, i.e. I(a; c | b) <= tol."""
    return cond_mutual_info(d, a, c, b, clamp=False) <= tol


def binary_entropy(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise InputError(f"binary_entropy argument {p} outside [0, 1]")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def inv_binary_entropy(h: float) -> float:
    """Inverse of the binary entropy on the branch [0, 1/2], by bisection."""
    if not 0.0 <= h <= 1.0:
        raise InputError(f"inv_binary_entropy argument {h} outside [0, 1]")
    if h == 0.0:
        return 0.0
    if h == 1.0:
        return 0.5
    lo, hi = 0.0, 0.5
    # run to the resolution of the float grid; h is increasing on [0, 1/2]
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if binary_entropy(mid) < h:
            lo = mid
        else:
            hi = mid
    return lo if abs(binary_entropy(lo) - h) <= abs(binary_entropy(hi) - h) else hi


def binary_convolution(a: float, b: float) -> float:
    """Crossover of two cascaded binary symmetric channels, a(1-b) + b(1-a)."""
    if not (0.0 <= a <= 1.0 and 0.0 <= b <= 1.0):
        raise InputError(f"binary_convolution arguments ({a}, {b}) outside [0, 1]")
    if a == 0.5 or b == 0.5:
        # 1 - a rounds for small a, which would break exact absorption
        return 0.5
    return a * (1.0 - b) + b * (1.0 - a)
