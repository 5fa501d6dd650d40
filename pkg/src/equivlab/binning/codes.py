"""Random codes for the one- and two-sided helper schemes.

Model one: Helen quantizes y^n to a codeword v(l) and sends l; Alice sends the
random bin of x^n; Bob looks for the unique typical x^n in that bin.

Model two: Alice also sees v(l).  She quantizes (x^n, v(l)) to a codeword u,
sends the bin s_U of u together with the bin m_X of x^n.  Bob first recovers
u from its bin using v(l), then x^n from its bin using (u, v(l)).

Codebook and bin counts are ``2**ceil(n * (rate + margin))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Union

import numpy as np

from ..errors import InputError, ResourceError
from ..infomeasures import cond_entropy, cond_mutual_info, mutual_info
from ..regions import AuxSystem1, AuxSystem2, SourcePair, joint_theorem1, joint_theorem2
from .typicality import COUNT_TOL, counts_ok, joint_counts, typical_completions

ENUM_GUARD = 1 << 24
CODEBOOK_GUARD = 1 << 26
# n * rate is often an integer up to rounding, e.g. 4 * (0.5 + 0.25)
EXPONENT_TOL = 1e-9

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)


def code_rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=key)))


@dataclass(frozen=True)
class SimConfig:
    n: int
    source: SourcePair
    aux: Union[AuxSystem1, AuxSystem2]
    rate_margin: float = 0.3
    typ_eps: float = 0.35
    seed: int = 0
    trials: int = 100
    model: str = "one"
    exact: bool = True
    workers: int = 1

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise InputError(f"blocklength must be a positive integer, got {self.n}")
        if not self.typ_eps > 0:
            raise InputError("typicality slack must be positive")
        if int(self.trials) != self.trials or self.trials < 1:
            raise InputError("need at least one trial")
        if not 0 <= self.seed < 2 ** 64:
            raise InputError("seed must fit in 64 unsigned bits")
        if not math.isfinite(self.rate_margin):
            raise InputError("rate margin must be finite")
        if self.model == "one":
            if not isinstance(self.aux, AuxSystem1):
                raise InputError("model one takes an AuxSystem1")
        elif self.model == "two":
            if not isinstance(self.aux, AuxSystem2):
                raise InputError("model two takes an AuxSystem2")
        else:
            raise InputError(f"unknown model {self.model!r}")

    def check_guard(self):
        enumeration_guard(self.model, self.source.nx, self.source.ny, self.n)


def enumeration_guard(model: str, nx: int, ny: int, n: int):
    """Raise unless exact equivocation fits in 2^24 enumerated sequences."""
    size = nx ** n if model == "one" else (nx * ny) ** n
    if size > ENUM_GUARD:
        base = "|X|^n" if model == "one" else "(|X||Y|)^n"
        raise ResourceError(f"exact equivocation needs {base} = {size} > 2^24 enumerated sequences")


def exponent(n: int, rate: float) -> int:
    return max(0, math.ceil(n * rate - EXPONENT_TOL))


def seq_keys(seqs: np.ndarray, card: int) -> np.ndarray:
    """Mixed-radix index of each row, first symbol most significant."""
    seqs = np.asarray(seqs, dtype=np.int64)
    n = seqs.shape[-1]
    if card ** n >= 2 ** 63:
        raise ResourceError(f"{card}^{n} sequences do not fit a 63-bit index")
    key = np.zeros(seqs.shape[:-1], dtype=np.int64)
    for t in range(n):
        key = key * card + seqs[..., t]
    return key


def all_sequences(card: int, n: int, start: int = 0, stop: Optional[int] = None) -> np.ndarray:
    stop = card ** n if stop is None else stop
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((idx.size, n), dtype=np.int64)
    for t in range(n - 1, -1, -1):
        out[:, t] = idx % card
        idx //= card
    return out


def _mix64(h: np.ndarray) -> np.ndarray:
    h = h ^ (h >> np.uint64(30))
    h = h * np.uint64(0xBF58476D1CE4E5B9)
    h = h ^ (h >> np.uint64(27))
    h = h * np.uint64(0x94D049BB133111EB)
    return h ^ (h >> np.uint64(31))


class HashBins:
    """Keyed pseudorandom assignment of sequences to ``2**bits`` bins."""

    def __init__(self, key: int, bits: int):
        if not 0 <= bits <= 62:
            raise ResourceError(f"2^{bits} bins exceed the supported range")
        self.key = np.uint64(key)
        self.bits = int(bits)

    @property
    def n_bins(self) -> int:
        return 1 << self.bits

    def __call__(self, seqs) -> np.ndarray:
        seqs = np.asarray(seqs, dtype=np.int64)
        h = np.full(seqs.shape[:-1], self.key, dtype=np.uint64)
        with np.errstate(over="ignore"):
            for t in range(seqs.shape[-1]):
                h = _mix64(h + _GOLDEN * (seqs[..., t].astype(np.uint64) + np.uint64(1)))
        if self.bits == 0:
            return np.zeros(h.shape, dtype=np.int64)
        return (h >> np.uint64(64 - self.bits)).astype(np.int64)

    def __eq__(self, other):
        return isinstance(other, HashBins) and (self.key, self.bits) == (other.key, other.bits)


class TableBins:
    """Explicit bin of every sequence, indexed by mixed-radix order."""

    def __init__(self, table, card: int, n_bins: Optional[int] = None):
        self.table = np.asarray(table, dtype=np.int64)
        self.card = int(card)
        self.n_bins = int(n_bins if n_bins is not None else self.table.max() + 1)
        if self.table.min() < 0 or self.table.max() >= self.n_bins:
            raise InputError("bin table entries out of range")

    def __call__(self, seqs) -> np.ndarray:
        return self.table[seq_keys(seqs, self.card)]

    def __eq__(self, other):
        return isinstance(other, TableBins) and np.array_equal(self.table, other.table)


class HelperIndex(NamedTuple):
    index: int
    ok: bool


class Message(NamedTuple):
    m_x: int
    s_u: Optional[int] = None
    ok: bool = True


@dataclass(eq=False)
class BinningCode:
    model: str
    n: int
    eps: float
    laws: dict                      # name -> probability table, axes in the order of the name
    helper_codebook: np.ndarray
    x_bin_map: object
    u_codebook: Optional[np.ndarray] = None
    u_bins: Optional[np.ndarray] = None
    n_u_bins: int = 1
    rates_used: dict = field(default_factory=dict)
    _u_lookup: Optional[tuple] = field(default=None, repr=False)
    _u_law: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        if self.model == "two":
            self._u_law = _deterministic_law(self.laws["xvu"])
            nu = self.laws["xvu"].shape[2]
            if self._u_law is not None and nu ** self.n < 2 ** 63:
                keys = seq_keys(self.u_codebook, nu)
                uk, first = np.unique(keys, return_index=True)
                self._u_lookup = (uk, first)

    def __eq__(self, other):
        if not isinstance(other, BinningCode):
            return NotImplemented
        same = lambda a, b: (a is None and b is None) or (a is not None and b is not None and np.array_equal(a, b))
        return (self.model == other.model and self.n == other.n and self.eps == other.eps
                and same(self.helper_codebook, other.helper_codebook)
                and self.x_bin_map == other.x_bin_map
                and same(self.u_codebook, other.u_codebook) and same(self.u_bins, other.u_bins)
                and self.rates_used == other.rates_used)


def _deterministic_law(p_xvu: np.ndarray) -> Optional[np.ndarray]:
    """f with u = f[x, v] when U is a function of (X, V) on the support, else None."""
    nx, nv, _ = p_xvu.shape
    f = np.zeros((nx, nv), dtype=np.int64)
    for x in range(nx):
        for v in range(nv):
            nz = np.flatnonzero(p_xvu[x, v] > 0)
            if nz.size > 1:
                return None
            if nz.size == 1:
                f[x, v] = nz[0]
    return f


def _draw(rng, p, size):
    p = np.asarray(p, dtype=float)
    return rng.choice(p.size, size=size, p=p / p.sum()).astype(np.int64)


def _check_size(count: int, n: int, what: str):
    if count * n > CODEBOOK_GUARD:
        raise ResourceError(f"{what} of {count} sequences of length {n} exceeds the memory guard")


def build_code(cfg: SimConfig, x_bin_map=None) -> BinningCode:
    """Draw a code from ``cfg.seed``; ``x_bin_map`` overrides the random x-binning."""
    n, m = cfg.n, cfg.rate_margin
    rng = code_rng(cfg.seed, 0)
    if cfg.model == "one":
        d = joint_theorem1(cfg.source, cfg.aux)
    else:
        d = joint_theorem2(cfg.source, cfg.aux)
    laws = {"xy": d.table(["X", "Y"]), "vy": d.table(["V", "Y"]), "vx": d.table(["V", "X"])}
    i_vy = mutual_info(d, "V", "Y")
    k_v = exponent(n, i_vy + m)
    rates = {"I(V;Y)": i_vy, "helper_bits": k_v}
    _check_size(1 << k_v, n, "helper codebook")
    helper = _draw(rng, d.table(["V"]), (1 << k_v, n))
    key = int(rng.integers(0, 2 ** 64, dtype=np.uint64))
    if cfg.model == "one":
        h_xv = cond_entropy(d, "X", "V")
        k_x = exponent(n, h_xv + m)
        rates.update({"H(X|V)": h_xv, "x_bin_bits": k_x})
        xmap = x_bin_map if x_bin_map is not None else HashBins(key, k_x)
        return BinningCode("one", n, cfg.typ_eps, laws, helper, xmap, rates_used=rates)
    laws.update({"xvu": d.table(["X", "V", "U"]), "uv": d.table(["U", "V"]),
                 "uvx": d.table(["U", "V", "X"])})
    i_u = mutual_info(d, ["X", "V"], "U")
    i_xu_v = cond_mutual_info(d, "X", "U", "V")
    h_x_uv = cond_entropy(d, "X", ["U", "V"])
    k_u, k_s, k_x = exponent(n, i_u + m), exponent(n, i_xu_v + m), exponent(n, h_x_uv + m)
    if k_s > 62:
        raise ResourceError(f"2^{k_s} u-bins exceed the supported range")
    rates.update({"I(X,V;U)": i_u, "I(X;U|V)": i_xu_v, "H(X|U,V)": h_x_uv,
                  "u_codebook_bits": k_u, "u_bin_bits": k_s, "x_bin_bits": k_x})
    _check_size(1 << k_u, n, "u codebook")
    ucode = _draw(rng, d.table(["U"]), (1 << k_u, n))
    ubins = rng.integers(0, 1 << k_s, size=1 << k_u, dtype=np.int64)
    xmap = x_bin_map if x_bin_map is not None else HashBins(key, k_x)
    return BinningCode("two", n, cfg.typ_eps, laws, helper, xmap, ucode, ubins, 1 << k_s, rates)


def _first_typical(codebook: np.ndarray, others, law: np.ndarray, eps: float) -> int:
    """Index of the first codeword c with (*others, c) typical for ``law``; -1 if none."""
    n = codebook.shape[1]
    k = law.shape[-1]
    ctx = np.zeros(n, dtype=np.int64)
    for o, c in zip(others, law.shape[:-1]):
        ctx = ctx * c + np.asarray(o, dtype=np.int64)
    idx = ctx[None, :] * k + codebook
    p = law.ravel()
    step = max(1, (1 << 20) // max(1, n * p.size))
    for s in range(0, codebook.shape[0], step):
        ok = counts_ok(joint_counts(idx[s:s + step], p.size), n, p, eps)
        hit = np.flatnonzero(ok)
        if hit.size:
            return int(s + hit[0])
    return -1


def helper_encode(code: BinningCode, y_seq, eps: Optional[float] = None) -> HelperIndex:
    """First helper codeword jointly typical with ``y_seq``; index 0 on failure."""
    eps = code.eps if eps is None else eps
    y = np.asarray(y_seq, dtype=np.int64)
    if y.shape != (code.n,):
        raise InputError(f"expected a sequence of length {code.n}")
    # law axes are (V, Y); the codeword is the last variable after transposing
    i = _first_typical(code.helper_codebook, [y], code.laws["vy"].T, eps)
    return HelperIndex(i, True) if i >= 0 else HelperIndex(0, False)


def u_search(code: BinningCode, xs, v_seq, eps: Optional[float] = None) -> np.ndarray:
    """For each row of ``xs``, the first u codeword typical with (x, v); -1 if none."""
    eps = code.eps if eps is None else eps
    xs = np.atleast_2d(np.asarray(xs, dtype=np.int64))
    v = np.asarray(v_seq, dtype=np.int64)
    law = code.laws["xvu"]
    if code._u_lookup is not None:
        # the only candidate is u = f(x, v); robust typicality forbids every other symbol
        u = code._u_law[xs, v[None, :]]
        nx, nv, nu = law.shape
        idx = (xs * nv + v[None, :]) * nu + u
        ok = counts_ok(joint_counts(idx, law.size), code.n, law.ravel(), eps)
        keys, first = code._u_lookup
        k = seq_keys(u, nu)
        pos = np.minimum(np.searchsorted(keys, k), keys.size - 1)
        found = ok & (keys[pos] == k)
        return np.where(found, first[pos], -1)
    return np.array([_first_typical(code.u_codebook, [x, v], law, eps) for x in xs], dtype=np.int64)


def alice_encode(code: BinningCode, x_seq, v_seq=None, model: Optional[str] = None,
                 eps: Optional[float] = None) -> Message:
    model = code.model if model is None else model
    if model != code.model:
        raise InputError(f"code was built for model {code.model}")
    x = np.asarray(x_seq, dtype=np.int64)
    if x.shape != (code.n,):
        raise InputError(f"expected a sequence of length {code.n}")
    m_x = int(code.x_bin_map(x[None, :])[0])
    if model == "one":
        return Message(m_x)
    if v_seq is None:
        raise InputError("model two needs the helper codeword at Alice")
    j = int(u_search(code, x[None, :], v_seq, eps)[0])
    if j < 0:
        return Message(m_x, int(code.u_bins[0]), False)
    return Message(m_x, int(code.u_bins[j]), True)


def _unique_in_bin(cands: np.ndarray, code: BinningCode, m_x: int) -> Optional[np.ndarray]:
    if cands.shape[0] == 0:
        return None
    hit = cands[code.x_bin_map(cands) == m_x]
    return hit[0].copy() if hit.shape[0] == 1 else None


def _typical_rows(rows: np.ndarray, others, law: np.ndarray, eps: float, n: int) -> np.ndarray:
    ctx = np.zeros(n, dtype=np.int64)
    for o, c in zip(others, law.shape[:-1]):
        ctx = ctx * c + np.asarray(o, dtype=np.int64)
    idx = ctx[None, :] * law.shape[-1] + rows
    return rows[counts_ok(joint_counts(idx, law.size), n, law.ravel(), eps)]


def typical_x_given(code: BinningCode, others, law: np.ndarray, eps: float) -> np.ndarray:
    """All x typical with ``others`` under ``law`` (last axis X)."""
    cands = typical_completions(others, law, eps, slack=COUNT_TOL)
    return _typical_rows(cands, others, law, eps, code.n)


def bob_decode(code: BinningCode, message: Message, helper_index, model: Optional[str] = None,
               eps: Optional[float] = None) -> Optional[np.ndarray]:
    """Decoded x^n, or None when no unique candidate survives some stage."""
    model = code.model if model is None else model
    if model != code.model:
        raise InputError(f"code was built for model {code.model}")
    eps = code.eps if eps is None else eps
    l = int(helper_index.index if isinstance(helper_index, HelperIndex) else helper_index)
    v = code.helper_codebook[l]
    if model == "one":
        return _unique_in_bin(typical_x_given(code, [v], code.laws["vx"], eps), code, message.m_x)
    members = np.flatnonzero(code.u_bins == message.s_u)
    if members.size == 0:
        return None
    hits = _typical_rows(code.u_codebook[members], [v], code.laws["uv"].T, eps, code.n)
    # repeated draws of one sequence are a single candidate
    hits = np.unique(hits, axis=0)
    if hits.shape[0] != 1:
        return None
    u_hat = hits[0]
    return _unique_in_bin(typical_x_given(code, [u_hat, v], code.laws["uvx"], eps), code, message.m_x)
