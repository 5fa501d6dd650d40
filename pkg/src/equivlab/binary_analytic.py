"""Closed-form boundaries for a doubly symmetric binary source pair.

X and Y are uniform bits with X = Y xor E, E ~ Ber(delta).  A helper budget
R_y buys a description V = Y xor N with N ~ Ber(h^-1(1 - R_y)); Mrs. Gerber's
lemma makes that choice optimal, which gives

    R_x >= h(delta * h^-1(1 - R_y))
    one-sided equivocation  <= 1 - h(delta * h^-1(1 - R_y))
    two-sided equivocation  <= min(R_y, 1)

where ``*`` is binary convolution.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InputError
from .infomeasures import CondChannel, binary_convolution, binary_entropy, inv_binary_entropy
from .regions import AuxSystem1, AuxSystem2, SourcePair, fmt6

FIG4_HEADER = "ry,rx_min,delta_one,delta_two"


@dataclass(frozen=True)
class BssSource:
    delta: float

    def __post_init__(self):
        if not 0.0 <= self.delta <= 0.5:
            raise InputError(f"crossover {self.delta} outside [0, 1/2]")

    def pair(self) -> SourcePair:
        return SourcePair.bss(self.delta)


def mgl_bound(delta: float, beta: float) -> float:
    """h(delta * h^-1(beta)): the least H(X|V) compatible with H(Y|V) >= beta."""
    if not 0.0 <= delta <= 0.5:
        raise InputError(f"crossover {delta} outside [0, 1/2]")
    if not 0.0 <= beta <= 1.0:
        raise InputError(f"entropy level {beta} outside [0, 1]")
    return binary_entropy(binary_convolution(delta, inv_binary_entropy(beta)))


def _delta_of(src) -> float:
    return src.delta if isinstance(src, BssSource) else BssSource(float(src)).delta


def one_sided_boundary(src, ry: float) -> tuple[float, float]:
    """(rx_min, delta_max) for the helper seen by Bob only; budgets above 1 bit are clipped."""
    if ry < 0:
        raise InputError(f"negative helper rate {ry}")
    rx = mgl_bound(_delta_of(src), 1.0 - min(ry, 1.0))
    return rx, 1.0 - rx


def two_sided_boundary(src, ry: float) -> tuple[float, float]:
    """(rx_min, delta_max) when Alice also sees the helper's description."""
    if ry < 0:
        raise InputError(f"negative helper rate {ry}")
    rx = mgl_bound(_delta_of(src), 1.0 - min(ry, 1.0))
    return rx, min(ry, 1.0)


def achieving_channels(src, ry: float, model: str = "one"):
    """V = Y xor Ber(h^-1(1 - ry)); for model ``two`` also U = X xor V."""
    if not 0.0 <= ry <= 1.0:
        raise InputError(f"helper rate {ry} outside [0, 1]; clip before calling")
    alpha = inv_binary_entropy(1.0 - ry)
    v = CondChannel.bsc(("Y", 2), "V", alpha)
    if model == "one":
        return AuxSystem1(v)
    if model == "two":
        u = CondChannel.deterministic([("X", 2), ("V", 2)], ("U", 2), lambda x, vv: x ^ vv)
        return AuxSystem2(v, u)
    raise InputError(f"unknown model {model!r}")


def figure4_table(delta: float, ry_grid: Sequence[float]) -> list[tuple[float, float, float, float]]:
    """Rows (ry, rx_min, delta_one, delta_two) of the rate-equivocation plot."""
    grid = list(ry_grid)
    if not grid:
        raise InputError("empty rate grid")
    src = BssSource(delta)
    rows = []
    for ry in grid:
        if not 0.0 <= ry <= 1.5:
            raise InputError(f"helper rate {ry} outside [0, 1.5]")
        rx, d1 = one_sided_boundary(src, ry)
        _, d2 = two_sided_boundary(src, ry)
        rows.append((float(ry), rx, d1, d2))
    return rows


def figure4_csv(delta: float, rows) -> str:
    lines = [f"# delta={delta!r}", FIG4_HEADER]
    lines += [",".join(fmt6(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"
