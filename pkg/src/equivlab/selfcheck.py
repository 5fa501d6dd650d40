"""Identities that every build must satisfy, runnable outside the test suite.

Each check returns a :class:`CheckResult`; evaluators can be swapped in so a
deliberately broken formula can be shown to trip the right identity.
"""

from __future__ import annotations

from typing import Callable, NamedTuple, Optional

import numpy as np

from . import regions
from .binary_analytic import mgl_bound
from .infomeasures import CondChannel, JointDist, cond_entropy, cond_mutual_info, entropy, mutual_info
from .regions import AuxSystem1, AuxSystem2, AuxSystem3, SecInsSource, SourcePair

EXACT_TOL = 1e-12
MGL_TOL = 1e-9


class CheckResult(NamedTuple):
    name: str
    ok: bool
    detail: str


def _channel(rng, inputs, outputs):
    n_in = int(np.prod([c for _, c in inputs]))
    n_out = int(np.prod([c for _, c in outputs]))
    return CondChannel(inputs, outputs, rng.dirichlet(np.ones(n_out), size=n_in))


def _pair(rng) -> SourcePair:
    nx, ny = (int(c) for c in rng.integers(2, 4, size=2))
    return SourcePair(JointDist([("X", nx), ("Y", ny)], rng.dirichlet(np.ones(nx * ny))))


def _aux2(rng, src: SourcePair) -> AuxSystem2:
    nv = int(rng.integers(1, src.ny + 3))
    nu = int(rng.integers(1, src.nx * src.ny + 2 * src.nx + 1))
    return AuxSystem2(_channel(rng, [("Y", src.ny)], [("V", nv)]),
                      _channel(rng, [("X", src.nx), ("V", nv)], [("U", nu)]))


def lift_to_theorem3(src: SourcePair, aux: AuxSystem2) -> tuple[SecInsSource, AuxSystem3]:
    """Trivial W, Z and V2 around a model-two system."""
    nv, nu = aux.v_card, aux.u_card
    v12 = CondChannel([("Y", src.ny)], [("V1", nv), ("V2", 1)], aux.v_channel.rows)
    u = CondChannel([("X", src.nx), ("V1", nv), ("V2", 1)], [("U", nu)], aux.u_channel.rows)
    return SecInsSource.without_side_info(src), AuxSystem3(v12, u)


def check_theorem3_reduction(cases: int = 100, seed: int = 1, eval2: Optional[Callable] = None,
                             eval3: Optional[Callable] = None) -> CheckResult:
    eval2 = eval2 or regions.eval_theorem2
    eval3 = eval3 or regions.eval_theorem3
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(cases):
        src = _pair(rng)
        aux = _aux2(rng, src)
        d = regions.joint_theorem1(src, AuxSystem1(aux.v_channel))
        ry = mutual_info(d, "Y", "V") + float(rng.uniform(0, 1))
        p2 = eval2(src, aux, ry)
        p3 = eval3(*lift_to_theorem3(src, aux), ry)
        worst = max(worst, abs(p3.delta_cap - p2.delta_cap), abs(p3.rx_min - p2.rx_min),
                    abs(p3.ry_min - p2.ry_min), abs(p3.rins_min))
    return CheckResult("theorem 3 reduction", worst <= EXACT_TOL,
                       f"max deviation from theorem 2 over {cases} systems: {worst:.3e}")


def check_side_information_symmetry(cases: int = 50, seed: int = 2,
                                    eval3: Optional[Callable] = None) -> CheckResult:
    """With W = Z the side-information terms cancel exactly."""
    eval3 = eval3 or regions.eval_theorem3
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(cases):
        src = _pair(rng)
        ns = int(rng.integers(2, 4))
        w = rng.dirichlet(np.ones(ns), size=src.nx)
        side = CondChannel([("X", src.nx)], [("W", ns), ("Z", ns)],
                           np.einsum("xs,st->xst", w, np.eye(ns)).reshape(src.nx, -1))
        s3 = SecInsSource.from_parts(src, side)
        n1, n2 = int(rng.integers(1, 4)), int(rng.integers(1, 3))
        v12 = _channel(rng, [("Y", src.ny)], [("V1", n1), ("V2", n2)])
        u = _channel(rng, [("X", src.nx), ("V1", n1), ("V2", n2)], [("U", int(rng.integers(1, 4)))])
        aux = AuxSystem3(v12, u)
        d = regions.joint_theorem3(s3, aux)
        rsec = cond_mutual_info(d, "Y", "V1", "W") + float(rng.uniform(0, 1))
        want = max(0.0, min(rsec, cond_mutual_info(d, "X", "V1", ["U", "V2", "W"])))
        worst = max(worst, abs(eval3(s3, aux, rsec).delta_cap - want))
    return CheckResult("theorem 3 side-information symmetry", worst <= EXACT_TOL,
                       f"max deviation with W = Z over {cases} systems: {worst:.3e}")


def check_constant_u(cases: int = 100, seed: int = 3, eval2: Optional[Callable] = None) -> CheckResult:
    eval2 = eval2 or regions.eval_theorem2
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(cases):
        src = _pair(rng)
        nv = int(rng.integers(1, src.ny + 3))
        v = _channel(rng, [("Y", src.ny)], [("V", nv)])
        d = regions.joint_theorem1(src, AuxSystem1(v))
        ry = mutual_info(d, "Y", "V") + float(rng.uniform(0, 1))
        aux = AuxSystem2(v, CondChannel.constant([("X", src.nx), ("V", nv)], ("U", 1)))
        want = min(mutual_info(d, "X", "V"), ry)
        worst = max(worst, abs(eval2(src, aux, ry).delta_cap - want))
    return CheckResult("theorem 2 constant-U reduction", worst <= EXACT_TOL,
                       f"max deviation from min(I(X;V), R_y) over {cases} systems: {worst:.3e}")


def check_complementarity(cases: int = 100, seed: int = 4, eval1: Optional[Callable] = None) -> CheckResult:
    eval1 = eval1 or regions.eval_theorem1
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(cases):
        src = _pair(rng)
        v = _channel(rng, [("Y", src.ny)], [("V", int(rng.integers(1, src.ny + 3)))])
        p = eval1(src, AuxSystem1(v))
        worst = max(worst, abs(p.rx_min + p.delta_cap - entropy(src.joint, "X")))
    return CheckResult("theorem 1 complementarity", worst <= 1e-9,
                       f"max |R_x + delta - H(X)| over {cases} systems: {worst:.3e}")


def check_mgl(channels: int = 1000, seed: int = 1) -> CheckResult:
    rng = np.random.default_rng(seed)
    violations = 0
    worst = np.inf
    for _ in range(channels):
        delta = float(rng.uniform(0, 0.5))
        nv = int(rng.integers(1, 5))
        src = SourcePair.bss(delta)
        d = regions.joint_theorem1(src, AuxSystem1(_channel(rng, [("Y", 2)], [("V", nv)])))
        slack = cond_entropy(d, "X", "V") - mgl_bound(delta, min(1.0, max(0.0, cond_entropy(d, "Y", "V"))))
        worst = min(worst, slack)
        violations += slack < -MGL_TOL
    return CheckResult("Mrs. Gerber's lemma", violations == 0,
                       f"{violations} violations in {channels} channels, least slack {worst:.3e}")


def run_checks(seed: int = 1, cases: int = 100, mgl_channels: int = 1000, eval1=None, eval2=None,
               eval3=None) -> list[CheckResult]:
    return [
        check_theorem3_reduction(cases, seed, eval2, eval3),
        check_side_information_symmetry(cases // 2 or 1, seed + 1, eval3),
        check_constant_u(cases, seed + 2, eval2),
        check_complementarity(cases, seed + 3, eval1),
        check_mgl(mgl_channels, seed),
    ]
