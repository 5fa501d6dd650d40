"""Single-letter rate-equivocation regions for secure source coding with a helper.

Three models are covered:

* ``one``   -- helper output seen by Bob only; a point is
  ``(H(X|V), I(Y;V), I(X;V))`` for p(x,y)p(v|y).
* ``two``   -- helper output seen by Alice and Bob; equivocation becomes
  ``min(I(X;V|U), R_y)`` for p(x,y)p(v|y)p(u|x,v).
* ``three`` -- secure and insecure helper links, side information W at Bob and
  Z at Eve, for p(x,y)p(w,z|x)p(v1,v2|y)p(u|x,v1,v2).

The optimizers search auxiliary channels by multi-start projected ascent.
What they return is an achievable point certified by a concrete auxiliary
system, not a proof of optimality.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from . import _ascent as asc
from .errors import ConstraintError, InputError
from .infomeasures import (
    CondChannel, JointDist, cond_entropy, cond_mutual_info, extend, is_markov,
    mutual_info,
)

log = logging.getLogger(__name__)

FEAS_TOL = 1e-9
TIE_TOL = 1e-8
MERGE_TV = 1e-6
PENALTY = 1e3


@dataclass(frozen=True)
class SourcePair:
    joint: JointDist

    def __post_init__(self):
        if self.joint.names != ("X", "Y"):
            raise InputError(f"a source pair needs variables (X, Y), got {self.joint.names}")

    @classmethod
    def bss(cls, delta: float) -> "SourcePair":
        """Uniform X, Y with X = Y xor Ber(delta)."""
        if not 0.0 <= delta <= 0.5:
            raise InputError(f"crossover {delta} outside [0, 1/2]")
        a, b = (1 - delta) / 2, delta / 2
        return cls(JointDist([("X", 2), ("Y", 2)], [[a, b], [b, a]]))

    @property
    def nx(self) -> int:
        return self.joint.var("X").card

    @property
    def ny(self) -> int:
        return self.joint.var("Y").card


@dataclass(frozen=True)
class SecInsSource:
    joint: JointDist

    def __post_init__(self):
        if self.joint.names != ("W", "X", "Y", "Z"):
            raise InputError(f"a secure/insecure source needs variables (W, X, Y, Z), got {self.joint.names}")
        if not is_markov(self.joint, "Y", "X", ["W", "Z"], tol=1e-10):
            leak = cond_mutual_info(self.joint, "Y", ["W", "Z"], "X", clamp=False)
            raise InputError(f"source violates Y -> X -> (W,Z): I(Y;(W,Z)|X) = {leak:.3e} > 1e-10")

    @classmethod
    def from_parts(cls, pair: SourcePair, side: CondChannel) -> "SecInsSource":
        """p(x,y) p(w,z|x)."""
        if tuple(v.name for v in side.inputs) != ("X",) or sorted(v.name for v in side.outputs) != ["W", "Z"]:
            raise InputError("side-information channel must be p(w,z|x)")
        return cls(extend(pair.joint, side))

    @classmethod
    def without_side_info(cls, pair: SourcePair) -> "SecInsSource":
        side = CondChannel([("X", pair.nx)], [("W", 1), ("Z", 1)], np.ones(pair.nx))
        return cls.from_parts(pair, side)

    @property
    def pair(self) -> SourcePair:
        return SourcePair(JointDist([self.joint.var("X"), self.joint.var("Y")], self.joint.table(["X", "Y"])))


def _expect(ch: CondChannel, inputs: Sequence[tuple[str, int]], outputs: Sequence[str], what: str):
    got_in = [(v.name, v.card) for v in ch.inputs]
    if got_in != list(inputs):
        raise InputError(f"{what}: expected inputs {list(inputs)}, got {got_in}")
    got_out = [v.name for v in ch.outputs]
    if got_out != list(outputs):
        raise InputError(f"{what}: expected outputs {list(outputs)}, got {got_out}")


@dataclass(frozen=True)
class AuxSystem1:
    v_channel: CondChannel

    @property
    def v_card(self) -> int:
        return self.v_channel.outputs[0].card


@dataclass(frozen=True)
class AuxSystem2:
    v_channel: CondChannel
    u_channel: CondChannel

    @property
    def v_card(self) -> int:
        return self.v_channel.outputs[0].card

    @property
    def u_card(self) -> int:
        return self.u_channel.outputs[0].card


@dataclass(frozen=True)
class AuxSystem3:
    v12_channel: CondChannel
    u_channel: CondChannel

    @property
    def v1_card(self) -> int:
        return self.v12_channel.outputs[0].card

    @property
    def v2_card(self) -> int:
        return self.v12_channel.outputs[1].card

    @property
    def u_card(self) -> int:
        return self.u_channel.outputs[0].card


AuxSystem = Union[AuxSystem1, AuxSystem2, AuxSystem3]


@dataclass(frozen=True)
class RegionPoint:
    """Rate lower bounds and equivocation upper bound for one auxiliary system.

    For model ``three`` ``ry_min`` holds the secure-link rate and ``rins_min``
    the insecure-link rate.
    """
    model: str
    rx_min: float
    ry_min: float
    delta_cap: float
    rins_min: float = 0.0


def u_card_bound3(nx: int, ny: int) -> int:
    return nx * ny * ny + 7 * nx * ny + 12 * nx + 2


def _check_aux1(src: SourcePair, aux: AuxSystem1):
    _expect(aux.v_channel, [("Y", src.ny)], ["V"], "p(v|y)")
    if aux.v_card > src.ny + 2:
        raise InputError(f"|V| = {aux.v_card} exceeds |Y|+2 = {src.ny + 2}")


def _check_aux2(src: SourcePair, aux: AuxSystem2):
    _expect(aux.v_channel, [("Y", src.ny)], ["V"], "p(v|y)")
    _expect(aux.u_channel, [("X", src.nx), ("V", aux.v_card)], ["U"], "p(u|x,v)")
    if aux.v_card > src.ny + 2:
        raise InputError(f"|V| = {aux.v_card} exceeds |Y|+2 = {src.ny + 2}")
    cap = src.nx * src.ny + 2 * src.nx
    if aux.u_card > cap:
        raise InputError(f"|U| = {aux.u_card} exceeds |X||Y|+2|X| = {cap}")


def _check_aux3(src: SecInsSource, aux: AuxSystem3):
    nx, ny = src.joint.var("X").card, src.joint.var("Y").card
    _expect(aux.v12_channel, [("Y", ny)], ["V1", "V2"], "p(v1,v2|y)")
    _expect(aux.u_channel, [("X", nx), ("V1", aux.v1_card), ("V2", aux.v2_card)], ["U"], "p(u|x,v1,v2)")
    if aux.v1_card > ny + 3:
        raise InputError(f"|V1| = {aux.v1_card} exceeds |Y|+3 = {ny + 3}")
    if aux.v2_card > ny + 4:
        raise InputError(f"|V2| = {aux.v2_card} exceeds |Y|+4 = {ny + 4}")
    if aux.u_card > u_card_bound3(nx, ny):
        raise InputError(f"|U| = {aux.u_card} exceeds the bound {u_card_bound3(nx, ny)}")


def joint_theorem1(src: SourcePair, aux: AuxSystem1) -> JointDist:
    _check_aux1(src, aux)
    return extend(src.joint, aux.v_channel)


def joint_theorem2(src: SourcePair, aux: AuxSystem2) -> JointDist:
    _check_aux2(src, aux)
    return extend(extend(src.joint, aux.v_channel), aux.u_channel)


def joint_theorem3(src: SecInsSource, aux: AuxSystem3) -> JointDist:
    _check_aux3(src, aux)
    return extend(extend(src.joint, aux.v12_channel), aux.u_channel)


def eval_theorem1(src: SourcePair, aux: AuxSystem1) -> RegionPoint:
    d = joint_theorem1(src, aux)
    return RegionPoint("one", cond_entropy(d, "X", "V"), mutual_info(d, "Y", "V"), mutual_info(d, "X", "V"))


def eval_theorem2(src: SourcePair, aux: AuxSystem2, ry_operating: float) -> RegionPoint:
    d = joint_theorem2(src, aux)
    ry = mutual_info(d, "Y", "V")
    if ry_operating < ry - FEAS_TOL:
        raise ConstraintError(f"helper rate {ry_operating} is below I(Y;V) = {ry}")
    delta = min(cond_mutual_info(d, "X", "V", "U"), ry_operating)
    return RegionPoint("two", cond_entropy(d, "X", "V"), ry, max(delta, 0.0))


def eval_theorem3(src: SecInsSource, aux: AuxSystem3, rsec_operating: float) -> RegionPoint:
    d = joint_theorem3(src, aux)
    rsec = cond_mutual_info(d, "Y", "V1", "W")
    if rsec_operating < rsec - FEAS_TOL:
        raise ConstraintError(f"secure-link rate {rsec_operating} is below I(Y;V1|W) = {rsec}")
    rins = cond_mutual_info(d, "Y", "V2", ["W", "V1"])
    secret = min(rsec_operating, cond_mutual_info(d, "X", "V1", ["U", "V2", "W"]))
    bob_side = cond_mutual_info(d, "X", "W", ["U", "V2"])
    eve_side = cond_mutual_info(d, "X", "Z", ["U", "V2"])
    delta = max(0.0, secret + bob_side - eve_side)
    return RegionPoint("three", cond_entropy(d, "X", ["V1", "V2", "W"]), rsec, delta, rins)


# --------------------------------------------------------------------------
# optimization


@dataclass(frozen=True)
class OptimizeOptions:
    starts: int = 64
    seed: int = 0
    max_passes: int = 200
    tol: float = 1e-8
    penalty: float = PENALTY
    v_card: Optional[int] = None
    u_card: Optional[int] = None
    v1_card: Optional[int] = None
    v2_card: Optional[int] = None
    rins_budget: float = 0.0
    workers: int = 1


@dataclass
class _Candidate:
    point: RegionPoint
    aux: AuxSystem
    index: int
    eff_card: int = 0


def start_rng(seed: int, index: int) -> np.random.Generator:
    """Counter-based stream for start ``index`` of run ``seed``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,))))


def effective_card(d: JointDist, name: str) -> int:
    """Number of distinct used symbols of ``name`` (conditionals within TV 1e-6 are merged)."""
    ax = d.axes(name)[0]
    t = np.moveaxis(d.probs, ax, 0).reshape(d.probs.shape[ax], -1)
    mass = t.sum(axis=1)
    reps: list[np.ndarray] = []
    for v in np.flatnonzero(mass > 1e-12):
        cond = t[v] / mass[v]
        if not any(0.5 * np.abs(cond - r).sum() < MERGE_TV for r in reps):
            reps.append(cond)
    return len(reps)


def _pad_cols(m: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros((m.shape[0], n))
    out[:, : m.shape[1]] = m
    return out


def _identity_rows(ny: int, nv: int) -> np.ndarray:
    return _pad_cols(np.eye(ny), nv)


def _modular_u_rows(nx: int, nv: int, nu: int) -> np.ndarray:
    """p(u|x,v) putting all mass on (x + v) mod |X|; rows ordered (x, v)."""
    rows = np.zeros((nx * nv, nu))
    for x in range(nx):
        for v in range(nv):
            rows[x * nv + v, (x + v) % nx] = 1.0
    return rows


def _const_rows(n_rows: int, n_out: int) -> np.ndarray:
    rows = np.zeros((n_rows, n_out))
    rows[:, 0] = 1.0
    return rows


def _dirichlet_rows(rng, n_rows, n_out):
    return rng.dirichlet(np.ones(n_out), size=n_rows)


def _pool_map(fn, items, workers: int):
    if workers <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def _select(cands: list[_Candidate], prefer_low_rx: bool) -> _Candidate:
    best = max(c.point.delta_cap for c in cands)
    near = [c for c in cands if c.point.delta_cap >= best - TIE_TOL]
    if prefer_low_rx:
        near.sort(key=lambda c: (c.point.rx_min, c.eff_card, c.index))
    else:
        near.sort(key=lambda c: (-c.point.delta_cap, c.eff_card, c.index))
    return near[0]


class _Problem:
    """One auxiliary-channel search: layout, objective, feasibility and decoding."""

    model: asc.FactorModel

    def weigh(self, vals):
        raise NotImplementedError

    def violation(self, vals) -> float:
        raise NotImplementedError

    def to_candidate(self, rows, index) -> _Candidate:
        raise NotImplementedError

    def seeds(self) -> list[list[np.ndarray]]:
        raise NotImplementedError

    def random_rows(self, rng) -> list[np.ndarray]:
        return [_dirichlet_rows(rng, *self.model.row_shape(k)) for k in range(len(self.model.channels))]

    def repair(self, rows):
        return asc.mix_to_feasible(self.model, rows, 0, self.violation)

    def run(self, opts: OptimizeOptions, warm: Optional[list[np.ndarray]] = None) -> _Candidate:
        seeds = self.seeds()
        if warm is not None:
            seeds = [warm] + seeds
        jobs = [("seed", i, s) for i, s in enumerate(seeds)] + [("rand", i, None) for i in range(opts.starts)]

        def work(job):
            kind, i, rows = job
            index = i if kind == "seed" else len(seeds) + i
            out = []
            if kind == "seed":
                out.append(self.to_candidate(self.repair(rows), index))
            else:
                rows = self.random_rows(start_rng(opts.seed, i))
            rows, _ = asc.ascend(self.model, rows, self.weigh, max_passes=opts.max_passes, tol=opts.tol)
            out.append(self.to_candidate(self.repair(rows), index))
            return out

        cands = [c for group in _pool_map(work, jobs, opts.workers) for c in group]
        return _select(cands, prefer_low_rx=self.prefer_low_rx)

    prefer_low_rx = False


def _rows_to_channel(inputs, outputs, rows):
    rows = np.maximum(rows, 0.0)
    rows = rows / rows.sum(axis=1, keepdims=True)
    return CondChannel(inputs, outputs, rows)


class _Problem1(_Problem):
    # axes: X=0, Y=1, V=2
    def __init__(self, src: SourcePair, budget: float, opts: OptimizeOptions):
        self.src, self.budget, self.pen = src, budget, opts.penalty
        self.nx, self.ny = src.nx, src.ny
        self.nv = opts.v_card or self.ny + 2
        base = src.joint.probs.reshape(self.nx, self.ny, 1)
        self.model = asc.FactorModel(base, (self.nx, self.ny, self.nv), [asc.Channel((1, 2), 1)], {
            "ixv": asc.cmi([0], [2]),
            "iyv": asc.cmi([1], [2]),
        })

    def weigh(self, vals):
        excess = vals["iyv"] - self.budget
        if excess > 0:
            return vals["ixv"] - self.pen * excess, {"ixv": 1.0, "iyv": -self.pen}
        return vals["ixv"], {"ixv": 1.0}

    def violation(self, vals):
        return vals["iyv"] - self.budget

    def seeds(self):
        return [[_const_rows(self.ny, self.nv)], [_identity_rows(self.ny, self.nv)]]

    def to_candidate(self, rows, index):
        aux = AuxSystem1(_rows_to_channel([("Y", self.ny)], [("V", self.nv)], rows[0]))
        point = eval_theorem1(self.src, aux)
        return _Candidate(point, aux, index, effective_card(joint_theorem1(self.src, aux), "V"))


class _Problem2(_Problem):
    # axes: X=0, Y=1, V=2, U=3
    prefer_low_rx = True

    def __init__(self, src: SourcePair, budget: float, opts: OptimizeOptions):
        self.src, self.budget, self.pen = src, budget, opts.penalty
        self.nx, self.ny = src.nx, src.ny
        self.nv = opts.v_card or self.ny + 2
        self.nu = opts.u_card or self.nx * self.ny + 2 * self.nx
        base = src.joint.probs.reshape(self.nx, self.ny, 1, 1)
        self.model = asc.FactorModel(base, (self.nx, self.ny, self.nv, self.nu),
                                     [asc.Channel((1, 2), 1), asc.Channel((0, 2, 3), 2)], {
            "ixv_u": asc.cmi([0], [2], [3]),
            "iyv": asc.cmi([1], [2]),
        })

    def weigh(self, vals):
        w = {}
        if vals["ixv_u"] <= self.budget:
            obj = vals["ixv_u"]
            w["ixv_u"] = 1.0
        else:
            obj = self.budget
        excess = vals["iyv"] - self.budget
        if excess > 0:
            obj -= self.pen * excess
            w["iyv"] = -self.pen
        return obj, w

    def violation(self, vals):
        return vals["iyv"] - self.budget

    def seeds(self):
        nx, ny, nv, nu = self.nx, self.ny, self.nv, self.nu
        const_u = _const_rows(nx * nv, nu)
        out = [
            [_const_rows(ny, nv), const_u],
            [_identity_rows(ny, nv), const_u],
        ]
        if nu >= nx:
            mod_u = _modular_u_rows(nx, nv, nu)
            out.append([_identity_rows(ny, nv), mod_u])
            if nv >= nx:
                key = np.zeros((ny, nv))
                key[:, :nx] = 1.0 / nx
                out.append([key, mod_u])
        return out

    def to_candidate(self, rows, index):
        aux = AuxSystem2(_rows_to_channel([("Y", self.ny)], [("V", self.nv)], rows[0]),
                         _rows_to_channel([("X", self.nx), ("V", self.nv)], [("U", self.nu)], rows[1]))
        point = eval_theorem2(self.src, aux, self.budget)
        return _Candidate(point, aux, index, effective_card(joint_theorem2(self.src, aux), "V"))


class _Problem3(_Problem):
    # axes: W=0, X=1, Y=2, Z=3, V1=4, V2=5, U=6
    def __init__(self, src: SecInsSource, rsec: float, rins: float, opts: OptimizeOptions):
        self.src, self.rsec, self.rins, self.pen = src, rsec, rins, opts.penalty
        j = src.joint
        self.nw, self.nx, self.ny, self.nz = (j.var(n).card for n in ("W", "X", "Y", "Z"))
        self.n1 = opts.v1_card or self.ny + 3
        self.n2 = opts.v2_card or self.ny + 4
        bound = u_card_bound3(self.nx, self.ny)
        self.nu = opts.u_card or min(bound, self.nx * self.n1 * self.n2)
        if self.nu > bound:
            raise InputError(f"|U| = {self.nu} exceeds the bound {bound}")
        if self.nu < bound:
            log.info("theorem 3 search uses |U| = %d, below the cardinality bound %d", self.nu, bound)
        base = j.probs.reshape(self.nw, self.nx, self.ny, self.nz, 1, 1, 1)
        W, X, Y, Z, V1, V2, U = range(7)
        self.model = asc.FactorModel(base, (self.nw, self.nx, self.ny, self.nz, self.n1, self.n2, self.nu),
                                     [asc.Channel((Y, V1, V2), 1), asc.Channel((X, V1, V2, U), 3)], {
            "secret": asc.cmi([X], [V1], [U, V2, W]),
            "bob": asc.cmi([X], [W], [U, V2]),
            "eve": asc.cmi([X], [Z], [U, V2]),
            "rsec": asc.cmi([Y], [V1], [W]),
            "rins": asc.cmi([Y], [V2], [W, V1]),
        })

    def weigh(self, vals):
        w = {"bob": 1.0, "eve": -1.0}
        if vals["secret"] <= self.rsec:
            core = vals["secret"]
            w["secret"] = 1.0
        else:
            core = self.rsec
        obj = core + vals["bob"] - vals["eve"]
        if obj < 0:
            obj, w = 0.0, {}
        for key, budget in (("rsec", self.rsec), ("rins", self.rins)):
            excess = vals[key] - budget
            if excess > 0:
                obj -= self.pen * excess
                w[key] = w.get(key, 0.0) - self.pen
        return obj, w

    def violation(self, vals):
        return max(vals["rsec"] - self.rsec, vals["rins"] - self.rins)

    def seeds(self):
        nx, ny, n1, n2, nu = self.nx, self.ny, self.n1, self.n2, self.nu
        n_u_rows = nx * n1 * n2
        const_v = _const_rows(ny, n1 * n2)
        # V1 = copy of Y (mixed down to budget by repair), V2 = 0
        copy_v1 = np.zeros((ny, n1 * n2))
        for y in range(min(ny, n1)):
            copy_v1[y, y * n2] = 1.0
        u_is_x = np.zeros((n_u_rows, nu))
        mod_u = np.zeros((n_u_rows, nu))
        for x in range(nx):
            for v1 in range(n1):
                for v2 in range(n2):
                    r = (x * n1 + v1) * n2 + v2
                    u_is_x[r, x % nu] = 1.0
                    mod_u[r, (x + v1) % nx if nu >= nx else 0] = 1.0
        const_u = _const_rows(n_u_rows, nu)
        out = [
            [const_v, const_u],
            [const_v, u_is_x],
            [copy_v1, const_u],
            [copy_v1, mod_u],
        ]
        if n1 >= nx:
            key = np.zeros((ny, n1 * n2))
            for v1 in range(nx):
                key[:, v1 * n2] = 1.0 / nx
            out.append([key, mod_u])
        return out

    def to_candidate(self, rows, index):
        aux = AuxSystem3(
            _rows_to_channel([("Y", self.ny)], [("V1", self.n1), ("V2", self.n2)], rows[0]),
            _rows_to_channel([("X", self.nx), ("V1", self.n1), ("V2", self.n2)], [("U", self.nu)], rows[1]))
        point = eval_theorem3(self.src, aux, self.rsec)
        d = joint_theorem3(self.src, aux)
        return _Candidate(point, aux, index, effective_card(d, "V1") + effective_card(d, "V2"))


def _aux_rows(aux: AuxSystem) -> list[np.ndarray]:
    if isinstance(aux, AuxSystem1):
        return [aux.v_channel.rows.copy()]
    if isinstance(aux, AuxSystem2):
        return [aux.v_channel.rows.copy(), aux.u_channel.rows.copy()]
    return [aux.v12_channel.rows.copy(), aux.u_channel.rows.copy()]


def _warm_rows(problem: _Problem, warm: Optional[AuxSystem]):
    if warm is None:
        return None
    rows = _aux_rows(warm)
    shapes = [problem.model.row_shape(k) for k in range(len(rows))]
    if [r.shape for r in rows] != shapes:
        raise InputError("warm start has different channel cardinalities than the search")
    return rows


def optimize_theorem1(src: SourcePair, ry_budget: float, opts: OptimizeOptions = OptimizeOptions(),
                      warm_start: Optional[AuxSystem1] = None) -> tuple[RegionPoint, AuxSystem1]:
    """Largest I(X;V) found with I(Y;V) <= ry_budget."""
    if ry_budget < 0:
        raise InputError(f"negative helper budget {ry_budget}")
    prob = _Problem1(src, ry_budget, opts)
    best = prob.run(opts, _warm_rows(prob, warm_start))
    return best.point, best.aux


def optimize_theorem2(src: SourcePair, ry_budget: float, opts: OptimizeOptions = OptimizeOptions(),
                      warm_start: Optional[AuxSystem2] = None) -> tuple[RegionPoint, AuxSystem2]:
    """Largest min(I(X;V|U), ry_budget) found with I(Y;V) <= ry_budget.

    Among candidates within 1e-8 of the best equivocation, the one with the
    smallest H(X|V) is returned.
    """
    if ry_budget < 0:
        raise InputError(f"negative helper budget {ry_budget}")
    prob = _Problem2(src, ry_budget, opts)
    best = prob.run(opts, _warm_rows(prob, warm_start))
    return best.point, best.aux


def optimize_theorem3(src: SecInsSource, rsec_budget: float, rins_budget: float,
                      opts: OptimizeOptions = OptimizeOptions(),
                      warm_start: Optional[AuxSystem3] = None) -> tuple[RegionPoint, AuxSystem3]:
    """Largest equivocation found with I(Y;V1|W) <= rsec_budget and I(Y;V2|W,V1) <= rins_budget."""
    if rsec_budget < 0 or rins_budget < 0:
        raise InputError("link budgets must be nonnegative")
    prob = _Problem3(src, rsec_budget, rins_budget, opts)
    best = prob.run(opts, _warm_rows(prob, warm_start))
    return best.point, best.aux


def sweep(model: str, src, budget_grid: Sequence[float], opts: OptimizeOptions = OptimizeOptions()
          ) -> list[tuple[RegionPoint, AuxSystem]]:
    """Optimize at each budget, warm-starting from the previous optimum.

    For model ``three`` the grid is over the secure-link budget and
    ``opts.rins_budget`` fixes the insecure one.
    """
    grid = [float(b) for b in budget_grid]
    if not grid:
        raise InputError("empty budget grid")
    if any(b < 0 for b in grid) or any(b2 <= b1 for b1, b2 in zip(grid, grid[1:])):
        raise InputError("budget grid must be nonnegative and strictly increasing")
    out = []
    warm = None
    for b in grid:
        if model == "one":
            res = optimize_theorem1(src, b, opts, warm)
        elif model == "two":
            res = optimize_theorem2(src, b, opts, warm)
        elif model == "three":
            res = optimize_theorem3(src, b, opts.rins_budget, opts, warm)
        else:
            raise InputError(f"unknown model {model!r}")
        out.append(res)
        warm = res[1]
    return out


def fmt6(v: float) -> str:
    """Fixed 6-decimal rendering that never prints a negative zero."""
    s = f"{v:.6f}"
    return "0.000000" if s == "-0.000000" else s


SWEEP_HEADER = "r_budget,rx_min,ry_min,delta_cap"


def sweep_csv(model: str, seed: int, source: str, grid: Sequence[float],
              points: Sequence[RegionPoint], extra_comments: Sequence[str] = ()) -> str:
    lines = [f"# model={model} seed={seed} source={source}"]
    lines += [f"# {c}" for c in extra_comments]
    lines.append(SWEEP_HEADER)
    for b, p in zip(grid, points):
        lines.append(",".join(fmt6(v) for v in (b, p.rx_min, p.ry_min, p.delta_cap)))
    return "\n".join(lines) + "\n"
