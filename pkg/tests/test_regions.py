import numpy as np
import pytest
from conftest import degenerate_lift, random_aux1, random_aux2, random_pair

from equivlab.binary_analytic import BssSource, one_sided_boundary
from equivlab.errors import ConstraintError, InputError
from equivlab.infomeasures import CondChannel, JointDist, entropy, inv_binary_entropy, mutual_info
from equivlab.regions import (
    AuxSystem1, AuxSystem2, AuxSystem3, OptimizeOptions, RegionPoint, SecInsSource, SourcePair,
    eval_theorem1, eval_theorem2, eval_theorem3, joint_theorem1, optimize_theorem1,
    optimize_theorem2, optimize_theorem3, sweep, sweep_csv,
)

H_005 = 0.28639695711595625
ONE_MINUS_H_011 = 0.500084041835472
IXV_BSC011 = 0.3926678636415293
MGL_005_HALF = 0.6073951750171649

FAST = OptimizeOptions(starts=8)


def xor_u(nv=2):
    return CondChannel.deterministic([("X", 2), ("V", nv)], ("U", 2), lambda x, v: x ^ v)


class TestEvalTheorem1:
    def test_useless_helper(self, bss05):
        p = eval_theorem1(bss05, AuxSystem1(CondChannel.constant([("Y", 2)], ("V", 1))))
        assert (p.rx_min, p.ry_min, p.delta_cap) == pytest.approx((1.0, 0.0, 0.0), abs=1e-15)

    def test_identity(self, bss05):
        p = eval_theorem1(bss05, AuxSystem1(CondChannel.copy(("Y", 2), "V")))
        assert (p.rx_min, p.ry_min, p.delta_cap) == pytest.approx((H_005, 1.0, 1 - H_005), abs=1e-12)

    def test_bsc(self, bss05):
        p = eval_theorem1(bss05, AuxSystem1(CondChannel.bsc(("Y", 2), "V", 0.11)))
        assert (p.rx_min, p.ry_min, p.delta_cap) == pytest.approx(
            (1 - IXV_BSC011, ONE_MINUS_H_011, IXV_BSC011), abs=1e-12)

    def test_dimension_mismatch(self, bss05):
        with pytest.raises(InputError):
            eval_theorem1(bss05, AuxSystem1(CondChannel.copy(("Y", 3), "V")))
        with pytest.raises(InputError):
            eval_theorem1(bss05, AuxSystem1(CondChannel.constant([("Y", 2)], ("V", 5))))

    def test_complementarity(self):
        rng = np.random.default_rng(5)
        for _ in range(300):
            src = random_pair(rng)
            p = eval_theorem1(src, random_aux1(rng, src))
            assert p.rx_min + p.delta_cap == pytest.approx(entropy(src.joint, "X"), abs=1e-9)
            assert p.delta_cap <= entropy(src.joint, "X") + 1e-9


class TestEvalTheorem2:
    def test_constant_u(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            src = random_pair(rng)
            aux1 = random_aux1(rng, src)
            aux2 = AuxSystem2(aux1.v_channel, CondChannel.constant([("X", src.nx), ("V", aux1.v_card)], ("U", 1)))
            ry = float(rng.uniform(0, 2)) + mutual_info(joint_theorem1(src, aux1), "Y", "V")
            d = joint_theorem1(src, aux1)
            assert eval_theorem2(src, aux2, ry).delta_cap == pytest.approx(
                min(mutual_info(d, "X", "V"), ry), abs=1e-12)

    def test_one_time_pad(self):
        src = SourcePair(JointDist([("X", 2), ("Y", 3)], np.outer([0.5, 0.5], [0.2, 0.3, 0.5])))
        key = CondChannel([("Y", 3)], [("V", 2)], np.full((3, 2), 0.5))
        p = eval_theorem2(src, AuxSystem2(key, xor_u()), 1.0)
        assert p.delta_cap == pytest.approx(1.0, abs=1e-12)
        assert p.ry_min == pytest.approx(0.0, abs=1e-15)

    def test_bss_construction(self, bss05):
        # the construction's crossover is h^-1(1 - R_y); 0.11 is its two-digit rounding
        v = CondChannel.bsc(("Y", 2), "V", inv_binary_entropy(0.5))
        p = eval_theorem2(bss05, AuxSystem2(v, xor_u()), 0.5)
        assert p.delta_cap == pytest.approx(0.5, abs=1e-12)

    def test_rounded_crossover_is_infeasible_at_half(self, bss05):
        v = CondChannel.bsc(("Y", 2), "V", 0.11)
        with pytest.raises(ConstraintError, match="I\\(Y;V\\)"):
            eval_theorem2(bss05, AuxSystem2(v, xor_u()), 0.5)

    def test_cap_limits(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            src = random_pair(rng)
            aux = random_aux2(rng, src)
            ry = float(rng.uniform(0, 3))
            try:
                p = eval_theorem2(src, aux, ry)
            except ConstraintError:
                continue
            assert p.delta_cap <= min(ry, entropy(src.joint, "X")) + 1e-9
            assert p.delta_cap >= 0

    def test_u_cardinality(self, bss05):
        u = CondChannel.constant([("X", 2), ("V", 2)], ("U", 9))
        with pytest.raises(InputError):
            eval_theorem2(bss05, AuxSystem2(CondChannel.copy(("Y", 2), "V"), u), 1.0)


class TestEvalTheorem3:
    def test_nothing(self, bss05):
        src = SecInsSource.without_side_info(bss05)
        v12 = CondChannel([("Y", 2)], [("V1", 1), ("V2", 1)], np.ones(2))
        u = CondChannel([("X", 2), ("V1", 1), ("V2", 1)], [("U", 1)], np.ones(2))
        assert eval_theorem3(src, AuxSystem3(v12, u), 0.0).delta_cap == 0.0

    def test_reduces_to_theorem2(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            src = random_pair(rng)
            aux = random_aux2(rng, src)
            ry = mutual_info(joint_theorem1(src, AuxSystem1(aux.v_channel)), "Y", "V") + float(rng.uniform(0, 1))
            p2 = eval_theorem2(src, aux, ry)
            src3, aux3 = degenerate_lift(src, aux)
            p3 = eval_theorem3(src3, aux3, ry)
            assert abs(p3.delta_cap - p2.delta_cap) <= 1e-12
            assert abs(p3.rx_min - p2.rx_min) <= 1e-12
            assert abs(p3.ry_min - p2.ry_min) <= 1e-12
            assert p3.rins_min == pytest.approx(0.0, abs=1e-12)

    def test_symmetric_side_information_cancels(self, bss05):
        side = CondChannel([("X", 2)], [("W", 2), ("Z", 2)],
                           [[[0.8, 0.0], [0.0, 0.2]], [[0.3, 0.0], [0.0, 0.7]]])
        src = SecInsSource.from_parts(bss05, side)
        v12 = CondChannel([("Y", 2)], [("V1", 1), ("V2", 1)], np.ones(2))
        u = CondChannel([("X", 2), ("V1", 1), ("V2", 1)], [("U", 1)], np.ones(2))
        assert eval_theorem3(src, AuxSystem3(v12, u), 0.4).delta_cap == pytest.approx(0.0, abs=1e-12)

    def test_markov_violation(self):
        # W depends on Y beyond X
        p = np.zeros((2, 2, 2))
        p[0, 0, 0], p[0, 1, 1], p[1, 0, 0], p[1, 1, 1] = 0.4, 0.1, 0.1, 0.4
        joint = JointDist([("X", 2), ("Y", 2), ("W", 2), ("Z", 1)], p)
        with pytest.raises(InputError, match=r"I\(Y;\(W,Z\)\|X\)"):
            SecInsSource(joint)

    def test_infeasible_secure_rate(self, bss05):
        src = SecInsSource.without_side_info(bss05)
        v12 = CondChannel([("Y", 2)], [("V1", 2), ("V2", 1)], np.eye(2))
        u = CondChannel([("X", 2), ("V1", 2), ("V2", 1)], [("U", 1)], np.ones(4))
        with pytest.raises(ConstraintError):
            eval_theorem3(src, AuxSystem3(v12, u), 0.5)

    def test_u_equals_x_is_nonnegative(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            pair = random_pair(rng)
            side = CondChannel([("X", pair.nx)], [("W", 2), ("Z", 2)], rng.dirichlet(np.ones(4), size=pair.nx))
            src = SecInsSource.from_parts(pair, side)
            v12 = CondChannel([("Y", pair.ny)], [("V1", 2), ("V2", 2)], rng.dirichlet(np.ones(4), size=pair.ny))
            u = CondChannel.deterministic([("X", pair.nx), ("V1", 2), ("V2", 2)], ("U", pair.nx), lambda x, a, b: x)
            aux = AuxSystem3(v12, u)
            p = eval_theorem3(src, aux, 5.0)
            assert p.delta_cap >= 0.0


class TestOptimizeTheorem1:
    def test_zero_budget(self, bss05):
        p, aux = optimize_theorem1(bss05, 0.0, FAST)
        assert p.delta_cap == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("ry,expected", [(1.0, 1 - H_005), (0.5, 1 - MGL_005_HALF)])
    def test_bss(self, bss05, ry, expected):
        p, aux = optimize_theorem1(bss05, ry)
        assert abs(p.delta_cap - expected) <= 5e-3
        assert p.ry_min <= ry + 1e-6
        assert eval_theorem1(bss05, aux) == p

    def test_never_exceeds_converse(self):
        rng = np.random.default_rng(10)
        for _ in range(6):
            delta, ry = float(rng.uniform(0.01, 0.4)), float(rng.uniform(0, 1))
            p, _ = optimize_theorem1(SourcePair.bss(delta), ry, FAST)
            assert p.delta_cap <= one_sided_boundary(BssSource(delta), ry)[1] + 1e-9

    def test_random_sources_feasible(self):
        rng = np.random.default_rng(11)
        for _ in range(4):
            src = random_pair(rng)
            ry = float(rng.uniform(0, 1))
            p, aux = optimize_theorem1(src, ry, FAST)
            assert p.ry_min <= ry + 1e-6
            assert p.delta_cap <= min(ry, entropy(src.joint, "X")) + 1e-9
            assert eval_theorem1(src, aux) == p

    def test_deterministic(self, bss05):
        a = optimize_theorem1(bss05, 0.3, FAST)
        b = optimize_theorem1(bss05, 0.3, OptimizeOptions(starts=8, workers=3))
        assert a[0] == b[0]
        assert a[1].v_channel == b[1].v_channel


class TestOptimizeTheorem2:
    def test_zero_budget(self, bss05):
        assert optimize_theorem2(bss05, 0.0, FAST)[0].delta_cap == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("ry,expected", [(0.5, 0.5), (1.2, 1.0)])
    def test_bss(self, bss05, ry, expected):
        p, aux = optimize_theorem2(bss05, ry)
        assert abs(p.delta_cap - expected) <= 5e-3
        assert eval_theorem2(bss05, aux, ry) == p

    def test_prefers_low_alice_rate(self, bss05):
        # the key-only seed also reaches 0.5 but needs H(X|V) = 1
        p, _ = optimize_theorem2(bss05, 0.5, FAST)
        assert p.rx_min == pytest.approx(MGL_005_HALF, abs=5e-3)

    def test_random_sources(self):
        rng = np.random.default_rng(12)
        for _ in range(3):
            src = random_pair(rng)
            ry = float(rng.uniform(0, 1.5))
            p, aux = optimize_theorem2(src, ry, FAST)
            assert p.ry_min <= ry + 1e-6
            assert p.delta_cap <= min(ry, entropy(src.joint, "X")) + 1e-9
            assert eval_theorem2(src, aux, ry) == p
            p1, _ = optimize_theorem1(src, ry, FAST)
            assert p.delta_cap >= p1.delta_cap - 1e-9


class TestOptimizeTheorem3:
    SMALL = OptimizeOptions(starts=4, v1_card=3, v2_card=2)

    def test_no_rates(self, bss05):
        src = SecInsSource.without_side_info(bss05)
        p, _ = optimize_theorem3(src, 0.0, 0.0, self.SMALL)
        assert p.delta_cap == pytest.approx(0.0, abs=1e-12)

    def test_matches_theorem2(self, bss05):
        src = SecInsSource.without_side_info(bss05)
        p3, aux3 = optimize_theorem3(src, 0.5, 0.0, self.SMALL)
        p2, _ = optimize_theorem2(bss05, 0.5, FAST)
        assert abs(p3.delta_cap - p2.delta_cap) <= 5e-3
        assert eval_theorem3(src, aux3, 0.5) == p3
        assert p3.rins_min <= 1e-6

    def test_side_information_helps_bob(self, bss05):
        # W = X through a BSC at Bob only; Eve's Z is constant
        side = CondChannel([("X", 2)], [("W", 2), ("Z", 1)], [[0.9, 0.1], [0.1, 0.9]])
        src = SecInsSource.from_parts(bss05, side)
        p, aux = optimize_theorem3(src, 0.0, 0.0, self.SMALL)
        assert p.delta_cap > 0.3
        assert eval_theorem3(src, aux, 0.0) == p

    def test_default_u_cap(self, bss05):
        src = SecInsSource.without_side_info(bss05)
        _, aux = optimize_theorem3(src, 0.2, 0.1, OptimizeOptions(starts=1, max_passes=5))
        assert (aux.v1_card, aux.v2_card, aux.u_card) == (5, 6, 60)


class TestSweep:
    def test_zero_grid(self, bss05):
        (p, _), = sweep("one", bss05, [0.0], FAST)
        assert p.delta_cap == pytest.approx(0.0, abs=1e-12)

    def test_one_sided_matches_closed_form(self, bss05):
        grid = np.round(np.arange(1, 11) / 10, 10)
        res = sweep("one", bss05, grid)
        deltas = [p.delta_cap for p, _ in res]
        for ry, d in zip(grid, deltas):
            assert abs(d - one_sided_boundary(BssSource(0.05), ry)[1]) <= 5e-3
        assert all(b >= a - 1e-6 for a, b in zip(deltas, deltas[1:]))

    def test_two_sided_dominates(self, bss05):
        grid = [0.1, 0.3, 0.6, 0.9]
        one = sweep("one", bss05, grid, FAST)
        two = sweep("two", bss05, grid, FAST)
        for (p1, _), (p2, _) in zip(one, two):
            assert p2.delta_cap >= p1.delta_cap

    def test_monotone_on_random_source(self):
        src = random_pair(np.random.default_rng(13))
        res = sweep("two", src, [0.0, 0.2, 0.4, 0.8], OptimizeOptions(starts=4))
        d = [p.delta_cap for p, _ in res]
        assert all(b >= a - 1e-6 for a, b in zip(d, d[1:]))

    def test_bad_grids(self, bss05):
        with pytest.raises(InputError):
            sweep("one", bss05, [], FAST)
        with pytest.raises(InputError):
            sweep("one", bss05, [0.5, 0.5], FAST)
        with pytest.raises(InputError):
            sweep("one", bss05, [-0.1], FAST)
        with pytest.raises(InputError):
            sweep("four", bss05, [0.1], FAST)

    def test_csv(self):
        pts = [RegionPoint("one", 1.0, 0.0, -0.0), RegionPoint("one", 0.5, 0.25, 0.123456789)]
        text = sweep_csv("one", 7, "bss:0.05", [0.0, 0.25], pts)
        assert text == ("# model=one seed=7 source=bss:0.05\nr_budget,rx_min,ry_min,delta_cap\n"
                        "0.000000,1.000000,0.000000,0.000000\n0.250000,0.500000,0.250000,0.123457\n")
