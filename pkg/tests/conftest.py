import numpy as np
import pytest

from equivlab.infomeasures import CondChannel, JointDist
from equivlab.regions import AuxSystem1, AuxSystem2, AuxSystem3, SecInsSource, SourcePair


def random_pair(rng, max_card=3):
    nx, ny = (int(c) for c in rng.integers(2, max_card + 1, size=2))
    return SourcePair(JointDist([("X", nx), ("Y", ny)], rng.dirichlet(np.ones(nx * ny))))


def random_channel(rng, inputs, outputs):
    n_in = int(np.prod([c for _, c in inputs])) if inputs else 1
    n_out = int(np.prod([c for _, c in outputs]))
    return CondChannel(inputs, outputs, rng.dirichlet(np.ones(n_out), size=n_in))


def random_aux1(rng, src, nv=None):
    nv = nv or int(rng.integers(1, src.ny + 3))
    return AuxSystem1(random_channel(rng, [("Y", src.ny)], [("V", nv)]))


def random_aux2(rng, src, nv=None, nu=None):
    nv = nv or int(rng.integers(1, src.ny + 3))
    nu = nu or int(rng.integers(1, src.nx * src.ny + 2 * src.nx + 1))
    return AuxSystem2(random_channel(rng, [("Y", src.ny)], [("V", nv)]),
                      random_channel(rng, [("X", src.nx), ("V", nv)], [("U", nu)]))


def degenerate_lift(src2, aux2):
    """Theorem-3 objects with W, Z, V2 constant that mirror a theorem-2 system."""
    src3 = SecInsSource.without_side_info(src2)
    nv, nu = aux2.v_card, aux2.u_card
    v12 = CondChannel([("Y", src2.ny)], [("V1", nv), ("V2", 1)], aux2.v_channel.rows)
    u = CondChannel([("X", src2.nx), ("V1", nv), ("V2", 1)], [("U", nu)], aux2.u_channel.rows)
    return src3, AuxSystem3(v12, u)


@pytest.fixture
def bss05():
    return SourcePair.bss(0.05)
