import json
import random

import pytest

from shopd.collection import EndOperad
from shopd.exactlin import GradedMap, GradedSpace, build_complex
from shopd.shcore import StrictSh
from shopd.shmaps import (ObstructionError, StrictMorphism, TableMorphism, check_equivariant_morphism,
                          check_morphism, compose, homology_map, identity_morphism, is_quasi_iso,
                          quasi_inverse, symmetrize, tabulate_morphism)
from shopd.transfer import RetractData, random_retract, transfer_hom
from shopd.trees import corolla, parse_tree


def small_transfer(seed, side=False, caps=(3, 3)):
    rng = random.Random(seed)
    R = random_retract(rng, [0], pair_degrees=[0], side=side)
    return transfer_hom(R, *caps)


def test_identity_is_morphism():
    P = StrictSh(EndOperad(build_complex([0, 1], {(1, 0): 1}), 3))
    assert check_morphism(identity_morphism(P))["ok"]
    assert check_equivariant_morphism(identity_morphism(P))["ok"]


def test_bad_strict_map_fails_with_witness():
    V = GradedSpace.from_degrees([0])
    P = StrictSh(EndOperad(V, 3))
    # doubling in every arity is not multiplicative
    phi = StrictMorphism(P, P, {n: P.fiber(n).identity().scale(2) for n in (1, 2, 3)})
    rep = check_morphism(phi)
    assert not rep["ok"]
    assert parse_tree(rep["failures"][0]["tree"]).nvertices == 2


@pytest.mark.parametrize("seed", range(3))
def test_transfer_compose_identity(seed):
    phi = small_transfer(seed)
    left = compose(identity_morphism(phi.target), phi)
    right = compose(phi, identity_morphism(phi.source))
    for t in phi.trees():
        for x in [(0,) * t.nvertices, tuple(range(t.nvertices))]:
            if any(a >= phi.source.fiber(n).dim for a, n in zip(x, t.arities)):
                continue
            assert left.component(t, x) == phi.component(t, x) == right.component(t, x)


def test_composite_is_morphism():
    phi = small_transfer(1)
    # a second transfer leaving from phi's target: W' = V, V' one-dimensional
    W2 = phi.R.V
    V2 = GradedSpace.from_degrees([0])
    R2 = RetractData(V2, W2, GradedMap(V2, W2, 0, {0: {0: -1}}),
                     GradedMap(W2, V2, 0, {0: {0: -1}}), GradedMap(W2, W2, -1, {}))
    psi = transfer_hom(R2, 3, 3)
    comp = compose(psi, phi)
    assert check_morphism(comp)["ok"]


def test_symmetrize_idempotent_and_equivariant():
    phi = small_transfer(2)
    s = tabulate_morphism(symmetrize(phi))
    assert check_equivariant_morphism(s)["ok"]
    ss = symmetrize(s)
    for t in s.trees():
        for x, v in s.comps.get(t, {}).items():
            assert ss.component(t, x) == v


def test_symmetrize_keeps_equivariant_maps():
    P = StrictSh(EndOperad(GradedSpace.from_degrees([0, 1]), 3))
    phi = identity_morphism(P)
    s = symmetrize(phi)
    t = corolla(2)
    for a in range(P.fiber(2).dim):
        assert s.component(t, (a,)) == {a: 1}


def test_quasi_iso_detection():
    phi = small_transfer(0)
    assert is_quasi_iso(phi)
    f, RP, RQ = homology_map(phi, 2)
    assert f.rank() == RP[0].dim == RQ[0].dim


def test_quasi_inverse_round_trip():
    phi = small_transfer(3, caps=(2, 2))
    psi = quasi_inverse(phi)
    assert check_morphism(psi)["ok"]
    for n in (1, 2):
        f, RP, _ = homology_map(compose(psi, phi), n)
        assert f == RP[0].identity()
        g, RQ, _ = homology_map(compose(phi, psi), n)
        assert g == RQ[0].identity()


def test_quasi_inverse_rejects_non_quasi_iso():
    P = StrictSh(EndOperad(GradedSpace.from_degrees([0]), 2))
    Z = StrictMorphism(P, P, {n: GradedMap(P.fiber(n), P.fiber(n), 0, {}) for n in (1, 2)})
    with pytest.raises((ValueError, ObstructionError)):
        quasi_inverse(Z)


def test_table_morphism_json():
    phi = tabulate_morphism(small_transfer(4, caps=(2, 2)))
    doc = json.loads(json.dumps(phi.to_json()))
    back = TableMorphism.from_json(phi.source, phi.target, doc)
    assert back.comps == phi.comps
    assert check_morphism(back)["ok"]
