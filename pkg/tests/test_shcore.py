import json

import pytest

from shopd import dense
from shopd.collection import (AssOperad, EndOperad, PerturbedOperad, ZeroCompOperad,
                              check_pseudo_operad)
from shopd.exactlin import GradedSpace, build_complex, homology_retract
from shopd.shcore import (StrictSh, TableSh, associativity_residual, bar_construction,
                          bar_rep_change, check_bar, check_equivariance, check_square_zero,
                          check_strict_unit, cohomology_operad, from_pseudo_operad,
                          tabulate_sh, two_vertex_tree)
from shopd.transfer import RetractData, TransferredSh, algebra_operad, example_algebra
from shopd.trees import chain, parse_tree, trees_within


def end_sh(degs, cap=3, d=None):
    V = build_complex(degs, d) if d else GradedSpace.from_degrees(degs)
    return from_pseudo_operad(EndOperad(V, cap))


def transferred_end(cap=3):
    """The structure moved from End_W to the fiberwise cohomology."""
    W = build_complex([0, 0, 1], {(2, 1): 1})
    S = StrictSh(EndOperad(W, cap))
    R = {}
    for n in range(1, cap + 1):
        F = S.fiber(n)
        H, i, r, h = homology_retract(F)
        R[n] = RetractData(H, F, i, r, h)
    return TransferredSh(S, R)


def massey_sh(cap=4):
    W, m = example_algebra("massey")
    H, i, r, h = homology_retract(W)
    return TransferredSh(StrictSh(algebra_operad(W, m), cap), {1: RetractData(H, W, i, r, h)},
                         nmax=1, kmax=cap)


def test_two_vertex_tree():
    assert two_vertex_tree(2, 1, 2) == parse_tree("((1,2),3)")
    assert two_vertex_tree(2, 2, 2) == parse_tree("(1,(2,3))")
    assert two_vertex_tree(1, 1, 3) == parse_tree("((1,2,3))")


@pytest.mark.parametrize("degs,d", [([0], None), ([0, 1], None), ([0, 1], {(1, 0): 1}),
                                    ([0, 0, 1], {(2, 1): 1})])
def test_strict_square_zero(degs, d):
    P = end_sh(degs, 3, d)
    assert check_square_zero(P)["ok"]
    assert check_equivariance(P)["ok"]


def test_strict_vanishes_on_three_vertices():
    P = end_sh([0, 1])
    t = parse_tree("(((1)))")
    assert P.vanishes(3) and P.op(t, (0, 0, 0)) == {}


def broken_end(cap=4):
    # x o_1 x doubled: (x o_1 x) o_1 x and x o_1 (x o_1 x) now differ
    E = EndOperad(GradedSpace.from_degrees([0]), cap)
    return PerturbedOperad(E, {(2, 1, 2, 0, 0): {0: 2}})


def test_square_zero_matches_pseudo_operad_laws():
    bad = broken_end()
    rep = check_square_zero(StrictSh(bad))
    assert not check_pseudo_operad(bad)["ok"]
    assert not rep["ok"]
    assert all(parse_tree(f["tree"]).nvertices == 3 for f in rep["failures"])


def test_equivariance_sees_broken_slot():
    # at cap 3 associativity cannot see the defect, equivariance can
    bad = StrictSh(broken_end(3))
    assert check_square_zero(bad)["ok"]
    assert not check_equivariance(bad)["ok"]


def test_zero_comps_square_zero():
    assert check_square_zero(StrictSh(ZeroCompOperad(EndOperad(GradedSpace.from_degrees([0, 1]), 3))))["ok"]


def test_transferred_square_zero_and_equivariance():
    T = transferred_end()
    assert check_square_zero(T)["ok"]
    assert check_equivariance(T)["ok"]


def test_massey_has_nonzero_ternary_and_square_zero():
    T = massey_sh()
    rep = check_square_zero(T, trees=[chain(k) for k in range(1, 5)])
    assert rep["ok"]
    assert any(T.op(chain(3), (x, y, z)) for x in range(3) for y in range(3) for z in range(3))


def test_associativity_residual():
    T = massey_sh()
    for x in range(3):
        for y in range(3):
            for z in range(3):
                lhs, rhs = associativity_residual(T, chain(3), x, y, z)
                assert lhs == rhs
    with pytest.raises(ValueError):
        associativity_residual(T, parse_tree("((1),(2))"), 0, 0, 0)


def test_associativity_residual_strict_is_zero():
    P = end_sh([0, 1], 3)
    t = parse_tree("(((1,2),3))")
    for p in range(P.fiber(1).dim):
        for q in range(P.fiber(2).dim):
            for r in range(P.fiber(2).dim):
                assert associativity_residual(P, t, p, q, r) == ({}, {})


def test_square_zero_failure_reports_tree():
    P = tabulate_sh(end_sh([0], 4))
    t = two_vertex_tree(2, 1, 2)
    P.ops[t][(0, 0)] = {0: 2 * P.ops[t][(0, 0)][0]}
    rep = check_square_zero(P)
    assert not rep["ok"]
    assert parse_tree(rep["failures"][0]["tree"]).nvertices == 3


def test_table_round_trip():
    T = tabulate_sh(transferred_end())
    U = TableSh.from_json(json.loads(json.dumps(T.to_json())))
    assert check_square_zero(U)["ok"]
    for t in U.trees():
        for x, v in T.ops.get(t, {}).items():
            assert U.op(t, x) == v


@pytest.mark.parametrize("make", [lambda: end_sh([0, 1], 3, {(1, 0): 1}),
                                  transferred_end, massey_sh,
                                  lambda: StrictSh(AssOperad(3))])
def test_cohomology_operad_is_operad(make):
    Q = cohomology_operad(make())
    assert check_pseudo_operad(Q)["ok"]


def test_cohomology_of_acyclic_is_zero():
    Q = cohomology_operad(end_sh([0, 1], 3, {(1, 0): 1}))
    assert all(Q.fiber(n).dim == 0 for n in (1, 2, 3))


def test_strict_unit():
    assert check_strict_unit(end_sh([0, 1], 3))["ok"]
    assert check_strict_unit(StrictSh(AssOperad(3)))["ok"]
    assert not check_strict_unit(StrictSh(ZeroCompOperad(AssOperad(3))))["ok"]


@pytest.mark.parametrize("make", [lambda: end_sh([0, 1], 3), transferred_end,
                                  lambda: StrictSh(AssOperad(3))])
def test_bar_square_zero(make):
    assert all(check_bar(make(), 3).values())


def test_bar_rep_change_is_chain_iso():
    P = end_sh([0, 1], 3)
    for a, b in (("canonical", "standard"), ("standard", "last")):
        A, B, T = bar_rep_change(P, 3, a, b)
        assert (T @ A.d - B.d @ T).is_zero()
        assert T.rank() == A.dim == B.dim


def test_bar_rejects_unknown_rep():
    with pytest.raises(ValueError):
        bar_construction(end_sh([0]), 2, "middle")


def test_dense_square_zero_agrees():
    for P in (end_sh([0, 1], 3), transferred_end()):
        trees = trees_within(3, 3)
        assert dense.check_square_zero_dense(P, trees)["ok"] == check_square_zero(P, trees)["ok"]
    bad = StrictSh(broken_end())
    assert not dense.check_square_zero_dense(bad)["ok"]
    assert dense.check_square_zero_dense(bad)["failures"][0]["tree"] == \
        check_square_zero(bad)["failures"][0]["tree"]
