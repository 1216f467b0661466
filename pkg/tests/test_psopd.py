from functools import lru_cache
from itertools import product

import numpy as np
import pytest
import sympy

from shopd.collection import EndOperad, PerturbedOperad
from shopd.exactlin import GradedSpace
from shopd.psopd import (FreeNSOperad, NumberedTree, bar_homology_of_free, bar_of_nonsymmetric,
                         check_eq3, check_relations_in, check_self_duality, compose_psopd,
                         corolla_numbered, dual_relations, evaluate_relation, generator,
                         generators, one_binary_generator, parse_numbered,
                         relation_case, relations_from_substitution, three_vertex_trees,
                         tree_sign, word_basis, word_sign)
from shopd.trees import TreeSyntaxError


def test_generators():
    assert len(generators(2)) == 6
    twos = [str(g) for g in generators(2) if g.arity(1) == 2 and g.arity(2) == 2]
    assert twos == [str(generator(2, 1, 2)), str(generator(2, 2, 2))]
    for n in range(1, 4):
        g = generator(1, 1, n)
        assert g.legs == n and g.nvertices == 2


def test_parse_and_print():
    t = generator(2, 2, 3)
    assert parse_numbered(str(t)) == t
    with pytest.raises(TreeSyntaxError):
        parse_numbered("[1:*,[1:*]]")
    with pytest.raises(TreeSyntaxError):
        parse_numbered("[1:*,[3:*]]")
    with pytest.raises(ValueError):
        NumberedTree((1, ()))


def test_signature():
    t = generator(2, 1, 3)
    k, ar, legs = t.signature()
    assert k == 2 and legs == 4
    assert list(ar) == [2, 3]


def test_compose_with_corolla_renumbers():
    s = generator(2, 1, 2)
    assert compose_psopd(s, 1, corolla_numbered(2)) == s
    assert compose_psopd(s, 2, corolla_numbered(2)) == s


def test_compose_two_vertex_at_root():
    # s = (2 o_1 2), replace its root by (2 o_2 1): the new root keeps number
    # 1, the unary vertex becomes 2 and s's old vertex 2 becomes 3
    s = generator(2, 1, 2)
    t = generator(2, 2, 1)
    u = compose_psopd(s, 1, t)
    want = NumberedTree((1, ((3, (None, None)), (2, (None,)))))
    assert u == want


def test_compose_errors():
    s = generator(2, 1, 2)
    with pytest.raises(ValueError, match="colour mismatch"):
        compose_psopd(s, 1, corolla_numbered(3))
    with pytest.raises(ValueError, match="no vertex"):
        compose_psopd(s, 3, corolla_numbered(2))


SMALL = [corolla_numbered(a) for a in (1, 2, 3)] + generators(2)


def test_coloured_associativity():
    checked = 0
    for s, t, u in product(SMALL, repeat=3):
        for k in s.numbers():
            if s.arity(k) != t.legs:
                continue
            st_ = compose_psopd(s, k, t)
            for l in st_.numbers():
                if st_.arity(l) != u.legs:
                    continue
                lhs = compose_psopd(st_, l, u)
                if k <= l < k + t.nvertices:
                    rhs = compose_psopd(s, k, compose_psopd(t, l - k + 1, u))
                else:
                    l2 = l if l < k else l - t.nvertices + 1
                    k2 = k + u.nvertices - 1 if l2 < k else k
                    rhs = compose_psopd(compose_psopd(s, l2, u), k2, t)
                assert lhs == rhs
                checked += 1
    assert checked > 100


def test_every_tree_has_two_words():
    for b in (2, 3, 4):
        basis = word_basis(b)
        for T in three_vertex_trees(b):
            assert len(T.edges()) == 2
        rels = relations_from_substitution(b)
        assert len(rels) == len(three_vertex_trees(b))
        assert sum(len(w) for w in basis.values()) == 2 * len(rels)


def test_relation_cases():
    for rel in relations_from_substitution(3):
        (T, e1), (_, e2) = sorted(rel)
        assert rel[(T, e1)] == 1 and rel[(T, e2)] == -1
    for rel, dual in zip(relations_from_substitution(3), dual_relations(3)):
        (T, e1), (_, e2) = sorted(dual)
        assert dual[(T, e2)] == (1 if relation_case(T) == "sequential" else -1)


def test_axil_signs():
    assert tree_sign(generator(2, 1, 2)) == 1
    fork = NumberedTree((1, ((2, (None,)), (3, (None,)))))
    assert fork.axil_count() == 1 and tree_sign(fork) == -1
    line = NumberedTree((1, ((2, ((3, (None,)),)),)))
    assert word_sign(line, 2) == 1 and word_sign(line, 3) == -1


def test_self_duality():
    rep = check_self_duality(5)
    assert rep["ok"]
    assert len(rep["signatures"]) == 35
    assert all(r["half"] and r["rankR"] == r["rankDual"] == r["trees"] for r in rep["signatures"])
    # the literal tree sign cannot reach the dual span
    assert not rep["literalReading"] and not rep["legsReading"]


def test_eq3_cross_check():
    c3, c4 = check_eq3(3), check_eq3(4)
    for c in (c3, c4):
        for case in ("sequential", "parallelBefore", "parallelAfter"):
            assert c[case][0] == c[case][1] > 0
    assert c3["parallelAfterPrinted"] == [0, 36]
    assert c4["parallelAfterPrinted"] == [0, 160]


def test_relations_vanish_in_end():
    P = EndOperad(GradedSpace.from_degrees([0, 1]), 4)
    rep = check_relations_in(P)
    assert rep["ok"] and rep["checked"] > 0


def test_relations_vanish_in_end_dim3_sampled():
    P = EndOperad(GradedSpace.from_degrees([0, 1, 1]), 4)
    rep = check_relations_in(P, rng=np.random.default_rng(0), samples=10)
    assert rep["ok"]


def test_dual_relations_fail_on_sequential_trees():
    P = EndOperad(GradedSpace.from_degrees([0, 1]), 3)
    bad = set()
    for rel in dual_relations(3):
        T = next(iter(rel))[0]
        ar = T.arities()
        dims = [P.fiber(ar[j]).dim for j in (1, 2, 3)]
        if any(evaluate_relation(P, rel, x) for x in product(*map(range, dims))):
            bad.add(T)
    seq = {T for T in three_vertex_trees(3) if relation_case(T) == "sequential"}
    assert bad == seq


def test_broken_operad_breaks_a_relation():
    # doubling x o_1 x is invisible below four legs
    E = EndOperad(GradedSpace.from_degrees([0]), 4)
    bad = PerturbedOperad(E, {(2, 1, 2, 0, 0): {0: 2}})
    rep = check_relations_in(bad)
    assert not rep["ok"] and rep["failures"][0]["relation"]


# --- bar complex of the free operad ----------------------------------------

@lru_cache(maxsize=None)
def catalan(n):
    return 1 if n <= 0 else sum(catalan(j) * catalan(n - 1 - j) for j in range(n))


@lru_cache(maxsize=None)
def bar_count(n):
    """Planar trees with n legs, vertices of arity >= 2 decorated by binary
    trees of the same arity (the free operad on one binary generator)."""
    def slot(p):
        return 1 if p == 1 else bar_count(p)

    def comps(n, a):
        if a == 0:
            yield () if n == 0 else None
            return
        for first in range(1, n - a + 2):
            for rest in comps(n - first, a - 1):
                if rest is not None:
                    yield (first,) + rest

    total = 0
    for a in range(2, n + 1):
        for c in comps(n, a):
            if c is None:
                continue
            prod = catalan(a - 1)
            for p in c:
                prod *= slot(p)
            total += prod
    return total


def sympy_homology(V):
    D = sympy.Matrix(V.dim, V.dim, lambda r, c: V.d.entry(r, c))
    out = {}
    for deg in sorted(set(V.degrees)):
        src = [j for j, d in enumerate(V.degrees) if d == deg]
        low = [j for j, d in enumerate(V.degrees) if d == deg - 1]
        ker = len(src) - D[:, src].rank()
        im = D[:, low].rank() if low else 0
        if ker - im:
            out[deg] = ker - im
    return out


def test_free_operad_fibers():
    P = FreeNSOperad(one_binary_generator(), 5)
    assert [P.fiber(n).dim for n in range(1, 6)] == [0, 1, 2, 5, 14]


def test_bar_complex_counts():
    rep = bar_homology_of_free(one_binary_generator(), 5)
    assert rep["complexDims"] == {1: 0, 2: 1, 3: 4, 4: 20, 5: 112}
    assert all(rep["complexDims"][n] == bar_count(n) for n in range(2, 6))


def test_bar_homology_matches_rank_oracle():
    P = FreeNSOperad(one_binary_generator(), 4)
    bar = bar_of_nonsymmetric(P, 4)
    rep = bar_homology_of_free(one_binary_generator(), 4)
    for n, data in bar.items():
        assert data["squareZero"]
        if data["space"].dim:
            assert sympy_homology(data["space"]) == rep["homology"][n]
    assert rep["homology"] == {1: {}, 2: {-1: 1}, 3: {}, 4: {}}


def test_bar_homology_two_generators():
    C = {2: GradedSpace(["a", "b"], [0, 1]), 3: GradedSpace(["c"], [0])}
    rep = bar_homology_of_free(C, 4)
    assert rep["squareZero"]
    assert rep["homology"][2] == {-1: 1, 0: 1}
    assert rep["homology"][3] == {-1: 1}
    assert rep["homology"][4] == {}


def test_bar_of_zero_and_rejections():
    rep = bar_homology_of_free({}, 3)
    assert all(v == {} for v in rep["homology"].values())
    with pytest.raises(ValueError):
        bar_of_nonsymmetric(EndOperad(GradedSpace.from_degrees([0]), 2), 2)
    with pytest.raises(ValueError):
        FreeNSOperad({1: GradedSpace(["u"], [0])}, 3)
