from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from shopd.trees import (PlanarTree, TreeSyntaxError, axil_count, chain, connected_subtrees,
                         contract, corolla, covering_partitions, enumerate_trees,
                         isomorphisms, parse_tree, planar_orbit, trees_within)


def brute_trees(labels, kmax, min_arity):
    """Every planar tree on the ordered label sequence, by splitting it into
    consecutive blocks; used as an independent count."""
    out = set()

    def splits(seq):
        if not seq:
            yield []
            return
        for j in range(1, len(seq) + 1):
            for rest in splits(seq[j:]):
                yield [seq[:j]] + rest

    def trees(seq, budget):
        res = []
        if budget < 1:
            return res
        for blocks in splits(seq):
            if len(blocks) < min_arity:
                continue
            options = [[]]
            for b in blocks:
                nxt = []
                for opt in options:
                    used = sum(k for _, k in opt)
                    if len(b) == 1:
                        nxt.append(opt + [(b[0], 0)])
                    for sub, k in trees(b, budget - 1 - used):
                        nxt.append(opt + [(sub, k)])
                options = nxt
            for opt in options:
                k = 1 + sum(k for _, k in opt)
                if k <= budget:
                    res.append((tuple(c for c, _ in opt), k))
        return res

    for perm in permutations(labels):
        for shape, _ in trees(perm, kmax):
            out.add(shape)
    return out


def test_enumerate_small_counts():
    assert [str(t) for t in enumerate_trees(1, 1, 1)] == ["(1)"]
    assert [str(t) for t in enumerate_trees(2, 1, 2)] == ["(1,2)", "(2,1)"]


@pytest.mark.parametrize("n,k,a", [(3, 2, 2), (3, 3, 1), (4, 2, 2), (2, 3, 1)])
def test_enumerate_matches_brute_force(n, k, a):
    ours = {t.shape for t in enumerate_trees(n, k, a)}
    assert ours == brute_trees(tuple(range(1, n + 1)), k, a)
    assert len(enumerate_trees(n, k, a)) == len(ours)


def test_enumerate_n3_k2_a2_count():
    # 6 labelings of the corolla, 6 each of ((a,b),c) and (a,(b,c))
    assert len(enumerate_trees(3, 2, 2)) == 18


def test_enumerate_deterministic_and_distinct():
    a = enumerate_trees(3, 3, 1)
    b = enumerate_trees(3, 3, 1)
    assert a == b
    canon = [t for t in a]
    assert len(set(canon)) == len(canon)


def test_subtree_counts():
    assert len(connected_subtrees(corolla(3))) == 1
    assert len(connected_subtrees(parse_tree("((1,2),3)"))) == 3
    assert len(connected_subtrees(chain(3))) == 6
    for k in range(1, 6):
        assert len(connected_subtrees(chain(k))) == k * (k + 1) // 2


def test_partition_counts():
    assert len(covering_partitions(corolla(2))) == 1
    assert len(covering_partitions(parse_tree("((1,2),3)"))) == 2
    assert len(covering_partitions(chain(3))) == 4


def test_contract_examples():
    t = parse_tree("((1,3),2)")
    assert contract(t, frozenset([0]))[0] == t
    whole = contract(t, frozenset(t.vertices))[0]
    assert whole == PlanarTree((1, 3, 2))
    # middle pair of a 3-chain of unary vertices
    u, vmap = contract(chain(3), frozenset([1, 2]))
    assert u == parse_tree("((1))")
    assert vmap == {0: 0, 1: 1, 2: 1}


def test_contract_rejects_disconnected():
    t = parse_tree("(((1)),2)")
    with pytest.raises(ValueError):
        contract(t, frozenset([0, 2]))


def test_axil_count():
    assert axil_count(corolla(3)) == 0
    assert axil_count(parse_tree("((1,2),3)")) == 0
    assert axil_count(parse_tree("((1,2),(3,4))")) == 1
    assert axil_count(parse_tree("((1),(2),(3))")) == 3


def test_isomorphisms():
    c = corolla(3)
    isos = isomorphisms(c, c)
    assert len(isos) == 1 and isos[0].is_identity()
    assert isomorphisms(corolla(2), corolla(3)) == []
    t, u = parse_tree("((1,2),3)"), parse_tree("(3,(1,2))")
    isos = isomorphisms(t, u)
    assert len(isos) == 1
    assert isos[0].slot_perm[0] == (1, 0)


def test_orbits():
    # slot permutations at every vertex, leaves included
    assert len(planar_orbit(corolla(2))) == 2
    assert len(planar_orbit(parse_tree("((1,2),3)"))) == 4
    assert len(planar_orbit(chain(3))) == 1
    for u, iso in planar_orbit(parse_tree("((1,2),3)")):
        back = isomorphisms(u, iso.source)[0]
        assert iso.compose(back).is_identity()


def test_parse_examples():
    t = parse_tree("((1,3),2)")
    assert t.nvertices == 2 and t.arities == (2, 2) and t.leaves == (1, 3, 2)
    assert parse_tree("(1)").arities == (1,)


@pytest.mark.parametrize("text,where", [("((1,1),2)", "duplicate"), ("((1,2),4)", "gap"),
                                        ("((1,2)", "expected"), ("", "expected")])
def test_parse_errors(text, where):
    with pytest.raises(TreeSyntaxError) as e:
        parse_tree(text)
    assert where in str(e.value)
    assert e.value.line >= 1 and e.value.column >= 1


def test_parse_error_line_column():
    with pytest.raises(TreeSyntaxError) as e:
        parse_tree("((1,2),\n  x)")
    assert e.value.line == 2


ALL = trees_within(4, 4)


def test_round_trip_all_at_caps_4_4():
    assert all(parse_tree(str(t)) == t for t in ALL)
    assert all(parse_tree(str(t)) == t for t in enumerate_trees(3, 3, 1))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(enumerate_trees(3, 3, 1) + enumerate_trees(4, 2, 2)), st.data())
def test_contraction_composes(t, data):
    subs = connected_subtrees(t)
    s1 = data.draw(st.sampled_from(subs))
    s2 = data.draw(st.sampled_from(subs))
    union = s1 | s2
    if union not in set(subs) or s1 & s2:
        return
    u, vmap = contract(t, s1)
    # the image of s2 together with the merged vertex of s1
    image = frozenset(vmap[v] for v in union)
    assert contract(u, image)[0] == contract(t, union)[0]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(enumerate_trees(3, 3, 1)))
def test_singleton_contraction_is_identity(t):
    for v in t.vertices:
        assert contract(t, frozenset([v]))[0] == t
