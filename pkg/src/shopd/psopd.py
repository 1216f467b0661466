"""
The N-coloured operad PsOpd of non-symmetric pseudo operads.

Basis elements are planar trees whose vertices are numbered 1..k and whose
legs are unlabeled.  s o_k t replaces vertex k of s by t, matching the
inputs of vertex k with the legs of t in planar order.  PsOpd is quadratic
on the two-vertex trees; this module generates its relations from the
substitution model, the signed dual system, the axil base change, and the
non-symmetric bar complex of a pseudo operad.
"""

from functools import lru_cache
from itertools import permutations, product

from .collection import PseudoOperad, koszul_perm_sign
from .exactlin import GradedSpace, GradedMap, homology_dims, rank, vec_iadd
from .shcore import StrictSh, coderivation
from .trees import PlanarTree, TreeSyntaxError, _skip, planar_shapes


class NumberedTree:
    """Planar tree with numbered vertices and unlabeled legs.

    ``root`` is a nested tuple ``(number, children)``; a child is ``None``
    for a leg or another such pair.
    """

    __slots__ = ("root", "_info")

    def __init__(self, root, check=True):
        self.root = _freeze(root)
        self._info = None
        if check:
            nums = sorted(self.numbers())
            if nums != list(range(1, len(nums) + 1)):
                raise ValueError("vertex numbers must be 1..k, got %s" % nums)
            for num, arity in self.arities().items():
                if arity < 1:
                    raise ValueError("vertex %d has no inputs" % num)

    # -- structure -------------------------------------------------------
    def _walk(self):
        if self._info is None:
            info = {}
            legs = [0]

            def visit(node, parent, slot):
                num, kids = node
                info[num] = {"arity": len(kids), "parent": parent, "slot": slot,
                             "children": [k[0] if k else None for k in kids]}
                for s, k in enumerate(kids):
                    if k is None:
                        legs[0] += 1
                    else:
                        visit(k, num, s)

            visit(self.root, None, None)
            self._info = (info, legs[0])
        return self._info

    def numbers(self):
        return list(self._walk()[0])

    @property
    def nvertices(self):
        return len(self._walk()[0])

    @property
    def legs(self):
        return self._walk()[1]

    def arities(self):
        return {num: d["arity"] for num, d in self._walk()[0].items()}

    def arity(self, num):
        return self._walk()[0][num]["arity"]

    def parent(self, num):
        return self._walk()[0][num]["parent"]

    def internal_children(self, num):
        return [c for c in self._walk()[0][num]["children"] if c is not None]

    @property
    def root_number(self):
        return self.root[0]

    def signature(self):
        """(k, arity of vertex 1..k, total legs)."""
        ar = self.arities()
        return (len(ar), tuple(ar[j] for j in range(1, len(ar) + 1)), self.legs)

    def colours(self):
        """i(j) = |l_t(j)| - 1 = arity of vertex j, and i(0) = legs."""
        ar = self.arities()
        out = {0: self.legs}
        out.update(ar)
        return out

    def edges(self):
        """Edges named by their upper vertex."""
        return sorted(n for n in self.numbers() if self.parent(n) is not None)

    def axil_count(self):
        from math import comb
        return sum(comb(len(self.internal_children(n)), 2) for n in self.numbers())

    def is_linear(self):
        return all(len(self.internal_children(n)) <= 1 for n in self.numbers())

    def planar(self):
        """Underlying PlanarTree (legs labeled 1..L in planar order) and the
        vertex numbers in preorder."""
        counter = [0]
        nums = []

        def conv(node):
            num, kids = node
            nums.append(num)
            out = []
            for k in kids:
                if k is None:
                    counter[0] += 1
                    out.append(counter[0])
                else:
                    out.append(conv(k))
            return tuple(out)

        return PlanarTree(conv(self.root)), tuple(nums)

    def renumber(self, sigma):
        """Apply the bijection sigma: old number -> new number."""
        def go(node):
            num, kids = node
            return (sigma[num], tuple(go(k) if k else None for k in kids))
        return NumberedTree(go(self.root))

    # -- comparison / printing ---------------------------------------------
    def __eq__(self, other):
        return isinstance(other, NumberedTree) and self.root == other.root

    def __hash__(self):
        return hash(self.root)

    def __lt__(self, other):
        return str(self) < str(other)

    def __str__(self):
        def go(node):
            num, kids = node
            return "[%d:%s]" % (num, ",".join("*" if k is None else go(k) for k in kids))
        return go(self.root)

    def __repr__(self):
        return "NumberedTree(%s)" % self


def _freeze(node):
    num, kids = node
    return (int(num), tuple(None if k is None else _freeze(k) for k in kids))


# ---------------------------------------------------------------------------
# grammar: ntree ::= '[' INT ':' item (',' item)* ']' ; item ::= '*' | ntree


def parse_numbered(text):
    pos, node = _parse_ntree(text, _skip(text, 0))
    pos = _skip(text, pos)
    if pos != len(text):
        raise TreeSyntaxError("unexpected trailing input", text, pos)
    nums = []

    def collect(n):
        nums.append(n[0])
        for k in n[1]:
            if k is not None:
                collect(k)

    collect(node)
    seen = set()
    for x in nums:
        if x in seen:
            raise TreeSyntaxError("duplicate vertex number %d" % x, text, text.find("[%d:" % x))
        seen.add(x)
    missing = sorted(set(range(1, len(nums) + 1)) - seen)
    if missing:
        raise TreeSyntaxError("vertex numbers have a gap (missing %d)" % missing[0], text, 0)
    return NumberedTree(node)


def _parse_ntree(text, pos):
    if pos >= len(text) or text[pos] != "[":
        raise TreeSyntaxError("expected '['", text, pos)
    pos = _skip(text, pos + 1)
    end = pos
    while end < len(text) and text[end].isdigit():
        end += 1
    if end == pos:
        raise TreeSyntaxError("expected a vertex number", text, pos)
    num = int(text[pos:end])
    if num < 1:
        raise TreeSyntaxError("vertex numbers must be positive", text, pos)
    pos = _skip(text, end)
    if pos >= len(text) or text[pos] != ":":
        raise TreeSyntaxError("expected ':'", text, pos)
    pos = _skip(text, pos + 1)
    kids = []
    while True:
        if pos < len(text) and text[pos] == "*":
            kids.append(None)
            pos += 1
        else:
            pos, kid = _parse_ntree(text, pos)
            kids.append(kid)
        pos = _skip(text, pos)
        if pos < len(text) and text[pos] == ",":
            pos = _skip(text, pos + 1)
            continue
        if pos < len(text) and text[pos] == "]":
            return pos + 1, (num, tuple(kids))
        raise TreeSyntaxError("expected ',' or ']'", text, pos)


# ---------------------------------------------------------------------------
# composition


def compose_psopd(s, k, t):
    """Replace vertex k of s by t.

    Numbers below k are kept, t's vertices take k .. k+|t|-1 in t's own
    order, and the numbers of s above k move up by |t|-1.
    """
    if k not in s.arities():
        raise ValueError("s has no vertex %d" % k)
    if s.arity(k) != t.legs:
        raise ValueError("colour mismatch: vertex %d of s has %d inputs, t has %d legs"
                         % (k, s.arity(k), t.legs))
    shift = t.nvertices - 1

    def ren_s(num):
        return num if num < k else num + shift

    def copy_s(node):
        num, kids = node
        if num == k:
            queue = [copy_s(c) if c else None for c in kids]
            return graft_t(t.root, queue)
        return (ren_s(num), tuple(copy_s(c) if c else None for c in kids))

    def graft_t(node, queue):
        num, kids = node
        out = []
        for c in kids:
            if c is None:
                out.append(queue.pop(0))
            else:
                out.append(graft_t(c, queue))
        return (num + k - 1, tuple(out))

    return NumberedTree(copy_s(s.root))


def corolla_numbered(n, num=1):
    return NumberedTree((num, (None,) * n))


def generator(m, i, n, root=1):
    """(m o_i n): root with m inputs, a vertex with n inputs on input i."""
    other = 2 if root == 1 else 1
    kids = [None] * m
    kids[i - 1] = (other, (None,) * n)
    return NumberedTree((root, tuple(kids)))


def generators(bound):
    """All (m o_i n) with m, n <= bound, root numbered 1."""
    return [generator(m, i, n) for m in range(1, bound + 1)
            for i in range(1, m + 1) for n in range(1, bound + 1)]


# ---------------------------------------------------------------------------
# the quadratic presentation in weight three
#
# A basis word of the free operad on the generators in weight three is a
# numbered three-vertex tree T together with the edge that was formed by the
# inner generator.  Words are keyed (T, e) with e the upper vertex of the
# edge.


@lru_cache(maxsize=None)
def three_vertex_trees(bound):
    """Numbered three-vertex trees with at most ``bound`` legs."""
    out = []
    for L in range(1, bound + 1):
        for shape in planar_shapes(L, 3, 1, 3):
            for perm in permutations((1, 2, 3)):
                out.append(_numbered_from_planar(shape, perm))
    return sorted(set(out))


def _numbered_from_planar(shape, nums):
    def go(v):
        kids = []
        for c in shape.children(v):
            kids.append(None if c[0] == "leaf" else go(c[1]))
        return (nums[v], tuple(kids))
    return NumberedTree(go(0))


@lru_cache(maxsize=None)
def substitution_words(bound):
    """Every word (outer generator, vertex, inner generator) followed by a
    renumbering, recorded as {(T, e): [(outer, k, inner, sigma), ...]}."""
    words = {}
    gens = []
    for m in range(1, bound + 1):
        for i in range(1, m + 1):
            for n in range(1, bound + 1):
                for root in (1, 2):
                    gens.append(generator(m, i, n, root))
    for outer in gens:
        for k in (1, 2):
            L = outer.arity(k)
            for inner in gens:
                if inner.legs != L:
                    continue
                T = compose_psopd(outer, k, inner)
                if T.legs > bound:
                    continue
                upper = [v for v in inner.numbers() if inner.parent(v) is not None][0]
                e = upper + k - 1
                for sigma in permutations((1, 2, 3)):
                    sg = {a + 1: sigma[a] for a in range(3)}
                    key = (T.renumber(sg), sg[e])
                    words.setdefault(key, []).append((outer, k, inner, sigma))
    return words


def word_basis(bound):
    """Sorted word keys per colour signature."""
    out = {}
    for T in three_vertex_trees(bound):
        for e in T.edges():
            out.setdefault(T.signature(), []).append((T, e))
    return out


def _word_key(T, e):
    return "%s|%d" % (T, e)


def relations_from_substitution(bound):
    """w1 - w2 for the two words composing to the same numbered tree."""
    by_tree = {}
    for (T, e) in substitution_words(bound):
        by_tree.setdefault(T, []).append(e)
    rels = []
    for T in sorted(by_tree):
        es = sorted(by_tree[T])
        if len(es) != 2:
            raise AssertionError("tree %s has words %s" % (T, es))
        rels.append({(T, es[0]): 1, (T, es[1]): -1})
    return rels


def relation_case(T):
    """'sequential' for a linear tree, 'parallel' for a fork."""
    return "sequential" if T.is_linear() else "parallel"


def dual_relations(bound):
    """The same pairs with coefficient -1 on the sequential (middle) case,
    i.e. w1 + w2 there."""
    out = []
    for rel in relations_from_substitution(bound):
        (T, e1), (_, e2) = sorted(rel)
        c = 1 if relation_case(T) == "sequential" else -1
        out.append({(T, e1): 1, (T, e2): c})
    return out


def word_sign(T, e):
    """Base change on words: -1 when the inner edge does not touch the root.

    On a fork both words get +1, on a linear tree the two words get opposite
    signs; this is what turns R into the signed system.
    """
    return -1 if T.parent(e) != T.root_number else 1


def tree_sign(T, e=None):
    """The diagonal sign (-1)^c(T) of the composite tree."""
    return -1 if T.axil_count() % 2 else 1


def tree_sign_with_legs(T, e=None):
    """The alternative axil count taking legs into account: all pairs of
    inputs of every vertex."""
    from math import comb
    c = sum(comb(a, 2) for a in T.arities().values())
    return -1 if c % 2 else 1


def _by_signature(rels):
    out = {}
    for rel in rels:
        T = next(iter(rel))[0]
        out.setdefault(T.signature(), []).append(rel)
    return out


def _span_rank(vecs, index):
    rows = [{index[k]: v for k, v in vec.items()} for vec in vecs]
    return rank(rows)


def _apply_sign(rel, sign):
    return {k: c * sign(*k) for k, c in rel.items()}


def check_self_duality(bound):
    """Compare span(R) after a base change with span(dual relations), per
    colour signature.

    Three base changes are reported: the diagonal sign (-1)^c(T) on the
    composite tree (axils of internal vertices, and the variant counting
    legs too), and the word sign used to realize the isomorphism.
    The check passes when the word sign maps R onto the dual span at every
    signature; the literal reading is reported alongside.
    """
    basis = word_basis(bound)
    R = _by_signature(relations_from_substitution(bound))
    D = _by_signature(dual_relations(bound))
    rows = []
    ok = True
    literal_ok = True
    legs_ok = True
    for sig in sorted(basis):
        words = basis[sig]
        index = {w: j for j, w in enumerate(words)}
        r, d = R.get(sig, []), D.get(sig, [])
        rR, rD = _span_rank(r, index), _span_rank(d, index)
        report = {"signature": [sig[0], list(sig[1]), sig[2]], "words": len(words),
                  "trees": len(words) // 2, "rankR": rR, "rankDual": rD,
                  "half": 2 * rR == len(words)}
        for name, sign in (("word", word_sign), ("literal", tree_sign),
                           ("literalWithLegs", tree_sign_with_legs)):
            moved = [_apply_sign(rel, sign) for rel in r]
            joint = _span_rank(moved + d, index)
            report[name] = (_span_rank(moved, index) == rD == joint)
        ok = ok and report["word"] and report["half"] and rR == rD
        literal_ok = literal_ok and report["literal"]
        legs_ok = legs_ok and report["literalWithLegs"]
        rows.append(report)
    return {"ok": ok, "literalReading": literal_ok, "legsReading": legs_ok,
            "signatures": rows}


# ---------------------------------------------------------------------------
# Eq.-style index arithmetic as a cross-check of the substitution model


def graft_leg(tree, leg, n):
    """Attach a new vertex with n inputs at global leg ``leg`` (1-based),
    numbered tree.nvertices + 1.  Returns (tree, owning vertex, local slot)."""
    counter = [0]
    owner = [None]
    new = tree.nvertices + 1

    def go(node):
        num, kids = node
        out = []
        for s, c in enumerate(kids):
            if c is None:
                counter[0] += 1
                if counter[0] == leg:
                    owner[0] = (num, s + 1)
                    out.append((new, (None,) * n))
                else:
                    out.append(None)
            else:
                out.append(go(c))
        return (num, tuple(out))

    return NumberedTree(go(tree.root)), owner[0]


def _left_nested(k, j, m, i, n):
    """(k o_j m) with a further vertex of arity n on leg i."""
    return graft_leg(generator(k, j, m), i, n)[0].planar()[0]


def eq3_rewrite(k, j, m, i, n, printed=False):
    """The rewritten composite for the three cases of the quadratic
    relations, as an underlying planar tree (None if indices are invalid).

    With printed=True the third case uses the indices as typeset,
    (k o_(i-m-1) n) o_j m under the condition j <= i + m; otherwise the
    pseudo operad axiom (k o_(i-m+1) n) o_j m for i >= j + m.
    """
    if i < j:
        first, second = (k, i, n), (j + n - 1, m)
    elif j <= i < j + m:
        kids = [None] * m
        kids[i - j] = (3, (None,) * n)
        inner = (2, tuple(kids))
        t = NumberedTree((1, tuple(inner if s == j - 1 else None for s in range(k))))
        return t.planar()[0]
    else:
        a = i - m - 1 if printed else i - m + 1
        if not 1 <= a <= k:
            return None
        first, second = (k, a, n), (j, m)
    base = generator(*first)
    if not 1 <= second[0] <= base.legs:
        return None
    return graft_leg(base, second[0], second[1])[0].planar()[0]


def check_eq3(bound):
    """Count index triples where the case rewrite reproduces the composite,
    both for the corrected and the printed third case."""
    counts = {"sequential": [0, 0], "parallelBefore": [0, 0],
              "parallelAfter": [0, 0], "parallelAfterPrinted": [0, 0]}
    for k, m, n in product(range(1, bound + 1), repeat=3):
        for j in range(1, k + 1):
            for i in range(1, k + m):
                lhs = _left_nested(k, j, m, i, n)
                if i < j:
                    case = "parallelBefore"
                elif i < j + m:
                    case = "sequential"
                else:
                    case = "parallelAfter"
                good = eq3_rewrite(k, j, m, i, n) == lhs
                counts[case][0] += good
                counts[case][1] += 1
                if case == "parallelAfter":
                    pr = eq3_rewrite(k, j, m, i, n, printed=True) == lhs
                    counts["parallelAfterPrinted"][0] += pr
                    counts["parallelAfterPrinted"][1] += 1
    return counts


# ---------------------------------------------------------------------------
# PsOpd-algebras: a pseudo operad evaluates words


def _input_position(T, pe, ce, w):
    """1-based input of (x_pe o x_ce) at which w is attached (w below)."""
    if T.parent(w) == pe:
        q = T._walk()[0][w]["slot"]
        s = T._walk()[0][ce]["slot"]
        return q + 1 if q < s else q + T.arity(ce)
    s = T._walk()[0][ce]["slot"]
    return s + T._walk()[0][w]["slot"] + 1


def evaluate_word(P, T, e, x):
    """Value of the word (T, e) on basis elements x[j-1] for vertex j.

    The edge e is composed first, then the remaining edge; the Koszul sign of
    bringing the factors into that order is included.
    """
    pe, ce = T.parent(e), e
    w = [v for v in T.numbers() if v not in (pe, ce)][0]
    ar = T.arities()
    degs = [P.fiber(ar[j]).degrees[x[j - 1]] for j in range(1, 4)]
    s = T._walk()[0][ce]["slot"] + 1
    y = P.comp(ar[pe], s, ar[ce], x[pe - 1], x[ce - 1])
    m = ar[pe] + ar[ce] - 1
    if T.parent(w) in (pe, ce):
        order = (pe, ce, w)
        i = _input_position(T, pe, ce, w)
        val = P.comp_vec(m, i, ar[w], y, {x[w - 1]: 1})
    else:
        order = (w, pe, ce)
        i = T._walk()[0][pe]["slot"] + 1
        val = P.comp_vec(ar[w], i, m, {x[w - 1]: 1}, y)
    p = [order.index(j) for j in (1, 2, 3)]
    if koszul_perm_sign(p, degs) < 0:
        val = {a: -c for a, c in val.items()}
    return val


def evaluate_relation(P, rel, x):
    out = {}
    for (T, e), c in rel.items():
        vec_iadd(out, evaluate_word(P, T, e, x), c)
    return {a: c for a, c in out.items() if c}


def check_relations_in(P, bound=None, rng=None, samples=None):
    """Evaluate every relation with at most ``bound`` legs on basis inputs.

    Exhaustive by default; with ``samples`` and an rng, that many random
    input tuples per relation.
    """
    bound = bound or P.cap
    failures = []
    checked = 0
    for rel in relations_from_substitution(bound):
        T = next(iter(rel))[0]
        ar = T.arities()
        dims = [P.fiber(ar[j]).dim for j in (1, 2, 3)]
        if 0 in dims:
            continue
        if samples is None:
            inputs = product(*[range(d) for d in dims])
        else:
            inputs = [tuple(int(rng.integers(d)) for d in dims) for _ in range(samples)]
        for x in inputs:
            checked += 1
            res = evaluate_relation(P, rel, x)
            if res and len(failures) < 10:
                failures.append({"relation": [_word_key(*k) for k in sorted(rel)],
                                 "input": list(x), "residual": res})
    return {"ok": not failures, "checked": checked, "failures": failures}


# ---------------------------------------------------------------------------
# free non-symmetric pseudo operad


def graft(a, i, b):
    """Graft the planar tree b on leaf i of a.  Returns the standard tree
    and, for each factor of (vertices of a, vertices of b), its preorder
    position in the result."""

    def walk_b(node, base):
        me = ("b", len(tags_b))
        tags_b.append(None)
        kids = []
        for c in node:
            kids.append(c if isinstance(c, int) else walk_b(c, base))
        return (me, kids)

    def walk_a(node):
        me = ("a", counter[0])
        counter[0] += 1
        kids = []
        for c in node:
            if isinstance(c, int):
                kids.append(bt if c == i else c)
            else:
                kids.append(walk_a(c))
        return (me, kids)

    tags_b = []
    bt = walk_b(b.shape, 0)
    counter = [0]
    top = walk_a(a.shape)
    pos = {}
    labels = iter(range(1, a.n + b.n))

    def emit(node):
        me, kids = node
        pos[me] = len(pos)
        out = []
        for c in kids:
            out.append(next(labels) if isinstance(c, int) else emit(c))
        return tuple(out)

    shape = emit(top)
    order = [pos[("a", v)] for v in range(a.nvertices)] + \
            [pos[("b", v)] for v in range(b.nvertices)]
    return PlanarTree(shape, check=False), order


class FreeNSOperad(PseudoOperad):
    """Free non-symmetric pseudo operad on a graded collection C with
    C(1) = 0, truncated at arity ``cap``.  Basis of arity n: standard planar
    trees with n leaves whose vertices carry basis elements of C."""

    def __init__(self, C, cap):
        self.C = {n: V for n, V in C.items() if V.dim}
        if 1 in self.C:
            raise ValueError("the generating collection must vanish in arity 1")
        self.cap = cap
        self._fibers = {}
        self._keys = {}

    def _basis(self, n):
        if n not in self._keys:
            keys = []
            if n >= 2:
                for t in planar_shapes(n, n - 1, 2):
                    if all(a in self.C for a in t.arities):
                        for x in product(*[range(self.C[a].dim) for a in t.arities]):
                            keys.append((t, x))
            self._keys[n] = (keys, {k: j for j, k in enumerate(keys)})
        return self._keys[n]

    def fiber(self, n):
        if n not in self._fibers:
            keys, _ = self._basis(n)
            names = ["%s|%s" % (t, ",".join(map(str, x))) for t, x in keys]
            degs = [sum(self.C[a].degrees[b] for a, b in zip(t.arities, x)) for t, x in keys]
            self._fibers[n] = GradedSpace(names, degs)
        return self._fibers[n]

    def transposition_map(self, n, k):
        return self.fiber(n).identity()

    def comp(self, n, i, m, a, b):
        if n + m - 1 > self.cap:
            return {}
        (ta, xa), (tb, xb) = self._basis(n)[0][a], self._basis(m)[0][b]
        t, order = graft(ta, i, tb)
        factors = list(xa) + list(xb)
        ars = list(ta.arities) + list(tb.arities)
        degs = [self.C[r].degrees[c] for r, c in zip(ars, factors)]
        y = [None] * len(factors)
        for j, p in enumerate(order):
            y[p] = factors[j]
        idx = self._basis(n + m - 1)[1][(t, tuple(y))]
        return {idx: koszul_perm_sign(order, degs)}


def one_binary_generator(degree=0):
    return {2: GradedSpace(["mu"], [degree])}


# ---------------------------------------------------------------------------
# bar complex of a non-symmetric pseudo operad


def bar_of_nonsymmetric(P, nmax):
    """Per arity n, the complex on planar trees with vertices decorated by
    P(n_v)[-1]; the differential is the fiber differential plus contraction
    of internal edges by the o_i compositions.  Requires P(1) = 0."""
    if P.fiber(1).dim:
        raise ValueError("the non-symmetric bar complex needs P(1) = 0")
    S = StrictSh(P, kmax=nmax)
    out = {}
    for n in range(1, nmax + 1):
        keys = []
        for t in (planar_shapes(n, n - 1, 2) if n >= 2 else []):
            dims = [P.fiber(a).dim for a in t.arities]
            for x in product(*[range(d) for d in dims]):
                keys.append((t, x))
        index = {k: j for j, k in enumerate(keys)}
        names = ["%s|%s" % (t, ",".join(map(str, x))) for t, x in keys]
        degs = [sum(S.sdegs(t, x)) for t, x in keys]
        cols = {}
        for j, (t, x) in enumerate(keys):
            col = {}
            for (u, y), c in coderivation(S, t, x).items():
                vec_iadd(col, {index[(u, y)]: c})
            if col:
                cols[j] = col
        V = GradedSpace(names, degs)
        V = V.with_differential(GradedMap(V, V, 1, cols))
        out[n] = {"space": V, "keys": keys, "squareZero": (V.d @ V.d).is_zero()}
    return out


def bar_homology_of_free(C, nmax):
    """Homology dimensions of the bar complex of the free operad on C,
    {arity: {degree: dim}}, plus the dimension of the cogenerators."""
    P = FreeNSOperad(C, nmax)
    bar = bar_of_nonsymmetric(P, nmax)
    table = {}
    for n, data in bar.items():
        V = data["space"]
        table[n] = {k: v for k, v in homology_dims(V).items() if v} if V.dim else {}
    gens = {n: (C[n].dim if n in C else 0) for n in range(1, nmax + 1)}
    return {"homology": table, "generators": gens,
            "squareZero": all(b["squareZero"] for b in bar.values()),
            "complexDims": {n: b["space"].dim for n, b in bar.items()}}
