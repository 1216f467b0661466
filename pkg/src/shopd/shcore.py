"""
Strongly homotopy operads.

An sh operad stores, for every standard-labeled planar tree t within the
caps, the shifted operation o_t (degree +1 on the desuspended fibers).  An
element of a fiber with degree |p| has shifted degree |p| - 1.  Operations
are evaluated on tuples of basis indices, one per vertex in preorder.
"""

import json
from functools import lru_cache
from itertools import product

from .collection import (DgCollection, TableOperad,
                         koszul_perm_sign, perm_inverse)
from .exactlin import (GradedMap, GradedSpace, homology_retract, scalar,
                       scalar_str, vec_iadd)
from .trees import (PlanarTree, Subtree, connected_subtrees, contract,
                    corolla, covering_partitions, parse_tree, planar_orbit,
                    trees_within, contract_blocks)


# ---------------------------------------------------------------------------
# tree helpers


def two_vertex_tree(n, i, m):
    """Root of arity n with an m-ary vertex grafted at slot i (1-based)."""
    kids = []
    lab = 1
    for j in range(1, n + 1):
        if j == i:
            kids.append(tuple(range(lab, lab + m)))
            lab += m
        else:
            kids.append(lab)
            lab += 1
    return PlanarTree(tuple(kids))


@lru_cache(maxsize=None)
def _contract(t, s):
    return contract(t, s)


@lru_cache(maxsize=None)
def _subtree(t, s):
    return Subtree(t, s).as_tree()


@lru_cache(maxsize=None)
def _subtrees(t):
    return connected_subtrees(t)


@lru_cache(maxsize=None)
def _partitions(t):
    return covering_partitions(t)


@lru_cache(maxsize=None)
def _orbit(t):
    return planar_orbit(t)


@lru_cache(maxsize=None)
def _quotient(t, blocks):
    return contract_blocks(t, blocks)[0]


def label_perm(u):
    """pi with pi[j] = (label of planar leg j) - 1."""
    return tuple(l - 1 for l in u.leaves)


def basis_tuples(P, t):
    return product(*[range(P.fiber(n).dim) for n in t.arities])


def tensor_expand(vecs):
    """Multilinear expansion of a list of sparse vectors into tuples."""
    out = {(): 1}
    for v in vecs:
        nxt = {}
        for key, c in out.items():
            for a, ca in v.items():
                k2 = key + (a,)
                nxt[k2] = nxt.get(k2, 0) + c * ca
        out = {k: c for k, c in nxt.items() if c}
        if not out:
            return {}
    return out


def sign_power(n):
    return -1 if n & 1 else 1


# ---------------------------------------------------------------------------
# base class


class ShOperad(DgCollection):
    """Base class.  Subclasses implement ``fiber(n)``, ``transposition_map``
    and ``_op(t, x)`` for standard trees t.

    ``nmax`` caps leaves, ``kmax`` caps vertices.
    """

    nmax = 0
    kmax = 0
    unit = None

    @property
    def cap(self):
        return self.nmax

    def _op(self, t, x):
        raise NotImplementedError

    def vanishes(self, k):
        """True when every k-vertex operation is known to be zero."""
        return k > self.kmax

    def op(self, t, x):
        if len(x) > self.kmax or t.n > self.nmax:
            return {}
        if self.vanishes(len(x)):
            return {}
        cache = self.__dict__.setdefault("_opcache", {})
        key = (t, x)
        hit = cache.get(key)
        if hit is None:
            hit = self._op(t, x)
            cache[key] = hit
        return hit

    def op_labeled(self, u, x):
        """Operation for an arbitrarily labeled planar tree, as an element
        with inputs indexed by leaf label."""
        if u.is_standard():
            return self.op(u, x)
        return self.act(u.n, perm_inverse(label_perm(u)), self.op(u.standard(), x))

    def sdeg(self, n, a):
        return self.fiber(n).degrees[a] - 1

    def sdegs(self, t, x):
        return [self.fiber(n).degrees[a] - 1 for n, a in zip(t.arities, x)]

    def trees(self):
        return [t for ts in [trees_within(self.nmax, self.kmax)] for t in ts]

    def mu(self, t, x):
        """Unshifted operation on a basis tuple."""
        k = len(x)
        degs = self.sdegs(t, x)
        e = sum(d * (k - 1 - j) for j, d in enumerate(degs))
        v = self.op(t, x)
        return v if e % 2 == 0 else {a: -c for a, c in v.items()}

    def mu_vec(self, t, vecs):
        out = {}
        for x, c in tensor_expand(vecs).items():
            vec_iadd(out, self.mu(t, x), c)
        return out

    def differential(self, n):
        """Fiber differential from the one-vertex operation."""
        F = self.fiber(n)
        t = corolla(n)
        cols = {a: self.op(t, (a,)) for a in range(F.dim)}
        return GradedMap(F, F, 1, cols)


# ---------------------------------------------------------------------------
# substitution / coderivation


def substitute(t, s, x, degs, value, op_deg):
    """Replace the factors on the connected set s by ``value`` (a vector in the
    merged fiber), produced by an operation of degree op_deg.

    Returns (t/s, {tuple: coeff}).  Signs: Koszul shuffle making s contiguous,
    then the operation passing the factors in front of it.
    """
    top = min(s)
    sign = 0
    outside = 0
    for v in range(top + 1, len(x)):
        if v in s:
            if degs[v] & 1:
                sign += outside
        else:
            outside += degs[v]
    if op_deg & 1:
        sign += sum(degs[:top])
    u, vmap = _contract(t, s)
    base = [None] * u.nvertices
    for v in range(len(x)):
        if v not in s:
            base[vmap[v]] = x[v]
    pos = vmap[top]
    sg = sign_power(sign)
    out = {}
    for a, c in value.items():
        base[pos] = a
        out[tuple(base)] = sg * c
    return u, out


def coderivation(P, t, x, skip_singletons=False):
    """D(x) for a basis tuple x on the planar (labeled) tree t."""
    degs = P.sdegs(t, x)
    out = {}
    for s in _subtrees(t):
        if skip_singletons and len(s) == 1:
            continue
        if P.vanishes(len(s)):
            continue
        vs = sorted(s)
        val = P.op(_subtree(t, s), tuple(x[v] for v in vs))
        if not val:
            continue
        u, terms = substitute(t, s, x, degs, val, 1)
        for y, c in terms.items():
            key = (u, y)
            out[key] = out.get(key, 0) + c
    return {k: v for k, v in out.items() if v}


def check_square_zero(P, trees=None, max_failures=10):
    """sum over subtrees s of o_(t/s) o (1 (x) o_s (x) 1) vanishes."""
    failures = []
    checked = 0
    trees = trees if trees is not None else P.trees()
    for t in trees:
        for x in basis_tuples(P, t):
            acc = {}
            for (u, y), c in coderivation(P, t, x).items():
                vec_iadd(acc, P.op(u, y) if u.is_standard() else P.op_labeled(u, y), c)
            checked += 1
            if acc:
                if len(failures) < max_failures:
                    failures.append({"tree": str(t), "input": list(x),
                                     "residual": {str(k): scalar_str(v) for k, v in acc.items()}})
    return {"ok": not failures, "checked": checked, "failures": failures}


# ---------------------------------------------------------------------------
# equivariance


def transport(P, iso, x, degs):
    """Move a decoration x of iso.source to iso.target: each vertex element
    is acted on by the inverse slot permutation and the factors are reordered
    into the target preorder with the Koszul sign."""
    k = len(x)
    vm = iso.vertex_map
    vecs = [None] * k
    for v in range(k):
        pi = iso.slot_perm[v]
        vecs[vm[v]] = P.act_basis(len(pi), perm_inverse(pi), x[v])
    s = koszul_perm_sign(vm, degs)
    out = tensor_expand(vecs)
    if s < 0:
        out = {a: -c for a, c in out.items()}
    return out


def check_equivariance(P, trees=None, max_failures=10):
    """o_t(x) equals the relabeled operation of every planar representative
    of the same rooted tree on the transported decoration."""
    failures = []
    checked = 0
    trees = trees if trees is not None else P.trees()
    for t in trees:
        orbit = [o for o in _orbit(t) if not o[1].is_identity()]
        if not orbit:
            continue
        for x in basis_tuples(P, t):
            lhs = P.op(t, x)
            degs = P.sdegs(t, x)
            for u, iso in orbit:
                rhs = {}
                for y, c in transport(P, iso, x, degs).items():
                    vec_iadd(rhs, P.op_labeled(u, y), c)
                checked += 1
                if rhs != lhs and len(failures) < max_failures:
                    failures.append({"tree": str(t), "image": str(u), "input": list(x)})
    return {"ok": not failures, "checked": checked, "failures": failures}


# ---------------------------------------------------------------------------
# strict operads as sh operads


class StrictSh(ShOperad):
    """A strict pseudo operad viewed as an sh operad: o_t vanishes on trees
    with three or more vertices."""

    def __init__(self, P, kmax=None):
        self.P = P
        self.nmax = P.cap
        self.kmax = kmax if kmax is not None else P.cap
        self.unit = P.unit

    def fiber(self, n):
        return self.P.fiber(n)

    def transposition_map(self, n, k):
        return self.P.transposition_map(n, k)

    def vanishes(self, k):
        return k >= 3 or k > self.kmax

    def _op(self, t, x):
        if len(x) == 1:
            return self.P.d(t.n, {x[0]: 1})
        n = t.arity(0)
        c = t.internal_children(0)[0]
        i = t.slot(c) + 1
        m = t.arity(c)
        v = self.P.comp(n, i, m, x[0], x[1])
        if self.sdeg(n, x[0]) & 1:
            v = {a: -b for a, b in v.items()}
        return v


def from_pseudo_operad(P, kmax=None):
    return StrictSh(P, kmax)


class TableSh(ShOperad):
    """sh operad given by explicit tables ``ops[tree][tuple] = vec``."""

    def __init__(self, nmax, kmax, fibers, actions=None, ops=None, unit=None):
        self.nmax = nmax
        self.kmax = kmax
        self._fibers = dict(fibers)
        self._actions = actions or {}
        self.ops = ops or {}
        self.unit = unit

    def fiber(self, n):
        if n not in self._fibers:
            self._fibers[n] = GradedSpace([], [])
        return self._fibers[n]

    def transposition_map(self, n, k):
        mats = self._actions.get(n)
        if not mats:
            return self.fiber(n).identity()
        return mats[k]

    def vanishes(self, k):
        if k > self.kmax:
            return True
        return not any(len(t.arities) == k and tab for t, tab in self.ops.items())

    def _op(self, t, x):
        return self.ops.get(t, {}).get(x, {})

    def to_json(self):
        doc = {"arityCap": self.nmax, "vertexCap": self.kmax,
               "fibers": {str(n): self.fiber(n).to_json() for n in range(1, self.nmax + 1)},
               "actions": {str(n): [m.entry_list() for m in mats]
                           for n, mats in self._actions.items()},
               "ops": []}
        for t in sorted(self.ops, key=lambda t: (t.nvertices, t.n, str(t))):
            entries = [[list(x), r, scalar_str(v)]
                       for x, vec in sorted(self.ops[t].items()) for r, v in sorted(vec.items())]
            if entries:
                doc["ops"].append({"tree": str(t), "entries": entries})
        if self.unit:
            doc["unit"] = [[k, scalar_str(v)] for k, v in sorted(self.unit.items())]
        return doc

    @classmethod
    def from_json(cls, doc):
        fibers = {int(n): GradedSpace.from_json(c) for n, c in doc["fibers"].items()}
        actions = {}
        for n, mats in (doc.get("actions") or {}).items():
            P = fibers[int(n)]
            actions[int(n)] = [GradedMap(P, P, 0, {(int(r), int(c)): scalar(v) for r, c, v in m})
                               for m in mats]
        ops = {}
        for entry in doc.get("ops") or []:
            t = parse_tree(entry["tree"])
            if not t.is_standard():
                raise ValueError("operation trees must carry standard labels: %s" % t)
            tab = ops.setdefault(t, {})
            for x, r, v in entry["entries"]:
                tab.setdefault(tuple(x), {})[int(r)] = scalar(v)
        unit = None
        if doc.get("unit"):
            unit = {int(k): scalar(v) for k, v in doc["unit"]}
        return cls(int(doc["arityCap"]), int(doc["vertexCap"]), fibers, actions, ops, unit)


def tabulate_sh(P):
    """Freeze an sh operad into explicit tables within its caps."""
    ops = {}
    for t in P.trees():
        tab = {}
        if P.vanishes(t.nvertices):
            continue
        for x in basis_tuples(P, t):
            v = P.op(t, x)
            if v:
                tab[x] = dict(v)
        if tab:
            ops[t] = tab
    fibers = {n: P.fiber(n) for n in range(1, P.nmax + 1)}
    actions = {n: [P.transposition_map(n, k) for k in range(n - 1)]
               for n in range(2, P.nmax + 1)}
    return TableSh(P.nmax, P.kmax, fibers, actions, ops, P.unit)


def load_sh(path):
    with open(path) as fh:
        doc = json.load(fh)
    if "vertexCap" in doc:
        return TableSh.from_json(doc)
    return StrictSh(TableOperad.from_json(doc))


# ---------------------------------------------------------------------------
# derived structure


def associativity_residual(P, tree, p, q, r):
    """For a three-vertex chain tree: the associator of the binary operations
    and the boundary of the ternary operation.

    Returns (lhs, rhs) with lhs = (p o q) o r - p o (q o r) and
    rhs = d mu3 + mu3(dp,q,r) + (-1)^|p| mu3(p,dq,r) + (-1)^(|p|+|q|) mu3(p,q,dr),
    all unshifted.  The two agree exactly when P is an sh operad there.
    """
    t = tree
    if t.nvertices != 3 or t.internal_children(0) == [] or len(t.internal_children(0)) != 1:
        raise ValueError("expected a three-vertex chain tree")
    mid = t.internal_children(0)[0]
    topv = t.internal_children(mid)[0]
    a0, a1, a2 = t.arity(0), t.arity(mid), t.arity(topv)
    i, j = t.slot(mid) + 1, t.slot(topv) + 1
    deg = lambda n, a: P.fiber(n).degrees[a]
    pq = P.mu(two_vertex_tree(a0, i, a1), (p, q))
    lhs = P.mu_vec(two_vertex_tree(a0 + a1 - 1, i + j - 1, a2), [pq, {r: 1}])
    qr = P.mu(two_vertex_tree(a1, j, a2), (q, r))
    vec_iadd(lhs, P.mu_vec(two_vertex_tree(a0, i, a1 + a2 - 1), [{p: 1}, qr]), -1)
    N = t.n
    d = lambda n, v: P.differential(n).apply(v)
    rhs = d(N, P.mu(t, (p, q, r)))
    vec_iadd(rhs, P.mu_vec(t, [d(a0, {p: 1}), {q: 1}, {r: 1}]))
    vec_iadd(rhs, P.mu_vec(t, [{p: 1}, d(a1, {q: 1}), {r: 1}]), sign_power(deg(a0, p)))
    vec_iadd(rhs, P.mu_vec(t, [{p: 1}, {q: 1}, d(a2, {r: 1})]),
             sign_power(deg(a0, p) + deg(a1, q)))
    return lhs, rhs


def cohomology_operad(P):
    """The strict operad induced on fiber cohomology, with its retracts."""
    fibers, retracts = {}, {}
    for n in range(1, P.nmax + 1):
        F = P.fiber(n)
        C = GradedSpace(F.names, F.degrees, P.differential(n))
        H, i, r, h = homology_retract(C)
        fibers[n] = H
        retracts[n] = (H, i, r, h)
    comps = {}
    if P.kmax >= 2:
        for n in range(1, P.nmax + 1):
            for m in range(1, P.nmax - n + 2):
                for k in range(1, n + 1):
                    t = two_vertex_tree(n, k, m)
                    table = {}
                    for a in range(fibers[n].dim):
                        ia = retracts[n][1].apply({a: 1})
                        for b in range(fibers[m].dim):
                            ib = retracts[m][1].apply({b: 1})
                            v = retracts[n + m - 1][2].apply(P.mu_vec(t, [ia, ib]))
                            if v:
                                table[(a, b)] = v
                    comps[(n, k, m)] = table
    actions = {}
    for n in range(2, P.nmax + 1):
        H, i, r, _ = retracts[n]
        actions[n] = [r @ P.transposition_map(n, k) @ i for k in range(n - 1)]
    unit = None
    if P.unit:
        unit = retracts[1][2].apply(P.unit) or None
    Q = TableOperad(P.nmax, fibers, actions, comps, unit)
    Q.retracts = retracts
    return Q


def check_strict_unit(P):
    """Unit laws for the binary operations and vanishing of every higher
    operation with the unit in a unary slot."""
    failures = []
    u = P.unit
    if not u:
        return {"ok": False, "failures": [{"reason": "no unit"}]}
    if P.differential(1).apply(u):
        failures.append({"reason": "unit is not a cycle"})
    for n in range(1, P.nmax + 1):
        F = P.fiber(n)
        for a in range(F.dim):
            for k in range(1, n + 1):
                if P.kmax >= 2 and P.mu_vec(two_vertex_tree(n, k, 1), [{a: 1}, u]) != {a: 1}:
                    failures.append({"law": "right", "arity": n, "slot": k, "elem": a})
            if P.kmax >= 2 and P.mu_vec(two_vertex_tree(1, 1, n), [u, {a: 1}]) != {a: 1}:
                failures.append({"law": "left", "arity": n, "elem": a})
    for t in P.trees():
        if t.nvertices < 3 or P.vanishes(t.nvertices):
            continue
        for v in t.vertices:
            if t.arity(v) != 1:
                continue
            others = [range(P.fiber(t.arity(w)).dim) if w != v else [None] for w in t.vertices]
            for x in product(*others):
                vecs = [u if w == v else {x[w]: 1} for w in t.vertices]
                if P.mu_vec(t, vecs):
                    failures.append({"law": "higher", "tree": str(t), "vertex": v})
                    break
    return {"ok": not failures, "failures": failures[:10]}


# ---------------------------------------------------------------------------
# bar construction


def bar_classes(P, n, rep="canonical"):
    """Iso classes of planar trees with n leaves within the vertex cap.
    Each class is represented by one labeled planar tree."""
    seen = {}
    for t in trees_within(n, P.kmax):
        if t.n != n:
            continue
        key = t.canonical()
        if key in seen:
            continue
        orbit = [u for u, _ in _orbit(t)]
        if rep == "canonical":
            r = key
        elif rep == "standard":
            r = t
        elif rep == "last":
            r = orbit[-1]
        else:
            raise ValueError("unknown representative choice %r" % rep)
        seen[key] = r
    return sorted(seen.values(), key=lambda u: (u.nvertices, str(u)))


def _embed(P, r, x):
    """Invariant element of the product over the orbit of r determined by x."""
    degs = P.sdegs(r, x)
    out = {}
    for u, iso in _orbit(r):
        for y, c in transport(P, iso, x, degs).items():
            out[(u, y)] = out.get((u, y), 0) + c
    return out


def bar_construction(P, n, rep="canonical"):
    """Bar complex in arity n on invariants, one summand per iso class.

    Returns (space, classes) where space is a GradedSpace whose basis is
    (representative, decoration) and whose differential is the
    coderivation restricted to invariants.
    """
    classes = bar_classes(P, n, rep)
    reps = {r.canonical(): r for r in classes}
    names, degs, keys = [], [], []
    for r in classes:
        for x in basis_tuples(P, r):
            keys.append((r, x))
            names.append("%s|%s" % (r, ",".join(map(str, x))))
            degs.append(sum(P.sdegs(r, x)) + 0)
    index = {k: j for j, k in enumerate(keys)}
    cols = {}
    for j, (r, x) in enumerate(keys):
        col = {}
        for (u, y), c in _embed(P, r, x).items():
            for (w, z), e in coderivation(P, u, y).items():
                if reps.get(w.canonical()) == w:
                    idx = index[(w, z)]
                    col[idx] = col.get(idx, 0) + c * e
        col = {k: v for k, v in col.items() if v}
        if col:
            cols[j] = col
    S = GradedSpace(names, degs)
    d = GradedMap(S, S, 1, cols)
    return GradedSpace(names, degs, d), classes


def bar_rep_change(P, n, rep_a, rep_b):
    """Change of basis from the rep_a invariant basis to the rep_b one."""
    A, ca = bar_construction(P, n, rep_a)
    B, cb = bar_construction(P, n, rep_b)
    target = {r.canonical(): r for r in cb}
    idx_b = {}
    for j, name in enumerate(B.names):
        idx_b[name] = j
    cols = {}
    j = 0
    for r in ca:
        rb = target[r.canonical()]
        iso = None
        for u, i2 in _orbit(r):
            if u == rb:
                iso = i2
                break
        for x in basis_tuples(P, r):
            col = {}
            for y, c in transport(P, iso, x, P.sdegs(r, x)).items():
                col[idx_b["%s|%s" % (rb, ",".join(map(str, y)))]] = c
            cols[j] = col
            j += 1
    T = GradedMap(A, B, 0, cols)
    return A, B, T


def check_bar(P, nmax=None):
    """D squared vanishes on the invariant bar complex in each arity."""
    out = {}
    for n in range(1, (nmax or P.nmax) + 1):
        B, _ = bar_construction(P, n)
        out[n] = (B.d @ B.d).is_zero()
    return out
