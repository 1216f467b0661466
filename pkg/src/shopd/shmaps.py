"""
Morphisms of sh operads.

A morphism phi: P -> Q has a component phi_t for every standard tree t,
of shifted degree 0, evaluated on basis tuples of P-decorations.
"""

import json
from fractions import Fraction
from itertools import product

from .exactlin import (GradedMap, GradedSpace, homology_retract,
                       scalar, scalar_str, vec_iadd, solve)
from .collection import koszul_perm_sign, perm_inverse
from .shcore import (_orbit, _partitions, _quotient, _subtree, _subtrees,
                     basis_tuples, substitute, tensor_expand, transport)
from .trees import corolla, parse_tree, trees_within


class ShMorphism:
    source = None
    target = None

    def _component(self, t, x):
        raise NotImplementedError

    def component(self, t, x):
        cache = self.__dict__.setdefault("_cache", {})
        key = (t, x)
        hit = cache.get(key)
        if hit is None:
            hit = self._component(t, x)
            cache[key] = hit
        return hit

    def component_labeled(self, u, x):
        if u.is_standard():
            return self.component(u, x)
        from .shcore import label_perm
        return self.target.act(u.n, perm_inverse(label_perm(u)),
                               self.component(u.standard(), x))

    def component_vec(self, t, vecs):
        out = {}
        for x, c in tensor_expand(vecs).items():
            vec_iadd(out, self.component(t, x), c)
        return out

    def trees(self):
        P = self.source
        return trees_within(min(P.nmax, self.target.nmax), min(P.kmax, self.target.kmax))

    def unary_map(self, n):
        """phi on the corolla as a chain map P(n) -> Q(n)."""
        F, G = self.source.fiber(n), self.target.fiber(n)
        t = corolla(n)
        return GradedMap(F, G, 0, {a: self.component(t, (a,)) for a in range(F.dim)})


def block_values(phi, t, blocks, x, degs):
    """Shuffle x into the blocks (ordered by top) and apply phi to each.
    Returns a {tuple: coeff} over quotient decorations."""
    order = [v for b in blocks for v in sorted(b)]
    # permutation sending position v to its position in the grouped order
    where = [0] * len(x)
    for k, v in enumerate(order):
        where[v] = k
    sg = koszul_perm_sign(where, degs)
    vecs = []
    for b in blocks:
        vs = sorted(b)
        val = phi.component(_subtree(t, b), tuple(x[v] for v in vs))
        if not val:
            return {}
        vecs.append(val)
    out = tensor_expand(vecs)
    if sg < 0:
        out = {k: -v for k, v in out.items()}
    return out


def morphism_sides(phi, t, x):
    """Both sides of the morphism equation on the basis tuple x."""
    P, Q = phi.source, phi.target
    degs = P.sdegs(t, x)
    lhs = {}
    for s in _subtrees(t):
        if P.vanishes(len(s)):
            continue
        val = P.op(_subtree(t, s), tuple(x[v] for v in sorted(s)))
        if not val:
            continue
        u, terms = substitute(t, s, x, degs, val, 1)
        for y, c in terms.items():
            vec_iadd(lhs, phi.component_labeled(u, y), c)
    rhs = {}
    for blocks in _partitions(t):
        if Q.vanishes(len(blocks)):
            continue
        u = _quotient(t, tuple(blocks))
        for y, c in block_values(phi, t, blocks, x, degs).items():
            vec_iadd(rhs, Q.op_labeled(u, y), c)
    return lhs, rhs


def check_morphism(phi, trees=None, max_failures=10):
    failures = []
    checked = 0
    for t in (trees if trees is not None else phi.trees()):
        for x in basis_tuples(phi.source, t):
            lhs, rhs = morphism_sides(phi, t, x)
            checked += 1
            if lhs != rhs and len(failures) < max_failures:
                diff = dict(lhs)
                vec_iadd(diff, rhs, -1)
                failures.append({"tree": str(t), "input": list(x),
                                 "residual": {str(k): scalar_str(v) for k, v in diff.items()}})
    return {"ok": not failures, "checked": checked, "failures": failures}


def check_equivariant_morphism(phi, trees=None, max_failures=10):
    failures = []
    checked = 0
    P = phi.source
    for t in (trees if trees is not None else phi.trees()):
        orbit = [o for o in _orbit(t) if not o[1].is_identity()]
        for x in basis_tuples(P, t):
            lhs = phi.component(t, x)
            degs = P.sdegs(t, x)
            for u, iso in orbit:
                rhs = {}
                for y, c in transport(P, iso, x, degs).items():
                    vec_iadd(rhs, phi.component_labeled(u, y), c)
                checked += 1
                if rhs != lhs and len(failures) < max_failures:
                    failures.append({"tree": str(t), "image": str(u), "input": list(x)})
    return {"ok": not failures, "checked": checked, "failures": failures}


# ---------------------------------------------------------------------------
# constructions


class StrictMorphism(ShMorphism):
    """A strict operad map: only the corolla components are nonzero."""

    def __init__(self, source, target, maps):
        self.source, self.target = source, target
        self.maps = maps  # n -> GradedMap or callable (n, a) -> vec

    def _component(self, t, x):
        if t.nvertices != 1:
            return {}
        f = self.maps[t.n]
        if callable(f) and not isinstance(f, GradedMap):
            return f(t.n, x[0])
        return f.apply({x[0]: 1})


def from_strict(source, target, maps):
    return StrictMorphism(source, target, maps)


def identity_morphism(P):
    return StrictMorphism(P, P, {n: P.fiber(n).identity() for n in range(1, P.nmax + 1)})


class TableMorphism(ShMorphism):
    def __init__(self, source, target, comps):
        self.source, self.target = source, target
        self.comps = comps  # tree -> {tuple: vec}

    def _component(self, t, x):
        return self.comps.get(t, {}).get(x, {})

    def to_json(self):
        out = []
        for t in sorted(self.comps, key=lambda t: (t.nvertices, t.n, str(t))):
            entries = [[list(x), r, scalar_str(v)]
                       for x, vec in sorted(self.comps[t].items()) for r, v in sorted(vec.items())]
            if entries:
                out.append({"tree": str(t), "entries": entries})
        return {"components": out}

    @classmethod
    def from_json(cls, source, target, doc):
        comps = {}
        for entry in doc["components"]:
            t = parse_tree(entry["tree"])
            tab = comps.setdefault(t, {})
            for x, r, v in entry["entries"]:
                tab.setdefault(tuple(x), {})[int(r)] = scalar(v)
        return cls(source, target, comps)


def tabulate_morphism(phi):
    comps = {}
    for t in phi.trees():
        tab = {}
        for x in basis_tuples(phi.source, t):
            v = phi.component(t, x)
            if v:
                tab[x] = dict(v)
        if tab:
            comps[t] = tab
    return TableMorphism(phi.source, phi.target, comps)


class Composite(ShMorphism):
    """(psi phi)_t = sum over partitions of psi_(t/pi) applied to the
    blockwise phi components."""

    def __init__(self, psi, phi):
        self.psi, self.phi = psi, phi
        self.source, self.target = phi.source, psi.target

    def trees(self):
        return self.phi.trees()

    def _component(self, t, x):
        degs = self.source.sdegs(t, x)
        out = {}
        for blocks in _partitions(t):
            u = _quotient(t, tuple(blocks))
            for y, c in block_values(self.phi, t, blocks, x, degs).items():
                vec_iadd(out, self.psi.component_labeled(u, y), c)
        return out


def compose(psi, phi):
    return Composite(psi, phi)


class Symmetrized(ShMorphism):
    """Average of phi over all planar representatives of each tree."""

    def __init__(self, phi):
        self.phi = phi
        self.source, self.target = phi.source, phi.target

    def trees(self):
        return self.phi.trees()

    def _component(self, t, x):
        orbit = _orbit(t)
        degs = self.source.sdegs(t, x)
        out = {}
        for u, iso in orbit:
            for y, c in transport(self.source, iso, x, degs).items():
                vec_iadd(out, self.phi.component_labeled(u, y), c)
        w = Fraction(1, len(orbit))
        return {k: scalar(v * w) for k, v in out.items() if v}


def symmetrize(phi):
    return Symmetrized(phi)


def homology_map(phi, n):
    """Induced map on fiber cohomology in arity n, with both retracts."""
    P, Q = phi.source, phi.target
    RP = homology_retract(GradedSpace(P.fiber(n).names, P.fiber(n).degrees, P.differential(n)))
    RQ = homology_retract(GradedSpace(Q.fiber(n).names, Q.fiber(n).degrees, Q.differential(n)))
    f = RQ[2] @ phi.unary_map(n) @ RP[1]
    return f, RP, RQ


def check_strictly_unital(phi, trees=None):
    """phi sends the unit to the unit, and every component on a tree with
    at least two vertices vanishes once the unit sits on a unary vertex."""
    P, Q = phi.source, phi.target
    if not P.unit or not Q.unit:
        return {"ok": False, "failures": [{"reason": "not unital"}]}
    failures = []
    if phi.component_vec(corolla(1), [P.unit]) != dict(Q.unit):
        failures.append({"reason": "unit not preserved"})
    checked = 0
    for t in (trees if trees is not None else phi.trees()):
        if t.nvertices < 2:
            continue
        for v in t.vertices:
            if t.arity(v) != 1:
                continue
            ranges = [[None] if w == v else range(P.fiber(t.arity(w)).dim) for w in t.vertices]
            for x in product(*ranges):
                vecs = [P.unit if w == v else {x[w]: 1} for w in t.vertices]
                checked += 1
                if phi.component_vec(t, vecs) and len(failures) < 10:
                    failures.append({"tree": str(t), "vertex": v,
                                     "input": [a for a in x if a is not None]})
    return {"ok": not failures, "checked": checked, "failures": failures}


def is_quasi_iso(phi):
    """phi_corolla induces isomorphisms on cohomology in every arity."""
    for n in range(1, min(phi.source.nmax, phi.target.nmax) + 1):
        f, RP, RQ = homology_map(phi, n)
        if RP[0].dim != RQ[0].dim or f.rank() != RP[0].dim:
            return False
    return True


def _invert(f):
    """Inverse of an invertible GradedMap between spaces with zero differential."""
    S, T = f.source, f.target
    cols = {}
    # solve f(y) = e_b for each basis vector b of T
    columns = [f.column(c) for c in range(S.dim)]
    for b in range(T.dim):
        sol = solve(columns, {b: 1}, T.dim)
        if sol is None:
            raise ValueError("map is not invertible")
        cols[b] = sol
    return GradedMap(T, S, -f.degree, cols)


class QuasiInverse(TableMorphism):
    pass


class ObstructionError(RuntimeError):
    pass


def quasi_inverse(phi):
    """Build psi: Q -> P with psi phi inducing the identity on cohomology.

    psi on corollas is i_P H(phi)^-1 r_Q.  Higher components are solved one
    tree at a time from d psi_t - psi_t D1 = K_t, where K_t collects all
    terms of the morphism equation that involve only smaller trees.
    """
    P, Q = phi.source, phi.target
    nmax = min(P.nmax, Q.nmax)
    kmax = min(P.kmax, Q.kmax)
    psi = TableMorphism(Q, P, {})
    for n in range(1, nmax + 1):
        f, RP, RQ = homology_map(phi, n)
        g = RP[1] @ _invert(f) @ RQ[2]
        t = corolla(n)
        psi.comps[t] = {(b,): g.column(b) for b in range(Q.fiber(n).dim) if g.column(b)}
    for k in range(2, kmax + 1):
        for t in trees_within(nmax, kmax):
            if t.nvertices != k:
                continue
            psi.comps[t] = _solve_component(psi, t)
            psi.__dict__.pop("_cache", None)
    return psi


def _solve_component(psi, t):
    """Solve for psi_t given all smaller components (psi_t currently unset)."""
    Q, P = psi.source, psi.target
    xs = list(basis_tuples(Q, t))
    n = t.n
    F = P.fiber(n)
    dP = P.differential(n)
    psi.comps[t] = {}
    psi.__dict__.pop("_cache", None)
    K = {}
    for x in xs:
        # with psi_t = 0 the morphism sides give the known part
        lhs, rhs = _sides_without_linear(psi, t, x)
        diff = dict(lhs)
        vec_iadd(diff, rhs, -1)
        # equation: d psi_t(x) - psi_t(D1 x) = K(x) where K = lhs' - rhs'
        if diff:
            K[x] = diff
    if not K:
        return {}
    # unknowns: (x, b) with shifted degrees matching
    xdeg = {x: sum(Q.sdegs(t, x)) for x in xs}
    unknowns = []
    for x in xs:
        for b in range(F.dim):
            if F.degrees[b] - 1 == xdeg[x]:
                unknowns.append((x, b))
    uidx = {u: j for j, u in enumerate(unknowns)}
    # D1 on Q-decorations of t (singleton subtrees)
    D1 = {}
    for x in xs:
        degs = Q.sdegs(t, x)
        acc = {}
        for v in range(len(x)):
            val = Q.op(_subtree(t, frozenset([v])), (x[v],))
            if not val:
                continue
            _, terms = substitute(t, frozenset([v]), x, degs, val, 1)
            for y, c in terms.items():
                acc[y] = acc.get(y, 0) + c
        D1[x] = {y: c for y, c in acc.items() if c}
    dcols = dP.cols
    # equation rows: (x, c) ; columns: unknown (x', b)
    columns = [dict() for _ in unknowns]
    rowid = {}

    def rid(key):
        if key not in rowid:
            rowid[key] = len(rowid)
        return rowid[key]

    for j, (x, b) in enumerate(unknowns):
        col = columns[j]
        for c, v in dcols.get(b, {}).items():
            r = rid((x, c))
            col[r] = col.get(r, 0) + v
    for x in xs:
        for y, c in D1[x].items():
            # term - psi_t(y) * c contributes to rows (x, b) for unknown (y, b)
            for b in range(F.dim):
                j = uidx.get((y, b))
                if j is None:
                    continue
                r = rid((x, b))
                columns[j][r] = columns[j].get(r, 0) - c
    target = {}
    for x, vec in K.items():
        for c, v in vec.items():
            target[rid((x, c))] = v
    sol = solve(columns, target, len(rowid))
    if sol is None:
        raise ObstructionError("no solution for the component on %s" % t)
    out = {}
    for j, v in sol.items():
        x, b = unknowns[j]
        out.setdefault(x, {})[b] = v
    return out


def _sides_without_linear(psi, t, x):
    """Morphism sides for psi with the unknown psi_t set to zero, moved so
    that the equation reads d psi_t(x) - psi_t(D1 x) = lhs - rhs."""
    lhs, rhs = morphism_sides(psi, t, x)
    return lhs, rhs


# ---------------------------------------------------------------------------
# file format


def load_morphism(path, source, target):
    with open(path) as fh:
        doc = json.load(fh)
    return TableMorphism.from_json(source, target, doc)
