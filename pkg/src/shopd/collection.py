"""
Symmetric dg collections and strict pseudo operads.

Permutations are tuples ``p`` with ``p[j]`` the image of position ``j``
(0-based).  The right action on an operation is ``f.p = f o p_*`` where
``p_*`` sends the tensor factor at position j to position p[j], with the
Koszul sign.  Only the adjacent transpositions are stored as matrices;
other permutations are applied as products of them.
"""

from functools import lru_cache
from itertools import product, permutations

from .exactlin import (GradedMap, GradedSpace, koszul, scalar, scalar_str,
                       vec_iadd)


def perm_inverse(p):
    inv = [0] * len(p)
    for j, k in enumerate(p):
        inv[k] = j
    return tuple(inv)


def perm_compose(p, q):
    """(p q)(j) = p(q(j))."""
    return tuple(p[q[j]] for j in range(len(q)))


def adjacent_word(p):
    """Adjacent transpositions k (swapping k, k+1) with p = s_k1 s_k2 ... s_km."""
    p = list(p)
    word = []
    # bubble sort p -> identity by right multiplication: p s_k swaps entries k, k+1
    n = len(p)
    changed = True
    while changed:
        changed = False
        for k in range(n - 1):
            if p[k] > p[k + 1]:
                p[k], p[k + 1] = p[k + 1], p[k]
                word.append(k)
                changed = True
    # p s_w1 ... s_wm = id  =>  p = s_wm ... s_w1
    return list(reversed(word))


def transposition(n, k):
    p = list(range(n))
    p[k], p[k + 1] = p[k + 1], p[k]
    return tuple(p)


def koszul_perm_sign(p, degs):
    """Sign of moving factor j (degree degs[j]) to position p[j]."""
    s = 1
    n = len(p)
    for a in range(n):
        if not degs[a] & 1:
            continue
        for b in range(a + 1, n):
            if p[a] > p[b] and degs[b] & 1:
                s = -s
    return s


def block_perm(p, i, m):
    """Permutation of n+m-1 positions obtained from p in S_n by replacing
    position i (0-based) by a block of m consecutive positions."""
    n = len(p)
    # new start of each old position's block
    sizes = [m if j == i else 1 for j in range(n)]
    order = sorted(range(n), key=lambda j: p[j])  # old positions by target slot
    start_target = {}
    acc = 0
    for j in order:
        start_target[j] = acc
        acc += sizes[j]
    out = []
    for j in range(n):
        for l in range(sizes[j]):
            out.append(start_target[j] + l)
    return tuple(out)


def insert_perm(i, m, q, n):
    """Permutation of n+m-1 positions acting by q in S_m on the block at i."""
    out = list(range(i)) + [i + x for x in q] + list(range(i + m, n + m - 1))
    return tuple(out)


class DgCollection:
    """Arity-indexed graded spaces P(1..cap) with right symmetric actions.

    Subclasses provide ``fiber(n)`` and ``transposition_map(n, k)``.
    """

    cap = 0

    def fiber(self, n):
        raise NotImplementedError

    def transposition_map(self, n, k):
        """Matrix of the right action of the transposition (k, k+1) on P(n)."""
        raise NotImplementedError

    def act(self, n, p, vec):
        p = tuple(p)
        if n == 1 or p == tuple(range(n)):
            return dict(vec)
        out = dict(vec)
        for k in adjacent_word(p):
            out = self.transposition_map(n, k).apply(out)
        return out

    def act_basis(self, n, p, a):
        return self._act_basis(n, tuple(p), a)

    @lru_cache(maxsize=None)
    def _act_basis(self, n, p, a):
        return self.act(n, p, {a: 1})

    def check_actions(self):
        """Coxeter relations for the stored generators and compatibility of
        the actions with the fiber differentials."""
        failures = []
        for n in range(2, self.cap + 1):
            P = self.fiber(n)
            ident = P.identity()
            gens = [self.transposition_map(n, k) for k in range(n - 1)]
            for k, s in enumerate(gens):
                if s @ s != ident:
                    failures.append(("involution", n, k))
                if s @ P.d != P.d @ s:
                    failures.append(("differential", n, k))
                if k + 1 < len(gens):
                    t = gens[k + 1]
                    if s @ t @ s != t @ s @ t:
                        failures.append(("braid", n, k))
                for l in range(k + 2, len(gens)):
                    t = gens[l]
                    if s @ t != t @ s:
                        failures.append(("commute", n, k, l))
        return failures


class PseudoOperad(DgCollection):
    """Strict dg pseudo operad.

    ``comp(n, i, m, a, b)`` is ``a o_i b`` for basis elements a of P(n) and
    b of P(m), 1 <= i <= n, as a sparse vector in P(n+m-1).  ``unit`` is an
    optional vector in P(1).
    """

    unit = None

    def comp(self, n, i, m, a, b):
        raise NotImplementedError

    def comp_vec(self, n, i, m, x, y):
        out = {}
        for a, ca in x.items():
            for b, cb in y.items():
                vec_iadd(out, self.comp(n, i, m, a, b), ca * cb)
        return out

    def d(self, n, vec):
        return self.fiber(n).d.apply(vec)


def circ(P, n, i, m, p, q):
    """p o_i q for vectors p in P(n), q in P(m); checks indices and the cap."""
    if not 1 <= i <= n:
        raise IndexError("composition index %d out of range for arity %d" % (i, n))
    if n + m - 1 > P.cap:
        raise ValueError("arity %d exceeds the cap %d" % (n + m - 1, P.cap))
    if isinstance(p, int):
        p = {p: 1}
    if isinstance(q, int):
        q = {q: 1}
    return P.comp_vec(n, i, m, p, q)


# ---------------------------------------------------------------------------
# Endomorphism operad


class EndOperad(PseudoOperad):
    """End_V(n) = Hom(V^(x)n, V).

    Basis element index ``w * dim + out`` is the elementary map sending the
    input word w (lexicographic index in [dim]^n) to basis vector ``out``.
    """

    def __init__(self, V, cap):
        if cap < 1:
            raise ValueError("arity cap must be >= 1")
        if V.dim < 1:
            raise ValueError("End_V needs dim V >= 1")
        self.V = V
        self.cap = cap
        self.dim = V.dim
        self._fibers = {}
        self._dV = V.d
        self.unit = {self.index((a,), a): 1 for a in range(V.dim)}
        self._comp_cache = {}

    def index(self, word, out):
        w = 0
        for x in word:
            w = w * self.dim + x
        return w * self.dim + out

    def decode(self, n, idx):
        out = idx % self.dim
        w = idx // self.dim
        word = []
        for _ in range(n):
            word.append(w % self.dim)
            w //= self.dim
        return tuple(reversed(word)), out

    def map_degree(self, word, out):
        dg = self.V.degrees
        return dg[out] - sum(dg[x] for x in word)

    def fiber(self, n):
        if n in self._fibers:
            return self._fibers[n]
        dg = self.V.degrees
        names, degs = [], []
        for word in product(range(self.dim), repeat=n):
            for out in range(self.dim):
                names.append("E%d|%s" % (out, ".".join(map(str, word))))
                degs.append(self.map_degree(word, out))
        S = GradedSpace(names, degs)
        cols = {}
        if self.V.has_differential:
            dV = self._dV
            dcols = dV.cols
            drows = dV.rows()
            for idx in range(len(names)):
                word, out = self.decode(n, idx)
                fdeg = degs[idx]
                col = {}
                # d_V o f
                for c, v in dcols.get(out, {}).items():
                    vec_iadd(col, {self.index(word, c): v})
                # -(-1)^|f| f o d_tensor; d on input j picks sign from inputs before j
                s0 = -1 if fdeg % 2 == 0 else 1
                pre = 0
                for j in range(n):
                    wj = word[j]
                    sj = s0 * (-1 if pre & 1 else 1)
                    for u, v in drows.get(wj, {}).items():
                        w2 = word[:j] + (u,) + word[j + 1:]
                        vec_iadd(col, {self.index(w2, out): sj * v})
                    pre += dg[wj]
                if col:
                    cols[idx] = col
        F = GradedSpace(names, degs, cols) if cols else S
        self._fibers[n] = F
        return F

    def comp(self, n, i, m, a, b):
        key = (n, i, m, a, b)
        hit = self._comp_cache.get(key)
        if hit is not None:
            return hit
        u, aout = self.decode(n, a)
        v, bout = self.decode(m, b)
        if u[i - 1] != bout:
            res = {}
        else:
            dg = self.V.degrees
            gdeg = self.map_degree(v, bout)
            pre = sum(dg[x] for x in u[:i - 1])
            s = koszul(gdeg, pre)
            res = {self.index(u[:i - 1] + v + u[i:], aout): s}
        self._comp_cache[key] = res
        return res

    def post(self, n, M, vec):
        """M o F for a linear map M of V and F in End_V(n); no sign."""
        dim = self.dim
        out = {}
        for idx, c in vec.items():
            w, b = divmod(idx, dim)
            for a, v in M.cols.get(b, {}).items():
                k = w * dim + a
                out[k] = out.get(k, 0) + c * v
        return {k: v for k, v in out.items() if v}

    def pre_d(self, n, vec, slots=None):
        """F o d_(V^n) restricted to the given input slots (0-based), with
        the Koszul sign of d passing the earlier inputs."""
        dg = self.V.degrees
        drows = self._dV.rows()
        out = {}
        for idx, c in vec.items():
            word, o = self.decode(n, idx)
            pre = 0
            for j in range(n):
                wj = word[j]
                if slots is None or j in slots:
                    sj = -c if pre & 1 else c
                    for u, v in drows.get(wj, {}).items():
                        k = self.index(word[:j] + (u,) + word[j + 1:], o)
                        out[k] = out.get(k, 0) + sj * v
                pre += dg[wj]
        return {k: v for k, v in out.items() if v}

    def act_on_word(self, n, p, idx):
        """(E . p) = sign * E' computed directly (used as an oracle)."""
        word, out = self.decode(n, idx)
        dg = self.V.degrees
        # E[out, w] . p = eps E[out, u] with u_k = w_{p(k)}
        u = tuple(word[p[k]] for k in range(n))
        s = koszul_perm_sign(p, [dg[x] for x in u])
        return {self.index(u, out): s}

    @lru_cache(maxsize=None)
    def transposition_map(self, n, k):
        P = self.fiber(n)
        p = transposition(n, k)
        cols = {}
        for idx in range(P.dim):
            cols[idx] = self.act_on_word(n, p, idx)
        return GradedMap(P, P, 0, cols)

    def evaluate(self, n, vec, inputs):
        """Apply an element of End_V(n) to a tensor of basis vectors."""
        out = {}
        for idx, c in vec.items():
            word, o = self.decode(n, idx)
            if word == tuple(inputs):
                out[o] = out.get(o, 0) + c
        return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# Associative operad: Ass(n) = k S_n, basis = words (orderings of 1..n)


class AssOperad(PseudoOperad):
    """Ass(n) spanned by monomials x_w1 ... x_wn; concentrated in degree 0."""

    def __init__(self, cap):
        self.cap = cap
        self._words = {}
        self._index = {}
        self._fibers = {}
        self.unit = {0: 1}

    def words(self, n):
        if n not in self._words:
            ws = list(permutations(range(1, n + 1)))
            self._words[n] = ws
            self._index[n] = {w: k for k, w in enumerate(ws)}
        return self._words[n]

    def word_index(self, n, w):
        self.words(n)
        return self._index[n][tuple(w)]

    def fiber(self, n):
        if n not in self._fibers:
            ws = self.words(n)
            self._fibers[n] = GradedSpace(["x" + "".join(map(str, w)) for w in ws],
                                          [0] * len(ws))
        return self._fibers[n]

    def comp(self, n, i, m, a, b):
        u = self.words(n)[a]
        v = self.words(m)[b]
        out = []
        for x in u:
            if x < i:
                out.append(x)
            elif x == i:
                out.extend(y + i - 1 for y in v)
            else:
                out.append(x + m - 1)
        return {self.word_index(n + m - 1, out): 1}

    @lru_cache(maxsize=None)
    def transposition_map(self, n, k):
        P = self.fiber(n)
        p = transposition(n, k)
        pinv = perm_inverse(p)
        cols = {}
        for a, w in enumerate(self.words(n)):
            # w . p = p^-1 o w (letters relabeled by p^-1)
            cols[a] = {self.word_index(n, [pinv[x - 1] + 1 for x in w]): 1}
        return GradedMap(P, P, 0, cols)


# ---------------------------------------------------------------------------
# Operads given by explicit tables (file format, cohomology, perturbations)


class TableOperad(PseudoOperad):
    """Pseudo operad from explicit fibers, generator matrices and comp tables.

    ``comps[(n, i, m)]`` maps ``(a, b)`` to a sparse vector.  Missing arities
    compose to zero.
    """

    def __init__(self, cap, fibers, actions=None, comps=None, unit=None):
        self.cap = cap
        self._fibers = dict(fibers)
        self._actions = actions or {}
        self.comps = comps or {}
        self.unit = unit

    def fiber(self, n):
        if n not in self._fibers:
            self._fibers[n] = GradedSpace([], [])
        return self._fibers[n]

    def transposition_map(self, n, k):
        mats = self._actions.get(n)
        P = self.fiber(n)
        if not mats:
            # trivial action
            return P.identity()
        return mats[k]

    def comp(self, n, i, m, a, b):
        return self.comps.get((n, i, m), {}).get((a, b), {})

    def to_json(self):
        doc = {"arityCap": self.cap,
               "fibers": {str(n): self.fiber(n).to_json() for n in range(1, self.cap + 1)},
               "actions": {}, "comps": []}
        for n, mats in self._actions.items():
            doc["actions"][str(n)] = [m.entry_list() for m in mats]
        for (n, i, m), table in sorted(self.comps.items()):
            dm = self.fiber(m).dim
            entries = []
            for (a, b), vec in sorted(table.items()):
                for r, v in sorted(vec.items()):
                    entries.append([r, a * dm + b, scalar_str(v)])
            doc["comps"].append({"n": n, "i": i, "m": m, "entries": entries})
        if self.unit:
            doc["unit"] = [[k, scalar_str(v)] for k, v in sorted(self.unit.items())]
        return doc

    @classmethod
    def from_json(cls, doc):
        cap = int(doc["arityCap"])
        fibers = {int(n): GradedSpace.from_json(c) for n, c in doc["fibers"].items()}
        actions = {}
        for n, mats in (doc.get("actions") or {}).items():
            n = int(n)
            P = fibers[n]
            actions[n] = [GradedMap(P, P, 0, {(int(r), int(c)): scalar(v) for r, c, v in m})
                          for m in mats]
        comps = {}
        for entry in doc.get("comps") or []:
            n, i, m = int(entry["n"]), int(entry["i"]), int(entry["m"])
            dm = fibers[m].dim
            table = {}
            for r, col, v in entry["entries"]:
                a, b = divmod(int(col), dm)
                table.setdefault((a, b), {})[int(r)] = scalar(v)
            comps[(n, i, m)] = table
        unit = None
        if doc.get("unit"):
            unit = {int(k): scalar(v) for k, v in doc["unit"]}
        return cls(cap, fibers, actions, comps, unit)


def tabulate(P):
    """Freeze any pseudo operad into a TableOperad (within its cap)."""
    fibers = {n: P.fiber(n) for n in range(1, P.cap + 1)}
    actions = {n: [P.transposition_map(n, k) for k in range(n - 1)]
               for n in range(2, P.cap + 1)}
    comps = {}
    for n in range(1, P.cap + 1):
        for m in range(1, P.cap - n + 2):
            for i in range(1, n + 1):
                table = {}
                for a in range(fibers[n].dim):
                    for b in range(fibers[m].dim):
                        v = P.comp(n, i, m, a, b)
                        if v:
                            table[(a, b)] = dict(v)
                comps[(n, i, m)] = table
    return TableOperad(P.cap, fibers, actions, comps, P.unit)


class PerturbedOperad(PseudoOperad):
    """Wraps an operad and overrides single composition values."""

    def __init__(self, base, overrides):
        self.base = base
        self.cap = base.cap
        self.overrides = dict(overrides)
        self.unit = base.unit

    def fiber(self, n):
        return self.base.fiber(n)

    def transposition_map(self, n, k):
        return self.base.transposition_map(n, k)

    def comp(self, n, i, m, a, b):
        key = (n, i, m, a, b)
        if key in self.overrides:
            return self.overrides[key]
        return self.base.comp(n, i, m, a, b)


class ZeroCompOperad(PseudoOperad):
    """Same collection, all compositions zero."""

    def __init__(self, base):
        self.base = base
        self.cap = base.cap

    def fiber(self, n):
        return self.base.fiber(n)

    def transposition_map(self, n, k):
        return self.base.transposition_map(n, k)

    def comp(self, n, i, m, a, b):
        return {}


def end_collection(V, cap):
    return EndOperad(V, cap)


# ---------------------------------------------------------------------------
# Law checking


def check_pseudo_operad(P, max_failures=20):
    """Verify the pseudo-operad axioms within the arity cap.

    Checks: fiber complexes, d a derivation of every o_i, the three
    associativity patterns (sequential, and the two parallel orders), and
    equivariance of o_i under the stored generators on either factor.
    Returns a report dict with witnesses.
    """
    failures = []

    def fail(*w):
        if len(failures) < max_failures:
            failures.append(w)

    cap = P.cap
    F = {n: P.fiber(n) for n in range(1, cap + 1)}
    deg = {n: F[n].degrees for n in F}
    for n in F:
        dd = F[n].d @ F[n].d
        if not dd.is_zero():
            fail("d_squared", n)
    for w in P.check_actions():
        fail("action", *w)

    # derivation: d(p o_i q) = dp o_i q + (-1)^|p| p o_i dq
    for n in F:
        for m in range(1, cap - n + 2):
            for i in range(1, n + 1):
                for a in range(F[n].dim):
                    da = P.d(n, {a: 1})
                    for b in range(F[m].dim):
                        lhs = P.d(n + m - 1, P.comp(n, i, m, a, b))
                        rhs = P.comp_vec(n, i, m, da, {b: 1})
                        vec_iadd(rhs, P.comp_vec(n, i, m, {a: 1}, P.d(m, {b: 1})),
                                 -1 if deg[n][a] & 1 else 1)
                        if lhs != rhs:
                            fail("derivation", n, i, m, a, b)

    # associativity
    for n in F:
        for m in range(1, cap - n + 2):
            for l in range(1, cap - n - m + 3):
                N = n + m + l - 2
                if N > cap:
                    continue
                for a in range(F[n].dim):
                    for b in range(F[m].dim):
                        for c in range(F[l].dim):
                            # sequential: (a o_i b) o_(i+j-1) c = a o_i (b o_j c)
                            for i in range(1, n + 1):
                                ab = P.comp(n, i, m, a, b)
                                for j in range(1, m + 1):
                                    lhs = P.comp_vec(n + m - 1, i + j - 1, l, ab, {c: 1})
                                    rhs = P.comp_vec(n, i, m + l - 1, {a: 1},
                                                     P.comp(m, j, l, b, c))
                                    if lhs != rhs:
                                        fail("sequential", (n, i, m, j, l), (a, b, c))
                            # parallel: i < j, (a o_i b) o_(j+m-1) c
                            #   = (-1)^(|b||c|) (a o_j c) o_i b
                            for i in range(1, n + 1):
                                for j in range(i + 1, n + 1):
                                    ab = P.comp(n, i, m, a, b)
                                    ac = P.comp(n, j, l, a, c)
                                    lhs = P.comp_vec(n + m - 1, j + m - 1, l, ab, {c: 1})
                                    rhs = P.comp_vec(n + l - 1, i, m, ac, {b: 1})
                                    s = koszul(deg[m][b], deg[l][c])
                                    if s < 0:
                                        rhs = {k: -v for k, v in rhs.items()}
                                    if lhs != rhs:
                                        fail("parallel", (n, i, j, m, l), (a, b, c))

    # equivariance under generators
    for n in F:
        for m in range(1, cap - n + 2):
            N = n + m - 1
            for i in range(1, n + 1):
                for k in range(n - 1):
                    p = transposition(n, k)
                    rho = block_perm(p, i - 1, m)
                    for a in range(F[n].dim):
                        ap = P.act_basis(n, p, a)
                        for b in range(F[m].dim):
                            lhs = P.comp_vec(n, i, m, ap, {b: 1})
                            rhs = P.act(N, rho, P.comp(n, p[i - 1] + 1, m, a, b))
                            if lhs != rhs:
                                fail("equivariance_left", (n, i, m, k), (a, b))
                for k in range(m - 1):
                    q = transposition(m, k)
                    rho = insert_perm(i - 1, m, q, n)
                    for a in range(F[n].dim):
                        for b in range(F[m].dim):
                            lhs = P.comp_vec(n, i, m, {a: 1}, P.act_basis(m, q, b))
                            rhs = P.act(N, rho, P.comp(n, i, m, a, b))
                            if lhs != rhs:
                                fail("equivariance_right", (n, i, m, k), (a, b))
    return {"ok": not failures, "failures": failures}
