"""
Exact graded linear algebra over the rationals.

Vectors are sparse dicts ``{basis_index: coefficient}``.  Coefficients are
Python ints whenever they are integral and ``Fraction`` otherwise, so that
integer-valued computations never pay for rational arithmetic.  Nothing in
this module touches floating point.
"""

import json
from fractions import Fraction


def scalar(x):
    """Canonical exact scalar: an int if integral, else a reduced Fraction."""
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        x = Fraction(x)
    elif not isinstance(x, Fraction):
        x = Fraction(x)
    if x.denominator == 1:
        return x.numerator
    return x


def scalar_str(x):
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


def koszul(a, b):
    """(-1)^(a*b) as an int."""
    return -1 if (a & 1) and (b & 1) else 1


def vec_iadd(acc, vec, c=1):
    """acc += c * vec, dropping zeros."""
    for k, v in vec.items():
        x = acc.get(k, 0) + c * v
        if x:
            acc[k] = x
        else:
            acc.pop(k, None)
    return acc


def vec_clean(vec):
    return {k: scalar(v) for k, v in vec.items() if v}


# ---------------------------------------------------------------------------
# Row reduction.  Rows are sparse dicts {col: value}.


def row_reduce(rows, ncols=None):
    """Reduced row echelon form by Gauss-Jordan with leftmost pivots.

    Returns ``(reduced_rows, pivots)`` where ``reduced_rows[k]`` has a 1 in
    column ``pivots[k]`` and zeros in every other pivot column.
    """
    work = [dict(r) for r in rows if r]
    reduced = []
    pivots = []
    while work:
        # pick the row whose leading column is smallest
        best = None
        for idx, r in enumerate(work):
            lead = min(r)
            if best is None or lead < best[0]:
                best = (lead, idx)
        lead, idx = best
        prow = work.pop(idx)
        inv = Fraction(1) / Fraction(prow[lead])
        prow = {k: scalar(v * inv) for k, v in prow.items()}
        # eliminate from remaining and previous rows
        nxt = []
        for r in work:
            c = r.get(lead)
            if c:
                vec_iadd(r, prow, -c)
                for k in list(r):
                    r[k] = scalar(r[k])
            if r:
                nxt.append(r)
        work = nxt
        for r in reduced:
            c = r.get(lead)
            if c:
                vec_iadd(r, prow, -c)
                for k in list(r):
                    r[k] = scalar(r[k])
        reduced.append(prow)
        pivots.append(lead)
    order = sorted(range(len(pivots)), key=lambda k: pivots[k])
    return [reduced[k] for k in order], [pivots[k] for k in order]


def rank(rows):
    return len(row_reduce(rows)[1])


def nullspace(rows, ncols):
    """Basis of {x : row . x = 0 for every row}, one vector per free column."""
    red, piv = row_reduce(rows, ncols)
    pivset = set(piv)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = {free: 1}
        for r, p in zip(red, piv):
            c = r.get(free)
            if c:
                v[p] = scalar(-c)
        basis.append(v)
    return basis


def solve(columns, target, nrows=None):
    """Solve ``sum_j x_j * columns[j] = target`` exactly.

    ``columns`` are sparse vectors.  Returns a sparse solution dict over the
    column indices, or ``None`` when the system is inconsistent.
    """
    # augmented system, one row per coordinate
    rows = {}
    for j, col in enumerate(columns):
        for i, v in col.items():
            rows.setdefault(i, {})[j] = v
    aug = len(columns)
    for i, v in target.items():
        rows.setdefault(i, {})[aug] = v
    red, piv = row_reduce(list(rows.values()))
    if aug in piv:
        return None
    sol = {}
    for r, p in zip(red, piv):
        c = r.get(aug)
        if c:
            sol[p] = scalar(c)
    return sol


def span_contains(basis_rows, vec):
    red, piv = row_reduce(basis_rows)
    v = dict(vec)
    for r, p in zip(red, piv):
        c = v.get(p)
        if c:
            vec_iadd(v, r, -c)
    return not any(v.values())


# ---------------------------------------------------------------------------


class GradedSpace:
    """Finite graded vector space with an ordered named basis.

    ``d`` is an optional differential of degree +1, given either as a
    GradedMap, a dict ``{(row, col): value}`` or a dict of columns.
    """

    def __init__(self, names, degrees, d=None):
        names = list(names)
        degrees = [int(x) for x in degrees]
        if len(names) != len(degrees):
            raise ValueError("names and degrees differ in length")
        if len(set(names)) != len(names):
            raise ValueError("basis names must be unique")
        self.names = names
        self.degrees = degrees
        self._index = {n: k for k, n in enumerate(names)}
        self._d = None
        if d is not None:
            if isinstance(d, GradedMap):
                cols = d.cols
            else:
                cols = _cols_from(d)
            self._d = GradedMap(self, self, 1, cols)

    @classmethod
    def from_degrees(cls, degrees, prefix="e", d=None):
        return cls(["%s%d" % (prefix, k) for k in range(len(degrees))], degrees, d)

    @property
    def dim(self):
        return len(self.names)

    def __len__(self):
        return len(self.names)

    def index(self, name):
        return self._index[name]

    def degree(self, k):
        return self.degrees[k]

    @property
    def d(self):
        if self._d is None:
            return GradedMap(self, self, 1, {})
        return self._d

    @property
    def has_differential(self):
        return self._d is not None and not self._d.is_zero()

    def in_degree(self, n):
        return [k for k, x in enumerate(self.degrees) if x == n]

    def degree_set(self):
        return sorted(set(self.degrees))

    def same_basis(self, other):
        return self.names == other.names and self.degrees == other.degrees

    def __eq__(self, other):
        return (isinstance(other, GradedSpace) and self.same_basis(other)
                and self.d == other.d)

    def __hash__(self):
        return hash((tuple(self.names), tuple(self.degrees)))

    def __repr__(self):
        return "GradedSpace(%s)" % ", ".join(
            "%s:%d" % (n, x) for n, x in zip(self.names, self.degrees))

    def identity(self):
        return GradedMap(self, self, 0, {k: {k: 1} for k in range(self.dim)})

    def zero_map(self, target, degree):
        return GradedMap(self, target, degree, {})

    def with_differential(self, d):
        return GradedSpace(self.names, self.degrees, d)

    def to_json(self):
        doc = {"basis": [{"name": n, "degree": x}
                         for n, x in zip(self.names, self.degrees)]}
        if self._d is not None and not self._d.is_zero():
            doc["d"] = {"entries": self._d.entry_list()}
        return doc

    @classmethod
    def from_json(cls, doc):
        basis = doc["basis"]
        names = [b["name"] for b in basis]
        degrees = [int(b["degree"]) for b in basis]
        d = None
        if "d" in doc and doc["d"] is not None:
            d = {(int(r), int(c)): scalar(v) for r, c, v in doc["d"]["entries"]}
        V = cls(names, degrees)
        if d:
            V = cls(names, degrees, GradedMap(V, V, 1, _cols_from(d)))
        return V

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)


def _cols_from(d):
    if not d:
        return {}
    key = next(iter(d))
    if isinstance(key, tuple):
        cols = {}
        for (r, c), v in d.items():
            v = scalar(v)
            if v:
                cols.setdefault(c, {})[r] = v
        return cols
    return {c: vec_clean(col) for c, col in d.items() if col}


class DegreeError(ValueError):
    pass


class GradedMap:
    """Homogeneous linear map stored column-sparse: ``cols[src][tgt] = value``."""

    def __init__(self, source, target, degree, cols=None, check=True):
        self.source = source
        self.target = target
        self.degree = int(degree)
        if cols and isinstance(next(iter(cols)), tuple):
            cols = _cols_from(cols)
        self.cols = {}
        for c, col in (cols or {}).items():
            col = vec_clean(col)
            if col:
                self.cols[c] = col
        if check:
            sd, td = source.degrees, target.degrees
            for c, col in self.cols.items():
                for r in col:
                    if td[r] != sd[c] + self.degree:
                        raise DegreeError(
                            "entry (%s, %s) violates degree %d"
                            % (target.names[r], source.names[c], self.degree))

    @classmethod
    def from_dense(cls, source, target, degree, rows):
        cols = {}
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                v = scalar(v)
                if v:
                    cols.setdefault(j, {})[i] = v
        return cls(source, target, degree, cols)

    def dense(self):
        out = [[0] * self.source.dim for _ in range(self.target.dim)]
        for c, col in self.cols.items():
            for r, v in col.items():
                out[r][c] = v
        return out

    def entry(self, r, c):
        return self.cols.get(c, {}).get(r, 0)

    def entry_list(self):
        return [[r, c, scalar_str(v)] for c in sorted(self.cols)
                for r, v in sorted(self.cols[c].items())]

    def rows(self):
        rows = {}
        for c, col in self.cols.items():
            for r, v in col.items():
                rows.setdefault(r, {})[c] = v
        return rows

    def column(self, c):
        return self.cols.get(c, {})

    def apply(self, vec):
        out = {}
        for c, v in vec.items():
            col = self.cols.get(c)
            if col:
                vec_iadd(out, col, v)
        return out

    __call__ = apply

    def is_zero(self):
        return not self.cols

    def __eq__(self, other):
        if not isinstance(other, GradedMap):
            return NotImplemented
        return (self.degree == other.degree or (self.is_zero() and other.is_zero())) \
            and self.cols == other.cols

    def __hash__(self):
        return id(self)

    def __matmul__(self, other):
        """Composition self o other."""
        if other.target.dim != self.source.dim:
            raise ValueError("composition of incompatible maps")
        cols = {}
        for c, col in other.cols.items():
            out = self.apply(col)
            if out:
                cols[c] = out
        return GradedMap(other.source, self.target, self.degree + other.degree,
                         cols, check=False)

    def _combine(self, other, s):
        if other.is_zero():
            return self
        cols = {c: dict(col) for c, col in self.cols.items()}
        for c, col in other.cols.items():
            vec_iadd(cols.setdefault(c, {}), col, s)
        deg = self.degree if not self.is_zero() else other.degree
        return GradedMap(self.source, self.target, deg, cols, check=False)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = scalar(c)
        return GradedMap(self.source, self.target, self.degree,
                         {k: {r: v * c for r, v in col.items()}
                          for k, col in self.cols.items()}, check=False)

    def rank(self):
        return rank(list(self.rows().values()))

    def __repr__(self):
        return "GradedMap(%d->%d, deg %d, nnz %d)" % (
            self.source.dim, self.target.dim, self.degree,
            sum(len(c) for c in self.cols.values()))


def identity(V):
    return V.identity()


def shift(V, m):
    """V[m] with (V[m])^n = V^(n-m): a degree-k element sits in degree k+m.

    Matrix entries of the differential are copied unsigned; suspension signs
    are applied where shifted factors are tensored together.
    """
    degrees = [x + m for x in V.degrees]
    W = GradedSpace(V.names, degrees)
    if V.has_differential:
        W = GradedSpace(V.names, degrees, GradedMap(W, W, 1, V.d.cols, check=False))
    return W


def tensor_space(V, W):
    """V (x) W with lexicographic basis (v, w) -> index v*dim W + w."""
    names = ["%s*%s" % (a, b) for a in V.names for b in W.names]
    degrees = [x + y for x in V.degrees for y in W.degrees]
    T = GradedSpace(names, degrees)
    if V.has_differential or W.has_differential:
        d = tensor_map(V.d, W.identity()) + tensor_map(V.identity(), W.d)
        T = GradedSpace(names, degrees, d.cols)
    return T


def tensor_map(f, g, source=None, target=None):
    """Koszul tensor product: (f (x) g)(x (x) y) = (-1)^(|g||x|) f(x) (x) g(y)."""
    S1, S2, T2 = f.source, g.source, g.target
    n2, m2 = S2.dim, T2.dim
    if source is None:
        source = GradedSpace(["%s*%s" % (a, b) for a in S1.names for b in S2.names],
                             [x + y for x in S1.degrees for y in S2.degrees])
    if target is None:
        T1 = f.target
        target = GradedSpace(["%s*%s" % (a, b) for a in T1.names for b in T2.names],
                             [x + y for x in T1.degrees for y in T2.degrees])
    cols = {}
    for a, fcol in f.cols.items():
        s = koszul(g.degree, S1.degrees[a])
        for b, gcol in g.cols.items():
            col = {}
            for ra, va in fcol.items():
                for rb, vb in gcol.items():
                    col[ra * m2 + rb] = s * va * vb
            cols[a * n2 + b] = col
    return GradedMap(source, target, f.degree + g.degree, cols, check=False)


def check_complex(V):
    """Validate the dg hypothesis; returns a report dict."""
    report = {"ok": True, "degree_violations": [], "d_squared": []}
    d = V.d
    for c, col in d.cols.items():
        for r in col:
            if V.degrees[r] != V.degrees[c] + 1:
                report["degree_violations"].append((V.names[r], V.names[c]))
    dd = d @ d
    for c, col in dd.cols.items():
        for r, v in col.items():
            report["d_squared"].append((V.names[r], V.names[c], scalar_str(v)))
    report["ok"] = not report["degree_violations"] and not report["d_squared"]
    return report


def build_complex(degrees, d_entries, prefix="e"):
    """Convenience constructor; d given as {(row, col): value}; validated."""
    V = GradedSpace.from_degrees(degrees, prefix)
    if not d_entries:
        return V
    rep_space = GradedSpace(V.names, V.degrees)
    d = GradedMap(rep_space, rep_space, 1, d_entries, check=False)
    W = GradedSpace(V.names, V.degrees, d)
    return W


def homology_retract(V):
    """Strict deformation retract of V onto its cohomology.

    Returns ``(H, i, r, h)`` with H carrying zero differential, r o i = id,
    d h + h d = id - i r, and h i = 0, r h = 0, h h = 0.  In each degree the
    space is split as B + Hreps + C with B = d(C of the previous degree),
    Hreps extending B to the cycles and C a complement of the cycles chosen
    by leftmost-pivot extension with standard basis vectors.
    """
    d = V.d
    degs = V.degree_set()
    B = {}          # degree -> list of (boundary vector, preimage in C)
    hreps = {}      # degree -> list of cycle vectors
    comps = {}      # degree -> list of complement vectors
    for n in degs:
        idx = V.in_degree(n)
        # cycles in degree n: kernel of d restricted to span(idx)
        rows = {}
        for k, c in enumerate(idx):
            for r, v in d.column(c).items():
                rows.setdefault(r, {})[k] = v
        ker = nullspace(list(rows.values()), len(idx))
        ker = [{idx[k]: v for k, v in z.items()} for z in ker]
        bvecs = [b for b, _ in B.get(n, [])]
        # extend B to a basis of Z
        basis = list(bvecs)
        hr = []
        for z in ker:
            if not basis or not span_contains(basis, z):
                basis.append(z)
                hr.append(z)
        hreps[n] = hr
        # extend Z to the whole degree-n space by unit vectors
        cc = []
        for c in idx:
            e = {c: 1}
            if not basis or not span_contains(basis, e):
                basis.append(e)
                cc.append(e)
        comps[n] = cc
        B[n + 1] = [(d.apply(c), c) for c in cc]
    # homology space
    names, hdegs = [], []
    for n in degs:
        for k in range(len(hreps[n])):
            names.append("h%d_%d" % (n, k) if n >= 0 else "h_%d_%d" % (-n, k))
            hdegs.append(n)
    H = GradedSpace(names, hdegs)
    icols, rcols, hcols = {}, {}, {}
    hpos = 0
    hindex = {}
    for n in degs:
        for k, z in enumerate(hreps[n]):
            icols[hpos] = z
            hindex[(n, k)] = hpos
            hpos += 1
    for n in degs:
        idx = V.in_degree(n)
        bl = B.get(n, [])
        frame = [b for b, _ in bl] + hreps[n] + comps[n]
        nb, nh = len(bl), len(hreps[n])
        for c in idx:
            coords = solve(frame, {c: 1})
            rc, hc = {}, {}
            for j, v in coords.items():
                if j < nb:
                    vec_iadd(hc, bl[j][1], v)
                elif j < nb + nh:
                    rc[hindex[(n, j - nb)]] = v
            if rc:
                rcols[c] = rc
            if hc:
                hcols[c] = hc
    i = GradedMap(H, V, 0, icols)
    r = GradedMap(V, H, 0, rcols)
    h = GradedMap(V, V, -1, hcols)
    return H, i, r, h


def homology_dims(V):
    """{degree: dim H^n} via ranks: dim ker d_n - dim im d_(n-1)."""
    d = V.d
    out = {}
    ranks = {}
    for n in V.degree_set():
        idx = V.in_degree(n)
        rows = {}
        for k, c in enumerate(idx):
            for r, v in d.column(c).items():
                rows.setdefault(r, {})[k] = v
        ranks[n] = rank(list(rows.values()))
    for n in V.degree_set():
        out[n] = len(V.in_degree(n)) - ranks[n] - ranks.get(n - 1, 0)
    return out


def retract_identities(V, H, i, r, h):
    """Residuals of the five retract identities (all should be zero maps)."""
    dV, dH = V.d, H.d
    idV, idH = V.identity(), H.identity()
    return {
        "i_chain": (dV @ i) - (i @ dH),
        "r_chain": (dH @ r) - (r @ dV),
        "ri_id": (r @ i) - idH,
        "homotopy": (dV @ h) + (h @ dV) - (idV - i @ r),
        "hi": h @ i,
        "rh": r @ h,
        "hh": h @ h,
    }
