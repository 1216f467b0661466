"""
Planar rooted trees with labeled leaves.

A tree is stored as a nested tuple ``shape``: a leaf is a positive int (its
label) and an internal vertex is a non-empty tuple of children.  The root
edge is implicit.  Vertices are identified by their planar preorder index
(root = 0, children left to right), which is the vertex order used for all
sign bookkeeping elsewhere in the package.
"""

from functools import cached_property
from itertools import permutations, product
from math import comb, factorial


class TreeSyntaxError(ValueError):
    def __init__(self, msg, text, pos):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__("%s at line %d, column %d" % (msg, line, col))
        self.line, self.column = line, col


class PlanarTree:
    __slots__ = ("shape", "__dict__")

    def __init__(self, shape, check=True):
        if isinstance(shape, PlanarTree):
            shape = shape.shape
        if isinstance(shape, int):
            raise ValueError("a tree needs at least one internal vertex")
        self.shape = _freeze(shape)
        if check:
            labels = sorted(self.leaves)
            if labels != list(range(1, len(labels) + 1)):
                raise ValueError("leaf labels must be exactly 1..n, got %s" % labels)

    # -- structure ---------------------------------------------------------

    @cached_property
    def _walk(self):
        nodes, parent, slot, children = [], [], [], []

        def visit(node, par, s):
            vid = len(nodes)
            nodes.append(node)
            parent.append(par)
            slot.append(s)
            children.append([])
            items = []
            for j, ch in enumerate(node):
                if isinstance(ch, int):
                    items.append(("leaf", ch))
                else:
                    items.append(("vert", visit(ch, vid, j)))
            children[vid] = items
            return vid

        visit(self.shape, None, None)
        return nodes, parent, slot, children

    @property
    def nvertices(self):
        return len(self._walk[0])

    def __len__(self):
        return self.nvertices

    @property
    def vertices(self):
        return range(self.nvertices)

    def parent(self, v):
        return self._walk[1][v]

    def slot(self, v):
        """Index of v among its parent's children (None for the root)."""
        return self._walk[2][v]

    def children(self, v):
        """List of ('leaf', label) / ('vert', id) in planar order."""
        return self._walk[3][v]

    def arity(self, v):
        return len(self._walk[0][v])

    @cached_property
    def arities(self):
        return tuple(len(x) for x in self._walk[0])

    def internal_children(self, v):
        return [x for kind, x in self.children(v) if kind == "vert"]

    @cached_property
    def leaves(self):
        """Leaf labels in planar order."""
        out = []

        def visit(node):
            for ch in node:
                if isinstance(ch, int):
                    out.append(ch)
                else:
                    visit(ch)

        visit(self.shape)
        return tuple(out)

    @property
    def n(self):
        return len(self.leaves)

    @cached_property
    def edges(self):
        """Internal edges as (lower vertex, upper vertex)."""
        return tuple((self.parent(v), v) for v in self.vertices if v > 0)

    def leaves_below(self, v):
        return PlanarTree(self._walk[0][v], check=False).leaves

    # -- derived trees -----------------------------------------------------

    def standard(self):
        """Same planar shape with leaves relabeled 1..n in planar order."""
        counter = iter(range(1, self.n + 1))

        def visit(node):
            return tuple(next(counter) if isinstance(c, int) else visit(c) for c in node)

        return PlanarTree(visit(self.shape), check=False)

    def is_standard(self):
        return self.leaves == tuple(range(1, self.n + 1))

    def relabel(self, mapping):
        def visit(node):
            return tuple(mapping[c] if isinstance(c, int) else visit(c) for c in node)

        return PlanarTree(visit(self.shape))

    def canonical(self):
        """Canonical planar representative of the underlying rooted tree:
        children sorted by smallest leaf label below them."""

        def visit(node):
            kids = [c if isinstance(c, int) else visit(c) for c in node]
            kids.sort(key=_minleaf)
            return tuple(kids)

        return PlanarTree(visit(self.shape), check=False)

    # -- dunder ------------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, PlanarTree) and self.shape == other.shape

    def __hash__(self):
        return hash(self.shape)

    def __lt__(self, other):
        return sort_key(self) < sort_key(other)

    def __str__(self):
        return to_string(self.shape)

    def __repr__(self):
        return "PlanarTree(%s)" % to_string(self.shape)


def _freeze(shape):
    if isinstance(shape, int):
        if shape < 1:
            raise ValueError("leaf labels must be positive")
        return shape
    shape = tuple(shape)
    if not shape:
        raise ValueError("internal vertices need arity >= 1")
    return tuple(_freeze(c) for c in shape)


def _minleaf(node):
    if isinstance(node, int):
        return node
    return min(_minleaf(c) for c in node)


def to_string(shape):
    if isinstance(shape, int):
        return str(shape)
    return "(" + ",".join(to_string(c) for c in shape) + ")"


def sort_key(t):
    """Deterministic order: vertex count, leaf count, arities, leaves, shape."""
    return (t.nvertices, t.n, t.arities, t.leaves, str(t))


def corolla(n):
    return PlanarTree(tuple(range(1, n + 1)))


def chain(k):
    """Linear tree of k unary vertices over leaf 1."""
    shape = (1,)
    for _ in range(k - 1):
        shape = (shape,)
    return PlanarTree(shape)


# ---------------------------------------------------------------------------
# Parsing


def parse_tree(text):
    """Parse ``tree ::= INT | '(' tree (',' tree)* ')'`` into a PlanarTree."""
    pos, node = _parse_node(text, _skip(text, 0))
    pos = _skip(text, pos)
    if pos != len(text):
        raise TreeSyntaxError("unexpected trailing input", text, pos)
    if isinstance(node, int):
        raise TreeSyntaxError("a tree needs at least one internal vertex", text, 0)
    labels = []

    def collect(n):
        for c in n:
            if isinstance(c, int):
                labels.append(c)
            else:
                collect(c)

    collect(node)
    seen = set()
    for lab in labels:
        if lab in seen:
            raise TreeSyntaxError("duplicate leaf label %d" % lab, text, text.find(str(lab)))
        seen.add(lab)
    missing = sorted(set(range(1, len(labels) + 1)) - seen)
    if missing:
        raise TreeSyntaxError("leaf labels have a gap (missing %d)" % missing[0], text, 0)
    return PlanarTree(node)


def _skip(text, pos):
    while pos < len(text) and text[pos] in " \t\r\n":
        pos += 1
    return pos


def _parse_node(text, pos):
    if pos >= len(text):
        raise TreeSyntaxError("unexpected end of input", text, pos)
    ch = text[pos]
    if ch.isdigit():
        end = pos
        while end < len(text) and text[end].isdigit():
            end += 1
        val = int(text[pos:end])
        if val < 1:
            raise TreeSyntaxError("leaf labels must be positive", text, pos)
        return end, val
    if ch != "(":
        raise TreeSyntaxError("expected '(' or a leaf label, got %r" % ch, text, pos)
    pos = _skip(text, pos + 1)
    kids = []
    while True:
        pos, kid = _parse_node(text, pos)
        kids.append(kid)
        pos = _skip(text, pos)
        if pos < len(text) and text[pos] == ",":
            pos = _skip(text, pos + 1)
            continue
        if pos < len(text) and text[pos] == ")":
            return pos + 1, tuple(kids)
        raise TreeSyntaxError("expected ',' or ')'", text, pos)


# ---------------------------------------------------------------------------
# Enumeration


def _shapes(nleaves, nverts, min_arity):
    """Unlabeled planar shapes (leaves = 0) with exactly these counts."""
    if nverts < 1 or nleaves < 1:
        return []
    return list(_shapes_cached(nleaves, nverts, min_arity))


_SHAPE_CACHE = {}


def _shapes_cached(nleaves, nverts, min_arity):
    key = (nleaves, nverts, min_arity)
    if key in _SHAPE_CACHE:
        return _SHAPE_CACHE[key]
    out = []
    # root arity a; each child is a leaf (0 vertices, 1 leaf) or a subtree
    for a in range(max(1, min_arity), nleaves + 1):
        for kids in _forests(a, nleaves, nverts - 1, min_arity):
            out.append(tuple(kids))
    _SHAPE_CACHE[key] = tuple(out)
    return _SHAPE_CACHE[key]


def _forests(slots, nleaves, nverts, min_arity):
    """Ordered sequences of `slots` items (leaf or subtree) using exactly the
    given numbers of leaves and vertices."""
    if slots == 0:
        if nleaves == 0 and nverts == 0:
            yield []
        return
    if nleaves < slots:
        return
    # first item is a leaf
    for rest in _forests(slots - 1, nleaves - 1, nverts, min_arity):
        yield [0] + rest
    # first item is a subtree with l leaves and k vertices
    for k in range(1, nverts + 1):
        for l in range(1, nleaves - (slots - 1) + 1):
            subs = _shapes_cached(l, k, min_arity)
            if not subs:
                continue
            for rest in _forests(slots - 1, nleaves - l, nverts - k, min_arity):
                for s in subs:
                    yield [s] + rest


def _label(shape, labels):
    it = iter(labels)

    def visit(node):
        return tuple(next(it) if c == 0 else visit(c) for c in node)

    return visit(shape)


def planar_shapes(n, kmax, min_arity=1, kmin=1):
    """Planar trees with n leaves labeled 1..n in planar order and
    kmin..kmax vertices, every vertex of arity >= min_arity."""
    out = []
    for k in range(kmin, kmax + 1):
        for s in _shapes(n, k, min_arity):
            out.append(PlanarTree(_label(s, range(1, n + 1)), check=False))
    return sorted(out, key=sort_key)


def enumerate_trees(n, kmax, min_arity=1):
    """All leaf-labeled planar trees with n leaves, at most kmax vertices and
    vertex arities >= min_arity, in a deterministic order."""
    if n < 1 or kmax < 1:
        return []
    out = []
    for t in planar_shapes(n, kmax, min_arity):
        for perm in permutations(range(1, n + 1)):
            out.append(t.relabel(dict(zip(range(1, n + 1), perm))))
    return out


def trees_within(nmax, kmax, min_arity=1):
    """Standard-labeled planar shapes with 1..nmax leaves and 1..kmax vertices."""
    out = []
    for n in range(1, nmax + 1):
        out.extend(planar_shapes(n, kmax, min_arity))
    return out


# ---------------------------------------------------------------------------
# Subtrees, contraction, partitions


def is_connected(t, vs):
    vs = frozenset(vs)
    if not vs:
        return False
    tops = [v for v in vs if t.parent(v) not in vs]
    return len(tops) == 1


def top_vertex(t, vs):
    return min(vs)


class Subtree:
    """A connected set of vertices of a parent tree."""

    __slots__ = ("parent", "vertices")

    def __init__(self, parent, vertices):
        vertices = frozenset(vertices)
        if not is_connected(parent, vertices):
            raise ValueError("vertex set %s is not connected" % sorted(vertices))
        self.parent = parent
        self.vertices = vertices

    @property
    def top(self):
        return min(self.vertices)

    def __len__(self):
        return len(self.vertices)

    def __eq__(self, other):
        return (isinstance(other, Subtree) and self.parent == other.parent
                and self.vertices == other.vertices)

    def __hash__(self):
        return hash((self.parent, self.vertices))

    def __repr__(self):
        return "Subtree(%s, %s)" % (self.parent, sorted(self.vertices))

    def as_tree(self):
        """The subtree as a standard-labeled planar tree (legs in planar order)."""
        t = self.parent
        counter = iter(range(1, 10 ** 6))

        def visit(v):
            kids = []
            for kind, x in t.children(v):
                if kind == "vert" and x in self.vertices:
                    kids.append(visit(x))
                else:
                    kids.append(next(counter))
            return tuple(kids)

        return PlanarTree(visit(self.top), check=False)


def _down_sets(t, v):
    """Connected vertex sets with top vertex v, as sorted tuples."""
    memo = {}

    def rec(u):
        if u in memo:
            return memo[u]
        opts = [[()] + rec(c) for c in t.internal_children(u)]
        res = []
        for combo in product(*opts):
            s = (u,) + tuple(x for part in combo for x in part)
            res.append(tuple(sorted(s)))
        memo[u] = res
        return res

    return rec(v)


def connected_subtrees(t):
    """Every connected vertex set of t, as frozensets, ordered by (size, vertices)."""
    out = []
    for v in t.vertices:
        out.extend(frozenset(s) for s in _down_sets(t, v))
    out.sort(key=lambda s: (len(s), sorted(s)))
    return out


def contract(t, s):
    """Contract the connected vertex set s to a single vertex.

    Returns ``(tree, vmap)`` where vmap sends each vertex of t to its vertex
    in the contracted tree (all of s going to the merged vertex).  Leaf
    labels and the planar order of legs are preserved.
    """
    s = frozenset(s.vertices if isinstance(s, Subtree) else s)
    if not is_connected(t, s):
        raise ValueError("cannot contract a disconnected vertex set")

    def merged_children(v):
        kids = []
        for kind, x in t.children(v):
            if kind == "vert" and x in s:
                kids.extend(merged_children(x))
            elif kind == "vert":
                kids.append(rebuild(x))
            else:
                kids.append(x)
        return kids

    def rebuild(v):
        if v == top:
            return tuple(merged_children(v))
        return tuple(rebuild(x) if kind == "vert" else x for kind, x in t.children(v))

    top = min(s)
    shape = rebuild(0)
    u = PlanarTree(shape, check=False)
    # preorder of the non-merged vertices is unchanged; merged vertex sits at top
    vmap = {}
    k = 0
    for v in t.vertices:
        if v in s and v != top:
            continue
        vmap[v] = k
        k += 1
    for v in s:
        vmap[v] = vmap[top]
    return u, vmap


def contract_blocks(t, blocks):
    """Contract several disjoint connected blocks at once.  Returns the
    quotient tree and the list of blocks ordered by quotient preorder."""
    blocks = sorted((frozenset(b) for b in blocks), key=min)
    u = t
    vmap = {v: v for v in t.vertices}
    for b in blocks:
        image = frozenset(vmap[v] for v in b)
        u, m = contract(u, image)
        vmap = {v: m[w] for v, w in vmap.items()}
    return u, blocks


def covering_partitions(t):
    """All families of pairwise disjoint connected vertex sets covering t,
    each family ordered by the quotient preorder (= order of top vertices)."""

    def parts(v):
        out = []
        for block in _down_sets(t, v):
            bset = set(block)
            hanging = [c for u in block for c in t.internal_children(u) if c not in bset]
            for combo in product(*[parts(c) for c in hanging]):
                fam = [frozenset(block)] + [b for p in combo for b in p]
                out.append(fam)
        return out

    res = [sorted(f, key=min) for f in parts(0)]
    res.sort(key=lambda f: (len(f), [sorted(b) for b in f]))
    return res


def axil_count(t):
    """Unordered triples of vertices where two are children of the third."""
    return sum(comb(len(t.internal_children(v)), 2) for v in t.vertices)


# ---------------------------------------------------------------------------
# Isomorphisms of the underlying rooted trees


class TreeIso:
    """Label-preserving rooted-tree isomorphism between two planar trees.

    ``vertex_map[v]`` is the image of vertex v; ``slot_perm[v][j]`` is the
    slot of ``vertex_map[v]`` that receives the child in slot j of v.
    """

    __slots__ = ("source", "target", "vertex_map", "slot_perm")

    def __init__(self, source, target, vertex_map, slot_perm):
        self.source = source
        self.target = target
        self.vertex_map = tuple(vertex_map)
        self.slot_perm = tuple(tuple(p) for p in slot_perm)

    def inverse(self):
        vm = [0] * len(self.vertex_map)
        sp = [None] * len(self.vertex_map)
        for v, w in enumerate(self.vertex_map):
            vm[w] = v
            p = self.slot_perm[v]
            inv = [0] * len(p)
            for j, k in enumerate(p):
                inv[k] = j
            sp[w] = inv
        return TreeIso(self.target, self.source, vm, sp)

    def compose(self, other):
        """self o other (other first)."""
        vm = [self.vertex_map[w] for w in other.vertex_map]
        sp = []
        for v, w in enumerate(other.vertex_map):
            sp.append([self.slot_perm[w][k] for k in other.slot_perm[v]])
        return TreeIso(other.source, self.target, vm, sp)

    def is_identity(self):
        return (self.source == self.target
                and all(v == w for v, w in enumerate(self.vertex_map))
                and all(list(p) == list(range(len(p))) for p in self.slot_perm))

    def __eq__(self, other):
        return (isinstance(other, TreeIso) and self.source == other.source
                and self.target == other.target and self.vertex_map == other.vertex_map
                and self.slot_perm == other.slot_perm)

    def __hash__(self):
        return hash((self.source, self.target, self.vertex_map))

    def __repr__(self):
        return "TreeIso(%s -> %s)" % (self.source, self.target)


def _leafset(t, kind, x):
    return frozenset([x]) if kind == "leaf" else frozenset(t.leaves_below(x))


def isomorphisms(t, u):
    """All label-preserving rooted-tree isomorphisms t -> u (at most one)."""
    if t.n != u.n or t.nvertices != u.nvertices or t.canonical() != u.canonical():
        return []
    vm = [None] * t.nvertices
    sp = [None] * t.nvertices

    def match(v, w):
        vm[v] = w
        tk = [(_leafset(t, k, x), k, x) for k, x in t.children(v)]
        uk = {(_leafset(u, k, x)): (j, k, x) for j, (k, x) in enumerate(u.children(w))}
        perm = []
        for ls, kind, x in tk:
            j, kind2, y = uk[ls]
            perm.append(j)
            if kind == "vert":
                match(x, y)
        sp[v] = perm

    match(0, 0)
    return [TreeIso(t, u, vm, sp)]


def planar_orbit(t):
    """All planar trees isomorphic to t as leaf-labeled rooted trees, each
    with the connecting isomorphism from t.  Size = prod of arity factorials."""
    perms_per_vertex = [list(permutations(range(t.arity(v)))) for v in t.vertices]
    out = []
    seen = set()
    for choice in product(*perms_per_vertex):
        # choice[v][k] = which old slot goes to new position k
        def build(v):
            kids = t.children(v)
            new = []
            for k in choice[v]:
                kind, x = kids[k]
                new.append(x if kind == "leaf" else build(x))
            return tuple(new)

        u = PlanarTree(build(0), check=False)
        if u in seen:
            continue
        seen.add(u)
        out.append((u, isomorphisms(t, u)[0]))
    out.sort(key=lambda p: sort_key(p[0]))
    return out


def orbit_size(t):
    size = 1
    for v in t.vertices:
        size *= factorial(t.arity(v))
    return size
