"""
Vectorized evaluation of tree-indexed operations.

Operations and morphism components become dense arrays of shape
(out, d_1, ..., d_k), one axis per vertex in preorder.  Arithmetic is done
in float64 on integer data; every contraction first checks that all partial
sums stay below 2**52, so the results are exact integers.  Data with
non-integral entries raises NotIntegral and callers fall back to the
sparse exact path.
"""

from fractions import Fraction

import numpy as np

from .shcore import _contract, _partitions, _quotient, _subtree, _subtrees

EXACT_LIMIT = 2.0 ** 52


class NotIntegral(ValueError):
    pass


class PrecisionRisk(ArithmeticError):
    pass


def _is_int(v):
    return isinstance(v, int) or (isinstance(v, Fraction) and v.denominator == 1)


def _maxabs(A):
    return float(np.abs(A).max()) if A.size else 0.0


def tdot(A, B, axes):
    """np.tensordot with an exactness certificate."""
    ka = axes[0] if isinstance(axes[0], (list, tuple)) else [axes[0]]
    K = 1
    for a in ka:
        K *= A.shape[a]
    if _maxabs(A) * _maxabs(B) * max(K, 1) >= EXACT_LIMIT:
        raise PrecisionRisk("contraction may exceed exact float range")
    return np.tensordot(A, B, axes=axes)


def from_columns(out_dim, dims, column):
    """Dense array from a column function tuple -> sparse vec."""
    A = np.zeros((out_dim,) + tuple(dims))
    for x in np.ndindex(*dims):
        for r, v in column(x).items():
            if not _is_int(v):
                raise NotIntegral(v)
            A[(r,) + x] = int(v)
    return A


def parities(P, n):
    return np.array([(d - 1) & 1 for d in P.fiber(n).degrees], dtype=np.int64)


def _bcast(p, axis, k):
    shape = [1] * k
    shape[axis] = len(p)
    return p.reshape(shape)


def sign_tensor(P, t, pairs=(), linear=()):
    """(-1)^(sum over pairs p_a p_b + sum over linear p_a) on t's tuple axes."""
    k = t.nvertices
    par = [parities(P, n) for n in t.arities]
    E = np.zeros([len(p) for p in par], dtype=np.int64)
    for a, b in pairs:
        E = E + _bcast(par[a], a, k) * _bcast(par[b], b, k)
    for a in linear:
        E = E + _bcast(par[a], a, k)
    return 1.0 - 2.0 * (E & 1)


def op_tensor(P, t):
    """Dense o_t, or None when it vanishes."""
    if P.vanishes(t.nvertices):
        return None
    cache = P.__dict__.setdefault("_dense_ops", {})
    if t not in cache:
        fast = getattr(P, "op_tensor_fast", None)
        A = fast(t) if fast else None
        if A is None:
            dims = [P.fiber(n).dim for n in t.arities]
            A = from_columns(P.fiber(t.n).dim, dims, lambda x: P.op(t, tuple(x)))
        cache[t] = A
    return cache[t]


def component_tensor(phi, t):
    cache = phi.__dict__.setdefault("_dense_comps", {})
    if t not in cache:
        fast = getattr(phi, "component_tensor_fast", None)
        A = fast(t) if fast else None
        if A is None:
            P = phi.source
            dims = [P.fiber(n).dim for n in t.arities]
            A = from_columns(phi.target.fiber(t.n).dim, dims,
                             lambda x: phi.component(t, tuple(x)))
        cache[t] = A
    return cache[t]


def _to_t_order(A, order_now, k):
    """A has axes [out] + vertices listed in order_now; permute to preorder."""
    pos = {v: j for j, v in enumerate(order_now)}
    return np.transpose(A, [0] + [1 + pos[v] for v in range(k)])


def lhs_tensor(phi, t):
    """sum over subtrees s of phi_(t/s) o (1 (x) o_s (x) 1) as a dense array."""
    P = phi.source
    k = t.nvertices
    total = None
    for s in _subtrees(t):
        O = op_tensor(P, _subtree(t, s))
        if O is None:
            continue
        u, vmap = _contract(t, s)
        F = component_tensor(phi, u)
        top = min(s)
        pos = vmap[top]
        A = tdot(F, O, axes=([1 + pos], [0]))
        nons = [v for v in range(k) if v not in s]
        A = _to_t_order(A, nons + sorted(s), k)
        pairs = [(a, b) for b in s if b != top for a in nons if top < a < b]
        lin = list(range(top))
        A = A * sign_tensor(P, t, pairs, lin)[None]
        total = A if total is None else total + A
    return total


def rhs_tensor(phi, t):
    """sum over partitions of o_(t/pi) o (phi_s1 (x) ... (x) phi_sr)."""
    P, Q = phi.source, phi.target
    k = t.nvertices
    total = None
    for blocks in _partitions(t):
        u = _quotient(t, tuple(blocks))
        O = op_tensor(Q, u)
        if O is None:
            continue
        A = O
        for b in blocks:
            A = tdot(A, component_tensor(phi, _subtree(t, b)), axes=([1], [0]))
        order = [v for b in blocks for v in sorted(b)]
        A = _to_t_order(A, order, k)
        where = {v: j for j, v in enumerate(order)}
        pairs = [(a, b) for a in range(k) for b in range(a + 1, k) if where[a] > where[b]]
        A = A * sign_tensor(P, t, pairs)[None]
        total = A if total is None else total + A
    return total


def _zero(phi, t):
    dims = [phi.source.fiber(n).dim for n in t.arities]
    return np.zeros((phi.target.fiber(t.n).dim,) + tuple(dims))


def check_morphism_dense(phi, trees=None, max_failures=10):
    failures = []
    checked = 0
    for t in (trees if trees is not None else phi.trees()):
        L = lhs_tensor(phi, t)
        R = rhs_tensor(phi, t)
        L = _zero(phi, t) if L is None else L
        R = _zero(phi, t) if R is None else R
        if max(_maxabs(L), _maxabs(R)) * 2 >= EXACT_LIMIT:
            raise PrecisionRisk("residual outside exact range")
        checked += int(np.prod(L.shape[1:]))
        D = L - R
        if np.any(D != 0) and len(failures) < max_failures:
            idx = np.argwhere(D != 0)[0]
            x = [int(a) for a in idx[1:]]
            col = {int(r): int(D[(r,) + tuple(x)]) for r in np.nonzero(D[(slice(None),) + tuple(x)])[0]}
            failures.append({"tree": str(t), "input": x, "residual": col})
    return {"ok": not failures, "checked": checked, "failures": failures}


def square_zero_tensor(P, t):
    """sum over subtrees s of o_(t/s) o (1 (x) o_s (x) 1)."""
    k = t.nvertices
    total = None
    for s in _subtrees(t):
        O = op_tensor(P, _subtree(t, s))
        if O is None:
            continue
        u, vmap = _contract(t, s)
        F = op_tensor(P, u)
        if F is None:
            continue
        top = min(s)
        A = tdot(F, O, axes=([1 + vmap[top]], [0]))
        nons = [v for v in range(k) if v not in s]
        A = _to_t_order(A, nons + sorted(s), k)
        pairs = [(a, b) for b in s if b != top for a in nons if top < a < b]
        A = A * sign_tensor(P, t, pairs, range(top))[None]
        total = A if total is None else total + A
    return total


def check_square_zero_dense(P, trees=None, max_failures=10):
    failures = []
    checked = 0
    for t in (trees if trees is not None else P.trees()):
        A = square_zero_tensor(P, t)
        checked += int(np.prod([P.fiber(n).dim for n in t.arities]))
        if A is not None and np.any(A != 0) and len(failures) < max_failures:
            idx = np.argwhere(A != 0)[0]
            failures.append({"tree": str(t), "input": [int(a) for a in idx[1:]]})
    return {"ok": not failures, "checked": checked, "failures": failures}
