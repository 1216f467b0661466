"""
Little disks D_2(n) and configuration spaces F(n) at the point level.

A disk configuration is n disjoint round disks inside the open unit disk;
forgetting the radii retracts onto ordered configurations of distinct
points.  The inclusion gives all disks the common radius
(1/3) min({|x_i - x_j|} u {1 - |x_i|}), and the straight-line homotopy
interpolates the radii while the centres stay fixed.
"""

from itertools import permutations

import numpy as np

EPS_B = 1e-9


class ConfigError(ValueError):
    pass


def _pair_distances(x):
    n = len(x)
    iu = np.triu_indices(n, 1)
    diff = x[:, None, :] - x[None, :, :]
    D = np.hypot(diff[..., 0], diff[..., 1])
    return D, iu


class PointConfig:
    """n distinct ordered points in the open unit disk."""

    def __init__(self, centers, eps=EPS_B, check=True):
        self.centers = np.array(centers, dtype=float).reshape(-1, 2)
        if check:
            if len(self.centers) < 1:
                raise ConfigError("need at least one point")
            m = point_margins(self.centers, eps)
            if m["containment"] < 0 or m["separation"] < 0:
                raise ConfigError("invalid point configuration: %s" % m)

    @property
    def n(self):
        return len(self.centers)

    def permute(self, sigma):
        """(p sigma)_j = p_sigma(j)."""
        return PointConfig(self.centers[list(sigma)], check=False)

    def __eq__(self, other):
        return isinstance(other, PointConfig) and np.array_equal(self.centers, other.centers)


class DiskConfig:
    """n disjoint disks (centres, radii) inside the open unit disk."""

    def __init__(self, centers, radii, eps=EPS_B, check=True):
        self.centers = np.array(centers, dtype=float).reshape(-1, 2)
        self.radii = np.array(radii, dtype=float).reshape(-1)
        if len(self.centers) != len(self.radii):
            raise ConfigError("centres and radii differ in length")
        if check:
            if len(self.radii) < 1:
                raise ConfigError("need at least one disk")
            if np.any(self.radii <= 0):
                raise ConfigError("radii must be positive")
            m = disk_margins(self, eps)
            if m["containment"] < 0 or m["disjointness"] < 0:
                raise ConfigError("invalid disk configuration: %s" % m)

    @property
    def n(self):
        return len(self.radii)

    def permute(self, sigma):
        s = list(sigma)
        return DiskConfig(self.centers[s], self.radii[s], check=False)

    def __eq__(self, other):
        return (isinstance(other, DiskConfig) and np.array_equal(self.centers, other.centers)
                and np.array_equal(self.radii, other.radii))


def identity_disk():
    """The nominal unit of composition: one disk of radius 1 at the origin.
    It is not an element of D_2(1) (the boundary is not open)."""
    return DiskConfig([[0.0, 0.0]], [1.0], check=False)


def point_margins(x, eps=EPS_B):
    x = np.asarray(x, dtype=float).reshape(-1, 2)
    cont = float(np.min(1 - eps - np.hypot(x[:, 0], x[:, 1])))
    if len(x) < 2:
        return {"containment": cont, "separation": np.inf}
    D, iu = _pair_distances(x)
    return {"containment": cont, "separation": float(np.min(D[iu] - eps))}


def disk_margins(c, eps=EPS_B):
    """Worst slack of |x_j| + r_j <= 1 - eps and |x_j - x_k| >= r_j + r_k + eps."""
    x, r = c.centers, c.radii
    cont = float(np.min(1 - eps - np.hypot(x[:, 0], x[:, 1]) - r))
    if len(r) < 2:
        return {"containment": cont, "disjointness": np.inf}
    D, iu = _pair_distances(x)
    S = r[:, None] + r[None, :]
    return {"containment": cont, "disjointness": float(np.min((D - S - eps)[iu]))}


# ---------------------------------------------------------------------------
# retraction, inclusion, homotopy


def retract_to_points(c):
    return PointConfig(c.centers.copy(), check=False)


def common_radius(x):
    x = np.asarray(x, dtype=float).reshape(-1, 2)
    vals = 1 - np.hypot(x[:, 0], x[:, 1])
    m = float(np.min(vals))
    if len(x) > 1:
        D, iu = _pair_distances(x)
        m = min(m, float(np.min(D[iu])))
    return m / 3


def include_with_radii(p):
    """All radii equal to the common radius.  For points at the boundary
    slack the formula only guarantees a third of it, so the output is
    validated with slack EPS_B / 3."""
    rho = common_radius(p.centers)
    return DiskConfig(p.centers.copy(), np.full(p.n, rho), eps=EPS_B / 3)


def straight_line_homotopy(c, tau):
    """Centres fixed, radii (1 - tau) r + tau r', r' the radii of i(r(c))."""
    if not 0 <= tau <= 1:
        raise ValueError("tau must lie in [0, 1]")
    target = include_with_radii(retract_to_points(c)).radii
    radii = (1 - tau) * c.radii + tau * target
    return DiskConfig(c.centers.copy(), radii, check=False)


# ---------------------------------------------------------------------------
# operad structure


def compose_disks(a, k, b):
    """Insert b into the k-th disk of a (1-based) by x -> x_k + r_k x."""
    if not 1 <= k <= a.n:
        raise IndexError("disk index %d out of range for %d disks" % (k, a.n))
    xk, rk = a.centers[k - 1], a.radii[k - 1]
    inner_c = xk + rk * b.centers
    inner_r = rk * b.radii
    centers = np.vstack([a.centers[:k - 1], inner_c, a.centers[k:]])
    radii = np.concatenate([a.radii[:k - 1], inner_r, a.radii[k:]])
    return DiskConfig(centers, radii, check=False)


def containment_in_disk(a, k, b):
    """Worst slack of |offset| + new radius <= r_k for the composite."""
    xk, rk = a.centers[k - 1], a.radii[k - 1]
    c = compose_disks(a, k, b)
    inner = slice(k - 1, k - 1 + b.n)
    off = c.centers[inner] - xk
    return float(np.min(rk - np.hypot(off[:, 0], off[:, 1]) - c.radii[inner]))


def _config_distance(u, v):
    return max(float(np.max(np.abs(u.centers - v.centers))),
               float(np.max(np.abs(u.radii - v.radii))))


# ---------------------------------------------------------------------------
# sampling


def random_disks(rng, n, fill=None):
    """A valid disk configuration: centres by rejection in the disk of radius
    0.95, radii a random fraction of half the free space around each."""
    while True:
        ang = rng.uniform(0, 2 * np.pi, n)
        rad = 0.95 * np.sqrt(rng.uniform(0, 1, n))
        x = np.stack([rad * np.cos(ang), rad * np.sin(ang)], axis=1)
        room = 1 - np.hypot(x[:, 0], x[:, 1])
        if n > 1:
            D, _ = _pair_distances(x)
            np.fill_diagonal(D, np.inf)
            room = np.minimum(room, D.min(axis=1) / 2)
        if np.min(room) < 1e-3:
            continue
        u = rng.uniform(0.05, 0.999, n) if fill is None else np.full(n, fill)
        c = DiskConfig(x, u * room, check=False)
        m = disk_margins(c)
        if m["containment"] >= 0 and m["disjointness"] >= 0:
            return c


def random_points(rng, n):
    return retract_to_points(random_disks(rng, n))


# ---------------------------------------------------------------------------
# checks


def check_retraction(rng, n, samples):
    """r(i(p)) == p exactly."""
    bad = 0
    for _ in range(samples):
        p = random_points(rng, n)
        if not retract_to_points(include_with_radii(p)) == p:
            bad += 1
    return {"ok": bad == 0, "samples": samples, "failures": bad}


def check_homotopy(rng, n, samples, grid=101):
    """Worst margins of H(c, tau) over the tau grid; H(c, 0) = c and
    H(c, 1) = i(r(c))."""
    taus = np.linspace(0.0, 1.0, grid)
    worst_c = worst_d = np.inf
    ends = True
    for _ in range(samples):
        c = random_disks(rng, n)
        target = include_with_radii(retract_to_points(c)).radii
        rows = (1 - taus)[:, None] * c.radii[None, :] + taus[:, None] * target[None, :]
        x = c.centers
        cont = 1 - EPS_B - np.hypot(x[:, 0], x[:, 1])[None, :] - rows
        worst_c = min(worst_c, float(cont.min()))
        if n > 1:
            D, iu = _pair_distances(x)
            S = rows[:, :, None] + rows[:, None, :]
            worst_d = min(worst_d, float((D[None] - S - EPS_B)[:, iu[0], iu[1]].min()))
        ends = ends and straight_line_homotopy(c, 0.0) == c
        ends = ends and np.array_equal(straight_line_homotopy(c, 1.0).radii, target)
    ok = worst_c >= -1e-12 and worst_d >= -1e-12 and ends
    return {"ok": bool(ok), "samples": samples, "grid": grid,
            "containmentMargin": worst_c, "disjointnessMargin": worst_d, "endpoints": bool(ends)}


def check_equivariance(n, samples, rng=None):
    """r(c sigma) = r(c) sigma and i(p sigma) = i(p) sigma, bitwise, for all
    sigma in S_n."""
    rng = rng if rng is not None else np.random.default_rng(0)
    bad = 0
    perms = list(permutations(range(n)))
    for _ in range(samples):
        c = random_disks(rng, n)
        p = retract_to_points(c)
        ip = include_with_radii(p)
        for s in perms:
            if not retract_to_points(c.permute(s)) == p.permute(s):
                bad += 1
            if not include_with_radii(p.permute(s)) == ip.permute(s):
                bad += 1
    return {"ok": bad == 0, "n": n, "samples": samples, "permutations": len(perms),
            "failures": bad}


def check_associativity(rng, samples, nmax=3, tol=1e-12):
    """Both association orders of three compositions agree to tol, for the
    sequential and the parallel axiom."""
    worst = 0.0
    contain = np.inf
    for _ in range(samples):
        na, nb, nc = (int(v) for v in rng.integers(1, nmax + 1, 3))
        a, b, c = random_disks(rng, na), random_disks(rng, nb), random_disks(rng, nc)
        k = int(rng.integers(1, na + 1))
        l = int(rng.integers(1, nb + 1))
        lhs = compose_disks(compose_disks(a, k, b), k + l - 1, c)
        rhs = compose_disks(a, k, compose_disks(b, l, c))
        worst = max(worst, _config_distance(lhs, rhs))
        contain = min(contain, containment_in_disk(a, k, b))
        if na >= 2:
            i, j = sorted(int(v) for v in rng.choice(np.arange(1, na + 1), 2, replace=False))
            # (a o_j b) o_i c = (a o_i c) o_(j + nc - 1) b for i < j
            lhs = compose_disks(compose_disks(a, j, b), i, c)
            rhs = compose_disks(compose_disks(a, i, c), j + nc - 1, b)
            worst = max(worst, _config_distance(lhs, rhs))
    return {"ok": worst <= tol and contain >= -tol, "samples": samples,
            "maxDeviation": worst, "containmentMargin": contain}


def radius_kink(s0=1 / 3, h=1e-6):
    """Two points (-s, 0), (s, 0): the common radius is min(2s, 1 - s) / 3,
    with a kink at s = 1/3.  Returns the one-sided slopes there."""
    def f(s):
        return common_radius([[-s, 0.0], [s, 0.0]])
    left = (f(s0) - f(s0 - h)) / h
    right = (f(s0 + h) - f(s0)) / h
    return {"left": left, "right": right, "kink": abs(left - right) > 0.5}


def lipschitz_probe(rng, n, samples, h=1e-7):
    """Largest finite-difference slope of the common radius along random
    directions (bounded by 2/3 for unit directions)."""
    worst = 0.0
    for _ in range(samples):
        p = random_points(rng, n)
        v = rng.normal(size=p.centers.shape)
        v /= np.linalg.norm(v)
        q = p.centers + h * v
        worst = max(worst, abs(common_radius(q) - common_radius(p.centers)) / h)
    return worst


def check_all(n, samples, seed=0):
    rng = np.random.default_rng(seed)
    rep = {"n": n, "samples": samples, "seed": seed,
           "retraction": check_retraction(rng, n, samples),
           "homotopy": check_homotopy(rng, n, samples),
           "equivariance": check_equivariance(n, min(samples, 100), rng),
           "associativity": check_associativity(rng, samples)}
    rep["ok"] = all(rep[k]["ok"] for k in ("retraction", "homotopy", "equivariance",
                                           "associativity"))
    return rep
