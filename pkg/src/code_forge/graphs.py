"""d-regular bipartite graphs with per-vertex edge orderings, and spectral certificates."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded, ShapeMismatch, ViolationFound

DENSE_CAP = 4096
SVD_CUTOFF = 512
POWER_ITERS = 10_000
DEFAULT_TOL = 1e-9


class BipartiteGraph:
    """Left and right vertex sets are both [n]; every vertex has d ordered edge slots.

    ``left_adj[i][l] = (j, l2)`` means slot l of left vertex i is the edge
    that occupies slot l2 of right vertex j.  Parallel edges are allowed.
    """

    def __init__(self, n: int, d: int, left_adj, right_adj=None):
        self.n = n
        self.d = d
        self.left_adj = tuple(tuple((int(j), int(l2)) for j, l2 in row) for row in left_adj)
        if right_adj is None:
            right = [[None] * d for _ in range(n)]
            for i, row in enumerate(self.left_adj):
                for slot, (j, l2) in enumerate(row):
                    if not (0 <= j < n and 0 <= l2 < d) or right[j][l2] is not None:
                        raise ShapeMismatch(f"left edge ({i}, {slot}) -> ({j}, {l2}) is out of range or collides")
                    right[j][l2] = (i, slot)
            right_adj = right
        self.right_adj = tuple(tuple((int(i), int(l)) for i, l in row) for row in right_adj)
        self.check()

    def check(self) -> None:
        """Raise ShapeMismatch naming the first inconsistent edge."""
        n, d = self.n, self.d
        if len(self.left_adj) != n or len(self.right_adj) != n:
            raise ShapeMismatch(f"expected {n} vertices per side")
        for side, adj in (("left", self.left_adj), ("right", self.right_adj)):
            for v, row in enumerate(adj):
                if len(row) != d:
                    raise ShapeMismatch(f"{side} vertex {v} has {len(row)} slots, expected {d}")
        for i, row in enumerate(self.left_adj):
            for slot, (j, l2) in enumerate(row):
                if not (0 <= j < n and 0 <= l2 < d) or self.right_adj[j][l2] != (i, slot):
                    raise ShapeMismatch(f"edge left ({i}, {slot}) -> right ({j}, {l2}) is not mirrored")

    def __eq__(self, other):
        return isinstance(other, BipartiteGraph) and (self.n, self.d, self.left_adj) == (other.n, other.d, other.left_adj)

    def __repr__(self):
        return f"BipartiteGraph(n={self.n}, d={self.d})"

    def biadjacency(self) -> np.ndarray:
        """Normalized biadjacency: entry (i, j) = multiplicity of edge (i, j) / d."""
        A = np.zeros((self.n, self.n))
        for i, row in enumerate(self.left_adj):
            for j, _ in row:
                A[i, j] += 1.0
        return A / self.d

    def average_right(self, x) -> np.ndarray:
        """y_j = (1/d) * sum of x over the left endpoints of j's edges."""
        x = np.asarray(x, dtype=float)
        return np.array([sum(x[i] for i, _ in row) for row in self.right_adj]) / self.d

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "left_adj": [[list(e) for e in row] for row in self.left_adj]}

    @classmethod
    def from_json(cls, obj: dict) -> BipartiteGraph:
        return cls(obj["n"], obj["d"], obj["left_adj"], obj.get("right_adj"))


def complete_bipartite(n: int) -> BipartiteGraph:
    if n < 1:
        raise ValueError("n must be positive")
    return BipartiteGraph(n, n, [[(slot, i) for slot in range(n)] for i in range(n)])


def random_regular_bipartite(n: int, d: int, seed) -> BipartiteGraph:
    """Union of d seeded uniform permutations; slot l of left i goes to pi_l(i), arriving at slot l."""
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    rng = np.random.default_rng(seed)
    perms = [rng.permutation(n) for _ in range(d)]
    return BipartiteGraph(n, d, [[(int(perms[l][i]), l) for l in range(d)] for i in range(n)])


def disjoint_union(g: BipartiteGraph, h: BipartiteGraph) -> BipartiteGraph:
    if g.d != h.d:
        raise ShapeMismatch("degrees differ")
    left = list(g.left_adj) + [[(j + g.n, l2) for j, l2 in row] for row in h.left_adj]
    return BipartiteGraph(g.n + h.n, g.d, left)


@dataclass(frozen=True)
class SpectralCertificate:
    lambda_bound: float
    tolerance: float
    method: str
    estimate: float

    def to_json(self) -> dict:
        return {"lambda_bound": self.lambda_bound, "tolerance": self.tolerance,
                "method": self.method, "estimate": self.estimate}

    @classmethod
    def from_json(cls, obj: dict) -> SpectralCertificate:
        return cls(obj["lambda_bound"], obj["tolerance"], obj["method"], obj.get("estimate", obj["lambda_bound"]))


def _power_sigma(R: np.ndarray, iters: int, tol: float) -> tuple[float, float]:
    """Largest singular value of R by power iteration on R^T R; returns (estimate, residual)."""
    rng = np.random.default_rng(0)
    v = rng.standard_normal(R.shape[1])
    v /= np.linalg.norm(v)
    est = 0.0
    resid = np.inf
    for _ in range(iters):
        w = R.T @ (R @ v)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0, 0.0
        new = np.sqrt(nw)
        v = w / nw
        resid = abs(new - est)
        est = new
        if resid < tol * 1e-3:
            break
    return float(est), float(resid)


def sigma2(G: BipartiteGraph, tol: float = DEFAULT_TOL, cap: int = DENSE_CAP) -> SpectralCertificate:
    """Second singular value of the normalized biadjacency matrix.

    The top singular pair of a regular bipartite graph is known exactly
    (value 1, uniform vectors), so it is deflated as A - J/n and the largest
    singular value of the residual is computed: dense SVD up to 512
    vertices, power iteration beyond.  The certified bound is estimate + tol,
    clipped to 1.
    """
    if G.n > cap:
        raise CapExceeded(f"n = {G.n} exceeds the dense cap {cap}")
    R = G.biadjacency() - 1.0 / G.n
    if G.n <= SVD_CUTOFF:
        est = float(np.linalg.svd(R, compute_uv=False)[0]) if G.n > 0 else 0.0
        method = "exact-svd"
        slack = tol
    else:
        est, resid = _power_sigma(R, POWER_ITERS, tol)
        method = "power-iteration"
        slack = max(tol, resid)
    return SpectralCertificate(min(1.0, est + slack), tol, method, est)


@dataclass(frozen=True)
class MixingReport:
    mu: float
    lhs: float
    bound: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.bound


def mixing_check(G: BipartiteGraph, cert: SpectralCertificate, x, slack: float = 1e-12) -> MixingReport:
    """Evaluate (1/n) sum_j (y_j - mu)^2 against lambda^2 * max|x|^2; raise on violation."""
    x = np.asarray(x, dtype=float)
    if x.shape != (G.n,):
        raise ShapeMismatch(f"x has shape {x.shape}, expected ({G.n},)")
    y = G.average_right(x)
    mu = float(x.mean())
    lhs = float(np.mean((y - mu) ** 2))
    bound = cert.lambda_bound**2 * float(np.max(np.abs(x))) ** 2
    report = MixingReport(mu, lhs, bound)
    if lhs > bound + slack:
        raise ViolationFound(report, f"mixing bound violated: {lhs} > {bound}")
    return report
