"""Exact linear algebra over F_q.

Matrices are 2-d ``int64`` numpy arrays of element codes; the field is passed
alongside.  Vectors are rows.  Functionals on F_q^k are also rows, paired
with vectors by the dot product, so the annihilator of a subspace is a single
kernel computation and dual subspaces are ordinary :class:`Subspace` values.
"""

from __future__ import annotations

import itertools
import os
from typing import Iterator

import numpy as np

from .errors import AmbientMismatch, BudgetExceeded
from .gf import GF

DEFAULT_ENUM_BUDGET = 10**7


def default_budget() -> int:
    """Enumeration cap; the CODE_FORGE_BUDGET environment variable overrides it."""
    env = os.environ.get("CODE_FORGE_BUDGET")
    return int(env) if env else DEFAULT_ENUM_BUDGET


def as_matrix(M, cols: int | None = None) -> np.ndarray:
    A = np.asarray(M, dtype=np.int64)
    if A.ndim == 1:
        A = A.reshape(1, -1) if A.size else np.zeros((0, cols or 0), dtype=np.int64)
    return A


def rref(M, field: GF) -> tuple[np.ndarray, int, list[int]]:
    """Reduced row-echelon form with zero rows dropped.

    Returns (canonical, rank, pivot columns).
    """
    R = as_matrix(M).copy()
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        if R[r, c] != 1:
            R[r] = field.mul(R[r], field.inv(int(R[r, c])))
        others = np.nonzero(R[:, c])[0]
        others = others[others != r]
        if others.size:
            R[others] = field.sub(R[others], field.mul(R[others, c][:, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R[:r], r, pivots


def rank(M, field: GF) -> int:
    M = as_matrix(M)
    if M.size == 0:
        return 0
    return rref(M, field)[1]


def is_invertible(M, field: GF) -> bool:
    M = as_matrix(M)
    return M.shape[0] == M.shape[1] and rank(M, field) == M.shape[0]


def mat_inverse(M, field: GF) -> np.ndarray:
    M = as_matrix(M)
    n = M.shape[0]
    aug = np.concatenate([M, np.eye(n, dtype=np.int64)], axis=1)
    R, r, piv = rref(aug, field)
    if r < n or piv[n - 1] != n - 1:
        raise ValueError("matrix is singular")
    return R[:, n:]


def solve(T, b, field: GF) -> np.ndarray | None:
    """One solution c of T c = b (free variables set to 0), or None."""
    T = as_matrix(T)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    R, r, piv = rref(np.concatenate([T, b], axis=1), field)
    cols = T.shape[1]
    if piv and piv[-1] == cols:
        return None
    c = np.zeros(cols, dtype=np.int64)
    for row, pc in enumerate(piv):
        c[pc] = R[row, cols]
    return c


class Subspace:
    """A subspace of F_q^ambient held as its canonical RREF basis.

    Two instances are equal exactly when their basis arrays are identical.
    """

    __slots__ = ("field", "ambient", "basis", "_key")

    def __init__(self, field: GF, ambient: int, basis, *, canonical: bool = False):
        B = as_matrix(basis, ambient)
        if B.size == 0:
            B = np.zeros((0, ambient), dtype=np.int64)
        if B.shape[1] != ambient:
            raise AmbientMismatch(f"vectors of length {B.shape[1]} in ambient dimension {ambient}")
        if not canonical:
            B = rref(B, field)[0]
        B = np.ascontiguousarray(B, dtype=np.int64)
        B.flags.writeable = False
        self.field = field
        self.ambient = ambient
        self.basis = B
        self._key = (field, ambient, B.shape[0], B.tobytes())

    @classmethod
    def zero(cls, field: GF, ambient: int) -> Subspace:
        return cls(field, ambient, np.zeros((0, ambient), dtype=np.int64), canonical=True)

    @classmethod
    def full(cls, field: GF, ambient: int) -> Subspace:
        return cls(field, ambient, np.eye(ambient, dtype=np.int64), canonical=True)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def pivots(self) -> list[int]:
        return [int(np.nonzero(row)[0][0]) for row in self.basis]

    def __eq__(self, other):
        return isinstance(other, Subspace) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient}, {self.field!r}, basis={self.basis.tolist()})"

    def _check(self, other: Subspace) -> None:
        if self.ambient != other.ambient or self.field != other.field:
            raise AmbientMismatch(f"{self.ambient}-dim {self.field} vs {other.ambient}-dim {other.field}")

    def __add__(self, other: Subspace) -> Subspace:
        self._check(other)
        return Subspace(self.field, self.ambient, np.concatenate([self.basis, other.basis]))

    def __and__(self, other: Subspace) -> Subspace:
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.field, self.ambient)
        constraints = np.concatenate([self.annihilator().basis, other.annihilator().basis])
        return kernel(constraints, self.field, self.ambient)

    def __le__(self, other: Subspace) -> bool:
        self._check(other)
        return (self + other).dim == other.dim

    def contains_vector(self, v) -> bool:
        v = as_matrix(v, self.ambient)
        if v.shape[1] != self.ambient:
            raise AmbientMismatch(f"vector of length {v.shape[1]} in ambient {self.ambient}")
        return rank(np.concatenate([self.basis, v]), self.field) == self.dim

    def annihilator(self) -> Subspace:
        """Functionals (rows, dot pairing) vanishing on this subspace."""
        return kernel(self.basis, self.field, self.ambient)

    def joint_kernel(self) -> Subspace:
        """Vectors killed by every functional in this (dual) subspace."""
        return kernel(self.basis, self.field, self.ambient)

    def image(self, M) -> Subspace:
        """Image under x -> M x, for a (target x ambient) matrix M."""
        M = as_matrix(M)
        if M.shape[1] != self.ambient:
            raise AmbientMismatch(f"map with {M.shape[1]} columns applied in ambient {self.ambient}")
        if self.dim == 0:
            return Subspace.zero(self.field, M.shape[0])
        return Subspace(self.field, M.shape[0], self.field.matmul(self.basis, M.T))

    def vectors(self) -> np.ndarray:
        """All q^dim elements, as rows (small subspaces only)."""
        coeffs = np.array(list(itertools.product(range(self.field.q), repeat=self.dim)), dtype=np.int64)
        if self.dim == 0:
            return np.zeros((1, self.ambient), dtype=np.int64)
        return self.field.matmul(coeffs, self.basis)

    def to_json(self) -> dict:
        return matrix_to_json(self.basis, self.ambient)


def kernel(M, field: GF, cols: int | None = None) -> Subspace:
    """Null space {x : M x = 0} as a canonical subspace."""
    M = as_matrix(M, cols)
    cols = M.shape[1] if cols is None else cols
    if M.size == 0:
        return Subspace.full(field, cols)
    R, r, pivots = rref(M, field)
    free = [c for c in range(cols) if c not in set(pivots)]
    if not free:
        return Subspace.zero(field, cols)
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for t, f in enumerate(free):
        basis[t, f] = 1
        for row, pc in enumerate(pivots):
            basis[t, pc] = field.neg(int(R[row, f]))
    return Subspace(field, cols, basis)


def annihilator(A: Subspace) -> Subspace:
    return A.annihilator()


def joint_kernel(B: Subspace) -> Subspace:
    return B.joint_kernel()


def subspace_ops(A: Subspace, B, op: str):
    """Dispatch ``op`` in {intersect, sum, contains_vector, equals}."""
    if op == "intersect":
        return A & B
    if op == "sum":
        return A + B
    if op == "contains_vector":
        return A.contains_vector(B)
    if op == "equals":
        A._check(B)
        return A == B
    raise ValueError(f"unknown subspace operation {op!r}")


def quotient_map(ambient: int, W: Subspace) -> np.ndarray:
    """Surjection F^ambient -> F^(ambient - dim W) whose kernel is exactly W.

    Row for each non-pivot column c of W is e_c - sum_t W[t, c] e_{pivot_t},
    i.e. subtract the W-component fixed by the pivot coordinates and keep the
    remaining coordinates.
    """
    if W.ambient != ambient:
        raise AmbientMismatch(f"W lives in dimension {W.ambient}, not {ambient}")
    field = W.field
    piv = W.pivots
    rest = [c for c in range(ambient) if c not in set(piv)]
    M = np.zeros((len(rest), ambient), dtype=np.int64)
    for row, c in enumerate(rest):
        M[row, c] = 1
        for t, pc in enumerate(piv):
            M[row, pc] = field.neg(int(W.basis[t, c]))
    return M


# --- counting and enumeration ----------------------------------------------


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def subspace_count(ambient: int, r: int, q: int) -> int:
    """Number of subspaces of F_q^ambient with 1 <= dim <= r."""
    return sum(gaussian_binomial(ambient, d, q) for d in range(1, min(r, ambient) + 1))


def _free_slots(pivots: tuple[int, ...], ambient: int) -> list[tuple[int, int]]:
    pset = set(pivots)
    return [(t, c) for t, p in enumerate(pivots) for c in range(p + 1, ambient) if c not in pset]


def _blocks(ambient: int, r: int, q: int) -> Iterator[tuple[int, tuple[int, ...], list, int]]:
    for d in range(1, min(r, ambient) + 1):
        for pivots in itertools.combinations(range(ambient), d):
            slots = _free_slots(pivots, ambient)
            yield d, pivots, slots, q ** len(slots)


def enumerate_subspaces(ambient: int, r: int, field: GF, start: int = 0, stop: int | None = None,
                        budget: int | None = None) -> Iterator[Subspace]:
    """Every subspace of dimension 1..r, each exactly once, in canonical order.

    Order: dimension, then pivot set (lexicographic), then free entries
    (lexicographic, row-major).  ``start``/``stop`` select a slice of that
    order without generating the skipped prefix, so workers can split one
    scan into disjoint index ranges.
    """
    q = field.q
    total = subspace_count(ambient, r, q)
    budget = default_budget() if budget is None else budget
    if total > budget:
        raise BudgetExceeded(total, budget, "subspace enumeration")
    stop = total if stop is None else min(stop, total)
    offset = 0
    for d, pivots, slots, size in _blocks(ambient, r, q):
        if offset + size <= start:
            offset += size
            continue
        if offset >= stop:
            return
        base = np.zeros((d, ambient), dtype=np.int64)
        for t, p in enumerate(pivots):
            base[t, p] = 1
        lo = max(start - offset, 0)
        hi = min(stop - offset, size)
        nslots = len(slots)
        for idx in range(lo, hi):
            B = base.copy()
            rem = idx
            for pos in range(nslots - 1, -1, -1):
                rem, digit = divmod(rem, q)
                if digit:
                    B[slots[pos]] = digit
            yield Subspace(field, ambient, B, canonical=True)
        offset += size


def all_subspaces(ambient: int, field: GF, budget: int | None = None) -> Iterator[Subspace]:
    """{0} followed by every nonzero subspace in canonical order."""
    yield Subspace.zero(field, ambient)
    yield from enumerate_subspaces(ambient, ambient, field, budget=budget)


def split_range(total: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, total)) if total else 1
    edges = [total * i // parts for i in range(parts + 1)]
    return [(edges[i], edges[i + 1]) for i in range(parts)]


def random_subspace(field: GF, ambient: int, rng: np.random.Generator, dim: int | None = None) -> Subspace:
    """Span of ``dim`` random vectors (dimension may come out smaller)."""
    if dim is None:
        dim = int(rng.integers(0, ambient + 1))
    if dim == 0:
        return Subspace.zero(field, ambient)
    return Subspace(field, ambient, field.random(rng, (dim, ambient)))


# --- serialization -----------------------------------------------------------


def matrix_to_json(M, cols: int | None = None) -> dict:
    M = as_matrix(M, cols)
    return {"rows": int(M.shape[0]), "cols": int(M.shape[1]), "data": [int(v) for v in M.ravel()]}


def matrix_from_json(obj: dict) -> np.ndarray:
    rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    if len(data) != rows * cols:
        raise ValueError(f"matrix data has {len(data)} entries, expected {rows * cols}")
    return np.array(data, dtype=np.int64).reshape(rows, cols)
