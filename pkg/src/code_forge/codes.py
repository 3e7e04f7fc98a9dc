"""Additive codes given by coordinate encoders Enc_i : F_q^k -> F_q^s."""

from __future__ import annotations

import functools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .errors import (BadEvaluationPoints, BudgetExceeded, FieldTooSmall, NotInjective,
                     RetriesExhausted, ShapeMismatch)
from .gf import GF, ExtensionField
from .linalg import Subspace, as_matrix, kernel, rank, split_range

DEFAULT_DISTANCE_BUDGET = 2**24
_CHUNK = 1 << 14


class AdditiveCode:
    """An F_q-additive code in (F_q^s)^n with message space F_q^k.

    ``encoders[i]`` is the s x k matrix of Enc_i; block i of the codeword for
    message x is ``encoders[i] @ x``.  Construction rejects non-injective
    encoder tuples.
    """

    def __init__(self, field: GF, k: int, s: int, n: int, encoders, meta: dict | None = None,
                 *, check: bool = True):
        encs = tuple(np.ascontiguousarray(as_matrix(E), dtype=np.int64) for E in encoders)
        if len(encs) != n:
            raise ShapeMismatch(f"expected {n} encoders, got {len(encs)}")
        for i, E in enumerate(encs):
            if E.shape != (s, k):
                raise ShapeMismatch(f"encoder {i} has shape {E.shape}, expected {(s, k)}")
            if E.size and (E.min() < 0 or E.max() >= field.q):
                raise ShapeMismatch(f"encoder {i} has entries outside [0, {field.q})")
            E.flags.writeable = False
        self.field = field
        self.k = k
        self.s = s
        self.n = n
        self.encoders = encs
        self.meta = dict(meta or {})
        if check and k > 0 and rank(self.generator, field) < k:
            raise NotInjective(f"stacked {s * n}x{k} generator has rank < {k}")

    def __repr__(self):
        kind = self.meta.get("kind", "code")
        return f"AdditiveCode({kind}, {self.field!r}, k={self.k}, s={self.s}, n={self.n})"

    def __eq__(self, other):
        return (isinstance(other, AdditiveCode) and self.field == other.field
                and (self.k, self.s, self.n) == (other.k, other.s, other.n)
                and all(np.array_equal(a, b) for a, b in zip(self.encoders, other.encoders)))

    def __hash__(self):
        return hash((self.field, self.k, self.s, self.n, self.generator.tobytes()))

    @property
    def rate(self) -> Fraction:
        return Fraction(self.k, self.s * self.n)

    @functools.cached_property
    def generator(self) -> np.ndarray:
        """The (s*n) x k stacked encoder matrix."""
        if self.n == 0:
            return np.zeros((0, self.k), dtype=np.int64)
        return np.concatenate(self.encoders, axis=0)

    @functools.cached_property
    def kernels(self) -> tuple[Subspace, ...]:
        return tuple(kernel(E, self.field, self.k) for E in self.encoders)

    def encode(self, x) -> np.ndarray:
        """Codeword as an (n, s) array of blocks."""
        x = np.asarray(x, dtype=np.int64).reshape(1, self.k)
        return self.encode_many(x)[0]

    def encode_many(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.int64).reshape(-1, self.k)
        return self.field.matmul(X, self.generator.T).reshape(-1, self.n, self.s)

    def to_json(self) -> dict:
        from .linalg import matrix_to_json
        return {"field": self.field.to_json(), "k": self.k, "s": self.s, "n": self.n,
                "encoders": [matrix_to_json(E) for E in self.encoders], "meta": self.meta}


def code_new(field: GF, k: int, s: int, n: int, encoders, meta: dict | None = None) -> AdditiveCode:
    return AdditiveCode(field, k, s, n, encoders, meta)


def encode(code: AdditiveCode, x) -> np.ndarray:
    return code.encode(x)


def messages(q: int, k: int, start: int, stop: int) -> np.ndarray:
    """Messages with indices in [start, stop), first coordinate most significant."""
    idx = np.arange(start, stop, dtype=np.int64)
    powers = q ** np.arange(k - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers[None, :]) % q


def block_weights(codewords: np.ndarray) -> np.ndarray:
    """Number of nonzero blocks of each codeword in an (N, n, s) array."""
    return np.any(codewords != 0, axis=2).sum(axis=1)


@dataclass(frozen=True)
class DistanceCertificate:
    delta: Fraction
    message: tuple[int, ...]
    codeword: tuple[tuple[int, ...], ...]
    messages_scanned: int

    @property
    def weight(self) -> int:
        return sum(1 for blk in self.codeword if any(blk))

    def to_json(self) -> dict:
        return {"delta": {"num": self.delta.numerator, "den": self.delta.denominator},
                "message": list(self.message), "codeword": [list(b) for b in self.codeword],
                "messages_scanned": self.messages_scanned}


def _min_weight_range(code: AdditiveCode, start: int, stop: int) -> tuple[int, int]:
    best_w, best_idx = code.n + 1, -1
    for lo in range(start, stop, _CHUNK):
        hi = min(lo + _CHUNK, stop)
        w = block_weights(code.encode_many(messages(code.field.q, code.k, lo, hi)))
        j = int(np.argmin(w))
        if w[j] < best_w:
            best_w, best_idx = int(w[j]), lo + j
    return best_w, best_idx


def min_distance(code: AdditiveCode, budget: int = DEFAULT_DISTANCE_BUDGET,
                 workers: int = 1) -> DistanceCertificate:
    """Exact relative distance by scanning every nonzero message.

    Ties go to the message with the smallest index, independent of ``workers``.
    """
    total = code.field.q ** code.k
    if total > budget:
        raise BudgetExceeded(total, budget, "message scan")
    if code.k == 0:
        raise ValueError("zero-dimensional code has no distance")
    ranges = split_range(total - 1, workers)
    ranges = [(a + 1, b + 1) for a, b in ranges]
    if workers > 1 and len(ranges) > 1:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_min_weight_range, [code] * len(ranges), *zip(*ranges)))
    else:
        parts = [_min_weight_range(code, a, b) for a, b in ranges]
    w, idx = min(parts)
    msg = messages(code.field.q, code.k, idx, idx + 1)[0]
    cw = code.encode(msg)
    return DistanceCertificate(Fraction(w, code.n), tuple(int(v) for v in msg),
                               tuple(tuple(int(v) for v in blk) for blk in cw), total - 1)


# --- constructors -------------------------------------------------------------


@dataclass(frozen=True)
class FRSParams:
    gamma: int
    evals: tuple[int, ...] = dc_field(default=())

    def points(self, field: GF, s: int) -> list[list[int]]:
        return [[field.mul(a, field.pow(self.gamma, t)) for t in range(s)] for a in self.evals]


def default_frs_params(field: GF, s: int, n: int) -> FRSParams:
    g = field.primitive
    return FRSParams(g, tuple(field.pow(g, s * i) for i in range(n)))


def folded_rs(field: GF, s: int, n: int, k: int, params: FRSParams | None = None) -> AdditiveCode:
    """s-folded Reed-Solomon code: messages are coefficient vectors of degree < k polynomials."""
    if field.q <= s * n:
        raise FieldTooSmall(f"need q > s*n = {s * n}, got q = {field.q}")
    if k > s * n:
        raise ValueError(f"k = {k} exceeds s*n = {s * n}")
    params = params or default_frs_params(field, s, n)
    if len(params.evals) != n:
        raise BadEvaluationPoints(f"{len(params.evals)} evaluation points for n = {n}")
    if field.order(params.gamma) != field.q - 1:
        raise BadEvaluationPoints(f"gamma = {params.gamma} is not primitive")
    pts = params.points(field, s)
    flat = [x for blk in pts for x in blk]
    if 0 in flat or len(set(flat)) != len(flat):
        raise BadEvaluationPoints("points alpha_i * gamma^t must be nonzero and pairwise distinct")
    encoders = [[[field.pow(x, e) for e in range(k)] for x in blk] for blk in pts]
    meta = {"kind": "frs", "gamma": params.gamma, "evals": list(params.evals)}
    return AdditiveCode(field, k, s, n, encoders, meta)


def random_linear_code(field: GF, k: int, s: int, n: int, seed, retries: int = 64) -> AdditiveCode:
    """Uniformly random encoders; the whole tuple is redrawn while not injective."""
    rng = np.random.default_rng(seed)
    meta = {"kind": "rlc"}
    if isinstance(seed, (int, np.integer)):
        meta["seed"] = int(seed)
    elif isinstance(seed, np.random.SeedSequence):
        meta["seed"] = int(seed.entropy) if isinstance(seed.entropy, int) else None
        meta["spawn_key"] = list(seed.spawn_key)
    for _ in range(retries):
        encs = field.random(rng, (n, s, k))
        try:
            return AdditiveCode(field, k, s, n, list(encs), meta)
        except NotInjective:
            continue
    raise RetriesExhausted(f"no injective code after {retries} draws")


def rs_outer_additive(field: GF, k_in: int, n: int, K: int) -> AdditiveCode:
    """Reed-Solomon code over F_{q^k_in}, flattened into F_q blocks of length k_in.

    Evaluation points are the extension elements with codes 0..n-1.  Block i
    of the flattened encoder is [M(b_i^0) | M(b_i^1) | ... | M(b_i^(K-1))],
    where M(b) is the F_q-matrix of multiplication by b.
    """
    ext = ExtensionField(field, k_in)
    if ext.order < n:
        raise FieldTooSmall(f"q^k_in = {ext.order} < n = {n} evaluation points")
    if not 1 <= K <= n:
        raise ValueError(f"need 1 <= K <= n, got K = {K}, n = {n}")
    encoders = []
    for beta in range(n):
        encoders.append(np.concatenate([ext.mul_matrix(ext.pow(beta, j)) for j in range(K)], axis=1))
    meta = {"kind": "rs_outer", "K": K, "ext_modulus": list(ext.modulus)}
    return AdditiveCode(field, K * k_in, k_in, n, encoders, meta)


def code_from_json(obj: dict) -> AdditiveCode:
    from .gf import field_create
    from .linalg import matrix_from_json
    f = obj["field"]
    field = field_create(f["p"], f["m"])
    if list(f.get("modulus", field.modulus)) != list(field.modulus):
        raise ValueError(f"modulus {f['modulus']} is not the canonical modulus {list(field.modulus)}")
    encs = [matrix_from_json(e) for e in obj["encoders"]]
    return AdditiveCode(field, obj["k"], obj["s"], obj["n"], encs, obj.get("meta") or {})
