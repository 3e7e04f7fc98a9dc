"""Brute-force and sampled verifiers for list-decoding, list-recovery and curve-decoding bounds."""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .codes import AdditiveCode, messages
from .design import DesignCertificate
from .errors import BudgetExceeded, DomainError, ViolationFound

DEFAULT_BUDGET = 2**26
_BLOCK = 1 << 20  # cells per vectorized chunk


def _fmt(v):
    if isinstance(v, Fraction):
        return {"num": v.numerator, "den": v.denominator}
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, (list, tuple)):
        return [_fmt(x) for x in v]
    if isinstance(v, dict):
        return {k: _fmt(x) for k, x in v.items()}
    return v


class _Report:
    def to_json(self) -> dict:
        return _fmt(asdict(self))


def codeword_symbols(code: AdditiveCode, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """All q^k codewords as an (N, n) array of block symbols in [0, q^s)."""
    q = code.field.q
    total = q**code.k
    if total > budget:
        raise BudgetExceeded(total, budget, "codeword list")
    cws = code.encode_many(messages(q, code.k, 0, total))
    return symbols(cws, q)


def symbols(blocks: np.ndarray, q: int) -> np.ndarray:
    """Pack (..., s) blocks into integers, first entry most significant."""
    s = blocks.shape[-1]
    return blocks @ (q ** np.arange(s - 1, -1, -1, dtype=np.int64))


def unpack_symbol(sym: int, q: int, s: int) -> list[int]:
    return [(sym // q**t) % q for t in range(s - 1, -1, -1)]


def _tau(cert: DesignCertificate, r: int) -> Fraction | None:
    return cert.tau_hat.get(r)


# --- list decoding ------------------------------------------------------------------


@dataclass
class ListDecodingReport(_Report):
    r: int
    mode: str
    bound: Fraction
    minimum: Fraction
    received: list[int]
    codewords: list[int]
    words_scanned: int
    seed: int | None = None

    @property
    def holds(self) -> bool:
        return self.minimum >= self.bound

    @property
    def verdict(self) -> str:
        return "PASS" if self.holds else "FAIL"


def list_decoding_bound(cert: DesignCertificate, r: int) -> Fraction:
    """(r - 1)(1 - tau(r - 1)); zero for r = 1."""
    if r == 1:
        return Fraction(0)
    tau = _tau(cert, r - 1)
    if tau is None:
        raise ValueError(f"certificate covers r <= {cert.r_max}, need {r - 1}")
    return (r - 1) * (1 - tau)


def _sums_of_smallest(dist: np.ndarray, r: int) -> tuple[np.ndarray, np.ndarray]:
    part = np.sort(dist, axis=1)[:, :r]
    return part.sum(axis=1), np.argsort(dist, axis=1, kind="stable")[:, :r]


def list_decoding_check(code: AdditiveCode, cert: DesignCertificate, r: int, mode: str = "exhaustive",
                        trials: int = 1000, seed: int = 0, budget: int = DEFAULT_BUDGET,
                        strict: bool = True) -> ListDecodingReport:
    """Minimum of sum_i Delta(y, c_i) over received words y and r distinct codewords.

    For a fixed y the minimizing r-tuple is the r nearest codewords, so the
    exhaustive scan is exact over all (y, tuple) pairs.  The sampled mode draws
    r random codewords and pairs them with their blockwise plurality word,
    which minimizes the sum for that tuple.
    """
    C = codeword_symbols(code, budget)
    N, n, Q = C.shape[0], code.n, code.field.q**code.s
    if not 1 <= r <= N:
        raise ValueError(f"r must be in [1, {N}]")
    bound = list_decoding_bound(cert, r)
    best = (n * r + 1, None, None)
    if mode == "exhaustive":
        total = Q**n
        if total * N > budget:
            raise BudgetExceeded(total * N, budget, "received-word scan")
        step = max(1, _BLOCK // max(1, N * n))
        for lo in range(0, total, step):
            Y = messages(Q, n, lo, min(total, lo + step))
            D = (Y[:, None, :] != C[None, :, :]).sum(axis=2)
            sums, idx = _sums_of_smallest(D, r)
            j = int(np.argmin(sums))
            if sums[j] < best[0]:
                best = (int(sums[j]), Y[j].tolist(), sorted(idx[j].tolist()))
        scanned = total
    elif mode == "sampled":
        rng = np.random.default_rng(seed)
        for _ in range(trials):
            pick = rng.choice(N, size=r, replace=False)
            sub = C[pick]
            y = np.array([np.bincount(sub[:, i]).argmax() for i in range(n)])
            total_d = int((sub != y).sum())
            if total_d < best[0]:
                best = (total_d, y.tolist(), sorted(pick.tolist()))
        scanned = trials
    else:
        raise ValueError(f"unknown mode {mode!r}")
    report = ListDecodingReport(r, mode, bound, Fraction(best[0], n), best[1], best[2], scanned,
                                seed if mode == "sampled" else None)
    if strict and not report.holds:
        raise ViolationFound(report, f"sum of distances {report.minimum} < bound {bound}")
    return report


def min_distance_sum(C: np.ndarray, y, idx) -> Fraction:
    """sum_i Delta(y, C[idx_i]) recomputed directly."""
    y = np.asarray(y)
    return Fraction(int(sum((C[i] != y).sum() for i in idx)), C.shape[1])


# --- list recovery ------------------------------------------------------------------


def ceil_ratio(ell: int, epsilon) -> int:
    """Ceiling of the exact rational ell / epsilon."""
    return math.ceil(Fraction(ell) / Fraction(epsilon))


def power_upper(base: Fraction, exponent: Fraction) -> float:
    """A float >= base ** exponent (base > 0), nudged outward past rounding error."""
    val = math.exp(float(exponent) * math.log(float(base)))
    return math.nextafter(val * (1 + 1e-12), math.inf)


def _ceil_power(base: Fraction, exponent: Fraction) -> int:
    """Exact ceil(base ** exponent) for positive rationals: least m with m^d >= base^p."""
    p, d = exponent.numerator, exponent.denominator
    target = base**p
    try:
        guess = float(base) ** float(exponent)
    except OverflowError:
        guess = math.inf
    if math.isfinite(guess):
        lo, hi = max(0, int(guess * (1 - 1e-9)) - 2), int(guess * (1 + 1e-9)) + 2
    else:
        lo, hi = 0, 2
        while Fraction(hi) ** d < target:
            hi *= 2
    while Fraction(lo) ** d >= target and lo > 0:
        lo //= 2
    while Fraction(hi) ** d < target:
        hi *= 2
    # invariant: lo^d < target <= hi^d
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if Fraction(mid) ** d >= target:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass
class ListRecoveryReport(_Report):
    ell: int
    epsilon: Fraction
    r: int
    verdict: str
    radius: Fraction | None = None
    bound: float | None = None
    worst_count: int | None = None
    worst_lists: list | None = None
    collections_scanned: int = 0
    mode: str = "exhaustive"
    seed: int | None = None

    @property
    def holds(self) -> bool:
        return self.verdict != "FAIL"


def _close_counts(members: list[np.ndarray], tuples: np.ndarray, max_miss: int) -> np.ndarray:
    """For each list-index tuple, how many codewords miss fewer than ``max_miss`` lists."""
    N = members[0].shape[0]
    miss = np.zeros((tuples.shape[0], N), dtype=np.int64)
    for i, mem in enumerate(members):
        miss += ~mem[:, tuples[:, i]].T
    return (miss < max_miss).sum(axis=1)


def list_recovery_check(code: AdditiveCode, cert: DesignCertificate, ell: int, epsilon,
                        mode: str = "exhaustive", trials: int = 1000, seed: int = 0,
                        budget: int = DEFAULT_BUDGET, strict: bool = True) -> ListRecoveryReport:
    """Largest number of codewords within radius 1 - tau(r) - eps of a product of size-ell lists.

    r = ceil(ell / eps).  Distance to L_1 x ... x L_n is the fraction of
    coordinates i with c_i outside L_i, and the count is compared with
    (ell / (tau + eps)) ** ((tau + eps) / eps), rounded upward.
    """
    epsilon = Fraction(epsilon)
    if ell < 1 or epsilon <= 0:
        raise ValueError("need ell >= 1 and epsilon > 0")
    r = ceil_ratio(ell, epsilon)
    tau = _tau(cert, r)
    if tau is None:
        return ListRecoveryReport(ell, epsilon, r, "Inconclusive", mode=mode)
    radius = 1 - tau - epsilon
    x = tau + epsilon
    bound = power_upper(Fraction(ell) / x, x / epsilon)
    C = codeword_symbols(code, budget)
    N, n, Q = C.shape[0], code.n, code.field.q**code.s
    if ell > Q:
        raise ValueError(f"lists of size {ell} exceed the alphabet size {Q}")
    # codewords c with (misses / n) < radius  <=>  misses < radius * n
    max_miss = math.ceil(radius * n)
    lists = list(itertools.combinations(range(Q), ell))
    in_list = np.zeros((Q, len(lists)), dtype=bool)
    for t, L in enumerate(lists):
        in_list[list(L), t] = True
    members = [in_list[C[:, i]] for i in range(n)]  # members[i][c, t]: is C[c, i] in list t
    m = len(lists)
    worst = (-1, None)
    if mode == "exhaustive":
        total = m**n
        if total * N > budget:
            raise BudgetExceeded(total * N, budget, "list-collection scan")
        step = max(1, _BLOCK // max(1, N * n))
        for lo in range(0, total, step):
            tuples = messages(m, n, lo, min(total, lo + step))
            counts = _close_counts(members, tuples, max_miss)
            j = int(np.argmax(counts))
            if counts[j] > worst[0]:
                worst = (int(counts[j]), tuples[j])
        scanned = total
    elif mode == "sampled":
        rng = np.random.default_rng(seed)
        index = {L: t for t, L in enumerate(lists)}
        tuples = np.zeros((trials, n), dtype=np.int64)
        for row in range(trials):
            # plant a few codewords in the lists, fill the rest at random
            planted = C[rng.choice(N, size=min(ell, N), replace=False)]
            for i in range(n):
                L = set(int(v) for v in planted[:, i])
                while len(L) < ell:
                    L.add(int(rng.integers(Q)))
                tuples[row, i] = index[tuple(sorted(L))]
        counts = _close_counts(members, tuples, max_miss)
        j = int(np.argmax(counts))
        worst = (int(counts[j]), tuples[j])
        scanned = trials
    else:
        raise ValueError(f"unknown mode {mode!r}")
    worst_lists = None if worst[1] is None else [list(lists[t]) for t in worst[1]]
    verdict = "PASS" if worst[0] <= bound else "FAIL"
    report = ListRecoveryReport(ell, epsilon, r, verdict, radius, bound, worst[0], worst_lists, scanned, mode,
                                seed if mode == "sampled" else None)
    if strict and verdict == "FAIL":
        raise ViolationFound(report, f"{worst[0]} codewords near one list collection, bound {bound}")
    return report


# --- curve decoding -----------------------------------------------------------------


@dataclass
class DecodingQuery:
    ell: int = 1
    radius: Fraction | None = None
    r_tuple: int | None = None
    a: int | None = None
    b: Fraction | None = None
    trials: int = 100
    mode: str = "sampled"

    def __post_init__(self):
        if self.ell < 0:
            raise ValueError("ell must be >= 0")
        if self.radius is not None and not 0 <= Fraction(self.radius) <= 1:
            raise ValueError("radius must lie in [0, 1]")
        if self.a is not None and self.b is not None and not self.a >= self.b >= 0:
            raise ValueError("need a >= b >= 0")


@dataclass
class CurveTrial:
    index: int
    agreement_set: list[int]
    required: Fraction
    best_agreement: int
    curve: list[list[int]]


@dataclass
class CurveDecodingReport(_Report):
    ell: int
    r: int
    epsilon: Fraction
    delta: Fraction
    trials: int
    seed: int
    applicable: int
    violations: list[CurveTrial] = dc_field(default_factory=list)
    min_slack: Fraction | None = None
    verdict: str = "PASS"

    @property
    def holds(self) -> bool:
        return self.verdict != "FAIL"


def _alpha_powers(field, alphas, ell):
    # alpha^0 = 1 for every alpha, including 0
    return np.array([[1] + [field.pow(a, j) for j in range(1, ell + 1)] for a in alphas], dtype=np.int64)


def best_curve_agreement(code: AdditiveCode, f_msgs: np.ndarray, alphas: list[int], ell: int,
                         budget: int = DEFAULT_BUDGET) -> tuple[int, list[list[int]]]:
    """max over message tuples (m_0..m_ell) of #{alpha : sum_j alpha^j m_j = f_msgs[alpha]}.

    Encoding is linear and injective, so agreement of codeword curves is
    decided in message space.  ``f_msgs`` has one row per entry of ``alphas``.
    """
    field, q, k = code.field, code.field.q, code.k
    total = q ** (k * (ell + 1))
    if total * max(1, len(alphas)) > budget:
        raise BudgetExceeded(total, budget, "curve tuple scan")
    if not alphas:
        return 0, [[0] * k for _ in range(ell + 1)]
    P = _alpha_powers(field, alphas, ell)
    best = (-1, None)
    step = max(1, _BLOCK // (len(alphas) * k * (ell + 1)))
    for lo in range(0, total, step):
        T = messages(q, k * (ell + 1), lo, min(total, lo + step)).reshape(-1, ell + 1, k)
        vals = np.zeros((T.shape[0], len(alphas), k), dtype=np.int64)
        for j in range(ell + 1):
            vals = field.add(vals, field.mul(P[None, :, j, None], T[:, None, j, :]))
        agree = np.all(vals == f_msgs[None, :, :], axis=2).sum(axis=1)
        t = int(np.argmax(agree))
        if agree[t] > best[0]:
            best = (int(agree[t]), T[t].tolist())
    return best


def curve_decoding_check(code: AdditiveCode, cert: DesignCertificate, query: DecodingQuery, r: int, epsilon,
                         seed: int = 0, budget: int = DEFAULT_BUDGET, strict: bool = True) -> CurveDecodingReport:
    """Planted-instance sampling of the curve-decoding guarantee at delta = 1 - tau(r) - eps.

    Each trial plants a random codeword curve on a random subset of F_q,
    fills the remaining points of f with random codewords, and perturbs the
    centres u_j on a few blocks.  Whenever |A| >= a, some codeword curve must
    agree with f on at least eps / (r + eps) * a points of A.
    """
    epsilon = Fraction(epsilon)
    ell = query.ell
    if epsilon < Fraction(ell + 1, r):
        raise DomainError(f"need epsilon >= (ell+1)/r = {Fraction(ell + 1, r)}")
    tau = _tau(cert, r)
    if tau is None:
        raise ValueError(f"certificate covers r <= {cert.r_max}, need {r}")
    field, q, k, n = code.field, code.field.q, code.k, code.n
    delta = 1 - tau - epsilon if query.radius is None else Fraction(query.radius)
    rng = np.random.default_rng(seed)
    alphas = list(range(q))
    P = _alpha_powers(field, alphas, ell)
    report = CurveDecodingReport(ell, r, epsilon, delta, query.trials, seed, 0)
    for trial in range(query.trials):
        m = field.random(rng, (ell + 1, k))
        planted = rng.random(q) < rng.random()
        f_msgs = field.random(rng, (q, k))
        for a_idx in np.flatnonzero(planted):
            f_msgs[a_idx] = field.sum(field.mul(P[a_idx][:, None], m), axis=0)
        U = code.encode_many(m)  # (ell+1, n, s)
        noise_blocks = rng.integers(0, max(1, n // 4) + 1)
        for i in rng.choice(n, size=noise_blocks, replace=False):
            j = int(rng.integers(ell + 1))
            U[j, i] = field.random(rng, code.s)
        F = code.encode_many(f_msgs)
        agreement = []
        for a_idx, alpha in enumerate(alphas):
            point = np.zeros((n, code.s), dtype=np.int64)
            for j in range(ell + 1):
                point = field.add(point, field.mul(P[a_idx, j], U[j]))
            dist = Fraction(int(np.any(point != F[a_idx], axis=1).sum()), n)
            if dist <= delta:
                agreement.append(alpha)
        a = query.a if query.a is not None else len(agreement)
        if len(agreement) < a or a == 0:
            continue
        report.applicable += 1
        required = epsilon / (r + epsilon) * a
        got, curve = best_curve_agreement(code, f_msgs[agreement], agreement, ell, budget)
        slack = got - required
        report.min_slack = slack if report.min_slack is None else min(report.min_slack, slack)
        if got < required:
            report.violations.append(CurveTrial(trial, agreement, required, got, curve))
    if report.violations:
        report.verdict = "FAIL"
        if strict:
            raise ViolationFound(report, f"{len(report.violations)} curve-decoding violations")
    return report


# --- parameter planning -------------------------------------------------------------


@dataclass
class RecoveryPlan(_Report):
    ell: int
    R: Fraction
    epsilon: Fraction
    L: int
    log_base: int
    eps0: Fraction
    eps0_exact: bool
    eps1: Fraction
    r: int
    alphabet_q_exponent: int
    summary: str


def _log2_upper(x: Fraction) -> tuple[Fraction, bool]:
    """log2(x) exactly when x is a power of two, else a rational upper bound."""
    num, den = x.numerator, x.denominator
    if num & (num - 1) == 0 and den & (den - 1) == 0:
        return Fraction(num.bit_length() - den.bit_length()), True
    val = math.log2(num) - math.log2(den)
    return Fraction(math.nextafter(val + 1e-12 * max(1.0, abs(val)), math.inf)), False


def recovery_parameter_plan(ell: int, R, epsilon) -> RecoveryPlan:
    """L, eps0, eps1, r = ceil(ell/eps1) and the q-exponent r^2 for a list-recovery target.

    L = ceil((ell/(R+eps)) ** ((R+eps)/eps)), eps0 = eps^2 / (4 L log2(ell/eps)),
    eps1 = eps - eps0.  When log2(ell/eps) is irrational, eps0 is rounded
    down, which keeps every downstream inequality on the safe side.
    """
    R, epsilon = Fraction(R), Fraction(epsilon)
    if ell < 2:
        raise DomainError("ell must be at least 2")
    if not (0 < epsilon < 1 and 0 < R < 1):
        raise DomainError("R and epsilon must lie in (0, 1)")
    x = R + epsilon
    L = _ceil_power(Fraction(ell) / x, x / epsilon)
    log_val, exact = _log2_upper(Fraction(ell) / epsilon)
    eps0 = epsilon**2 / (4 * L * log_val)
    eps1 = epsilon - eps0
    if eps1 < epsilon / 2:
        raise DomainError(f"eps1 = {eps1} falls below eps/2")
    r = math.ceil(Fraction(ell) / eps1)
    summary = (f"ell={ell}, R={R}, eps={epsilon}: L={L}, eps0={eps0}{'' if exact else ' (rounded down)'}, "
               f"eps1={eps1}, design dimension r={r}, alphabet F_q^(poly * q^{r * r})")
    return RecoveryPlan(ell, R, epsilon, L, 2, eps0, exact, eps1, r, r * r, summary)
