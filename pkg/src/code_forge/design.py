"""Subspace-design certification, potentials, and local profiles.

Conventions: a subspace A of the message space F_q^k is held by its
canonical basis B (rows).  Coordinates on A are coefficient vectors c with
a = c B, and functionals on A are rows f acting by f . c.  A profile
witness (A, phi) stores phi as a dim V x dim V matrix with
phi(v) = v @ phi, so phi(V_i) is the row span of V_i.basis @ phi.
"""

from __future__ import annotations

import itertools
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .codes import AdditiveCode, random_linear_code
from .errors import (AmbientMismatch, AttemptsExhausted, BudgetExceeded, IdentityViolated,
                     InvalidWitness, NotViolating, PreconditionFailed, RetriesExhausted)
from .gf import GF
from .linalg import (Subspace, all_subspaces, as_matrix, default_budget, enumerate_subspaces,
                     is_invertible, kernel, mat_inverse, matrix_to_json, quotient_map, rank, solve,
                     split_range, subspace_count)


def intersection_dims(encoders, A: Subspace) -> list[int]:
    """dim(A & ker E) for each encoder E, via dim A - rank(E B^T)."""
    field, BT = A.field, A.basis.T
    return [A.dim - rank(field.matmul(E, BT), field) for E in encoders]


def design_ratio(code: AdditiveCode, A: Subspace) -> Fraction:
    """(1/n) sum_i dim(A & ker Enc_i) / dim A for a nonzero message subspace A."""
    if A.dim == 0:
        raise ValueError("the ratio is undefined for the zero subspace")
    return Fraction(sum(intersection_dims(code.encoders, A)), code.n * A.dim)


# --- certification ----------------------------------------------------------------


@dataclass(frozen=True)
class DesignCertificate:
    r_max: int
    tau_hat: dict[int, Fraction]
    witness: dict[int, Subspace]
    subspaces_scanned: int

    def verify_witnesses(self, code: AdditiveCode) -> bool:
        """Each witness reproduces its ratio and the values never decrease in r."""
        vals = [self.tau_hat[r] for r in range(1, self.r_max + 1)]
        if any(a > b for a, b in zip(vals, vals[1:])):
            return False
        return all(self.witness[r].dim <= r and design_ratio(code, self.witness[r]) == self.tau_hat[r]
                   for r in self.witness)

    def max_tau(self, r: int | None = None) -> Fraction:
        return self.tau_hat[self.r_max if r is None else r]

    def to_json(self) -> dict:
        return {"r_max": self.r_max,
                "tau_hat": {str(r): {"num": t.numerator, "den": t.denominator} for r, t in self.tau_hat.items()},
                "witness": {str(r): w.to_json() for r, w in self.witness.items()},
                "subspaces_scanned": self.subspaces_scanned}


def _scan(code: AdditiveCode, dmax: int, start: int, stop: int) -> dict[int, tuple]:
    # Per dimension: (ratio, -index, basis) of the first maximizer in the slice.
    best: dict[int, tuple] = {}
    k, field = code.k, code.field
    for idx, A in enumerate(enumerate_subspaces(k, dmax, field, start, stop, budget=math.inf), start):
        ratio = design_ratio(code, A)
        cur = best.get(A.dim)
        if cur is None or ratio > cur[0]:
            best[A.dim] = (ratio, -idx, A.basis.tolist())
    return best


def tau_profile(code: AdditiveCode, r_max: int, budget: int | None = None, workers: int = 1) -> DesignCertificate:
    """Exact max over nonzero message subspaces A' with dim <= r of the design ratio, for r = 1..r_max.

    Dimensions above k contribute nothing new, so entries for r > k repeat
    the value at r = k.  Ties go to the earliest subspace in canonical order.
    """
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    dmax = min(r_max, code.k)
    total = subspace_count(code.k, dmax, code.field.q)
    budget = default_budget() if budget is None else budget
    if total > budget:
        raise BudgetExceeded(total, budget, "subspace enumeration")
    ranges = split_range(total, workers)
    if workers > 1 and len(ranges) > 1:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_scan, [code] * len(ranges), [dmax] * len(ranges), *zip(*ranges)))
    else:
        parts = [_scan(code, dmax, a, b) for a, b in ranges]
    per_dim: dict[int, tuple] = {}
    for part in parts:
        for d, entry in part.items():
            if d not in per_dim or entry[:2] > per_dim[d][:2]:
                per_dim[d] = entry
    tau_hat: dict[int, Fraction] = {}
    witness: dict[int, Subspace] = {}
    running = None
    for r in range(1, r_max + 1):
        if r in per_dim and (running is None or per_dim[r][:2] > running[:2]):
            running = per_dim[r]
        tau_hat[r] = running[0]
        witness[r] = Subspace(code.field, code.k, running[2], canonical=True)
    return DesignCertificate(r_max, tau_hat, witness, total)


# --- potential and local profiles -----------------------------------------------


@dataclass(frozen=True)
class LocalProfile:
    dim_v: int
    parts: tuple[Subspace, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        for i, V in enumerate(self.parts):
            if V.ambient != self.dim_v:
                raise AmbientMismatch(f"part {i} lives in dimension {V.ambient}, profile has {self.dim_v}")

    @property
    def n(self) -> int:
        return len(self.parts)

    @property
    def field(self) -> GF:
        return self.parts[0].field

    def to_json(self) -> dict:
        return {"dim_v": self.dim_v, "parts": [V.to_json() for V in self.parts]}


@dataclass(frozen=True)
class ContainmentWitness:
    A: Subspace
    phi: np.ndarray

    def validate(self, dim_v: int | None = None) -> None:
        phi = as_matrix(self.phi, self.A.dim)
        d = self.A.dim
        if phi.shape != (d, d):
            raise InvalidWitness(f"phi has shape {phi.shape}, expected {(d, d)}")
        if dim_v is not None and dim_v != d:
            raise InvalidWitness(f"dim A = {d} differs from dim V = {dim_v}")
        if not is_invertible(phi, self.A.field) and d > 0:
            raise InvalidWitness("phi is not invertible")

    def to_json(self) -> dict:
        return {"A": self.A.to_json(), "phi": matrix_to_json(self.phi, self.A.dim)}


@dataclass(frozen=True)
class ProfileEvaluation:
    alpha: Fraction
    phi_value: Fraction


def potential(U: Subspace, profile: LocalProfile, alpha) -> ProfileEvaluation:
    """alpha * dim U - (1/n) sum_i (dim U - dim(U & V_i)), exactly."""
    alpha = Fraction(alpha)
    if U.ambient != profile.dim_v:
        raise AmbientMismatch(f"U lives in dimension {U.ambient}, profile in {profile.dim_v}")
    codim = sum(U.dim - (U & V).dim for V in profile.parts)
    return ProfileEvaluation(alpha, alpha * U.dim - Fraction(codim, profile.n))


def _map_functionals(S: Subspace, phi: np.ndarray) -> Subspace:
    if S.dim == 0:
        return Subspace.zero(S.field, phi.shape[1])
    return Subspace(S.field, phi.shape[1], S.field.matmul(S.basis, phi))


def _containment_failure(encoders, profile: LocalProfile, witness: ContainmentWitness) -> int | None:
    witness.validate(profile.dim_v)
    if len(encoders) != profile.n:
        raise AmbientMismatch(f"profile has {profile.n} parts, code has {len(encoders)} coordinates")
    field, A = witness.A.field, witness.A
    phi = as_matrix(witness.phi, A.dim)
    for i, (E, V) in enumerate(zip(encoders, profile.parts)):
        J = _map_functionals(V, phi).joint_kernel()
        if J.dim == 0:
            continue
        vecs = field.matmul(J.basis, A.basis)
        if np.any(field.matmul(E, vecs.T)):
            return i
    return None


@dataclass(frozen=True)
class WitnessCheck:
    ok: bool
    failing_index: int | None = None

    def __bool__(self):
        return self.ok


def check_witness(code: AdditiveCode, profile: LocalProfile, witness: ContainmentWitness) -> WitnessCheck:
    """Does every phi(V_i)^o, read back inside A, lie in ker Enc_i?

    Structural defects (wrong shapes, singular phi) raise InvalidWitness.
    """
    bad = _containment_failure(code.encoders, profile, witness)
    return WitnessCheck(bad is None, bad)


def profile_from_witness(code: AdditiveCode, A: Subspace) -> tuple[LocalProfile, ContainmentWitness]:
    """V = A^*, V_i = annihilator of (A & ker Enc_i), phi = identity."""
    if A.dim < 1:
        raise ValueError("A must be nonzero")
    field, d = code.field, A.dim
    parts = [kernel(field.matmul(E, A.basis.T), field, d).annihilator() for E in code.encoders]
    return LocalProfile(d, tuple(parts)), ContainmentWitness(A, np.eye(d, dtype=np.int64))


def find_containment(code: AdditiveCode, profile: LocalProfile, budget: int = 10**6) -> ContainmentWitness | None:
    """Exhaustive search over (A, phi); meant as a test oracle on tiny instances."""
    field, d = code.field, profile.dim_v
    if d == 0:
        w = ContainmentWitness(Subspace.zero(field, code.k), np.zeros((0, 0), dtype=np.int64))
        return w if check_witness(code, profile, w) else None
    n_gl = math.prod(field.q**d - field.q**i for i in range(d))
    from .linalg import gaussian_binomial
    cost = gaussian_binomial(code.k, d, field.q) * n_gl
    if cost > budget:
        raise BudgetExceeded(cost, budget, "containment search")
    mats = [np.array(m, dtype=np.int64).reshape(d, d)
            for m in itertools.product(range(field.q), repeat=d * d)]
    mats = [m for m in mats if is_invertible(m, field)]
    for A in enumerate_subspaces(code.k, d, field, budget=math.inf):
        if A.dim != d:
            continue
        for phi in mats:
            w = ContainmentWitness(A, phi)
            if _containment_failure(code.encoders, profile, w) is None:
                return w
    return None


# --- quotients ----------------------------------------------------------------


def quotient_profile(profile: LocalProfile, W: Subspace, witness: ContainmentWitness,
                     code: AdditiveCode | None = None) -> tuple[LocalProfile, ContainmentWitness]:
    """Profile (V_i + W)/W on V/W with the induced witness.

    V/W is coordinatized by ``quotient_map(dim V, W)``.  The new message
    subspace is A' = phi(W)^o inside A, and phi' sends a coset to the
    restriction of phi to A', in the canonical coordinates of A'.
    """
    d = profile.dim_v
    witness.validate(d)
    if W.ambient != d:
        raise AmbientMismatch(f"W lives in dimension {W.ambient}, profile in {d}")
    if code is not None and not check_witness(code, profile, witness):
        raise InvalidWitness("the input witness does not certify containment")
    field, A = W.field, witness.A
    phi = as_matrix(witness.phi, d)
    M = quotient_map(d, W)
    parts = tuple((V + W).image(M) for V in profile.parts)
    J = _map_functionals(W, phi).joint_kernel()
    A_new = Subspace(field, A.ambient, field.matmul(J.basis, A.basis)) if J.dim else Subspace.zero(field, A.ambient)
    rest = [c for c in range(d) if c not in set(W.pivots)]
    coords_new = A_new.basis[:, A.pivots]
    phi_new = field.matmul(phi[rest], coords_new.T) if rest else np.zeros((0, 0), dtype=np.int64)
    return LocalProfile(d - W.dim, parts), ContainmentWitness(A_new, phi_new)


@dataclass(frozen=True)
class IdentityReport:
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def quotient_potential_identity(U: Subspace, W: Subspace, profile: LocalProfile, alpha) -> IdentityReport:
    """Phi(U+W) - Phi(W) on V against Phi(M U) on V/W for the profile (M V_i)."""
    M = quotient_map(profile.dim_v, W)
    lhs = potential(U + W, profile, alpha).phi_value - potential(W, profile, alpha).phi_value
    pushed = LocalProfile(profile.dim_v - W.dim, tuple(V.image(M) for V in profile.parts))
    rhs = potential(U.image(M), pushed, alpha).phi_value
    report = IdentityReport(lhs, rhs)
    if not report.holds:
        raise IdentityViolated(f"Phi(U+W) - Phi(W) = {lhs} but Phi'(M U) = {rhs}")
    return report


def maximal_maximizer(profile: LocalProfile, alpha, budget: int | None = None) -> tuple[Subspace, Fraction]:
    """A maximizer of Phi(., profile, alpha) of largest dimension (first in canonical order)."""
    best, best_val = None, None
    for U in all_subspaces(profile.dim_v, profile.field, budget):
        val = potential(U, profile, alpha).phi_value
        if best is None or val > best_val or (val == best_val and U.dim > best.dim):
            best, best_val = U, val
    return best, best_val


def strictness_counterexample(profile: LocalProfile, alpha, budget: int | None = None) -> Subspace | None:
    """First nonzero U with Phi(U) >= 0, or None when the profile is strict."""
    for U in enumerate_subspaces(profile.dim_v, profile.dim_v, profile.field, budget=budget):
        if potential(U, profile, alpha).phi_value >= 0:
            return U
    return None


def strictify_with_witness(profile: LocalProfile, alpha, witness: ContainmentWitness | None = None,
                           code: AdditiveCode | None = None, budget: int | None = None):
    """Quotient by a maximal-dimension maximizer W of Phi; returns (profile', witness', W).

    ``witness'`` is None when no witness was given.
    """
    full = Subspace.full(profile.field, profile.dim_v)
    if potential(full, profile, alpha).phi_value >= 0:
        raise NotViolating("Phi(V) >= 0; nothing to strictify")
    W, _ = maximal_maximizer(profile, alpha, budget)
    if witness is not None:
        out, w_out = quotient_profile(profile, W, witness, code)
    else:
        M = quotient_map(profile.dim_v, W)
        out, w_out = LocalProfile(profile.dim_v - W.dim, tuple((V + W).image(M) for V in profile.parts)), None
    bad = strictness_counterexample(out, alpha, budget)
    if bad is not None or out.dim_v == 0:
        raise AssertionError(f"strictified profile is not strict (counterexample {bad})")
    return out, w_out, W


def strictify_profile(profile: LocalProfile, alpha, budget: int | None = None) -> LocalProfile:
    """Quotient profile on which every nonzero U has negative potential."""
    return strictify_with_witness(profile, alpha, budget=budget)[0]


# --- pushforward dichotomy ----------------------------------------------------------


@dataclass(frozen=True)
class PushforwardResult:
    ma_zero: bool
    U: Subspace | None = None
    evaluation: ProfileEvaluation | None = None
    inner_profile: LocalProfile | None = None
    inner_witness: ContainmentWitness | None = None


def pushforward_dichotomy(inner: AdditiveCode, M, profile: LocalProfile, witness: ContainmentWitness,
                          r: int, certificate: DesignCertificate) -> PushforwardResult:
    """Either M(A) = 0, or U = phi^-1(ker(M|_A)^perp) has Phi(U, profile, tau_inner(r)) >= 0.

    M maps F_q^k' -> F_q^k_inner (x -> M x).  The returned inner profile is
    (V_i & U) in U's canonical coordinates, with a witness (M(A), phi') in
    the inner code, so the containment claim behind the bound is checkable.
    """
    M = as_matrix(M)
    field, A = inner.field, witness.A
    if M.shape != (inner.k, A.ambient):
        raise AmbientMismatch(f"M has shape {M.shape}, expected {(inner.k, A.ambient)}")
    if r < profile.dim_v:
        raise ValueError(f"r = {r} must be at least dim V = {profile.dim_v}")
    composed = [field.matmul(E, M) for E in inner.encoders]
    bad = _containment_failure(composed, profile, witness)
    if bad is not None:
        raise PreconditionFailed(bad, f"phi(V_{bad})^o is not inside ker(Enc_{bad} o M)")
    B = A.image(M)
    if B.dim == 0:
        return PushforwardResult(True)
    d = A.dim
    phi = as_matrix(witness.phi, d)
    T = field.matmul(M, A.basis.T)  # A-coordinates -> F^k_inner
    ker_MA = kernel(T, field, d)
    U = Subspace(field, d, field.matmul(ker_MA.annihilator().basis, mat_inverse(phi, field)))
    tau = certificate.tau_hat[r] if r in certificate.tau_hat else certificate.tau_hat[certificate.r_max]
    if r > certificate.r_max and certificate.r_max < inner.k:
        raise ValueError(f"certificate covers r <= {certificate.r_max}, asked for {r}")
    ev = potential(U, profile, tau)
    if ev.phi_value < 0:
        raise AssertionError(f"pushforward produced Phi(U) = {ev.phi_value} < 0")
    # phi'(u)(b) = phi(u)(a) for any a in A with M a = b.
    pre = np.array([solve(T, b, field) for b in B.basis], dtype=np.int64)
    phi_new = field.matmul(field.matmul(U.basis, phi), pre.T)
    upiv = U.pivots
    parts = tuple(Subspace(field, U.dim, (V & U).basis[:, upiv]) for V in profile.parts)
    return PushforwardResult(False, U, ev, LocalProfile(U.dim, parts), ContainmentWitness(B, phi_new))


# --- equivalence --------------------------------------------------------------------


@dataclass
class ThresholdResult:
    tau: Fraction
    violating: int = 0
    mismatches: list = dc_field(default_factory=list)
    strictified: int = 0
    strict_failures: list = dc_field(default_factory=list)


@dataclass
class EquivalenceReport:
    r: int
    tau_hat: Fraction
    scanned: int
    thresholds: list[ThresholdResult]

    @property
    def mismatches(self) -> int:
        return sum(len(t.mismatches) + len(t.strict_failures) for t in self.thresholds)

    @property
    def ok(self) -> bool:
        return self.mismatches == 0

    def to_json(self) -> dict:
        return {"r": self.r, "tau_hat": str(self.tau_hat), "scanned": self.scanned, "mismatches": self.mismatches,
                "thresholds": [{"tau": str(t.tau), "violating": t.violating, "mismatches": len(t.mismatches),
                                "strictified": t.strictified, "strict_failures": len(t.strict_failures)}
                               for t in self.thresholds]}


def equivalence_check(code: AdditiveCode, r: int, thresholds=None, strictify: bool = True,
                      budget: int | None = None, certificate: DesignCertificate | None = None) -> EquivalenceReport:
    """Cross-check the ratio test against the potential of the induced profile.

    For each threshold tau and each message subspace A' with dim <= r:
    ratio(A') > tau must hold exactly when Phi(V, profile_from_witness(A'), tau) < 0,
    and the induced witness must pass check_witness.  Violating profiles are
    also strictified (with their witnesses) when ``strictify`` is set, and the
    output is scanned over every nonzero subspace for strictness.
    Default thresholds: tau_hat(r) and tau_hat(r) - 1/(2 n r!).
    """
    cert = certificate or tau_profile(code, r, budget)
    tau_hat = cert.tau_hat[r]
    if thresholds is None:
        thresholds = [tau_hat, tau_hat - Fraction(1, 2 * code.n * math.factorial(r))]
    results = [ThresholdResult(Fraction(t)) for t in thresholds]
    scanned = 0
    for A in enumerate_subspaces(code.k, min(r, code.k), code.field, budget=budget):
        scanned += 1
        ratio = design_ratio(code, A)
        profile, witness = profile_from_witness(code, A)
        if not check_witness(code, profile, witness):
            for res in results:
                res.mismatches.append(("witness", A))
            continue
        full = Subspace.full(code.field, A.dim)
        for res in results:
            phi_val = potential(full, profile, res.tau).phi_value
            if (ratio > res.tau) != (phi_val < 0):
                res.mismatches.append(("direction", A, ratio, phi_val))
            if phi_val < 0:
                res.violating += 1
                if strictify:
                    out, w_out, _ = strictify_with_witness(profile, res.tau, witness, code, budget)
                    bad = strictness_counterexample(out, res.tau, budget)
                    if out.dim_v == 0 or bad is not None:
                        res.strict_failures.append(("strictness", A, bad))
                    elif not check_witness(code, out, w_out):
                        res.strict_failures.append(("containment", A))
                    else:
                        res.strictified += 1
    return EquivalenceReport(r, tau_hat, scanned, results)


# --- inner code search ----------------------------------------------------------


@dataclass(frozen=True)
class InnerSearch:
    code: AdditiveCode
    certificate: DesignCertificate
    attempts: int


def search_inner_code(field: GF, k_in: int, s: int, d: int, r: int, epsilon, max_attempts: int = 200,
                      seed: int = 0, budget: int | None = None) -> InnerSearch:
    """Draw seeded random codes until tau_hat(r') <= k_in/(s d) + epsilon for all r' <= r."""
    epsilon = Fraction(epsilon)
    if r > epsilon * s / 4:
        warnings.warn(f"r = {r} exceeds epsilon*s/4 = {float(epsilon * s / 4):.3g}; "
                      "the random-code guarantee does not cover this range", stacklevel=2)
    target = Fraction(k_in, s * d) + epsilon
    children = np.random.SeedSequence(seed).spawn(max_attempts)
    best = None
    for attempt, child in enumerate(children, 1):
        try:
            code = random_linear_code(field, k_in, s, d, child)
        except RetriesExhausted:
            continue
        code.meta.update({"seed": seed, "attempt": attempt})
        cert = tau_profile(code, r, budget)
        worst = max(cert.tau_hat.values())
        best = worst if best is None else min(best, worst)
        if worst <= target:
            return InnerSearch(code, cert, attempt)
    raise AttemptsExhausted(max_attempts, best)
