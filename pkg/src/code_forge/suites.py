"""Seeded randomized suites for the structural identities (shared by the CLI and the tests)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .codes import random_linear_code
from .design import (LocalProfile, check_witness, equivalence_check, potential, profile_from_witness,
                     quotient_potential_identity, strictify_with_witness, strictness_counterexample)
from .errors import IdentityViolated, ViolationFound
from .gf import field_create
from .graphs import complete_bipartite, mixing_check, random_regular_bipartite, sigma2
from .linalg import Subspace, all_subspaces, random_subspace


@dataclass
class SuiteResult:
    name: str
    trials: int = 0
    failures: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"name": self.name, "trials": self.trials, "failures": len(self.failures),
                "verdict": "PASS" if self.ok else "FAIL",
                "first_failure": repr(self.failures[0]) if self.failures else None}


def random_profile(field, dim_v: int, n: int, rng) -> LocalProfile:
    return LocalProfile(dim_v, tuple(random_subspace(field, dim_v, rng) for _ in range(n)))


def random_alpha(rng) -> Fraction:
    return Fraction(int(rng.integers(0, 13)), int(rng.integers(1, 7)))


def _tiny_code(field, rng):
    """Random injective code with k in {2, 3}, s in {1, 2}, n in [2, 4] and s*n >= k + 1."""
    k, s = int(rng.integers(2, 4)), int(rng.integers(1, 3))
    n = int(rng.integers(max(2, -(-(k + 1) // s)), 5))
    return random_linear_code(field, k, s, n, int(rng.integers(2**31)))


def quotient_identity_suite(trials: int, seed: int, fields=(2, 3), max_dim: int = 4) -> SuiteResult:
    res = SuiteResult("quotient-potential identity")
    rng = np.random.default_rng(seed)
    for t in range(trials):
        field = field_create(fields[t % len(fields)])
        d = int(rng.integers(1, max_dim + 1))
        profile = random_profile(field, d, int(rng.integers(1, 5)), rng)
        U, W = random_subspace(field, d, rng), random_subspace(field, d, rng)
        try:
            quotient_potential_identity(U, W, profile, random_alpha(rng))
        except IdentityViolated as exc:
            res.failures.append((t, str(exc)))
        res.trials += 1
    return res


def quotient_identity_exhaustive(profile: LocalProfile, alpha) -> SuiteResult:
    """Every (U, W) pair on the profile's space."""
    res = SuiteResult("quotient-potential identity (exhaustive)")
    spaces = list(all_subspaces(profile.dim_v, profile.field))
    for U, W in itertools.product(spaces, spaces):
        try:
            quotient_potential_identity(U, W, profile, alpha)
        except IdentityViolated as exc:
            res.failures.append(str(exc))
        res.trials += 1
    return res


def strictification_suite(trials: int, seed: int) -> SuiteResult:
    """Violating profiles induced by random message subspaces, strictified with their witnesses."""
    res = SuiteResult("strictification")
    rng = np.random.default_rng(seed)
    attempts = 0
    while res.trials < trials and attempts < 20 * trials:
        attempts += 1
        q = (2, 3)[attempts % 2]
        field = field_create(q)
        code = _tiny_code(field, rng)
        k = code.k
        A = random_subspace(field, k, rng)
        if A.dim == 0:
            continue
        profile, witness = profile_from_witness(code, A)
        full = Subspace.full(field, A.dim)
        # Phi(V, profile, 0) = -(1/n) sum_i dim(A & ker Enc_i); any alpha below
        # that average (per dimension) makes the profile violating.
        ratio = -potential(full, profile, 0).phi_value / A.dim
        alpha = ratio - Fraction(1, 2 * code.n * A.dim + 1)
        if alpha < 0:
            continue
        res.trials += 1
        out, w_out, _ = strictify_with_witness(profile, alpha, witness, code)
        if strictness_counterexample(out, alpha) is not None or out.dim_v == 0:
            res.failures.append(("not strict", A))
        elif not check_witness(code, out, w_out):
            res.failures.append(("witness", A))
    return res


def mixing_suite(trials: int, seed: int, max_n: int = 64, max_d: int = 8) -> SuiteResult:
    res = SuiteResult("expander mixing")
    rng = np.random.default_rng(seed)
    for t in range(trials):
        kind = t % 3
        n = int(rng.integers(1, max_n + 1))
        if kind == 0:
            n = min(n, max_d)
            G = complete_bipartite(n)
        elif kind == 1:
            G = random_regular_bipartite(n, 1, int(rng.integers(2**31)))
        else:
            G = random_regular_bipartite(n, int(rng.integers(1, max_d + 1)), int(rng.integers(2**31)))
        cert = sigma2(G)
        x = rng.choice([-1.0, 1.0], size=n) if rng.random() < 0.5 else rng.uniform(-1, 1, size=n)
        try:
            mixing_check(G, cert, x)
        except ViolationFound as exc:
            res.failures.append((t, exc.report))
        res.trials += 1
    return res


def equivalence_suite(codes: int, seed: int, rs=(1, 2)) -> SuiteResult:
    res = SuiteResult("equivalence")
    rng = np.random.default_rng(seed)
    for c in range(codes):
        field = field_create((2, 3)[c % 2])
        code = _tiny_code(field, rng)
        for r in rs:
            rep = equivalence_check(code, r)
            res.trials += 1
            if not rep.ok:
                res.failures.append((c, r, rep.to_json()))
    return res
