import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from code_forge import (Subspace, annihilator, enumerate_subspaces, field_create, joint_kernel, kernel,
                        quotient_map, rref, subspace_count, subspace_ops)
from code_forge.errors import AmbientMismatch, BudgetExceeded
from code_forge.linalg import (all_subspaces, gaussian_binomial, is_invertible, mat_inverse, matrix_from_json,
                               matrix_to_json, random_subspace, rank, solve, split_range)
from oracles import SlowField, gaussian_binomial_oracle, span


def as_set(S: Subspace):
    return frozenset(tuple(int(x) for x in v) for v in S.vectors())


def oracle_field(F):
    return SlowField(F.p, F.m, F.modulus)


def test_rref_basics(F2, F3):
    I = np.eye(3, dtype=np.int64)
    R, r, piv = rref(I, F3)
    assert np.array_equal(R, I) and r == 3 and piv == [0, 1, 2]
    R, r, piv = rref(np.zeros((2, 3), dtype=np.int64), F3)
    assert r == 0 and R.shape == (0, 3)
    R, r, _ = rref([[1, 1], [1, 1]], F2)
    assert R.tolist() == [[1, 1]] and r == 1


def test_rref_is_idempotent_and_canonical(F4):
    rng = np.random.default_rng(0)
    for _ in range(50):
        M = F4.random(rng, (3, 5))
        R = rref(M, F4)[0]
        assert np.array_equal(rref(R, F4)[0], R)
        for t, p in enumerate(rref(M, F4)[2]):
            assert R[t, p] == 1 and np.count_nonzero(R[:, p]) == 1


def test_kernel_examples(F2, F3):
    assert kernel(np.eye(3, dtype=np.int64), F3).dim == 0
    assert kernel(np.zeros((2, 4), dtype=np.int64), F3, 4) == Subspace.full(F3, 4)
    assert kernel([[1, 1]], F2).basis.tolist() == [[1, 1]]


def test_kernel_rank_nullity(F4):
    rng = np.random.default_rng(1)
    for _ in range(40):
        M = F4.random(rng, (int(rng.integers(1, 4)), 4))
        K = kernel(M, F4)
        assert K.dim == 4 - rank(M, F4)
        assert not np.any(F4.matmul(M, K.basis.T))


def test_subspace_ops_examples(F2):
    A = Subspace(F2, 2, [[1, 0]])
    B = Subspace(F2, 2, [[1, 1]])
    assert subspace_ops(A, A, "intersect") == A
    assert subspace_ops(A, Subspace.zero(F2, 2), "sum") == A
    assert subspace_ops(A, B, "intersect").dim == 0
    assert subspace_ops(A, [1, 0], "contains_vector")
    assert not subspace_ops(A, [0, 1], "contains_vector")
    assert subspace_ops(A, Subspace(F2, 2, [[1, 0], [0, 0]]), "equals")
    with pytest.raises(AmbientMismatch):
        A & Subspace.zero(F2, 3)


def test_modularity_exhaustive_f2_3(F2):
    spaces = list(all_subspaces(3, F2))
    for A, B in itertools.product(spaces, spaces):
        assert (A & B).dim + (A + B).dim == A.dim + B.dim


def test_intersection_and_sum_against_vector_sets(F2):
    """Exhaustive on F_2^4 against an independent vector-set oracle."""
    O = oracle_field(F2)
    spaces = list(all_subspaces(4, F2))
    sets = {S: as_set(S) for S in spaces}
    rng = np.random.default_rng(2)
    for i, j in rng.integers(0, len(spaces), size=(300, 2)):
        A, B = spaces[i], spaces[j]
        assert sets[A & B] == sets[A] & sets[B]
        gens = [tuple(int(x) for x in v) for v in np.concatenate([A.basis, B.basis])]
        assert sets[A + B] == span(O, gens, 4)


def test_annihilator_examples(F3):
    assert annihilator(Subspace.zero(F3, 3)) == Subspace.full(F3, 3)
    assert annihilator(Subspace.full(F3, 3)).dim == 0
    assert joint_kernel(Subspace.zero(F3, 3)) == Subspace.full(F3, 3)
    assert joint_kernel(Subspace.full(F3, 3)).dim == 0


def test_duality_exhaustive_f2_4(F2):
    for A in all_subspaces(4, F2):
        perp = annihilator(A)
        assert perp.dim == 4 - A.dim
        assert joint_kernel(perp) == A
        assert annihilator(joint_kernel(A)) == A
        for f in perp.basis:
            assert not np.any(F2.matmul(A.basis, f))


def test_duality_random_f9():
    F = field_create(3, 2)
    rng = np.random.default_rng(5)
    for _ in range(50):
        A = random_subspace(F, 4, rng)
        assert joint_kernel(annihilator(A)) == A


def test_quotient_map_examples(F2):
    M = quotient_map(3, Subspace.zero(F2, 3))
    assert is_invertible(M, F2)
    M = quotient_map(3, Subspace.full(F2, 3))
    assert M.shape == (0, 3)


def test_quotient_map_kernel_and_pushforward_exhaustive(F2):
    spaces = list(all_subspaces(4, F2))
    for W in spaces:
        M = quotient_map(4, W)
        assert M.shape == (4 - W.dim, 4)
        assert kernel(M, F2, 4) == W
        for U in spaces:
            assert U.image(M).dim == (U + W).dim - W.dim


@pytest.mark.parametrize("ambient,r,q,expected", [(3, 1, 2, 7), (4, 2, 2, 50), (5, 0, 3, 0)])
def test_counts(ambient, r, q, expected):
    F = field_create(q)
    assert subspace_count(ambient, r, q) == expected
    assert sum(1 for _ in enumerate_subspaces(ambient, r, F)) == expected


@pytest.mark.parametrize("ambient", range(1, 6))
@pytest.mark.parametrize("q", [2, 3, 4])
def test_gaussian_binomial_matches_oracle(ambient, q):
    for d in range(ambient + 1):
        assert gaussian_binomial(ambient, d, q) == gaussian_binomial_oracle(ambient, d, q)


def test_enumeration_matches_vector_set_oracle(F2):
    """Every subspace of F_2^4 exactly once: compare against spans of all vector tuples."""
    from oracles import all_subspace_sets
    listed = [as_set(S) for S in enumerate_subspaces(4, 4, F2)]
    assert len(listed) == len(set(listed))
    assert set(listed) == all_subspace_sets(oracle_field(F2), 4, 4)


def test_enumeration_order_and_slices(F3):
    full = list(enumerate_subspaces(3, 2, F3))
    dims = [S.dim for S in full]
    assert dims == sorted(dims)
    keys = [(S.dim, tuple(S.pivots)) for S in full]
    assert keys == sorted(keys)
    total = len(full)
    for parts in (1, 2, 3, 7):
        pieces = []
        for a, b in split_range(total, parts):
            pieces.extend(enumerate_subspaces(3, 2, F3, a, b))
        assert pieces == full
    assert list(enumerate_subspaces(3, 2, F3, 5, 9)) == full[5:9]


def test_budget_refusal_reports_exact_count(F2, monkeypatch):
    with pytest.raises(BudgetExceeded) as info:
        list(enumerate_subspaces(6, 3, F2, budget=100))
    assert info.value.count == subspace_count(6, 3, 2)
    monkeypatch.setenv("CODE_FORGE_BUDGET", "10")
    with pytest.raises(BudgetExceeded):
        list(enumerate_subspaces(4, 2, F2))


def test_inverse_and_solve(F4):
    rng = np.random.default_rng(7)
    for _ in range(30):
        M = F4.random(rng, (3, 3))
        if not is_invertible(M, F4):
            continue
        assert np.array_equal(F4.matmul(M, mat_inverse(M, F4)), np.eye(3, dtype=np.int64))
        b = F4.random(rng, 3)
        x = solve(M, b, F4)
        assert np.array_equal(F4.matmul(M, x[:, None])[:, 0], b)
    assert solve(np.zeros((2, 2), dtype=np.int64), np.array([1, 0]), F4) is None


def test_matrix_json_roundtrip(F3):
    M = np.arange(6).reshape(2, 3) % 3
    obj = matrix_to_json(M)
    assert obj == {"rows": 2, "cols": 3, "data": [0, 1, 2, 0, 1, 2]}
    assert np.array_equal(matrix_from_json(obj), M)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3, 4]))
def test_dimension_identity_random(seed, q):
    F = field_create(*{2: (2, 1), 3: (3, 1), 4: (2, 2)}[q])
    rng = np.random.default_rng(seed)
    A, B = random_subspace(F, 5, rng), random_subspace(F, 5, rng)
    assert (A & B).dim + (A + B).dim == A.dim + B.dim
    assert (A & B) <= A and A <= (A + B)
