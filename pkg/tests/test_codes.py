from fractions import Fraction

import numpy as np
import pytest

from code_forge import (AdditiveCode, FRSParams, code_new, encode, field_create, folded_rs, min_distance,
                        random_linear_code, rs_outer_additive)
from code_forge.codes import code_from_json, default_frs_params
from code_forge.errors import (BadEvaluationPoints, BudgetExceeded, FieldTooSmall, NotInjective, RetriesExhausted,
                               ShapeMismatch)
from conftest import TINY_ENCODERS
from oracles import SlowField, distance_oracle


def test_repetition_code(F2):
    code = code_new(F2, 1, 1, 5, [[[1]]] * 5)
    assert code.rate == Fraction(1, 5)
    assert encode(code, [1]).tolist() == [[1]] * 5
    assert min_distance(code).delta == 1


def test_zero_column_is_not_injective(F3):
    with pytest.raises(NotInjective):
        code_new(F3, 2, 1, 3, [[[1, 0]]] * 3)


def test_identity_split(F3):
    I = np.eye(6, dtype=np.int64)
    code = code_new(F3, 6, 2, 3, [I[0:2], I[2:4], I[4:6]])
    assert code.rate == 1
    assert min_distance(code).delta == Fraction(1, 3)


def test_shape_errors(F2):
    with pytest.raises(ShapeMismatch):
        code_new(F2, 2, 1, 2, [[[1, 0]]])
    with pytest.raises(ShapeMismatch):
        code_new(F2, 2, 1, 1, [[[1, 2]]])


def test_encode_is_linear(tiny_code, F2):
    assert not tiny_code.encode([0, 0, 0]).any()
    rng = np.random.default_rng(0)
    for _ in range(30):
        x, y = F2.random(rng, 3), F2.random(rng, 3)
        direct = np.array([[sum(int(E[t][j]) * int(v) for j, v in enumerate(F2.add(x, y))) % 2
                            for t in range(2)] for E in TINY_ENCODERS])
        assert np.array_equal(encode(tiny_code, F2.add(x, y)), direct)
        assert np.array_equal(encode(tiny_code, F2.add(x, y)), F2.add(encode(tiny_code, x), encode(tiny_code, y)))


def test_tiny_code_distance_matches_codeword_set_oracle(tiny_code, F2):
    cert = min_distance(tiny_code)
    assert cert.delta == distance_oracle(SlowField(2, 1, [0, 1]), TINY_ENCODERS, 3) == Fraction(3, 4)
    assert Fraction(cert.weight, tiny_code.n) == cert.delta
    assert np.array_equal(tiny_code.encode(cert.message), np.array(cert.codeword))


def test_distance_workers_agree(tiny_code):
    assert min_distance(tiny_code, workers=1) == min_distance(tiny_code, workers=3)


def test_distance_budget(F2):
    code = random_linear_code(F2, 10, 2, 8, 0)
    with pytest.raises(BudgetExceeded):
        min_distance(code, budget=100)


def test_reed_solomon_distance():
    F8 = field_create(2, 3)
    code = folded_rs(F8, 1, 7, 3)
    assert min_distance(code).delta == Fraction(5, 7)


def test_folded_rs_structure(F16):
    code = folded_rs(F16, 4, 3, 3)
    assert code.rate == Fraction(1, 4)
    params = default_frs_params(F16, 4, 3)
    pts = params.points(F16, 4)
    flat = [x for blk in pts for x in blk]
    assert len(set(flat)) == 12 and 0 not in flat
    for i, blk in enumerate(pts):
        for t, x in enumerate(blk):
            assert code.encoders[i][t].tolist() == [F16.pow(x, e) for e in range(3)]
    # k - 1 < s: a nonzero polynomial of degree < k cannot vanish on a whole block
    assert min_distance(code).delta == 1


def test_folded_rs_errors(F16):
    with pytest.raises(FieldTooSmall):
        folded_rs(F16, 4, 4, 3)
    g = F16.primitive
    with pytest.raises(BadEvaluationPoints):
        folded_rs(F16, 2, 3, 3, FRSParams(g, (1, g, g**2 % 16)))
    with pytest.raises(BadEvaluationPoints):
        folded_rs(F16, 2, 3, 3, FRSParams(g, (1, 0, 5)))
    with pytest.raises(BadEvaluationPoints):
        folded_rs(F16, 2, 3, 3, FRSParams(1, (1, 2, 3)))


def test_random_linear_code_determinism(F2):
    a = random_linear_code(F2, 3, 2, 4, 11)
    assert a == random_linear_code(F2, 3, 2, 4, 11)
    assert a != random_linear_code(F2, 3, 2, 4, 12)
    assert a.meta["seed"] == 11


def test_random_linear_code_inner_size(F2):
    code = random_linear_code(F2, 2, 16, 4, 0)
    assert code.rate == Fraction(1, 32)


def test_random_linear_code_gives_up(F2):
    with pytest.raises(RetriesExhausted):
        random_linear_code(F2, 3, 1, 2, 0)


def test_outer_code(F2):
    code = rs_outer_additive(F2, 2, 4, 2)
    assert (code.k, code.s, code.n) == (4, 2, 4)
    assert code.rate == Fraction(1, 2)
    assert min_distance(code).delta == Fraction(3, 4)
    rep = rs_outer_additive(F2, 2, 4, 1)
    assert min_distance(rep).delta == 1


@pytest.mark.parametrize("q,k_in,n,K", [(2, 2, 4, 2), (2, 3, 5, 3), (3, 2, 6, 2), (2, 2, 3, 3)])
def test_outer_code_is_mds(q, k_in, n, K):
    code = rs_outer_additive(field_create(q), k_in, n, K)
    assert code.rate == Fraction(K, n)
    assert min_distance(code).delta == 1 - Fraction(K - 1, n)


def test_outer_code_errors(F2):
    with pytest.raises(FieldTooSmall):
        rs_outer_additive(F2, 2, 5, 2)
    with pytest.raises(ValueError):
        rs_outer_additive(F2, 2, 4, 5)


def test_json_roundtrip(tiny_code, F16):
    for code in (tiny_code, folded_rs(F16, 4, 3, 3)):
        again = code_from_json(code.to_json())
        assert again == code and again.meta == code.meta
