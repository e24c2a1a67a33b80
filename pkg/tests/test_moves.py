import json

import pytest
from hypothesis import given, settings, strategies as st

from fibergraphs.akfamily import build_Ak
from fibergraphs.errors import DimensionMismatch, MoveNotInKernel, NegativeInput, SizeBudgetExceeded
from fibergraphs.lattice import IntMatrix
from fibergraphs.moves import (
    MoveSet, chi, conformal_leq, cross_box_moves, graver_Ak, graver_oracle, groebner_lex_Ak,
    is_markov_basis, load_moves_file, signed_count,
)

A112 = IntMatrix.from_rows([[1, 1, 2]])


def test_moveset_normalizes_and_dedupes():
    ms = MoveSet.from_vectors(A112, [(1, -1, 0), (-1, 1, 0), (0, -2, 1)])
    assert ms.tuples() == [(1, -1, 0), (0, 2, -1)]
    assert signed_count(ms) == 4
    assert (-1, 1, 0) in ms.signed_set()


def test_moveset_rejects_non_kernel_and_zero():
    with pytest.raises(MoveNotInKernel):
        MoveSet.from_vectors(A112, [(1, 0, 0)])
    with pytest.raises(MoveNotInKernel):
        MoveSet.from_vectors(A112, [(0, 0, 0)])
    with pytest.raises(DimensionMismatch):
        MoveSet.from_vectors(A112, [(1, -1)])


def test_moveset_vectors_read_only():
    ms = MoveSet.from_vectors(A112, [(1, -1, 0)])
    with pytest.raises(ValueError):
        ms.vectors[0, 0] = 5


def test_json_and_csv_round_trip(tmp_path):
    ms = MoveSet.from_vectors(A112, [(1, -1, 0), (0, 2, -1)], "custom")
    p = tmp_path / "m.json"
    p.write_text(json.dumps(ms.to_json()))
    assert load_moves_file(A112, p).same_moves(ms)
    q = tmp_path / "m.csv"
    ms.write_csv(q)
    assert load_moves_file(A112, q).tuples() == ms.tuples()


def test_conformal_order():
    assert conformal_leq((1, 0, -1), (2, 1, -1))
    assert not conformal_leq((1, 0, -1), (2, 1, 1))
    assert not conformal_leq((3, 0), (2, 0))
    with pytest.raises(DimensionMismatch):
        conformal_leq((1,), (1, 2))


def test_chi():
    assert chi((0, 3, 1)) == (0, 1, 1)
    with pytest.raises(NegativeInput):
        chi((1, -1))


def test_graver_oracle_112():
    res = graver_oracle(A112, 3)
    assert res.complete
    assert set(res.moveset.tuples()) == {(1, -1, 0), (2, 0, -1), (1, 1, -1), (0, 2, -1)}


@pytest.mark.parametrize("k", [1, 2])
def test_graver_Ak_matches_oracle(k):
    res = graver_oracle(build_Ak(k).matrix, 2)
    assert res.complete
    assert res.moveset.same_moves(graver_Ak(k))
    assert signed_count(graver_Ak(k)) == 2 ** (2 * k + 1) + 4 * k


def test_graver_Ak_budget():
    with pytest.raises(SizeBudgetExceeded):
        graver_Ak(3, max_signed=100)


def test_groebner_lex_Ak():
    ms = groebner_lex_Ak(2)
    assert len(ms) == 5
    assert ms.tuples()[0] == (0, 0, 1, 1, 0, 0, -1, -1, 1, -1)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_lex_basis_inside_graver(k):
    assert set(groebner_lex_Ak(k).tuples()) <= set(graver_Ak(k).tuples())


def test_cross_box_moves_count():
    assert len(cross_box_moves(3)) == 4**3


@pytest.mark.parametrize("k", [1, 2])
def test_graver_elements_pairwise_incomparable(k):
    G = graver_Ak(k).signed()
    for i, u in enumerate(G):
        for j, v in enumerate(G):
            if i != j:
                assert not conformal_leq(u, v)


def test_markov_check(fig1_movesets):
    A = A112
    assert is_markov_basis(A, fig1_movesets["lex"], [(b,) for b in range(7)])
    only_one = MoveSet.from_vectors(A, [(1, -1, 0)])
    assert not is_markov_basis(A, only_one, [(b,) for b in range(4)])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3),
       st.lists(st.integers(-3, 3), min_size=3, max_size=3),
       st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_conformal_order_is_partial_order(u, v, w):
    assert conformal_leq(u, u)
    if conformal_leq(u, v) and conformal_leq(v, u):
        assert u == v
    if conformal_leq(u, v) and conformal_leq(v, w):
        assert conformal_leq(u, w)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_kernel_elements_dominated_by_graver(v):
    # every kernel vector is a conformal sum of Graver elements, so some element lies below it
    A = A112
    if A.dot(v) != (0,) or not any(v):
        return
    G = graver_oracle(A, 3).moveset.signed()
    assert any(conformal_leq(g, v) for g in G)


def test_chi_trivial_cases():
    assert chi((0, 0, 0)) == (0, 0, 0) and chi((1, 1)) == (1, 1)


def test_oracle_on_trivial_kernel():
    res = graver_oracle(IntMatrix.identity(2), 2)
    assert len(res.moveset) == 0 and res.complete


@pytest.mark.parametrize("k", [1, 2])
def test_lex_moves_are_minimal(k):
    oracle = set(graver_oracle(build_Ak(k).matrix, 2).moveset.tuples())
    assert set(groebner_lex_Ak(k).tuples()) <= oracle


def test_markov_examples():
    graver = graver_oracle(A112, 3).moveset
    assert is_markov_basis(A112, graver, [(1,), (2,), (3,), (4,)])
    assert not is_markov_basis(A112, MoveSet.from_vectors(A112, [(1, -1, 0)]), [(3,)])
    assert is_markov_basis(A112, graver, [])
