import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cordcalc.augment import EXACT, check_augmentation, rank, solve_on_slice
from cordcalc.braid import BraidWord, knot_braid, parse_braid
from cordcalc.cordgroup import (
    CordGroupError,
    EMatrix,
    WirtingerPresentation,
    bracket_expand,
    connect_sum_E,
    e_from_assignment,
    merge_presentations,
    verify_E,
    wirtinger_from_braid,
)

F = Fraction
TREFOIL = parse_braid("1 1 1")


def trefoil_rank2(mu0=F(2)):
    sols = [A for A in solve_on_slice(TREFOIL, mu0) if rank(A) == 2 and A.field == EXACT]
    assert sols
    return sols[0]


def test_trefoil_presentation():
    P = wirtinger_from_braid(TREFOIL)
    assert P.r == 3 and len(P.relators) == 3
    for l, e, m, k in P.relators:
        assert e in (1, -1) and {l, m, k} <= {1, 2, 3}


def test_unknot_presentation():
    P = wirtinger_from_braid(BraidWord(1, ()))
    assert P.r == 1 and P.relators == ()


def test_presentation_rejects_links():
    with pytest.raises(CordGroupError):
        wirtinger_from_braid(parse_braid("s1^2 s2^-1 s1^2 s2^3"))


@pytest.mark.parametrize("name", ["trefoil", "figure8", "5_2", "T(3,4)", "8_17"])
def test_generators_form_one_conjugacy_class(name):
    P = wirtinger_from_braid(knot_braid(name))
    parent = list(range(P.r + 1))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for _, _, m, k in P.relators:
        parent[find(m)] = find(k)
    assert len({find(g) for g in range(1, P.r + 1)}) == 1


def test_presentation_json_round_trip():
    P = wirtinger_from_braid(TREFOIL)
    Q = WirtingerPresentation.from_json(P.to_json())
    assert Q.relators == P.relators and Q.r == P.r


def test_bracket_examples():
    mu0 = F(3)
    E = EMatrix(((1 - mu0, F(2)), (F(5), 1 - mu0)))
    assert bracket_expand(1, (), 1, E) == 1 - mu0
    assert bracket_expand(1, ((1, 1),), 1, E) == mu0 * (1 - mu0)
    for i in (1, 2):
        for j in (1, 2):
            for k in (1, 2):
                assert bracket_expand(i, ((k, 1), (k, -1)), j, E) == E[i, j]
                assert bracket_expand(i, ((k, -1), (k, 1)), j, E) == E[i, j]
    with pytest.raises(CordGroupError):
        bracket_expand(3, (), 1, E)
    with pytest.raises(CordGroupError):
        bracket_expand(1, ((4, 1),), 1, E)


@given(
    st.fractions(min_value=-4, max_value=4, max_denominator=3).filter(lambda x: x not in (0, 1)),
    st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=3), min_size=6, max_size=6),
    st.lists(st.tuples(st.integers(1, 3), st.sampled_from([1, -1])), max_size=5),
    st.integers(1, 3),
)
def test_prepending_basepoint_meridian_scales_by_mu(mu0, off, word, j):
    it = iter(off)
    E = EMatrix(tuple(tuple(1 - mu0 if r == c else next(it) for c in range(3)) for r in range(3)))
    assert bracket_expand(1, ((1, 1),) + tuple(word), j, E) == mu0 * bracket_expand(1, tuple(word), j, E)


def test_verify_unknot():
    P = wirtinger_from_braid(BraidWord(1, ()))
    for mu0 in (F(2), F(-1, 3), F(7)):
        assert verify_E(P, EMatrix(((1 - mu0,),)))
    assert not verify_E(P, EMatrix(((F(0),),)))


def test_verify_trefoil_and_perturbation():
    A = trefoil_rank2()
    P = wirtinger_from_braid(TREFOIL)
    E = e_from_assignment(A, TREFOIL, P)
    assert verify_E(P, E)
    assert E.rank() == rank(A) == 2
    rng = random.Random(0)
    for _ in range(5):
        rows = [list(r) for r in E.rows]
        i, j = rng.choice([(i, j) for i in range(E.r) for j in range(E.r) if i != j])
        rows[i][j] += rng.choice([1, -1, F(1, 2)])
        assert not verify_E(P, EMatrix(tuple(map(tuple, rows))))


def test_verify_size_mismatch():
    with pytest.raises(CordGroupError):
        verify_E(wirtinger_from_braid(TREFOIL), EMatrix(((F(-1),),)))


def test_e_from_assignment_diagonal():
    A = trefoil_rank2(F(5))
    E = e_from_assignment(A, TREFOIL)
    assert all(E[k, k] == 1 - A.mu0 for k in range(1, E.r + 1))
    assert E.mu0 == A.mu0


def test_e_matrix_json_round_trip():
    E = e_from_assignment(trefoil_rank2(), TREFOIL)
    assert EMatrix.from_json(E.to_json()) == E


def test_connect_sum_unknots():
    mu0 = F(2)
    E = EMatrix(((1 - mu0,),))
    assert connect_sum_E(E, E) == E


def test_connect_sum_blocks_and_rank():
    A = trefoil_rank2()
    P = wirtinger_from_braid(TREFOIL)
    E1 = e_from_assignment(A, TREFOIL, P)
    E2 = E1
    S = connect_sum_E(E1, E2)
    r1 = E1.r
    assert S.r == 5
    d = 1 - A.mu0
    for i in range(1, r1 + 1):
        for j in range(1, r1 + 1):
            assert S[i, j] == E1[i, j]
    for i in range(2, E2.r + 1):
        for j in range(2, E2.r + 1):
            assert S[r1 + i - 1, r1 + j - 1] == E2[i, j]
    for i in range(1, r1 + 1):
        for j in range(2, E2.r + 1):
            assert S[i, r1 + j - 1] == E1[i, 1] * E2[1, j] / d
    assert S.rank() == 3
    assert verify_E(merge_presentations(P, P), S)


def test_connect_sum_mu_mismatch():
    with pytest.raises(CordGroupError):
        connect_sum_E(EMatrix(((F(-1),),)), EMatrix(((F(-2),),)))


@pytest.mark.parametrize("name,mu0", [("trefoil", F(2)), ("trefoil", F(-2, 3)), ("figure8", F(3)), ("5_1", F(2)), ("T(3,4)", F(2))])
def test_cross_formulation(name, mu0):
    b = knot_braid(name)
    P = wirtinger_from_braid(b)
    sols = solve_on_slice(b, mu0)
    assert sols
    for A in sols:
        assert check_augmentation(b, A)
        E = e_from_assignment(A, b, P)
        assert verify_E(P, E)
        assert E.rank() == rank(A)
