from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cordcalc.augment import EXACT, solve_on_slice
from cordcalc.braid import BraidWord, from_letters, knot_braid, parse_braid
from cordcalc.groebner import MonomialOrder, buchberger
from cordcalc.hc0 import abelian_generators, delta_matrix, ideal_generators, lambda_matrix, matrix_A
from cordcalc.phi import FreeMatrix
from cordcalc.ring import LAM, MU, NCPoly, abelianize, aug_ring, cancel_inverses, evaluate


def const_matrix(rows, n):
    return FreeMatrix([[NCPoly.const(x, n) for x in r] for r in rows])


def test_matrix_A():
    assert matrix_A(1) == const_matrix([[1 - MU]], 1)
    a12 = NCPoly.generator(1, 2, 2)
    a21 = NCPoly.generator(2, 1, 2)
    assert matrix_A(2) == FreeMatrix([[NCPoly.const(1 - MU, 2), a12], [NCPoly.const(-MU, 2) * a21, NCPoly.const(1 - MU, 2)]])
    assert matrix_A(3)[2, 0] == NCPoly.const(-MU, 3) * NCPoly.generator(3, 1, 3)


def test_lambda_matrix():
    assert lambda_matrix(parse_braid("1 1 1")) == const_matrix([[LAM * MU**3, 0], [0, 1]], 2)
    assert lambda_matrix(BraidWord(1, ())) == const_matrix([[LAM]], 1)
    assert lambda_matrix(parse_braid("-1")) == const_matrix([[LAM * MU**-1, 0], [0, 1]], 2)


def test_delta_matrix():
    assert delta_matrix(parse_braid("1 1 1")) == const_matrix([[-1, 0], [0, 1]], 2)
    assert delta_matrix(parse_braid("1 -2 1 -2")) == const_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3)
    assert delta_matrix(parse_braid("s1^2 s2^-1 s1^2 s2^3")) == const_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3)


def test_unknot_generators():
    gens = ideal_generators(BraidWord(1, ())).generators
    one_minus_mu = 1 - MU
    assert gens == (NCPoly.const(one_minus_mu - LAM * one_minus_mu, 1), NCPoly.const(one_minus_mu - one_minus_mu * LAM**-1, 1))


def test_generator_counts():
    b = parse_braid("1 1 1")
    assert len(ideal_generators(b).generators) == 8
    assert len(ideal_generators(b, reduced=False).generators) == 12
    b3 = parse_braid("1 -2 1 -2")
    assert len(ideal_generators(b3).generators) == 18


def test_link_closure_warns():
    with pytest.warns(UserWarning):
        ideal_generators(BraidWord(2, ()))


def test_abelian_builder_matches_free_builder():
    b = parse_braid("1 -2 1 -2")
    ring = aug_ring(3)
    _, fast = abelian_generators(b, ring=ring)
    slow = [cancel_inverses(abelianize(p, ring)) for p in ideal_generators(b).generators]
    assert fast == slow


def _closed_ideal(b, reduced):
    ring, gens = abelian_generators(b, reduced=reduced)
    extra = [ring.var("lam") * ring.var("lam_inv") - 1, ring.var("mu") * ring.var("mu_inv") - 1]
    return buchberger([g for g in gens if g] + extra, MonomialOrder("grevlex")).generators


@given(st.lists(st.sampled_from([1, -1]), min_size=1, max_size=5).filter(lambda w: len(w) % 2 == 1))
def test_reduced_and_unreduced_ideals_agree(letters):
    b = from_letters(letters, 2)
    assert _closed_ideal(b, True) == _closed_ideal(b, False)


@pytest.mark.parametrize("name", ["trefoil", "figure8"])
def test_generators_vanish_at_verified_points(name):
    b = knot_braid(name)
    for A in solve_on_slice(b, Fraction(2)):
        if A.field != EXACT:
            continue
        pt = {"lam": A.lambda0, "mu": A.mu0}
        pt.update(A.avals)
        for p in ideal_generators(b).generators:
            assert evaluate(p, pt) == 0
