import json
import warnings
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from cordcalc.augment import (
    EXACT,
    FLOAT,
    LAM_MU,
    AugAssignment,
    AugmentError,
    aug_poly,
    aug_system,
    augmentation_residual,
    check_augmentation,
    flype_rank3,
    full_rank_solvable,
    full_rank_system,
    matrix_rank,
    pk_poly,
    rank,
    same_up_to_unit,
    solve_on_slice,
    torus_aug_poly,
    writhe_lambda,
    _X0_candidates,
    _x0_candidates,
)
from cordcalc.braid import BraidWord, knot_braid, parse_braid, torus_braid, writhe
from cordcalc.groebner import buchberger, MonomialOrder
from cordcalc.phi import evaluate_phi
from cordcalc.ring import gen

F = Fraction
UNKNOT = BraidWord(1, ())
TREFOIL = parse_braid("1 1 1")


def exact(mu0, lam0, avals, n, symmetric=False):
    return AugAssignment(EXACT, F(mu0), F(lam0), avals, n, symmetric)


# ---- AugAssignment


def test_assignment_invariants():
    with pytest.raises(AugmentError):
        exact(1, 1, {}, 1)
    with pytest.raises(AugmentError):
        exact(0, 1, {}, 1)
    with pytest.raises(AugmentError):
        exact(2, 0, {}, 1)
    with pytest.raises(AugmentError):
        exact(2, 1, {(1, 2): 1, (2, 1): 2}, 2, symmetric=True)
    with pytest.raises(AugmentError):
        exact(2, 1, {(1, 2): 1}, 2)
    A = exact(2, 1, {(1, 2): 3}, 2, symmetric=True)
    assert A.avals[(2, 1)] == 3


def test_json_round_trip():
    A = exact(2, F(-1, 8), {(1, 2): 1, (2, 1): 1}, 2)
    data = json.loads(json.dumps(A.to_json()))
    assert data["avals"] == {"a12": "1", "a21": "1"} and data["lambda0"] == "-1/8"
    assert AugAssignment.from_json(data) == A
    Af = A.to_float()
    assert AugAssignment.from_json(json.loads(json.dumps(Af.to_json()))) == Af


# ---- systems


def test_aug_system_variables():
    assert aug_system(TREFOIL).ring.names == ("lam", "lam_inv", "mu", "mu_inv", "x12", "x21")
    assert aug_system(TREFOIL, True).ring.names == ("lam", "lam_inv", "mu", "mu_inv", "x12")


def test_aug_system_unknot():
    s = aug_system(UNKNOT)
    R = s.ring
    lam, lam_inv, mu, mu_inv = R.gens()
    expect = [(1 - mu) * (1 - lam), lam * lam_inv - 1, mu * mu_inv - 1]
    ours = buchberger(list(s.generators), MonomialOrder("grevlex")).generators
    assert ours == buchberger(expect, MonomialOrder("grevlex")).generators


def test_aug_system_has_no_negative_exponents():
    s = aug_system(parse_braid("-1 -1 -1"))
    assert all(min(e) >= 0 for g in s.generators for e in g.terms)


def test_aug_system_rejects_links():
    with pytest.raises(AugmentError):
        aug_system(BraidWord(2, ()))


# ---- checking and rank


def test_check_augmentation_unknot():
    assert check_augmentation(UNKNOT, exact(2, 1, {}, 1))
    assert not check_augmentation(UNKNOT, exact(2, 2, {}, 1))


def test_float_check_reports_residual():
    A = exact(2, F(-1, 8), {(1, 2): 1, (2, 1): 1}, 2).to_float()
    assert augmentation_residual(TREFOIL, A) < 1e-12
    assert check_augmentation(TREFOIL, A)


def test_rank_examples():
    assert rank(exact(2, 1, {}, 1)) == 1
    assert rank(exact(2, 1, {(1, 2): 0, (2, 1): 0}, 2)) == 2
    # det = (1 - mu0)^2 + mu0 a12 a21 vanishes at a21 = -(1 - mu0)^2 / mu0
    mu0 = F(2)
    A = exact(mu0, 1, {(1, 2): 1, (2, 1): -((1 - mu0) ** 2) / mu0}, 2)
    assert rank(A) == 1
    assert rank(exact(mu0, 1, {(1, 2): 1, (2, 1): (1 - mu0) ** 2 / mu0}, 2)) == 2


@given(st.lists(st.lists(st.integers(-2, 2), min_size=4, max_size=4), min_size=4, max_size=4), st.integers(0, 3))
def test_rank_matches_sympy(rows, kill):
    M = [[F(x) for x in r] for r in rows]
    for k in range(kill):
        M[k] = [a + b for a, b in zip(M[k - 1], M[k - 2])]
    expect = sympy.Matrix(M).rank()
    assert matrix_rank(M, True) == expect
    assert matrix_rank([[complex(x) for x in r] for r in M], False) == expect


# ---- full rank


def test_full_rank_system_sigma1():
    s = full_rank_system(BraidWord(2, (1,)), symmetric=False)
    assert [str(g) for g in s.generators] == ["-x21 + 1", "1", "1", "-1"]
    assert full_rank_solvable(BraidWord(2, (1,))).status == "unsolvable"


def test_full_rank_unknot_is_vacuous():
    assert all(g.is_zero() for g in full_rank_system(UNKNOT).generators)
    assert full_rank_solvable(UNKNOT).status == "solvable"


def test_full_rank_torus_3_4():
    b = torus_braid(3, 4)
    assert len(full_rank_system(b, False).generators) == 9
    assert len(full_rank_system(b, False).ring.names) == 6
    assert len(full_rank_system(b, True).ring.names) == 3
    assert full_rank_solvable(b).status == "solvable"


def test_full_rank_8_17():
    assert full_rank_solvable(knot_braid("8_17")).status == "unsolvable"


def test_full_rank_budget_is_inconclusive():
    assert full_rank_solvable(torus_braid(3, 4), budget=3).status == "inconclusive"


# ---- writhe and P_k


def test_writhe_lambda():
    assert writhe_lambda(F(2), 3) == F(-1, 8)
    assert writhe_lambda(F(7, 3), 0) == 1
    assert writhe_lambda(F(-1), 5) == 1


def _direct_pk(k):
    x = sympy.Symbol("x")
    P = [sympy.Integer(1), -x]
    for m in range(1, k):
        P.append(sympy.expand(P[m - 1] - x * P[m].subs(x, -x)))
    return sympy.Poly(P[k], x)


def test_pk_initial_values():
    assert pk_poly(0).coeffs == (1,)
    assert pk_poly(1).coeffs == (0, -1)
    assert pk_poly(2).coeffs == (1, 0, -1)
    assert pk_poly(3).coeffs == (0, -2, 0, 1)


@pytest.mark.parametrize("k", range(13))
def test_pk_against_direct_recurrence(k):
    P = pk_poly(k)
    assert list(P.coeffs) == [int(c) for c in reversed(_direct_pk(k).all_coeffs())]
    assert P.degree == k
    assert P.parity_ok()


# ---- augmentation polynomials


def test_torus_formula_matches_sympy_expansion():
    lam, mu = sympy.symbols("lam mu")
    for p, q in ((2, 3), (2, 5), (3, 4)):
        expr = (1 - mu) * (lam * mu ** ((p - 1) * q) + (-1) ** p)
        for n in range(1, p):
            expr *= lam**n * mu ** ((n - 1) * p * q) - 1
        ours = torus_aug_poly(p, q)
        sym = sum(sympy.Rational(c) * lam ** e[0] * mu ** e[1] for e, c in ours.terms.items())
        assert sympy.expand(sym - expr) == 0 or sympy.expand(sym + expr) == 0


def test_torus_formula_rejects_non_coprime():
    with pytest.raises(AugmentError):
        torus_aug_poly(2, 4)


def test_aug_poly_unknot():
    lam, mu = LAM_MU.gens()
    res = aug_poly(UNKNOT)
    assert res.principal
    assert same_up_to_unit(res.poly, (1 - mu) * (1 - lam))


@pytest.mark.parametrize("q", [3, 5])
def test_aug_poly_two_strand_torus(q):
    res = aug_poly(BraidWord(2, (1,) * q))
    assert res.principal
    assert same_up_to_unit(res.poly, torus_aug_poly(2, q))


def test_aug_poly_normalization():
    p = aug_poly(TREFOIL).poly
    assert min(e[0] for e in p.terms) == 0 and min(e[1] for e in p.terms) == 0
    lead = max(p.terms)
    assert p.terms[lead] > 0


# ---- slices


def test_slice_unknot():
    sols = solve_on_slice(UNKNOT, F(2))
    assert [A.lambda0 for A in sols] == [1]


def test_slice_trefoil():
    sols = solve_on_slice(TREFOIL, F(2))
    lams = {A.lambda0 for A in sols}
    assert F(1) in lams and F(-1, 8) in lams
    for A in sols:
        assert check_augmentation(TREFOIL, A)
        if rank(A) == 2:
            assert A.lambda0 == F(-1, 8)


def test_trefoil_rank_one_branch_needs_nonzero_a():
    # the lam = 1 branch does not contain the zero a-point
    assert not check_augmentation(TREFOIL, exact(2, 1, {(1, 2): 0, (2, 1): 0}, 2))


def test_slice_torus_3_4_rank_three():
    b = torus_braid(3, 4)
    full = [A for A in solve_on_slice(b, F(2), symmetric=True, branches=("full_rank",)) if rank(A) == 3]
    assert full
    for A in full:
        assert A.lambda0 * A.mu0**8 == 1


@pytest.mark.parametrize("name,mu0", [("trefoil", 2), ("trefoil", F(-1, 3)), ("figure8", 3), ("T(3,4)", F(3, 2))])
def test_writhe_constraint_on_full_rank_points(name, mu0):
    b = knot_braid(name)
    for A in solve_on_slice(b, F(mu0), symmetric=True):
        if rank(A) == b.strands:
            value = A.lambda0 * (-A.mu0) ** writhe(b)
            assert value == 1 if A.field == EXACT else abs(value - 1) < 1e-9


@pytest.mark.parametrize("name", ["trefoil", "T(3,4)", "5_1"])
def test_symmetric_full_rank_points_also_fix_phi_R(name):
    b = knot_braid(name)
    n = b.strands
    for A in solve_on_slice(b, F(2), symmetric=True, branches=("full_rank",)):
        if rank(A) != n:
            continue
        vals = {gen(i, j): A.avals[(i, j)] for (i, j) in A.avals}
        L, R = evaluate_phi(b, vals)
        delta = [[((-1) ** writhe(b) if i == 0 else 1) if i == j else 0 for j in range(n)] for i in range(n)]
        assert np.allclose(np.array(R, dtype=complex), np.array(delta, dtype=complex))
        assert np.allclose(np.array(L, dtype=complex), np.array(delta, dtype=complex))


# ---- rank extension


def test_x0_for_u_2_is_zero():
    assert abs(_x0_candidates(2, 3, 1, 2)[0]) < 1e-12


def test_X0_for_v_3_solves_both_conditions():
    good, _ = _X0_candidates(3)
    assert good
    for X in good:
        assert abs(pk_poly(1)(X)) < 1e-12
        assert abs(pk_poly(2)(X) - 1) < 1e-12


@pytest.mark.parametrize("v", [3, 4, 5, -3, -4, -5])
def test_X0_candidates_satisfy_conditions(v):
    good, _ = _X0_candidates(v)
    target = (-1) ** (v - 1)
    for X in good:
        if v >= 3:
            assert abs(pk_poly(v - 2)(X)) < 1e-8 and abs(pk_poly(v - 1)(X) - target) < 1e-8
        else:
            assert abs(pk_poly(-v)(X)) < 1e-8 and abs(pk_poly(-v + 1)(-X) - target) < 1e-8


@pytest.mark.parametrize("w,delta,u,v", [(2, -1, 2, 3), (2, -1, 3, 3), (3, 1, 2, 3)])
def test_flype_family(w, delta, u, v):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = flype_rank3(w, delta, u, v)
    A = res.assignment
    assert A.field == FLOAT
    assert res.residual < 1e-9
    assert augmentation_residual(res.braid, A) < 1e-9
    assert rank(A) == 3
    assert abs(A.lambda0 * (-A.mu0) ** writhe(res.braid) - 1) < 1e-9
