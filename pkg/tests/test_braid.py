import pytest
from hypothesis import given

from cordcalc.braid import (
    BraidError,
    BraidWord,
    band_generator,
    closure_permutation,
    concat,
    free_reduce,
    from_letters,
    include,
    inverse,
    is_knot,
    knot_braid,
    load_knot_table,
    mirror,
    parse_braid,
    torus_braid,
    writhe,
)

from conftest import braid_pairs, braids


def test_parse_plain_and_power_tokens_agree():
    assert parse_braid("1 1 1") == parse_braid("s1^3") == BraidWord(2, (1, 1, 1))


def test_parse_infers_strands():
    b = parse_braid("s1^2 s2^-1 s1^2 s2^3")
    assert b.strands == 3 and len(b) == 8
    assert b.letters == (1, 1, -2, 1, 1, 2, 2, 2)


@pytest.mark.parametrize("text", ["0", "s0", "1 x 2", "s1^"])
def test_parse_rejects_bad_tokens(text):
    with pytest.raises(BraidError):
        parse_braid(text)


def test_parse_rejects_index_out_of_range():
    with pytest.raises(BraidError):
        parse_braid("1 3", strands=3)


def test_writhe_examples():
    assert writhe(parse_braid("1 1 1")) == 3
    assert writhe(BraidWord(2, ())) == 0
    assert writhe(parse_braid("s1^2 s2^-1 s1^2 s2^3")) == 6


def test_band_generators():
    assert band_generator(1, 2, 2) == BraidWord(2, (1,))
    assert band_generator(1, 3, 3) == BraidWord(3, (1, 2, -1))
    assert band_generator(2, 4, 4) == BraidWord(4, (2, 3, -2))
    with pytest.raises(BraidError):
        band_generator(2, 2, 3)
    with pytest.raises(BraidError):
        band_generator(1, 4, 3)


def test_include_and_mirror():
    assert include(BraidWord(2, (1,)), 1) == BraidWord(3, (1,))
    w = parse_braid("1 -2 1")
    assert include(w, 0) == w
    assert include(BraidWord(1, ()), 2) == BraidWord(3, ())
    assert mirror(parse_braid("1 1 1")).letters == (-1, -1, -1)
    assert mirror(parse_braid("1 -2")).letters == (-1, 2)
    assert mirror(BraidWord(2, ())) == BraidWord(2, ())


def test_concat_inverse_examples():
    s1 = BraidWord(2, (1,))
    assert len(concat(s1, inverse(s1))) == 2
    assert inverse(parse_braid("1 2")).letters == (-2, -1)
    assert inverse(BraidWord(3, ())) == BraidWord(3, ())
    with pytest.raises(BraidError):
        concat(BraidWord(2, (1,)), BraidWord(3, (1,)))


def test_closure_permutation_examples():
    perm, cycles = closure_permutation(parse_braid("1 1 1"))
    assert perm == (2, 1) and cycles == 1
    assert closure_permutation(BraidWord(2, ())) == ((1, 2), 2)
    # this word closes to a three-component link: s1^2 and the net s2^2 are pure
    assert closure_permutation(parse_braid("s1^2 s2^-1 s1^2 s2^3"))[1] == 3


def test_torus_braid_and_table():
    assert torus_braid(3, 4) == from_letters([1, 2] * 4, 3)
    assert knot_braid("T(3,4)") == torus_braid(3, 4)
    table = load_knot_table()
    for name in ("trefoil", "8_16", "8_17", "10_91", "10_94"):
        b, source = table[name]
        assert is_knot(b), name
        assert source
    with pytest.raises(BraidError):
        knot_braid("no_such_knot")


@given(braid_pairs(4, 5))
def test_writhe_is_additive(pair):
    a, b = pair
    assert writhe(concat(a, b)) == writhe(a) + writhe(b)
    assert writhe(inverse(b)) == -writhe(b)


@given(braids(4, 8))
def test_writhe_parity_matches_length(b):
    assert writhe(b) % 2 == len(b) % 2


@given(braids(4, 6))
def test_word_times_inverse_reduces_to_empty(b):
    assert free_reduce(concat(b, inverse(b))).letters == ()


@given(braids(5, 0))
def test_adjacent_band_generator(b):
    n = b.strands
    for i in range(1, n):
        g = band_generator(i, i + 1, n)
        assert g.letters == (i,)
    for i in range(1, n):
        for j in range(i + 1, n + 1):
            assert writhe(band_generator(i, j, n)) == 1


@given(braid_pairs(4, 5))
def test_permutation_composes(pair):
    a, b = pair
    pa, pb = closure_permutation(a)[0], closure_permutation(b)[0]
    pab = closure_permutation(concat(a, b))[0]
    # strand at i goes to pa[i] after a, then through b
    assert pab == tuple(pb[pa[i] - 1] for i in range(a.strands))
