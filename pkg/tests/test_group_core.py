import pickle
import random

import pytest
from hypothesis import given, settings, strategies as st

from liesubshift.group_core import (
    GENERATORS,
    IDENTITY,
    IntElement,
    XorElement,
    grig_from_word,
    grig_inv,
    grig_is_identity,
    grig_leaf,
    grig_mul,
    grig_node,
    grig_parse,
    xor_mul,
)

from oracles import level_permutation, tree_act_word

words = st.text(alphabet="abcd", max_size=16)


def same_action(w1: str, w2: str, level: int = 8) -> bool:
    return level_permutation(w1, level) == level_permutation(w2, level)


def test_empty_word_is_identity():
    assert grig_from_word("") is IDENTITY


def test_bc_is_d():
    assert grig_from_word("bc") is grig_leaf("d")
    assert same_action("bc", "d")


def test_a_squared():
    assert grig_from_word("aa") is IDENTITY
    assert grig_mul(grig_leaf("a"), grig_leaf("a")) is IDENTITY


@pytest.mark.parametrize("g", GENERATORS)
def test_generators_are_involutions(g):
    x = grig_leaf(g)
    assert grig_inv(x) is x
    assert grig_mul(x, x) is IDENTITY


def test_klein_four_group():
    table = {"bc": "d", "cb": "d", "bd": "c", "db": "c", "cd": "b", "dc": "b"}
    for w, r in table.items():
        assert grig_from_word(w) is grig_leaf(r)
        assert same_action(w, r)


def test_ad_has_order_four():
    ad = grig_from_word("ad")
    ad2 = grig_mul(ad, ad)
    assert not grig_is_identity(ad2)
    assert grig_is_identity(grig_mul(ad2, ad2))
    assert level_permutation("adad", 8) != level_permutation("", 8)
    assert level_permutation("adadadad", 8) == level_permutation("", 8)


def test_known_portraits():
    assert grig_from_word("ab").key() == "(s c a)"
    assert grig_from_word("ba").key() == "(s a c)"
    assert grig_from_word("ada").key() == "(e b 1)"
    assert grig_from_word("dad").key() == "(s b b)"
    assert grig_from_word("adad").key() == "(e b b)"


def test_node_contracts_to_nucleus():
    a, c = grig_leaf("a"), grig_leaf("c")
    assert grig_node(False, a, c) is grig_leaf("b")
    assert grig_node(True, IDENTITY, IDENTITY) is grig_leaf("a")


def test_parse_roundtrip_and_rejects_uncontracted():
    g = grig_from_word("abacabadab")
    assert grig_parse(g.key()) is g
    with pytest.raises(ValueError):
        grig_parse("(e a c)")  # that is b
    with pytest.raises(ValueError):
        grig_parse("(x 1 1)")
    with pytest.raises(ValueError):
        grig_parse("(s 1 1")


def test_pickle_preserves_identity():
    g = grig_from_word("adcab")
    assert pickle.loads(pickle.dumps(g)) is g


@settings(max_examples=150)
@given(words)
def test_portrait_action_matches_tree_oracle(w):
    g = grig_from_word(w)
    for x in ("00000000", "10110010", "11111111", "01010101"):
        assert g.act(x) == tree_act_word(w, x)


@settings(max_examples=150)
@given(words, words)
def test_equality_is_action_equality(w1, w2):
    assert (grig_from_word(w1) is grig_from_word(w2)) == same_action(w1, w2, 9)


@settings(max_examples=100)
@given(words, words, words)
def test_associativity(u, v, w):
    g, h, k = grig_from_word(u), grig_from_word(v), grig_from_word(w)
    assert grig_mul(grig_mul(g, h), k) is grig_mul(g, grig_mul(h, k))


@given(words)
def test_word_times_inverse(w):
    g = grig_from_word(w)
    assert grig_is_identity(grig_mul(g, grig_inv(g)))
    assert grig_is_identity(grig_from_word(w + w[::-1]))
    assert grig_mul(g, IDENTITY) is g


def test_long_words_contract():
    rng = random.Random(7)
    for _ in range(5):
        w = "".join(rng.choice("abcd") for _ in range(1024))
        g = grig_from_word(w)
        assert g.depth <= 12
        assert g.act("0110100110010110") == tree_act_word(w, "0110100110010110")


def test_xor_group():
    assert xor_mul(XorElement.from_set({0, 2}), XorElement.from_set({2, 3})).to_set() == {0, 3}
    assert xor_mul(XorElement.from_set({0}), XorElement()).to_set() == {0}


@given(st.integers(min_value=0, max_value=1 << 40))
def test_xor_involution(bits):
    x = XorElement(bits)
    assert (x * x).is_identity()


def test_int_group():
    assert (IntElement(3) * IntElement(-5)).value == -2
    assert IntElement(4).inverse().value == -4
