import random

import pytest
from hypothesis import given, settings, strategies as st

from liesubshift.field_core import FieldError, Scalar
from liesubshift.group_core import IDENTITY, IntElement, grig_from_word
from liesubshift.group_ring import (
    CacheError,
    GroupRingElem,
    coefficient_at,
    element_powers,
    gr_add,
    gr_mul,
    gr_scale,
    grig_powers,
    grig_ring_element,
    power_collision,
    power_collision_from_powers,
    read_power_cache,
    support_growth,
    write_power_cache,
)
from liesubshift.schreier_lab import T_GENERATORS, build_graph, element_of_path, geodesic_count, segment_decomposition

from oracles import ring_power_supports

G = grig_from_word
P_WORDS = ["ada", "dad", "c"]


def elem(terms, q):
    return GroupRingElem({G(w): c for w, c in terms.items()}, q)


def test_add_zero_and_char_two():
    u = elem({"a": 1, "ab": 1}, 2)
    assert gr_add(u, GroupRingElem.zero(2)) == u
    assert len(gr_add(u, u)) == 0


def test_scale_mod_3():
    u = elem({"a": 1, "b": 1}, 3)
    assert gr_scale(Scalar(2, 3), u) == elem({"a": 2, "b": 2}, 3)
    assert len(gr_scale(0, u)) == 0


def test_square_of_a_plus_b():
    u2 = elem({"a": 1, "b": 1}, 2)
    assert gr_mul(u2, u2) == elem({"ab": 1, "ba": 1}, 2)
    u3 = elem({"a": 1, "b": 1}, 3)
    assert gr_mul(u3, u3) == elem({"": 2, "ab": 1, "ba": 1}, 3)


def test_modulus_mismatch():
    with pytest.raises(FieldError):
        gr_mul(elem({"a": 1}, 2), elem({"a": 1}, 3))


def test_support_growth_small():
    p = grig_ring_element(P_WORDS, 2)
    sizes = support_growth(p, 12)
    assert sizes == [1, 3, 7, 15, 25, 41, 59, 89, 135, 175, 281, 383, 539]


def test_support_growth_matches_permutation_oracle():
    assert support_growth(grig_ring_element(P_WORDS, 2), 6) == ring_power_supports(P_WORDS, 6, 10)
    assert support_growth(grig_ring_element(["a", "b", "c"], 2), 8) == ring_power_supports(["a", "b", "c"], 8, 10)


def test_support_growth_a_plus_b_plus_c():
    p = grig_ring_element(["a", "b", "c"], 2)
    expected = [1, 3, 5, 7, 9, 19, 29, 31, 31, 65, 99, 133, 163, 333, 495, 509, 441, 891, 1341, 1679, 2017]
    assert support_growth(p, 20) == expected


def test_coefficients():
    p = grig_ring_element(P_WORDS, 2)
    one = GroupRingElem.one(IDENTITY, 2)
    assert int(coefficient_at(one, IDENTITY)) == 1
    assert int(coefficient_at(p, G("ab"))) == 0
    assert int(coefficient_at(p, G("c"))) == 1


def test_power_collision_simple_cases():
    assert power_collision(GroupRingElem.one(IDENTITY, 2), 3) == (0, 1)
    assert power_collision(elem({"a": 1}, 2), 5) == (0, 2)
    assert power_collision(grig_ring_element(P_WORDS, 2), 12) is None
    with pytest.raises(ValueError):
        power_collision(elem({"a": 1}, 2), 0)


def test_collision_from_powers_agrees():
    p = elem({"ad": 1}, 2)
    assert power_collision(p, 8) == power_collision_from_powers(element_powers(p, 8)) == (0, 4)


def test_geodesic_coefficient_duality():
    g = build_graph(200)
    rep = geodesic_count(g, T_GENERATORS)
    segs, _ = segment_decomposition(g)
    ends = [s.rightmost for s in segs[:6]]
    ns = [rep.distance[v] for v in ends]
    powers = grig_powers(P_WORDS, 2, max(ns))
    for v, n in zip(ends, ns):
        gv = element_of_path(rep.geodesic(v))
        assert rep.count[v] == 1
        assert int(coefficient_at(powers[n], gv)) == rep.count[v] % 2 == 1


short = st.text(alphabet="abcd", max_size=4)
small_elems = st.dictionaries(short, st.integers(1, 2), min_size=0, max_size=3)


@settings(max_examples=60)
@given(small_elems, small_elems, small_elems)
def test_ring_axioms(a, b, c):
    x, y, z = (GroupRingElem({G(w): k for w, k in d.items()}, 3) for d in (a, b, c))
    assert gr_mul(gr_mul(x, y), z) == gr_mul(x, gr_mul(y, z))
    assert gr_mul(x, gr_add(y, z)) == gr_add(gr_mul(x, y), gr_mul(x, z))
    assert gr_mul(gr_add(x, y), z) == gr_add(gr_mul(x, z), gr_mul(y, z))


def test_integer_group_is_polynomial_convolution():
    rng = random.Random(3)
    for _ in range(1000):
        a = {rng.randrange(-4, 5): rng.randrange(1, 5) for _ in range(rng.randrange(1, 4))}
        b = {rng.randrange(-4, 5): rng.randrange(1, 5) for _ in range(rng.randrange(1, 4))}
        conv: dict[int, int] = {}
        for i, x in a.items():
            for j, y in b.items():
                conv[i + j] = (conv.get(i + j, 0) + x * y) % 5
        got = gr_mul(GroupRingElem({IntElement(k): v for k, v in a.items()}, 5),
                     GroupRingElem({IntElement(k): v for k, v in b.items()}, 5))
        assert got == GroupRingElem({IntElement(k): v for k, v in conv.items()}, 5)


# ------------------------------------------------------------------ cache

def test_cache_roundtrip(tmp_path):
    path = tmp_path / "powers.txt"
    first = grig_powers(P_WORDS, 2, 6, path)
    text = path.read_text()
    assert text.startswith("# grigring v1 q=2 p=ada,dad,c\n## pow 0\n1\t1\n")
    assert read_power_cache(path, 2, "ada,dad,c") == first
    again = grig_powers(P_WORDS, 2, 9, path)
    assert again[:7] == first
    assert [len(p) for p in again] == [1, 3, 7, 15, 25, 41, 59, 89, 135, 175]
    assert len(read_power_cache(path, 2, "ada,dad,c")) == 10


def test_cache_via_element(tmp_path):
    path = tmp_path / "e.txt"
    p = elem({"ab": 1, "d": 1}, 3)
    assert support_growth(p, 5, path) == support_growth(p, 5)
    assert support_growth(p, 5, path) == support_growth(p, 5)


@pytest.mark.parametrize("damage", [
    lambda t: t.replace("v1", "v2"),
    lambda t: t.replace("## pow 2", "## pow 3"),
    lambda t: t.replace("\t1\n", "\t7\n", 1),
    lambda t: t + "(s 1 q)\t1\n",
    lambda t: t + "garbage\n",
])
def test_corrupt_cache_rejected(tmp_path, damage):
    path = tmp_path / "powers.txt"
    grig_powers(P_WORDS, 2, 4, path)
    path.write_text(damage(path.read_text()))
    with pytest.raises(CacheError):
        grig_powers(P_WORDS, 2, 5, path)


def test_cache_for_other_definition_rejected(tmp_path):
    path = tmp_path / "powers.txt"
    grig_powers(P_WORDS, 2, 3, path)
    with pytest.raises(CacheError):
        grig_powers(["a", "b", "c"], 2, 3, path)


def test_write_is_deterministic(tmp_path):
    powers = grig_powers(P_WORDS, 2, 5)
    a, b = tmp_path / "a", tmp_path / "b"
    write_power_cache(a, 2, "ada,dad,c", powers)
    write_power_cache(b, 2, "ada,dad,c", list(powers))
    assert a.read_bytes() == b.read_bytes()
