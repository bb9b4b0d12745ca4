import pytest
from hypothesis import given, settings, strategies as st

from liesubshift.group_core import grig_from_word
from liesubshift.schreier_lab import (
    T_GENERATORS,
    SegmentError,
    build_graph,
    element_of_path,
    geodesic_count,
    orbit_act,
    orbit_act_word,
    segment_decomposition,
)

from oracles import tree_act_word, walk_counts

DEPTH = 40


def ray(prefix: str) -> str:
    return prefix + "1" * (DEPTH - len(prefix))


@pytest.fixture(scope="module")
def g200():
    return build_graph(200)


def test_generators_on_the_ray():
    assert orbit_act("", "b") == "" and orbit_act("", "c") == "" and orbit_act("", "d") == ""
    assert orbit_act("", "a") == "0"


@given(st.text(alphabet="01", max_size=12), st.sampled_from("abcd"))
def test_generators_are_involutions_on_orbit(p, g):
    p = p.rstrip("1")
    assert orbit_act(orbit_act(p, g), g) == p


@settings(max_examples=150)
@given(st.text(alphabet="01", max_size=10), st.text(alphabet="abcd", max_size=6))
def test_orbit_action_matches_portraits(p, w):
    p = p.rstrip("1")
    q = orbit_act_word(p, w)
    assert ray(q) == grig_from_word(w).act(ray(p))
    assert ray(q) == tree_act_word(w, ray(p))


def test_leftmost_vertex(g200):
    g = build_graph(2)
    assert g.loops(0) == ["b", "c", "d"]
    assert g.labels_between(0, 1) == ["a"]


def test_first_double_edge():
    g = build_graph(4)
    assert g.labels_between(1, 2) == ["b", "c"]


def test_first_vertices():
    g = build_graph(12)
    assert g.vertices == ["", "0", "00", "10", "100", "000", "010", "110", "1100", "0100", "0000", "1000"]


def test_four_regular(g200):
    for i in range(len(g200)):
        assert g200.action_degree(i) == 4
    # induced degree is 4 except where an edge leaves the built range
    for i in range(len(g200) - 1):
        assert g200.degree(i) == 4


def test_edge_list_sorted_and_tsv(g200):
    lines = g200.edge_list().splitlines()
    assert lines[0] == "0\t0\tb"
    keys = [tuple(int(x) if x.isdigit() else x for x in line.split("\t")) for line in lines]
    assert keys == sorted(keys)


def test_geodesics_abcd_double(g200):
    rep = geodesic_count(build_graph(40), "abcd")
    assert rep.distance[0] == 0 and rep.count[0] == 1
    for n in range(9):
        v = 2 * n
        assert rep.distance[v] == 2 * n
        assert rep.count[v] == 2 ** n
        assert rep.is_exact(v)


def test_geodesic_counts_match_walk_oracle():
    g = build_graph(30)
    rep = geodesic_count(g, "abcd")
    layers = walk_counts(list("abcd"), 16, DEPTH)
    for v in range(17):
        d = rep.distance[v]
        assert layers[d].get(ray(g.vertices[v]), 0) == rep.count[v]
        assert all(ray(g.vertices[v]) not in layers[k] for k in range(d))


def test_t_geodesics_match_walk_oracle(g200):
    rep = geodesic_count(g200, T_GENERATORS)
    segs, _ = segment_decomposition(g200)
    ends = [s.rightmost for s in segs[:6]]
    n_max = max(rep.distance[v] for v in ends)
    layers = walk_counts(list(T_GENERATORS), n_max, DEPTH)
    for v in ends:
        d = rep.distance[v]
        assert rep.count[v] == 1
        assert layers[d][ray(g200.vertices[v])] == 1
        assert all(ray(g200.vertices[v]) not in layers[k] for k in range(d))


def test_t_geodesic_lengths_distinct(g200):
    rep = geodesic_count(g200, T_GENERATORS)
    segs, _ = segment_decomposition(g200)
    lengths = [rep.distance[s.rightmost] for s in segs[:8]]
    assert lengths == [3, 5, 7, 9, 11, 13, 15, 17]


def test_geodesic_path_reaches_vertex(g200):
    rep = geodesic_count(g200, T_GENERATORS)
    for v in (5, 9, 29):
        path = rep.geodesic(v)
        assert orbit_act_word("", "".join(path)) == g200.vertices[v]
        assert element_of_path(path).act(ray("")) == ray(g200.vertices[v])


def test_segment_sequence(g200):
    segs, trailing = segment_decomposition(g200)
    labels = [s.label for s in segs[:7]]
    # under the fixed recursion the first block is S3; see the b/c relabelling test
    assert labels == ["S3", "S2", "S3", "S1", "S1", "S3", "S2"]
    assert all(s.stop - s.start == 2 for s in segs if s.label == "S1")
    assert all(s.stop - s.start == 4 for s in segs if s.label != "S1")


def test_segments_partition(g200):
    segs, trailing = segment_decomposition(g200)
    covered = [v for s in segs for v in range(s.start, s.stop)] + trailing
    assert covered == list(range(2, len(g200)))


def test_swapping_b_and_c_gives_s2_first(g200):
    # the figure's labelling differs from the recursion by exchanging b and c
    swap = {"b": "c", "c": "b"}
    first = segment_decomposition(g200)[0][0]
    loops = [swap.get(l, l) for v in range(first.start, first.stop) for l in g200.loops(v)]
    middle = sorted(swap.get(l, l) for l in g200.labels_between(first.start + 1, first.start + 2))
    assert loops == ["d", "b", "b", "d"] and middle == ["c", "d"]


def test_segment_error_on_bad_graph(g200):
    g = build_graph(20)
    g.edges = [e for e in g.edges if not (e.u == 1 and e.v == 2)]
    with pytest.raises(SegmentError):
        segment_decomposition(g)


def test_bad_generator_rejected():
    with pytest.raises(ValueError):
        orbit_act("", "x")
    with pytest.raises(ValueError):
        geodesic_count(build_graph(5), ["ae"])
