"""Schreier graph of the Grigorchuk group on the orbit of the ray 111...

Orbit points are stored as the finite prefix before the all-ones tail, with
trailing 1s stripped.  Vertices are numbered left to right; the leftmost
vertex is the ray 1^inf itself.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .group_core import GENERATORS, GrigElement, grig_from_word

# next-level state of b, c, d after reading a 0 / a 1
_ON_ZERO = {"b": "a", "c": "a", "d": "1"}
_ON_ONE = {"b": "c", "c": "d", "d": "b"}


class SegmentError(ValueError):
    """A block of the graph matched none of the S1/S2/S3 templates."""


def canonical_prefix(prefix: str) -> str:
    return prefix.rstrip("1")


def orbit_act(prefix: str, gen: str) -> str:
    """Image of the ray ``prefix + 1^inf`` under one generator, canonicalized."""
    if gen not in GENERATORS:
        raise ValueError(f"not a generator: {gen!r}")
    out = []
    state = gen
    for i, ch in enumerate(prefix):
        if state == "1":
            out.append(prefix[i:])
            break
        if state == "a":
            out.append("1" if ch == "0" else "0")
            out.append(prefix[i + 1:])
            break
        out.append(ch)
        state = _ON_ONE[state] if ch == "1" else _ON_ZERO[state]
    else:
        # b, c, d fix 1^inf; a turns it into 0 1^inf
        if state == "a":
            out.append("0")
    return canonical_prefix("".join(out))


def orbit_act_word(prefix: str, word: Iterable[str]) -> str:
    for g in word:
        prefix = orbit_act(prefix, g)
    return prefix


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    label: str


@dataclass
class SchreierGraph:
    vertices: list[str]
    edges: list[Edge]
    index: dict[str, int] = field(repr=False, default_factory=dict)

    def __post_init__(self):
        if not self.index:
            self.index = {p: i for i, p in enumerate(self.vertices)}

    def __len__(self) -> int:
        return len(self.vertices)

    def neighbour(self, i: int, label: str) -> int | None:
        """Index of the label-neighbour of vertex i, or None if it lies outside."""
        return self.index.get(orbit_act(self.vertices[i], label))

    def loops(self, i: int) -> list[str]:
        return sorted(e.label for e in self.edges if e.u == i and e.v == i)

    def labels_between(self, i: int, j: int) -> list[str]:
        lo, hi = min(i, j), max(i, j)
        return sorted(e.label for e in self.edges if e.u == lo and e.v == hi)

    def degree(self, i: int) -> int:
        """Label incidences at vertex i inside the built (induced) graph."""
        return sum((e.u == i) + (e.v == i and e.u != i) for e in self.edges)

    def action_degree(self, i: int) -> int:
        """Degree in the full infinite graph: one incidence per label."""
        return sum(1 for g in GENERATORS if orbit_act(orbit_act(self.vertices[i], g), g) == self.vertices[i])

    def edge_list(self) -> str:
        return "".join(f"{e.u}\t{e.v}\t{e.label}\n" for e in self.edges)


def build_graph(n_vertices: int) -> SchreierGraph:
    """Induced subgraph on the first n orbit points, left to right."""
    if n_vertices < 2:
        raise ValueError("need at least 2 vertices")
    verts = [""]
    seen = {""}
    prev = None
    while len(verts) < n_vertices:
        cur = verts[-1]
        nxt = {orbit_act(cur, g) for g in GENERATORS} - {cur}
        if prev is not None:
            nxt.discard(prev)
        if len(nxt) != 1:
            raise RuntimeError(f"orbit graph is not a line at {cur!r}: {sorted(nxt)}")
        (p,) = nxt
        if p in seen:
            raise RuntimeError("orbit walk revisited a vertex")
        seen.add(p)
        verts.append(p)
        prev = cur
    index = {p: i for i, p in enumerate(verts)}
    edges = []
    for i, p in enumerate(verts):
        for g in GENERATORS:
            j = index.get(orbit_act(p, g))
            if j is not None and j >= i:
                edges.append(Edge(i, j, g))
    edges.sort(key=lambda e: (e.u, e.v, e.label))
    return SchreierGraph(verts, edges, index)


@dataclass
class GeodesicReport:
    generators: tuple[str, ...]
    distance: dict[int, int]
    count: dict[int, int]
    parents: dict[int, list[tuple[int, str]]]
    horizon: int

    def is_exact(self, v: int) -> bool:
        """Counts are exact for vertices no farther than ``horizon`` steps."""
        return v in self.distance and self.distance[v] <= self.horizon

    def geodesic(self, v: int) -> list[str]:
        """One geodesic to v as a list of generator words (unique if count==1)."""
        path = []
        while v != 0:
            u, w = self.parents[v][0]
            path.append(w)
            v = u
        return path[::-1]


def geodesic_count(graph: SchreierGraph, gens: Sequence[str]) -> GeodesicReport:
    """BFS from the leftmost vertex with each word in ``gens`` as one step.

    Paths are confined to the built vertices; a word moves at most len(word)
    positions along the line, so counts are exact up to distance
    (n-1) // max_len, recorded as ``horizon``.
    """
    gens = tuple(gens)
    if not gens:
        raise ValueError("empty generating set")
    for w in gens:
        if not w or any(ch not in GENERATORS for ch in w):
            raise ValueError(f"bad generator word {w!r}")
    dist = {0: 0}
    count = {0: 1}
    parents: dict[int, list[tuple[int, str]]] = {0: []}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for w in gens:
            v = graph.index.get(orbit_act_word(graph.vertices[u], w))
            if v is None:
                continue
            if v not in dist:
                dist[v] = dist[u] + 1
                count[v] = count[u]
                parents[v] = [(u, w)]
                queue.append(v)
            elif dist[v] == dist[u] + 1:
                count[v] += count[u]
                parents[v].append((u, w))
    horizon = (len(graph) - 1) // max(len(w) for w in gens)
    return GeodesicReport(gens, dist, count, parents, horizon)


# --------------------------------------------------------------------------
# segment decomposition
# --------------------------------------------------------------------------

_TEMPLATES = {
    # loops left to right, labels of the middle double edge (None for S1)
    "S1": (("d", "d"), None),
    "S2": (("d", "b", "b", "d"), ("c", "d")),
    "S3": (("d", "c", "c", "d"), ("b", "d")),
}


@dataclass(frozen=True)
class Segment:
    label: str
    start: int
    stop: int  # exclusive

    @property
    def rightmost(self) -> int:
        return self.stop - 1


def _single_loop(graph: SchreierGraph, i: int) -> str:
    loops = graph.loops(i)
    if len(loops) != 1:
        raise SegmentError(f"vertex {i} has loops {loops}, expected exactly one")
    return loops[0]


def segment_decomposition(graph: SchreierGraph) -> tuple[list[Segment], list[int]]:
    """Split everything right of the two leftmost vertices into S1/S2/S3 copies.

    Returns the segments and the trailing vertices of an incomplete block
    (a block whose right end lies outside the built graph).
    """
    n = len(graph)
    if n < 4:
        raise ValueError("graph too small to contain a segment")
    if graph.labels_between(0, 1) != ["a"] or graph.labels_between(1, 2) != ["b", "c"]:
        raise SegmentError("left end does not match the expected a-edge and b/c double edge")
    segments: list[Segment] = []
    i = 2
    while i < n:
        # a block is a run of a-pairs; pairs inside a block are joined by a
        # non-{b,c} double edge, blocks are separated by b/c double edges
        j = i
        while True:
            if j + 1 >= n:
                return segments, list(range(i, n))
            if graph.labels_between(j, j + 1) != ["a"]:
                raise SegmentError(f"expected an a-edge between {j} and {j + 1}")
            if j + 2 >= n:
                return segments, list(range(i, n))
            link = graph.labels_between(j + 1, j + 2)
            if link == ["b", "c"]:
                break
            j += 2
        stop = j + 2
        loops = tuple(_single_loop(graph, k) for k in range(i, stop))
        middle = tuple(graph.labels_between(i + 1, i + 2)) if stop - i == 4 else None
        for name, (tl, tm) in _TEMPLATES.items():
            if loops == tl and middle == tm:
                segments.append(Segment(name, i, stop))
                break
        else:
            raise SegmentError(f"block {i}..{stop - 1} (loops {loops}, middle {middle}) matches no template")
        i = stop
    return segments, []


def element_of_path(path: Sequence[str]) -> GrigElement:
    return grig_from_word("".join(path))


T_GENERATORS = ("ada", "dad", "c")
