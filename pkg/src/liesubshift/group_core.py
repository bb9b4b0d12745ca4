"""Elements of Z, of the XOR group H = (+)_N Z_2, and of the first Grigorchuk group.

All three types share a small duck-typed surface used by the group ring:
``g * h``, ``g.inverse()``, ``g.is_identity()`` and ``g.key()`` (a canonical
string).  Products act on the right: ``x . (g*h) == (x . g) . h``.

Grigorchuk elements are contracted portraits over the nucleus {1, a, b, c, d}
with the wreath recursion

    a = swap(1, 1),  b = (a, c),  c = (a, d),  d = (1, b).

Portraits are hash-consed, so two elements are equal iff they are the same
object, and hashing/equality are O(1).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Iterable


# --------------------------------------------------------------------------
# Z and H
# --------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class IntElement:
    value: int = 0

    def __mul__(self, other: "IntElement") -> "IntElement":
        return IntElement(self.value + other.value)

    def inverse(self) -> "IntElement":
        return IntElement(-self.value)

    def is_identity(self) -> bool:
        return self.value == 0

    def key(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class XorElement:
    """Finite subset of N stored as a bitmask; the group law is XOR."""

    bits: int = 0

    def __post_init__(self):
        if self.bits < 0:
            raise ValueError("XorElement bits must be nonnegative")

    @classmethod
    def from_set(cls, s: Iterable[int]) -> "XorElement":
        v = 0
        for i in s:
            v ^= 1 << i
        return cls(v)

    def to_set(self) -> frozenset[int]:
        return frozenset(i for i in range(self.bits.bit_length()) if (self.bits >> i) & 1)

    def __mul__(self, other: "XorElement") -> "XorElement":
        return XorElement(self.bits ^ other.bits)

    def inverse(self) -> "XorElement":
        return self

    def is_identity(self) -> bool:
        return self.bits == 0

    def key(self) -> str:
        return format(self.bits, "x")


def xor_mul(x: XorElement, y: XorElement) -> XorElement:
    return x * y


# --------------------------------------------------------------------------
# Grigorchuk group
# --------------------------------------------------------------------------

NUCLEUS = ("1", "a", "b", "c", "d")
GENERATORS = ("a", "b", "c", "d")

# sections of b, c, d on the 0- and 1-subtrees
_SECTIONS = {"b": ("a", "c"), "c": ("a", "d"), "d": ("1", "b")}
# Klein four-group {1, b, c, d}
_KLEIN = {
    ("1", "1"): "1", ("1", "b"): "b", ("1", "c"): "c", ("1", "d"): "d",
    ("b", "1"): "b", ("b", "b"): "1", ("b", "c"): "d", ("b", "d"): "c",
    ("c", "1"): "c", ("c", "b"): "d", ("c", "c"): "1", ("c", "d"): "b",
    ("d", "1"): "d", ("d", "b"): "c", ("d", "c"): "b", ("d", "d"): "1",
}

_lock = threading.RLock()
_nodes: dict[tuple, "GrigElement"] = {}
_mul_memo: dict[tuple[int, int], "GrigElement"] = {}


class GrigElement:
    """A contracted portrait: either a nucleus leaf or (active, left, right).

    Do not instantiate directly; use ``grig_leaf``, ``grig_from_word`` or the
    group operations.  Instances are unique per group element.
    """

    __slots__ = ("leaf", "active", "left", "right", "_key", "size", "depth", "__weakref__")

    def __init__(self, leaf, active, left, right):
        self.leaf = leaf
        self.active = active
        self.left = left
        self.right = right
        self._key = None
        if leaf is not None:
            self.size = 1
            self.depth = 0
        else:
            self.size = 1 + left.size + right.size
            self.depth = 1 + max(left.depth, right.depth)

    @property
    def is_leaf(self) -> bool:
        return self.leaf is not None

    def key(self) -> str:
        """Canonical serialization: ``1 a b c d`` or ``(s L R)`` / ``(e L R)``."""
        k = self._key
        if k is None:
            if self.leaf is not None:
                k = self.leaf
            else:
                k = "(%s %s %s)" % ("s" if self.active else "e", self.left.key(), self.right.key())
            self._key = k
        return k

    def __repr__(self) -> str:
        return f"GrigElement({self.key()})"

    def __str__(self) -> str:
        return self.key()

    # identity-based equality is exact because of hash-consing
    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return id(self)

    def __lt__(self, other: "GrigElement") -> bool:
        return self.key() < other.key()

    def __mul__(self, other: "GrigElement") -> "GrigElement":
        return grig_mul(self, other)

    def inverse(self) -> "GrigElement":
        return grig_inv(self)

    def is_identity(self) -> bool:
        return grig_is_identity(self)

    def expand(self) -> tuple[bool, "GrigElement", "GrigElement"]:
        """One level of the wreath recursion: (active, section_0, section_1)."""
        if self.leaf is None:
            return self.active, self.left, self.right
        return _LEAF_EXPANSION[self.leaf]

    def act(self, word: str) -> str:
        """Image of a finite binary word under the tree automorphism."""
        out = []
        g = self
        for i, ch in enumerate(word):
            if g is IDENTITY:
                out.append(word[i:])
                break
            active, s0, s1 = g.expand()
            bit = ch == "1"
            out.append("1" if bit ^ active else "0")
            g = s1 if bit else s0
        return "".join(out)

    def __reduce__(self):
        return (grig_parse, (self.key(),))


def _intern(leaf, active, left, right) -> GrigElement:
    k = (leaf,) if leaf is not None else (active, id(left), id(right))
    node = _nodes.get(k)
    if node is None:
        with _lock:
            node = _nodes.get(k)
            if node is None:
                node = GrigElement(leaf, active, left, right)
                _nodes[k] = node
    return node


LEAVES = {s: _intern(s, None, None, None) for s in NUCLEUS}
IDENTITY = LEAVES["1"]
_LEAF_EXPANSION = {
    "1": (False, IDENTITY, IDENTITY),
    "a": (True, IDENTITY, IDENTITY),
    **{s: (False, LEAVES[l], LEAVES[r]) for s, (l, r) in _SECTIONS.items()},
}
# node triple -> nucleus leaf, for contraction on construction
_NUCLEUS_OF = {(act, id(l), id(r)): LEAVES[s] for s, (act, l, r) in _LEAF_EXPANSION.items()}


def grig_leaf(symbol: str) -> GrigElement:
    try:
        return LEAVES[symbol]
    except KeyError:
        raise ValueError(f"unknown nucleus symbol {symbol!r}") from None


def grig_node(active: bool, left: GrigElement, right: GrigElement) -> GrigElement:
    """Build (active, left, right), contracting to a nucleus leaf on match."""
    leaf = _NUCLEUS_OF.get((active, id(left), id(right)))
    if leaf is not None:
        return leaf
    return _intern(None, bool(active), left, right)


def grig_mul(g: GrigElement, h: GrigElement) -> GrigElement:
    if g is IDENTITY:
        return h
    if h is IDENTITY:
        return g
    if g.leaf is not None and h.leaf is not None:
        if g.leaf == "a" and h.leaf == "a":
            return IDENTITY
        kl = _KLEIN.get((g.leaf, h.leaf))
        if kl is not None:
            return LEAVES[kl]
    memo_key = (id(g), id(h))
    r = _mul_memo.get(memo_key)
    if r is not None:
        return r
    ga, g0, g1 = g.expand()
    ha, h0, h1 = h.expand()
    # (gh)_i = g_i * h_{g(i)}
    if ga:
        left, right = grig_mul(g0, h1), grig_mul(g1, h0)
    else:
        left, right = grig_mul(g0, h0), grig_mul(g1, h1)
    r = grig_node(ga ^ ha, left, right)
    _mul_memo[memo_key] = r
    return r


def grig_inv(g: GrigElement) -> GrigElement:
    if g.leaf is not None:
        return g
    if g.active:
        return grig_node(True, grig_inv(g.right), grig_inv(g.left))
    return grig_node(False, grig_inv(g.left), grig_inv(g.right))


_identity_memo: dict[int, bool] = {}


def grig_is_identity(g: GrigElement) -> bool:
    """Trivial action iff inactive root and both sections trivial."""
    if g.leaf is not None:
        return g.leaf == "1"
    r = _identity_memo.get(id(g))
    if r is None:
        r = (not g.active) and grig_is_identity(g.left) and grig_is_identity(g.right)
        _identity_memo[id(g)] = r
    return r


def grig_from_word(word: str | Iterable[str]) -> GrigElement:
    """Product of generators in order; ``""`` gives the identity."""
    g = IDENTITY
    for ch in word:
        if ch not in GENERATORS:
            raise ValueError(f"not a generator: {ch!r}")
        g = grig_mul(g, LEAVES[ch])
    return g


def grig_parse(text: str) -> GrigElement:
    """Inverse of ``GrigElement.key``."""
    pos = 0

    def parse() -> GrigElement:
        nonlocal pos
        ch = text[pos]
        if ch in LEAVES:
            pos += 1
            return LEAVES[ch]
        if ch != "(":
            raise ValueError(f"bad portrait at {pos}: {text!r}")
        flag = text[pos + 1]
        if flag not in "se" or text[pos + 2] != " ":
            raise ValueError(f"bad portrait at {pos}: {text!r}")
        pos += 3
        left = parse()
        if text[pos] != " ":
            raise ValueError(f"bad portrait at {pos}: {text!r}")
        pos += 1
        right = parse()
        if text[pos] != ")":
            raise ValueError(f"bad portrait at {pos}: {text!r}")
        pos += 1
        return grig_node(flag == "s", left, right)

    try:
        g = parse()
    except IndexError:
        raise ValueError(f"truncated portrait: {text!r}") from None
    if pos != len(text):
        raise ValueError(f"trailing text in portrait: {text!r}")
    if g.key() != text:
        raise ValueError(f"portrait not in contracted form: {text!r}")
    return g


def clear_caches() -> None:
    """Drop multiplication memos (interned nodes stay alive)."""
    with _lock:
        _mul_memo.clear()
        _identity_memo.clear()
