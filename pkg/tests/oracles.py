"""Independent reference implementations used only by the tests.

None of these import the package's algorithms; they recompute the same
quantities the slow, obvious way.
"""

from __future__ import annotations

import itertools

import numpy as np


def rank_mod_p(rows, p: int = 2) -> int:
    """Textbook row reduction on lists of lists over GF(p)."""
    m = [[x % p for x in r] for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], p - 2, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                f = m[i][col]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def word_to_row(w: str, width: int) -> list[int]:
    return [int(c) for c in w.ljust(width, "0")[:width]]


# ---------------------------------------------------------------- Grigorchuk

def tree_act(gen: str, word: str) -> str:
    """Act by one generator on a finite binary word, straight from the recursion."""
    if not word or gen == "1":
        return word
    head, rest = word[0], word[1:]
    if gen == "a":
        return ("1" if head == "0" else "0") + rest
    sections = {"b": ("a", "c"), "c": ("a", "d"), "d": ("1", "b")}[gen]
    return head + tree_act(sections[int(head)], rest)


def tree_act_word(gens: str, word: str) -> str:
    for g in gens:
        word = tree_act(g, word)
    return word


def level_permutation(gens: str, level: int) -> tuple[str, ...]:
    words = ["".join(t) for t in itertools.product("01", repeat=level)]
    return tuple(tree_act_word(gens, w) for w in words)


def ring_power_supports(words: list[str], i_max: int, level: int, q: int = 2) -> list[int]:
    """Support sizes of (sum of words)^i with elements represented by level permutations."""
    elems = [level_permutation(w, level) for w in words]
    index = {w: i for i, w in enumerate(["".join(t) for t in itertools.product("01", repeat=level)])}

    def mul(g, h):
        # right action: x.(gh) = (x.g).h
        return tuple(h[index[x]] for x in g)

    one = level_permutation("", level)
    cur = {one: 1}
    out = [1]
    for _ in range(i_max):
        nxt: dict = {}
        for g, c in cur.items():
            for e in elems:
                k = mul(g, e)
                nxt[k] = (nxt.get(k, 0) + c) % q
        cur = {k: v for k, v in nxt.items() if v}
        out.append(len(cur))
    return out


def walk_counts(gens: list[str], steps: int, depth: int = 40) -> list[dict[str, int]]:
    """Number of length-k words over ``gens`` taking 1^depth to each point."""
    start = "1" * depth
    layer = {start: 1}
    out = [dict(layer)]
    for _ in range(steps):
        nxt: dict[str, int] = {}
        for x, c in layer.items():
            for g in gens:
                y = tree_act_word(g, x)
                nxt[y] = nxt.get(y, 0) + c
        layer = nxt
        out.append(dict(layer))
    return out


# ------------------------------------------------------------- periodic pairs

def kernel_pair_count(tensor: np.ndarray, q: int) -> int:
    """Sum over x of |ker(y -> [x, y])| = q^(N - rank M_x)."""
    dim = tensor.shape[0]
    total = 0
    for x in itertools.product(range(q), repeat=dim):
        mx = np.tensordot(np.array(x), tensor, axes=1) % q
        total += q ** (dim - rank_mod_p(mx.tolist(), q))
    return total


# ---------------------------------------------------------------- matrix Lie algebra

def mat_bracket(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    return (a @ b - b @ a) % q
