"""Seeded random Lie terms for the rewriting checks."""

import random

from liesubshift.rewrite_core import Bracket, Generator, Scale, Sum, Xi


def random_term(rng: random.Random, gens, depth: int, q: int, *, xi: bool = False, leaves: int = 8):
    """A term of bracket depth <= depth with at most ``leaves`` leaves over ``gens``.

    With ``xi=True`` the affine variable occurs exactly once.  The leaf budget
    keeps left-nested expansions small enough to evaluate.
    """
    if depth == 0 or leaves < 2 or rng.random() < 0.15:
        leaf = Xi() if xi else Generator(rng.choice(gens))
        if not xi and q > 2 and rng.random() < 0.3:
            return Scale(rng.randrange(1, q), leaf)
        return leaf
    roll = rng.random()
    if roll < 0.75:
        split = rng.randrange(1, leaves)
        left_xi = xi and rng.random() < 0.5
        left = random_term(rng, gens, depth - 1, q, xi=left_xi, leaves=split)
        right = random_term(rng, gens, depth - 1, q, xi=xi and not left_xi, leaves=leaves - split)
        return Bracket(left, right)
    if roll < 0.85:
        return Scale(rng.randrange(1, q) if q > 2 else 1,
                     random_term(rng, gens, depth - 1, q, xi=xi, leaves=leaves))
    k = rng.randrange(2, 4)
    budget = max(1, leaves // k)
    parts = [random_term(rng, gens, depth - 1, q, leaves=budget) for _ in range(k - 1)]
    hit = random_term(rng, gens, depth - 1, q, xi=xi, leaves=budget)
    parts.insert(rng.randrange(len(parts) + 1), hit)
    return Sum(tuple(parts))
