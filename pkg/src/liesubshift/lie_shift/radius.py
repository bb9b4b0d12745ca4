"""Iterated brackets against a fixed direction and their radii."""

from __future__ import annotations

from ..shift_space import Config
from .rules import BracketRule, ConstructionA, _root, bracket_eval


def phi(rule: BracketRule, c: Config, i: int, xi: Config) -> Config:
    """phi_0(xi) = xi, phi_{k+1}(xi) = [phi_k(xi), c]."""
    if i < 0:
        raise ValueError("iteration index must be nonnegative")
    for _ in range(i):
        if xi.is_zero:
            break
        xi = bracket_eval(rule, xi, c)
    return xi


def _inputs(rule: BracketRule, window: int) -> list[Config]:
    d, q = rule.d, rule.q
    tracks = d - 1 if isinstance(_root(rule), ConstructionA) else d
    return [Config.basis(d, q, t, g) for g in range(-window, window + 1) for t in range(1, tracks + 1)]


def phi_radius(rule: BracketRule, c: Config, i: int, window: int = 2) -> int:
    """Largest displacement of phi_i over basis inputs placed in [-window, window].

    This is the nonuniform radius: the smallest r with every phi_i(e_g)
    supported in [g - r, g + r].
    """
    r = 0
    for e in _inputs(rule, window):
        out = phi(rule, c, i, e)
        if not out.is_finite:
            raise ValueError("iterate left the finite-support configurations")
        (g,) = e.finite
        for p in out.finite:
            r = max(r, abs(p - g))
    return r


def phi_radii(rule: BracketRule, c: Config, i_max: int, window: int = 2) -> list[int]:
    """[phi_radius(rule, c, i) for i in 0..i_max], sharing the iteration."""
    inputs = _inputs(rule, window)
    anchors = [next(iter(e.finite)) for e in inputs]
    cur = list(inputs)
    out = []
    for i in range(i_max + 1):
        if i:
            cur = [x if x.is_zero else bracket_eval(rule, x, c) for x in cur]
        out.append(max((abs(p - g) for x, g in zip(cur, anchors) for p in x.finite), default=0))
    return out
