"""Ideals generated by finite configurations, over GF(2).

Two routes to the same subspace:

* ``lemma``: for each generator b only the window basis elements e with
  [b, e] != 0 are used, and chains [b, e1, ..., ek] are saturated.
* ``brute``: b is bracketed against every window basis element.

Both compute a fixed point: the pushed vectors span the current subspace, so
closing them under [., e] closes the whole span.
"""

from __future__ import annotations

from collections import deque
from typing import Sequence

from ..field_core import BinarySubspace
from ..shift_space import Config
from .rules import BracketRule, bracket_eval, interaction_geometry


class WindowTooSmall(ValueError):
    pass


class WindowCodec:
    """Finite GF(2) configs supported in [lo, hi] <-> int bitsets."""

    def __init__(self, d: int, lo: int, hi: int):
        self.d, self.lo, self.hi = d, lo, hi
        self.width = (hi - lo + 1) * d

    def encode(self, x: Config) -> int:
        if not x.is_finite:
            raise ValueError("only finite-support configurations can be encoded")
        v = 0
        for p, vec in x.finite.items():
            if not self.lo <= p <= self.hi:
                raise WindowTooSmall(f"support position {p} outside [{self.lo}, {self.hi}]")
            base = (p - self.lo) * self.d
            for t, a in enumerate(vec):
                if a:
                    v |= 1 << (base + t)
        return v

    def decode(self, v: int) -> Config:
        fin: dict[int, list[int]] = {}
        i = 0
        while v:
            if v & 1:
                p, t = divmod(i, self.d)
                fin.setdefault(p + self.lo, [0] * self.d)[t] = 1
            v >>= 1
            i += 1
        return Config(self.d, 2, fin)


def default_pad(rule: BracketRule) -> int:
    rho, lo, hi = interaction_geometry(rule)
    return rho + max(abs(lo), abs(hi))


def window_basis(rule: BracketRule, window: int) -> list[Config]:
    return [Config.basis(rule.d, rule.q, t, g)
            for g in range(-window, window + 1) for t in range(1, rule.d + 1)]


def ideal_closure(gens: Sequence[Config], rule: BracketRule, window: int, *,
                  method: str = "lemma", pad: int | None = None) -> tuple[BinarySubspace, WindowCodec]:
    """Span of all [b, e_1, ..., e_k] (b in gens, e_j window basis elements).

    With ``method="lemma"`` each e_j is restricted to [b, e_j] != 0.  The
    result lives on positions [-window - pad, window + pad]; WindowTooSmall is
    raised if anything leaves that range.
    """
    if rule.q != 2:
        raise ValueError("ideal closure is implemented over GF(2)")
    if method not in ("lemma", "brute"):
        raise ValueError(f"unknown method {method!r}")
    if pad is None:
        pad = default_pad(rule)
    codec = WindowCodec(rule.d, -window - pad, window + pad)
    space = BinarySubspace(codec.width)
    basis = window_basis(rule, window)
    for b in gens:
        if b.d != rule.d or b.q != rule.q:
            raise ValueError("generator has the wrong shape")
        if b.is_zero:
            continue
        if method == "lemma":
            es = [e for e in basis if not bracket_eval(rule, b, e).is_zero]
        else:
            es = basis
        # saturate each generator on its own: the lemma route closes only
        # under that generator's own non-commuting partners
        own = BinarySubspace(codec.width)
        own.extend_inplace([codec.encode(b)])
        queue = deque([b])
        while queue:
            v = queue.popleft()
            for e in es:
                w = bracket_eval(rule, v, e)
                if not w.is_zero and own.extend_inplace([codec.encode(w)]):
                    queue.append(w)
        space.extend_inplace(own.basis)
    return space, codec
