"""Exhaustive Lie-axiom checks on a window of generators.

The bracket is bilinear and commutes with the shift by construction of every
rule type, and it is continuous (a block code).  An identity that is
multilinear in its arguments therefore holds everywhere once it holds on
basis configurations, and by shift-invariance only generator tuples up to
translation matter.  A Jacobi term can be nonzero only for tuples whose
positions fit in a set of diameter D (see ``required_window``), so checking
all triples in [-W, W] with 2W >= D covers every translation class.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..shift_space import Config
from .rules import BracketRule, basis_generators, bracket_eval, required_window


@dataclass
class AxiomReport:
    bilinear: bool = True
    reflexive: bool = True
    jacobi: bool = True
    window: int = 0
    required: int = 0
    generators: int = 0
    witnesses: dict[str, tuple] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.bilinear and self.reflexive and self.jacobi

    @property
    def certified(self) -> bool:
        """All axioms hold and the window is wide enough for the check to generalise."""
        return self.ok and self.window >= self.required

    def summary(self) -> str:
        return ", ".join(f"{name} {'ok' if getattr(self, name) else 'FAIL'}"
                         for name in ("bilinear", "reflexive", "jacobi"))


def _scalars(q: int) -> list[int]:
    return list(range(q)) if q <= 5 else [0, 1, 2, q - 1]


def verify_axioms(rule: BracketRule, window: int, *, check_jacobi: bool = True) -> AxiomReport:
    gens = basis_generators(rule, window)
    report = AxiomReport(window=window, required=required_window(rule), generators=len(gens))
    q = rule.q
    n = len(gens)
    table = [[bracket_eval(rule, gens[i], gens[j]) for j in range(n)] for i in range(n)]

    for i, u in enumerate(gens):
        if not table[i][i].is_zero:
            report.reflexive = False
            report.witnesses.setdefault("reflexive", (u,))

    scal = _scalars(q)
    for i, j in itertools.combinations(range(n), 2):
        u, v = gens[i], gens[j]
        for a, b in itertools.product(scal, repeat=2):
            w = u.scale(a) + v.scale(b)
            if not bracket_eval(rule, w, w).is_zero:
                report.reflexive = False
                report.witnesses.setdefault("reflexive", (w,))
        for k in range(n):
            z = gens[k]
            for a, b in itertools.product(scal, repeat=2):
                if not report.bilinear:
                    break
                w = u.scale(a) + v.scale(b)
                left = bracket_eval(rule, w, z)
                if left != table[i][k].scale(a) + table[j][k].scale(b):
                    report.bilinear = False
                    report.witnesses["bilinear"] = (a, u, b, v, z)
                right = bracket_eval(rule, z, w)
                if right != table[k][i].scale(a) + table[k][j].scale(b):
                    report.bilinear = False
                    report.witnesses["bilinear"] = (z, a, u, b, v)

    if check_jacobi:
        witness = jacobi_witness(rule, gens, table)
        if witness is not None:
            report.jacobi = False
            report.witnesses["jacobi"] = witness
    return report


def jacobi_witness(rule: BracketRule, gens: list[Config],
                   table: list[list[Config]] | None = None) -> tuple | None:
    """First generator triple with a nonzero Jacobi sum, or None."""
    n = len(gens)
    if table is None:
        table = [[bracket_eval(rule, gens[i], gens[j]) for j in range(n)] for i in range(n)]
    memo: dict[tuple[int, int], Config] = {}

    def outer(i: int, j: int, k: int) -> Config:
        key = (i * n + j, k)
        r = memo.get(key)
        if r is None:
            inner = table[i][j]
            r = inner if inner.is_zero else bracket_eval(rule, inner, gens[k])
            memo[key] = r
        return r

    # the Jacobi sum is alternating once bilinearity and reflexivity hold, but
    # repeated indices are cheap so they are checked too
    for i, j, k in itertools.combinations_with_replacement(range(n), 3):
        s = outer(i, j, k) + outer(j, k, i) + outer(k, i, j)
        if not s.is_zero:
            return gens[i], gens[j], gens[k], s
    return None
