"""Symbolic Lie terms: left-nesting, removal of commuting steps, affine normal forms.

Terms are built from generators ``g<i>`` (i >= 0), brackets, scalings, sums
and a single affine variable ``xi``.  A left-nested bracket
[b, e_1, ..., e_k] = [[b, e_1, ..., e_{k-1}], e_k] is a ``FlatBracket``.

All rewriting works over GF(q) and uses only bilinearity, antisymmetry and
the Jacobi identity in the form [X, [Y, e]] = [[X, Y], e] - [[X, e], Y].
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence, Union

from .field_core import Scalar, check_modulus
from .lie_shift.rules import BracketRule, ConstructionA, _root, bracket_eval
from .shift_space import Config

log = logging.getLogger(__name__)


# --------------------------------------------------------------------------
# terms
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Generator:
    index: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("generator indices are nonnegative")


@dataclass(frozen=True)
class Bracket:
    left: "LieTerm"
    right: "LieTerm"


@dataclass(frozen=True)
class Scale:
    coeff: int
    term: "LieTerm"

    def __post_init__(self):
        if isinstance(self.coeff, Scalar):
            object.__setattr__(self, "coeff", self.coeff.value)
        if self.coeff == 0:
            raise ValueError("scale coefficients must be nonzero")


@dataclass(frozen=True)
class Sum:
    terms: tuple["LieTerm", ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError("empty sum")


@dataclass(frozen=True)
class Xi:
    pass


LieTerm = Union[Generator, Bracket, Scale, Sum, Xi]


def xi_count(t: LieTerm) -> int:
    if isinstance(t, Xi):
        return 1
    if isinstance(t, Generator):
        return 0
    if isinstance(t, Bracket):
        return xi_count(t.left) + xi_count(t.right)
    if isinstance(t, Scale):
        return xi_count(t.term)
    return sum(xi_count(s) for s in t.terms)


def term_depth(t: LieTerm) -> int:
    if isinstance(t, (Generator, Xi)):
        return 0
    if isinstance(t, Bracket):
        return 1 + max(term_depth(t.left), term_depth(t.right))
    if isinstance(t, Scale):
        return term_depth(t.term)
    return max(term_depth(s) for s in t.terms)


def format_term(t: LieTerm) -> str:
    if isinstance(t, Generator):
        return f"g{t.index}"
    if isinstance(t, Xi):
        return "xi"
    if isinstance(t, Bracket):
        return f"(br {format_term(t.left)} {format_term(t.right)})"
    if isinstance(t, Scale):
        return f"(sc {t.coeff} {format_term(t.term)})"
    return "(sum " + " ".join(format_term(s) for s in t.terms) + ")"


_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def parse_term(text: str) -> LieTerm:
    tokens = _TOKEN.findall(text)
    pos = 0

    def take() -> str:
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError(f"unexpected end of term: {text!r}")
        tok = tokens[pos]
        pos += 1
        return tok

    def parse() -> LieTerm:
        tok = take()
        if tok == "(":
            head = take()
            if head == "br":
                out: LieTerm = Bracket(parse(), parse())
            elif head == "sc":
                out = Scale(int(take()), parse())
            elif head == "sum":
                items = []
                while pos < len(tokens) and tokens[pos] != ")":
                    items.append(parse())
                out = Sum(tuple(items))
            else:
                raise ValueError(f"unknown head {head!r}")
            if take() != ")":
                raise ValueError(f"expected ')' in {text!r}")
            return out
        if tok == "xi":
            return Xi()
        m = re.fullmatch(r"g(\d+)", tok)
        if m:
            return Generator(int(m.group(1)))
        raise ValueError(f"bad token {tok!r}")

    t = parse()
    if pos != len(tokens):
        raise ValueError(f"trailing tokens in {text!r}")
    return t


# --------------------------------------------------------------------------
# flat brackets and left-nesting
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FlatBracket:
    coeff: int
    base: int
    tail: tuple[int, ...] = ()

    @property
    def depth(self) -> int:
        return len(self.tail)

    def __str__(self) -> str:
        inner = ", ".join(f"g{i}" for i in (self.base,) + self.tail)
        return f"{self.coeff}*[{inner}]"


Combo = dict  # (base, tail) -> coefficient, insertion-ordered


def _add(acc: Combo, key, c: int, q: int) -> None:
    base, tail = key
    if tail and tail[0] == base:
        return  # [e, e, ...] = 0
    v = (acc.get(key, 0) + c) % q
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


def _bracket_flat(x: tuple, y: tuple, q: int) -> Combo:
    """[X, Y] for left-nested X and Y as a combination of left-nested brackets."""
    xb, xt = x
    yb, yt = y
    out: Combo = {}
    if not yt:
        _add(out, (xb, xt + (yb,)), 1, q)
        return out
    inner = (yb, yt[:-1])
    e = yt[-1]
    # [X, [Y', e]] = [[X, Y'], e] - [[X, e], Y']
    for (b, t), c in _bracket_flat(x, inner, q).items():
        _add(out, (b, t + (e,)), c, q)
    for key, c in _bracket_flat((xb, xt + (e,)), inner, q).items():
        _add(out, key, -c, q)
    return out


def _nest(t: LieTerm, q: int) -> Combo:
    if isinstance(t, Generator):
        return {(t.index, ()): 1}
    if isinstance(t, Xi):
        raise ValueError("left_nest does not accept the affine variable")
    if isinstance(t, Scale):
        out: Combo = {}
        for k, c in _nest(t.term, q).items():
            _add(out, k, c * t.coeff, q)
        return out
    if isinstance(t, Sum):
        out = {}
        for s in t.terms:
            for k, c in _nest(s, q).items():
                _add(out, k, c, q)
        return out
    left, right = _nest(t.left, q), _nest(t.right, q)
    out = {}
    for kx, cx in left.items():
        for ky, cy in right.items():
            for k, c in _bracket_flat(kx, ky, q).items():
                _add(out, k, c * cx * cy, q)
    return out


def _to_list(acc: Combo) -> list[FlatBracket]:
    return [FlatBracket(c, b, t) for (b, t), c in acc.items()]


def left_nest(t: LieTerm, q: int) -> list[FlatBracket]:
    """t as a combination of left-nested generator brackets (like terms merged)."""
    check_modulus(q)
    return _to_list(_nest(t, q))


def flat_to_term(terms: Sequence[FlatBracket]) -> LieTerm | None:
    """A LieTerm for a combination; None for the empty (zero) combination."""
    parts = []
    for fb in terms:
        t: LieTerm = Generator(fb.base)
        for e in fb.tail:
            t = Bracket(t, Generator(e))
        parts.append(t if fb.coeff == 1 else Scale(fb.coeff, t))
    if not parts:
        return None
    return parts[0] if len(parts) == 1 else Sum(tuple(parts))


# --------------------------------------------------------------------------
# evaluation models and commutation oracles
# --------------------------------------------------------------------------

class UnassignedGenerator(KeyError):
    pass


@dataclass
class EvalModel:
    """Generators assigned to configurations, bracketed by ``rule``."""

    rule: BracketRule
    assignment: Union[Mapping[int, Config], Callable[[int], Config]]
    xi: Config | None = None

    def gen(self, i: int) -> Config:
        a = self.assignment
        if callable(a):
            return a(i)
        try:
            return a[i]
        except KeyError:
            raise UnassignedGenerator(f"generator g{i} is not assigned") from None

    @property
    def zero(self) -> Config:
        return Config.zero(self.rule.d, self.rule.q)


def eval_term(t: LieTerm, model: EvalModel) -> Config:
    if isinstance(t, Generator):
        return model.gen(t.index)
    if isinstance(t, Xi):
        if model.xi is None:
            raise UnassignedGenerator("xi is not assigned")
        return model.xi
    if isinstance(t, Bracket):
        return bracket_eval(model.rule, eval_term(t.left, model), eval_term(t.right, model))
    if isinstance(t, Scale):
        return eval_term(t.term, model).scale(t.coeff)
    acc = model.zero
    for s in t.terms:
        acc = acc + eval_term(s, model)
    return acc


def eval_flat(terms: Iterable[FlatBracket], model: EvalModel) -> Config:
    acc = model.zero
    for fb in terms:
        v = model.gen(fb.base)
        for e in fb.tail:
            if v.is_zero:
                break
            v = bracket_eval(model.rule, v, model.gen(e))
        acc = acc + v.scale(fb.coeff)
    return acc


class OracleInconsistency(RuntimeError):
    pass


class CommutationOracle:
    """Answers [e_i, e_j] == 0, and expands [e_i, e_j] over the generators.

    The expansion is what the Jacobi step needs: the inner bracket
    [e_{p-1}, e_p] is replaced by a combination of generators.
    """

    q: int

    def bracket(self, i: int, j: int) -> dict[int, int]:
        raise NotImplementedError

    def commutes(self, i: int, j: int) -> bool:
        return not self.bracket(i, j)


class TableOracle(CommutationOracle):
    """Structure constants given explicitly; missing pairs commute.

    Antisymmetry fills in (j, i) from (i, j); a table that specifies both in
    an inconsistent way is rejected.
    """

    def __init__(self, q: int, table: Mapping[tuple[int, int], Mapping[int, int]]):
        self.q = check_modulus(q)
        full: dict[tuple[int, int], dict[int, int]] = {}
        for (i, j), combo in table.items():
            combo = {k: c % q for k, c in combo.items() if c % q}
            neg = {k: (-c) % q for k, c in combo.items()}
            if i == j and combo:
                raise OracleInconsistency(f"[g{i}, g{i}] must vanish")
            for key, val in (((i, j), combo), ((j, i), neg)):
                if key in full and full[key] != val:
                    raise OracleInconsistency(f"conflicting entries for {key}")
                full[key] = val
        self.table = full

    def bracket(self, i: int, j: int) -> dict[int, int]:
        return dict(self.table.get((i, j), {}))


def _zigzag(p: int) -> int:
    return 2 * p if p >= 0 else -2 * p - 1


def _unzigzag(n: int) -> int:
    return n // 2 if n % 2 == 0 else -(n + 1) // 2


class BasisModel(CommutationOracle):
    """Generators are the shift basis configurations of a rule's domain.

    For an orbit-style rule g<n> is e^(t)_p with n = zigzag(p) * d + (t - 1).
    For construction A, g0 is the constant generator (0, 1) and g<n+1> is the
    n-th vector basis element in the same numbering.  Every bracket of two
    generators is then a finite combination of generators, so this class is
    both an exact commutation oracle and an evaluation model.
    """

    def __init__(self, rule: BracketRule):
        self.rule = rule
        self.q = rule.q
        self.augmented = isinstance(_root(rule), ConstructionA)
        self.tracks = rule.d - 1 if self.augmented else rule.d
        self._memo: dict[tuple[int, int], dict[int, int]] = {}

    def index(self, track: int, pos: int) -> int:
        n = _zigzag(pos) * self.tracks + (track - 1)
        return n + 1 if self.augmented else n

    def gen(self, i: int) -> Config:
        d, q = self.rule.d, self.q
        if self.augmented:
            if i == 0:
                return Config(d, q, {}, (0,) * (d - 1) + (1,))
            i -= 1
        z, t = divmod(i, self.tracks)
        return Config.basis(d, q, t + 1, _unzigzag(z))

    def expand(self, x: Config) -> dict[int, int]:
        out: dict[int, int] = {}
        tail = x.tail
        if self.augmented:
            if any(tail[:-1]):
                raise ValueError("vector part is not finitely supported")
            if tail[-1]:
                out[0] = tail[-1]
        elif any(tail):
            raise ValueError("configuration is not finitely supported")
        for p, v in x.finite.items():
            for t in range(self.tracks):
                if v[t]:
                    out[self.index(t + 1, p)] = v[t]
        return out

    def bracket(self, i: int, j: int) -> dict[int, int]:
        key = (i, j)
        r = self._memo.get(key)
        if r is None:
            r = self._memo[key] = self.expand(bracket_eval(self.rule, self.gen(i), self.gen(j)))
        return dict(r)

    def model(self, xi: Config | None = None) -> EvalModel:
        return EvalModel(self.rule, self.gen, xi)


# --------------------------------------------------------------------------
# bad-bracket elimination
# --------------------------------------------------------------------------

def bad_index(fb: FlatBracket, oracle: CommutationOracle) -> int | None:
    """1-based index of the first tail generator commuting with the base."""
    for j, e in enumerate(fb.tail, start=1):
        if oracle.commutes(fb.base, e):
            return j
    return None


def measure(terms: Sequence[FlatBracket], oracle: CommutationOracle) -> tuple[int, int, int] | None:
    """(d, l, p): max bad depth, how many bad brackets reach it, least bad index there."""
    bad = [(fb.depth, bad_index(fb, oracle)) for fb in terms]
    bad = [(d, p) for d, p in bad if p is not None]
    if not bad:
        return None
    d = max(dp[0] for dp in bad)
    at_d = [p for dd, p in bad if dd == d]
    return d, len(at_d), min(at_d)


def eliminate_bad(terms: Sequence[FlatBracket], oracle: CommutationOracle, *,
                  model: EvalModel | None = None, trace: list | None = None,
                  max_steps: int = 1_000_000) -> list[FlatBracket]:
    """Rewrite until every bracket's tail avoids generators commuting with its base.

    Each step picks the leftmost bad bracket of maximal depth with least bad
    index p.  p = 1: the bracket is zero and is dropped.  p >= 2: Jacobi on
    the (p-1, p) positions gives the swapped bracket (bad index p - 1) plus
    one shallower bracket per generator in the expansion of [e_{p-1}, e_p].
    The measure (d, l, p) strictly decreases; it is appended to ``trace``.
    """
    q = oracle.q
    acc: Combo = {}
    for fb in terms:
        _add(acc, (fb.base, fb.tail), fb.coeff, q)
    prev = None
    for _ in range(max_steps):
        items = _to_list(acc)
        m = measure(items, oracle)
        if trace is not None:
            trace.append(m)
        if m is None:
            return items
        if prev is not None and not m < prev:
            raise RuntimeError(f"measure did not decrease: {prev} -> {m}")
        prev = m
        log.debug("eliminate_bad measure %s", m)
        d, _, p = m
        target = next(fb for fb in items if fb.depth == d and bad_index(fb, oracle) == p)
        key = (target.base, target.tail)
        c = acc.pop(key)
        b, tail = target.base, target.tail
        if p == 1:
            if model is not None:
                v = bracket_eval(model.rule, model.gen(b), model.gen(tail[0]))
                if not v.is_zero:
                    raise OracleInconsistency(f"oracle says [g{b}, g{tail[0]}] = 0 but it evaluates to {v}")
            continue
        # [[x, y], z] = [x, [y, z]] + [[x, z], y] with x = [b, ..., e_{p-2}]
        y, z = tail[p - 2], tail[p - 1]
        new: Combo = {}
        _add(new, (b, tail[: p - 2] + (z, y) + tail[p:]), c, q)
        for g, cg in oracle.bracket(y, z).items():
            _add(new, (b, tail[: p - 2] + (g,) + tail[p:]), c * cg, q)
        # replacements go to the end of the list, merging with like terms
        for k, v in new.items():
            _add(acc, k, v, q)
    raise RuntimeError("eliminate_bad exceeded its step budget")


# --------------------------------------------------------------------------
# affine maps
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class AffineMapNF:
    """xi -> a * [xi, y_1, ..., y_{k-1}] + y_k; a = 0 is the constant map y_k."""

    a: int
    chain: tuple[Config, ...]
    offset: Config
    rule: BracketRule = field(compare=False, repr=False)

    def __post_init__(self):
        a = self.a.value if isinstance(self.a, Scalar) else self.a
        object.__setattr__(self, "a", a % self.rule.q)
        object.__setattr__(self, "chain", () if self.a == 0 else tuple(self.chain))

    @classmethod
    def identity(cls, rule: BracketRule) -> "AffineMapNF":
        return cls(1, (), Config.zero(rule.d, rule.q), rule)

    @property
    def is_constant(self) -> bool:
        return self.a == 0

    def apply(self, xi: Config) -> Config:
        if self.a == 0:
            return self.offset
        v = xi
        for y in self.chain:
            if v.is_zero:
                break
            v = bracket_eval(self.rule, v, y)
        return v.scale(self.a) + self.offset

    def add(self, y: Config) -> "AffineMapNF":
        return AffineMapNF(self.a, self.chain, self.offset + y, self.rule)

    def scale(self, c: int) -> "AffineMapNF":
        return AffineMapNF(self.a * c, self.chain, self.offset.scale(c), self.rule)

    def bracket_right(self, y: Config) -> "AffineMapNF":
        """[T, y] = a [xi, y_1, ..., y_{k-1}, y] + [y_k, y]."""
        off = bracket_eval(self.rule, self.offset, y)
        return AffineMapNF(self.a, self.chain + (y,), off, self.rule)

    def bracket_left(self, y: Config) -> "AffineMapNF":
        """[y, T] = -[T, y]."""
        return self.bracket_right(y).scale(-1)


def affine_compose(m: AffineMapNF, op: str, arg) -> AffineMapNF:
    """Compose with one algebra operation: 'add', 'scale', 'bracket' or 'bracket_left'."""
    if op == "add":
        return m.add(arg)
    if op == "scale":
        return m.scale(int(arg))
    if op == "bracket":
        return m.bracket_right(arg)
    if op == "bracket_left":
        return m.bracket_left(arg)
    raise ValueError(f"unknown affine operation {op!r}")


def affine_from_term(t: LieTerm, model: EvalModel) -> AffineMapNF:
    """Normal form of a term with exactly one xi; xi-free parts are evaluated."""
    if xi_count(t) != 1:
        raise ValueError("an affine term contains xi exactly once")
    rule = model.rule

    def go(s: LieTerm) -> AffineMapNF:
        if isinstance(s, Xi):
            return AffineMapNF.identity(rule)
        if isinstance(s, Scale):
            return go(s.term).scale(s.coeff)
        if isinstance(s, Sum):
            (hit,) = [u for u in s.terms if xi_count(u)]
            m = go(hit)
            for u in s.terms:
                if u is not hit:
                    m = m.add(eval_term(u, model))
            return m
        if isinstance(s, Bracket):
            if xi_count(s.left):
                return go(s.left).bracket_right(eval_term(s.right, model))
            return go(s.right).bracket_left(eval_term(s.left, model))
        raise AssertionError("generator cannot contain xi")

    return go(t)
