"""Configurations over Z and linear cellular automata as Laurent-polynomial matrices.

Convention for applying a CA matrix M = sum_e M(e) x^e:

    f(x)_i = sum_e M(e) . x_{i+e}

so the right shift s(x)_i = x_{i-1} is the monomial at exponent -1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .field_core import check_modulus, inv_mod


class ShapeError(ValueError):
    pass


def _vec_add(u: Sequence[int], v: Sequence[int], q: int) -> tuple[int, ...]:
    return tuple((a + b) % q for a, b in zip(u, v))


def _vec_scale(c: int, u: Sequence[int], q: int) -> tuple[int, ...]:
    return tuple(c * a % q for a in u)


class Config:
    """A point of (GF(q)^d)^Z: finite deviation plus a constant tail.

    ``finite`` maps positions to nonzero d-vectors; the value at position i is
    ``finite.get(i, 0) + tail``.
    """

    __slots__ = ("d", "q", "finite", "tail", "_hash")

    def __init__(self, d: int, q: int, finite: Mapping[int, Sequence[int]] | None = None,
                 tail: Sequence[int] | None = None):
        self.d = d
        self.q = q
        self.tail = tuple(int(t) % q for t in tail) if tail is not None else (0,) * d
        if len(self.tail) != d:
            raise ShapeError(f"tail has {len(self.tail)} entries, expected {d}")
        fin = {}
        for pos, vec in (finite or {}).items():
            vec = tuple(int(a) % q for a in vec)
            if len(vec) != d:
                raise ShapeError(f"vector at {pos} has {len(vec)} entries, expected {d}")
            if any(vec):
                fin[int(pos)] = vec
        self.finite = fin
        self._hash = None

    @classmethod
    def _raw(cls, d, q, finite, tail) -> "Config":
        new = cls.__new__(cls)
        new.d, new.q, new.finite, new.tail, new._hash = d, q, finite, tail, None
        return new

    @classmethod
    def zero(cls, d: int, q: int) -> "Config":
        return cls._raw(d, q, {}, (0,) * d)

    @classmethod
    def basis(cls, d: int, q: int, track: int, pos: int = 0) -> "Config":
        """Characteristic config e^{(track)}_pos; tracks are 1-based."""
        if not 1 <= track <= d:
            raise ShapeError(f"track {track} out of range 1..{d}")
        vec = [0] * d
        vec[track - 1] = 1
        return cls._raw(d, q, {pos: tuple(vec)}, (0,) * d)

    @classmethod
    def constant(cls, tail: Sequence[int], q: int) -> "Config":
        return cls(len(tail), q, {}, tail)

    @classmethod
    def from_track_sets(cls, d: int, q: int, sets: Mapping[int, Iterable[int]]) -> "Config":
        """Sum of characteristic functions: {track: positions}."""
        fin: dict[int, list[int]] = {}
        for t, positions in sets.items():
            for p in positions:
                vec = fin.setdefault(p, [0] * d)
                vec[t - 1] = (vec[t - 1] + 1) % q
        return cls(d, q, fin)

    def _check(self, other: "Config") -> None:
        if self.d != other.d or self.q != other.q:
            raise ShapeError(f"shape mismatch: (d={self.d}, q={self.q}) vs (d={other.d}, q={other.q})")

    def value(self, i: int) -> tuple[int, ...]:
        v = self.finite.get(i)
        if v is None:
            return self.tail
        return _vec_add(v, self.tail, self.q)

    def support(self) -> list[int]:
        """Positions where the config deviates from its tail."""
        return sorted(self.finite)

    def span(self) -> tuple[int, int] | None:
        if not self.finite:
            return None
        return min(self.finite), max(self.finite)

    @property
    def is_zero(self) -> bool:
        return not self.finite and not any(self.tail)

    @property
    def is_finite(self) -> bool:
        return not any(self.tail)

    def __add__(self, other: "Config") -> "Config":
        self._check(other)
        q = self.q
        fin = dict(self.finite)
        for p, v in other.finite.items():
            w = fin.get(p)
            if w is None:
                fin[p] = v
            else:
                s = _vec_add(w, v, q)
                if any(s):
                    fin[p] = s
                else:
                    del fin[p]
        return Config._raw(self.d, q, fin, _vec_add(self.tail, other.tail, q))

    def scale(self, c: int) -> "Config":
        q = self.q
        c %= q
        if c == 0:
            return Config.zero(self.d, q)
        if c == 1:
            return self
        return Config._raw(self.d, q, {p: _vec_scale(c, v, q) for p, v in self.finite.items()},
                           _vec_scale(c, self.tail, q))

    def __neg__(self) -> "Config":
        return self.scale(-1)

    def __sub__(self, other: "Config") -> "Config":
        return self + (-other)

    def __rmul__(self, c: int) -> "Config":
        return self.scale(c)

    def shift(self, k: int) -> "Config":
        """sigma^k: the result at i is the value at i - k (content moves right)."""
        if k == 0:
            return self
        return Config._raw(self.d, self.q, {p + k: v for p, v in self.finite.items()}, self.tail)

    def track(self, t: int) -> dict[int, int]:
        """Nonzero deviation entries of one (1-based) track."""
        return {p: v[t - 1] for p, v in self.finite.items() if v[t - 1]}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Config):
            return NotImplemented
        return (self.d, self.q, self.tail, self.finite) == (other.d, other.q, other.tail, other.finite)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.d, self.q, self.tail, frozenset(self.finite.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Config(d={self.d}, q={self.q}, {format_config(self)})"

    def window(self, lo: int, hi: int) -> list[tuple[int, ...]]:
        return [self.value(i) for i in range(lo, hi + 1)]


def format_config(x: Config) -> str:
    """``tail=t1,...,td; i:v1,...,vd; ...`` with positions ascending."""
    parts = ["tail=" + ",".join(map(str, x.tail))]
    for p in sorted(x.finite):
        parts.append(f"{p}:" + ",".join(map(str, x.finite[p])))
    return "; ".join(parts)


def parse_config(text: str, q: int, d: int | None = None) -> Config:
    parts = [s.strip() for s in text.strip().split(";") if s.strip()]
    if not parts or not parts[0].startswith("tail="):
        raise ValueError(f"config literal must start with tail=: {text!r}")
    tail = [int(t) for t in parts[0][5:].split(",")]
    if d is None:
        d = len(tail)
    fin: dict[int, list[int]] = {}
    for part in parts[1:]:
        pos, _, vec = part.partition(":")
        v = [int(t) for t in vec.split(",")]
        p = int(pos)
        if p in fin:
            raise ValueError(f"position {p} given twice")
        fin[p] = v
    return Config(d, q, fin, tail)


@dataclass(frozen=True)
class PeriodicConfig:
    """An n-periodic point, stored as an n x d table of residues."""

    period: int
    q: int
    values: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.period < 1:
            raise ShapeError("period must be >= 1")
        if len(self.values) != self.period:
            raise ShapeError(f"{len(self.values)} rows for period {self.period}")
        object.__setattr__(self, "values",
                           tuple(tuple(int(a) % self.q for a in row) for row in self.values))

    @property
    def d(self) -> int:
        return len(self.values[0])

    @classmethod
    def zero(cls, period: int, d: int, q: int) -> "PeriodicConfig":
        return cls(period, q, ((0,) * d,) * period)

    @classmethod
    def from_flat(cls, period: int, d: int, q: int, flat: Sequence[int]) -> "PeriodicConfig":
        return cls(period, q, tuple(tuple(flat[i * d:(i + 1) * d]) for i in range(period)))

    def flat(self) -> tuple[int, ...]:
        return tuple(a for row in self.values for a in row)

    def value(self, i: int) -> tuple[int, ...]:
        return self.values[i % self.period]

    def __add__(self, other: "PeriodicConfig") -> "PeriodicConfig":
        return PeriodicConfig(self.period, self.q,
                              tuple(_vec_add(u, v, self.q) for u, v in zip(self.values, other.values)))

    def scale(self, c: int) -> "PeriodicConfig":
        return PeriodicConfig(self.period, self.q, tuple(_vec_scale(c, u, self.q) for u in self.values))

    @property
    def is_zero(self) -> bool:
        return not any(any(r) for r in self.values)

    def unroll(self, lo: int, hi: int) -> list[tuple[int, ...]]:
        return [self.value(i) for i in range(lo, hi + 1)]


def periodic_configs(period: int, d: int, q: int) -> Iterable[PeriodicConfig]:
    for flat in itertools.product(range(q), repeat=period * d):
        yield PeriodicConfig.from_flat(period, d, q, flat)


# --------------------------------------------------------------------------
# Laurent polynomials and CA matrices
# --------------------------------------------------------------------------

Poly = tuple[tuple[int, int], ...]  # sorted (exponent, coefficient) pairs, coefficient != 0


def poly(terms: Mapping[int, int], q: int) -> Poly:
    return tuple(sorted((e, c % q) for e, c in terms.items() if c % q))


def poly_mul(a: Poly, b: Poly, q: int) -> Poly:
    acc: dict[int, int] = {}
    for e1, c1 in a:
        for e2, c2 in b:
            acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
    return poly(acc, q)


def poly_add(a: Poly, b: Poly, q: int) -> Poly:
    acc = dict(a)
    for e, c in b:
        acc[e] = acc.get(e, 0) + c
    return poly(acc, q)


def poly_sub(a: Poly, b: Poly, q: int) -> Poly:
    return poly_add(a, tuple((e, -c) for e, c in b), q)


def format_poly(p: Poly) -> str:
    if not p:
        return "0"
    out = []
    for e, c in p:
        if e == 0:
            out.append(str(c))
        else:
            mono = "x" if e == 1 else f"x^{e}"
            out.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(out)


def parse_poly(text: str, q: int) -> Poly:
    """Parse e.g. ``1+x^-1``, ``2x^3``, ``x``, ``0``."""
    text = text.replace(" ", "")
    if text in ("", "0"):
        return ()
    acc: dict[int, int] = {}
    # split on '+' that is not part of an exponent sign
    terms, cur = [], ""
    for i, ch in enumerate(text):
        if ch == "+" and cur and not cur.endswith("^"):
            terms.append(cur)
            cur = ""
        else:
            cur += ch
    terms.append(cur)
    for t in terms:
        if "x" in t:
            coef, _, rest = t.partition("x")
            c = 1 if coef == "" else -1 if coef == "-" else int(coef)
            e = int(rest[1:]) if rest.startswith("^") else 1
            if rest and not rest.startswith("^"):
                raise ValueError(f"bad monomial {t!r}")
        else:
            c, e = int(t), 0
        acc[e] = acc.get(e, 0) + c
    return poly(acc, q)


class LinearCA:
    """A d_out x d_in matrix of Laurent polynomials over GF(q)."""

    __slots__ = ("q", "entries")

    def __init__(self, q: int, entries: Sequence[Sequence[Poly | Mapping[int, int]]]):
        self.q = check_modulus(q)
        rows = []
        for row in entries:
            rows.append(tuple(poly(p, q) if isinstance(p, Mapping) else poly(dict(p), q) for p in row))
        if not rows or not rows[0]:
            raise ShapeError("empty CA matrix")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ShapeError("ragged CA matrix")
        self.entries: tuple[tuple[Poly, ...], ...] = tuple(rows)

    @property
    def out_tracks(self) -> int:
        return len(self.entries)

    @property
    def in_tracks(self) -> int:
        return len(self.entries[0])

    @property
    def is_square(self) -> bool:
        return self.out_tracks == self.in_tracks

    @property
    def radius(self) -> int:
        return max((abs(e) for row in self.entries for p in row for e, _ in p), default=0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearCA):
            return NotImplemented
        return self.q == other.q and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.q, self.entries))

    def __repr__(self) -> str:
        return f"LinearCA(q={self.q}, {format_matrix(self)})"

    def __call__(self, x: Config) -> Config:
        return ca_apply(self, x)

    def __matmul__(self, other: "LinearCA") -> "LinearCA":
        return ca_compose(self, other)


def format_matrix(f: LinearCA) -> str:
    return "[" + ";".join(",".join(format_poly(p) for p in row) for row in f.entries) + "]"


def parse_matrix(text: str, q: int) -> LinearCA:
    """``[p11,p12;p21,p22]`` with Laurent polynomial entries."""
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError(f"matrix literal must be bracketed: {text!r}")
    rows = [[parse_poly(e, q) for e in row.split(",")] for row in text[1:-1].split(";")]
    return LinearCA(q, rows)


def ca_identity(d: int, q: int) -> LinearCA:
    return LinearCA(q, [[{0: 1} if r == c else {} for c in range(d)] for r in range(d)])


def ca_scalar(c: int, d: int, q: int) -> LinearCA:
    return LinearCA(q, [[{0: c} if r == cc else {} for cc in range(d)] for r in range(d)])


def right_shift(q: int, d: int = 1, steps: int = 1) -> LinearCA:
    """s^steps with s(x)_i = x_{i-1} on every track."""
    return LinearCA(q, [[{-steps: 1} if r == c else {} for c in range(d)] for r in range(d)])


def partial_shift(track: int, d: int, q: int, steps: int = 1) -> LinearCA:
    """Move one (1-based) track right by ``steps`` cells, identity elsewhere."""
    if not 1 <= track <= d:
        raise ShapeError(f"track {track} out of range 1..{d}")
    return LinearCA(q, [[({-steps: 1} if r == track - 1 else {0: 1}) if r == c else {}
                         for c in range(d)] for r in range(d)])


def ca_apply(f: LinearCA, x: Config) -> Config:
    if f.in_tracks != x.d or f.q != x.q:
        raise ShapeError(f"CA expects {f.in_tracks} tracks over GF({f.q}), got {x.d} over GF({x.q})")
    q, dout = f.q, f.out_tracks
    acc: dict[int, list[int]] = {}
    for r, row in enumerate(f.entries):
        for c, p in enumerate(row):
            for e, coef in p:
                for pos, vec in x.finite.items():
                    a = vec[c]
                    if a:
                        slot = acc.get(pos - e)
                        if slot is None:
                            slot = acc[pos - e] = [0] * dout
                        slot[r] += coef * a
    tail = tuple(sum(coef * x.tail[c] for c, p in enumerate(row) for _, coef in p) % q
                 for row in f.entries)
    fin = {}
    for pos, vec in acc.items():
        v = tuple(a % q for a in vec)
        if any(v):
            fin[pos] = v
    return Config._raw(dout, q, fin, tail)


def ca_apply_periodic(f: LinearCA, x: PeriodicConfig) -> PeriodicConfig:
    """Wrapped convolution on an n-periodic point."""
    n, q = x.period, f.q
    out = [[0] * f.out_tracks for _ in range(n)]
    for i in range(n):
        for r, row in enumerate(f.entries):
            s = 0
            for c, p in enumerate(row):
                for e, coef in p:
                    s += coef * x.values[(i + e) % n][c]
            out[i][r] = s % q
    return PeriodicConfig(n, q, tuple(map(tuple, out)))


def ca_compose(f: LinearCA, g: LinearCA) -> LinearCA:
    """Matrix product: apply g first, then f."""
    if f.in_tracks != g.out_tracks or f.q != g.q:
        raise ShapeError("inner track counts do not match")
    q = f.q
    rows = []
    for r in range(f.out_tracks):
        row = []
        for c in range(g.in_tracks):
            acc: Poly = ()
            for k in range(f.in_tracks):
                acc = poly_add(acc, poly_mul(f.entries[r][k], g.entries[k][c], q), q)
            row.append(acc)
        rows.append(row)
    return LinearCA(q, rows)


def ca_power(f: LinearCA, i: int) -> LinearCA:
    if not f.is_square:
        raise ShapeError("power of a non-square CA")
    if i < 0:
        return ca_power(ca_inverse(f), -i)
    result = ca_identity(f.in_tracks, f.q)
    base = f
    while i:
        if i & 1:
            result = ca_compose(result, base)
        base = ca_compose(base, base)
        i >>= 1
    return result


@dataclass(frozen=True)
class FiniteOrder:
    n: int


@dataclass(frozen=True)
class NoCollisionUpTo:
    bound: int


def ca_order_evidence(f: LinearCA, bound: int) -> FiniteOrder | NoCollisionUpTo:
    if not f.is_square:
        raise ShapeError("order of a non-square CA")
    ident = ca_identity(f.in_tracks, f.q)
    g = f
    for n in range(1, bound + 1):
        if g == ident:
            return FiniteOrder(n)
        g = ca_compose(g, f)
    return NoCollisionUpTo(bound)


def _det(m: list[list[Poly]], q: int) -> Poly:
    n = len(m)
    if n == 1:
        return m[0][0]
    total: Poly = ()
    for j in range(n):
        if not m[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = poly_mul(m[0][j], _det(minor, q), q)
        total = poly_add(total, term, q) if j % 2 == 0 else poly_sub(total, term, q)
    return total


def ca_determinant(f: LinearCA) -> Poly:
    if not f.is_square:
        raise ShapeError("determinant of a non-square CA")
    return _det([list(r) for r in f.entries], f.q)


class NotInvertible(ValueError):
    pass


def ca_inverse(f: LinearCA) -> LinearCA:
    """Inverse via the adjugate; requires a monomial (unit) determinant."""
    q = f.q
    det = ca_determinant(f)
    if len(det) != 1:
        raise NotInvertible(f"determinant {format_poly(det)} is not a unit")
    (e, c), = det
    det_inv: Poly = ((-e, inv_mod(c, q)),)
    n = f.in_tracks
    m = [list(r) for r in f.entries]
    if n == 1:
        return LinearCA(q, [[det_inv]])
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            # adj[i][j] = (-1)^{i+j} det(minor without row j, col i)
            minor = [r[:i] + r[i + 1:] for k, r in enumerate(m) if k != j]
            cof = _det(minor, q)
            if (i + j) % 2:
                cof = poly_sub((), cof, q)
            row.append(poly_mul(cof, det_inv, q))
        rows.append(row)
    return LinearCA(q, rows)


def is_invertible(f: LinearCA) -> bool:
    if not f.is_square:
        return False
    return len(ca_determinant(f)) == 1
