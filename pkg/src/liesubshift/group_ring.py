"""Sparse group-ring arithmetic K[G] over GF(q).

Group elements only need ``*``, hashing and ``key()``; see group_core.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .field_core import FieldError, Scalar, check_modulus
from .group_core import IDENTITY, GrigElement, grig_from_word, grig_parse

log = logging.getLogger(__name__)

CACHE_ENV = "LIESUBSHIFT_CACHE"


class CacheError(ValueError):
    pass


class GroupRingElem:
    """Finite K-linear combination of group elements with nonzero coefficients."""

    __slots__ = ("terms", "modulus")

    def __init__(self, terms: Mapping, modulus: int):
        self.modulus = modulus
        self.terms = {g: c % modulus for g, c in terms.items() if c % modulus}

    @classmethod
    def _raw(cls, terms: dict, modulus: int) -> "GroupRingElem":
        new = cls.__new__(cls)
        new.terms = terms
        new.modulus = modulus
        return new

    @classmethod
    def one(cls, identity, modulus: int) -> "GroupRingElem":
        return cls({identity: 1}, modulus)

    @classmethod
    def zero(cls, modulus: int) -> "GroupRingElem":
        return cls({}, modulus)

    @classmethod
    def from_elements(cls, elements: Iterable, modulus: int) -> "GroupRingElem":
        terms: dict = {}
        for g in elements:
            terms[g] = terms.get(g, 0) + 1
        return cls(terms, modulus)

    def _check(self, other: "GroupRingElem") -> None:
        if self.modulus != other.modulus:
            raise FieldError(f"modulus mismatch: {self.modulus} vs {other.modulus}")

    @property
    def support(self) -> frozenset:
        return frozenset(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: "GroupRingElem") -> "GroupRingElem":
        return gr_add(self, other)

    def __mul__(self, other: "GroupRingElem") -> "GroupRingElem":
        return gr_mul(self, other)

    def __rmul__(self, s: int) -> "GroupRingElem":
        return gr_scale(s, self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupRingElem):
            return NotImplemented
        return self.modulus == other.modulus and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.modulus, frozenset(self.terms.items())))

    def sorted_terms(self) -> list[tuple[str, object, int]]:
        return sorted((g.key(), g, c) for g, c in self.terms.items())

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{k}" if c != 1 else k for k, _, c in self.sorted_terms())


def _scalar_value(s, modulus: int) -> int:
    if isinstance(s, Scalar):
        if s.modulus != modulus:
            raise FieldError(f"modulus mismatch: {s.modulus} vs {modulus}")
        return s.value
    return int(s)


def gr_add(u: GroupRingElem, v: GroupRingElem) -> GroupRingElem:
    u._check(v)
    q = u.modulus
    terms = dict(u.terms)
    for g, c in v.terms.items():
        s = (terms.get(g, 0) + c) % q
        if s:
            terms[g] = s
        else:
            terms.pop(g, None)
    return GroupRingElem._raw(terms, q)


def gr_scale(s, u: GroupRingElem) -> GroupRingElem:
    q = u.modulus
    s = _scalar_value(s, q) % q
    if s == 0:
        return GroupRingElem.zero(q)
    return GroupRingElem._raw({g: c * s % q for g, c in u.terms.items()}, q)


def gr_mul(u: GroupRingElem, v: GroupRingElem) -> GroupRingElem:
    """Convolution product; the smaller support drives the outer loop."""
    u._check(v)
    q = u.modulus
    acc: dict = {}
    get = acc.get
    if len(u.terms) <= len(v.terms):
        vitems = list(v.terms.items())
        for g, cg in u.terms.items():
            for h, ch in vitems:
                k = g * h
                acc[k] = get(k, 0) + cg * ch
    else:
        uitems = list(u.terms.items())
        for h, ch in v.terms.items():
            for g, cg in uitems:
                k = g * h
                acc[k] = get(k, 0) + cg * ch
    return GroupRingElem._raw({g: c % q for g, c in acc.items() if c % q}, q)


def gr_pow(u: GroupRingElem, n: int, identity) -> GroupRingElem:
    r = GroupRingElem.one(identity, u.modulus)
    for _ in range(n):
        r = gr_mul(r, u)
    return r


def coefficient_at(u: GroupRingElem, g) -> Scalar:
    return Scalar(u.terms.get(g, 0), u.modulus)


# --------------------------------------------------------------------------
# Grigorchuk powers and their cache file
# --------------------------------------------------------------------------

def grig_ring_element(words: Iterable[str], modulus: int) -> GroupRingElem:
    """Sum of the group elements spelled by ``words`` (e.g. ['ada','dad','c'])."""
    check_modulus(modulus)
    return GroupRingElem.from_elements((grig_from_word(w) for w in words), modulus)


def element_label(p: GroupRingElem) -> str:
    """Canonical one-line description of an element, used in cache headers."""
    return "+".join(f"{c}*{k}" for k, _, c in p.sorted_terms()) or "0"


def _header(modulus: int, label: str) -> str:
    return f"# grigring v1 q={modulus} p={label}"


def write_power_cache(path: str | os.PathLike, modulus: int, label: str,
                      powers: list[GroupRingElem]) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="ascii", newline="\n") as fh:
        fh.write(_header(modulus, label) + "\n")
        for i, pw in enumerate(powers):
            fh.write(f"## pow {i}\n")
            for k, _, c in pw.sorted_terms():
                fh.write(f"{k}\t{c}\n")
    os.replace(tmp, path)


def read_power_cache(path: str | os.PathLike, modulus: int, label: str) -> list[GroupRingElem]:
    """Load cached powers p^0, p^1, ...; raises CacheError on any inconsistency."""
    path = Path(path)
    powers: list[GroupRingElem] = []
    try:
        with open(path, encoding="ascii") as fh:
            header = fh.readline().rstrip("\n")
            if header != _header(modulus, label):
                raise CacheError(f"cache header mismatch: {header!r}")
            terms: dict | None = None
            prev_key = None
            for lineno, line in enumerate(fh, start=2):
                line = line.rstrip("\n")
                if line.startswith("## pow "):
                    if terms is not None:
                        powers.append(GroupRingElem._raw(terms, modulus))
                    idx = int(line[7:])
                    if idx != len(powers):
                        raise CacheError(f"line {lineno}: expected pow {len(powers)}, got {idx}")
                    terms = {}
                    prev_key = None
                    continue
                if terms is None:
                    raise CacheError(f"line {lineno}: term before first power block")
                key, sep, coeff = line.partition("\t")
                if not sep:
                    raise CacheError(f"line {lineno}: expected key<TAB>coefficient")
                if prev_key is not None and key <= prev_key:
                    raise CacheError(f"line {lineno}: keys out of order")
                prev_key = key
                c = int(coeff)
                if not 0 < c < modulus:
                    raise CacheError(f"line {lineno}: coefficient {c} out of range")
                terms[grig_parse(key)] = c
            if terms is not None:
                powers.append(GroupRingElem._raw(terms, modulus))
    except CacheError:
        raise
    except (ValueError, UnicodeDecodeError) as exc:
        raise CacheError(f"corrupt cache {path}: {exc}") from exc
    return powers


def element_powers(p: GroupRingElem, i_max: int, cache: str | os.PathLike | None = None,
                   label: str | None = None) -> list[GroupRingElem]:
    """p^0 .. p^i_max for a Grigorchuk group-ring element, optionally cached."""
    if i_max < 0:
        raise ValueError("i_max must be nonnegative")
    modulus = p.modulus
    if label is None:
        label = element_label(p)
    one = GroupRingElem.one(IDENTITY, modulus)
    powers: list[GroupRingElem] = []
    if cache is not None and Path(cache).exists():
        powers = read_power_cache(cache, modulus, label)
        if powers and powers[0] != one:
            raise CacheError("cached p^0 is not 1")
        if len(powers) > 1 and powers[1] != p:
            raise CacheError("cached p^1 does not match the element")
        log.info("loaded %d cached powers from %s", len(powers), cache)
    if not powers:
        powers = [one]
    grew = False
    while len(powers) <= i_max:
        powers.append(gr_mul(powers[-1], p))
        grew = True
        log.debug("p^%d: support %d", len(powers) - 1, len(powers[-1]))
    if cache is not None and grew:
        write_power_cache(cache, modulus, label, powers)
    return powers[: i_max + 1]


def grig_powers(definition: list[str], modulus: int, i_max: int,
                cache: str | os.PathLike | None = None) -> list[GroupRingElem]:
    """Powers of the sum of the words in ``definition``."""
    return element_powers(grig_ring_element(definition, modulus), i_max, cache, ",".join(definition))


def support_growth(p: GroupRingElem, i_max: int, cache: str | os.PathLike | None = None) -> list[int]:
    """|supp(p^i)| for i = 0..i_max."""
    return [len(pw) for pw in element_powers(p, i_max, cache)]


def power_collision(p: GroupRingElem, bound: int, identity=IDENTITY) -> tuple[int, int] | None:
    """Least (n, m), n < m <= bound, with p^n == p^m, or None."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    seen: dict[GroupRingElem, int] = {}
    cur = GroupRingElem.one(identity, p.modulus)
    for m in range(bound + 1):
        n = seen.get(cur)
        if n is not None:
            return n, m
        seen[cur] = m
        if m < bound:
            cur = gr_mul(cur, p)
    return None


def power_collision_from_powers(powers: list[GroupRingElem]) -> tuple[int, int] | None:
    seen: dict[GroupRingElem, int] = {}
    for m, pw in enumerate(powers):
        n = seen.get(pw)
        if n is not None:
            return n, m
        seen[pw] = m
    return None
