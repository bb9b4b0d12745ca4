"""Prime-field scalars and canonical GF(2) subspaces.

Rows over GF(2) are Python ints used as bitsets: bit ``i`` is coordinate ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class FieldError(ValueError):
    pass


class WidthError(ValueError):
    pass


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    i = 2
    while i * i <= q:
        if q % i == 0:
            return False
        i += 1
    return True


def check_modulus(q: int) -> int:
    if not is_prime(q):
        raise FieldError(f"modulus {q} is not prime")
    return q


@dataclass(frozen=True)
class Scalar:
    value: int
    modulus: int

    def __post_init__(self):
        check_modulus(self.modulus)
        object.__setattr__(self, "value", self.value % self.modulus)

    def _check(self, other: "Scalar") -> None:
        if self.modulus != other.modulus:
            raise FieldError(f"modulus mismatch: {self.modulus} vs {other.modulus}")

    def __add__(self, other: "Scalar") -> "Scalar":
        return scalar_add(self, other)

    def __mul__(self, other: "Scalar") -> "Scalar":
        return scalar_mul(self, other)

    def __neg__(self) -> "Scalar":
        return Scalar(-self.value, self.modulus)

    def __sub__(self, other: "Scalar") -> "Scalar":
        return scalar_add(self, -other)

    def inverse(self) -> "Scalar":
        return scalar_inv(self)

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value


def scalar_add(a: Scalar, b: Scalar) -> Scalar:
    a._check(b)
    return Scalar(a.value + b.value, a.modulus)


def scalar_mul(a: Scalar, b: Scalar) -> Scalar:
    a._check(b)
    return Scalar(a.value * b.value, a.modulus)


def inv_mod(a: int, q: int) -> int:
    a %= q
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {q}")
    return pow(a, q - 2, q)


def scalar_inv(a: Scalar) -> Scalar:
    return Scalar(inv_mod(a.value, a.modulus), a.modulus)


# --------------------------------------------------------------------------
# GF(2) subspaces in reduced row-echelon form
# --------------------------------------------------------------------------

def bits_from_word(word: str) -> int:
    """'0110' -> int with bit i set iff word[i] == '1'."""
    v = 0
    for i, ch in enumerate(word):
        if ch == "1":
            v |= 1 << i
        elif ch != "0":
            raise ValueError(f"not a binary word: {word!r}")
    return v


def word_from_bits(v: int, width: int) -> str:
    return "".join("1" if (v >> i) & 1 else "0" for i in range(width))


class BinarySubspace:
    """Subspace of GF(2)^width held as a reduced row-echelon basis.

    The pivot of a row is its highest set bit; rows are kept sorted by
    increasing pivot and every pivot column is cleared in all other rows, so
    two equal subspaces always have identical ``basis`` tuples.
    """

    __slots__ = ("width", "_rows")

    def __init__(self, width: int, rows: Sequence[int] = ()):
        if width < 0:
            raise WidthError("negative width")
        self.width = width
        self._rows: dict[int, int] = {}
        for r in rows:
            self._insert(r)

    @classmethod
    def from_vectors(cls, width: int, vectors: Iterable[int]) -> "BinarySubspace":
        return cls(width, list(vectors))

    @classmethod
    def from_words(cls, words: Iterable[str], width: int | None = None) -> "BinarySubspace":
        words = list(words)
        if width is None:
            width = len(words[0]) if words else 0
        for w in words:
            if len(w) != width:
                raise WidthError(f"word of length {len(w)} in width-{width} space")
        return cls(width, [bits_from_word(w) for w in words])

    def _check(self, v: int) -> None:
        if v < 0 or v.bit_length() > self.width:
            raise WidthError(f"vector does not fit width {self.width}")

    def _reduce(self, v: int, early: bool = False) -> int:
        # walk set bits from the top; pivot bits are cleared by their row,
        # which never touches higher bits or other pivot columns
        rows = self._rows
        out = 0
        while v:
            p = v.bit_length() - 1
            r = rows.get(p)
            if r is None:
                if early:
                    return 1
                out |= 1 << p
                v ^= 1 << p
            else:
                v ^= r
        return out

    def _insert(self, v: int) -> bool:
        self._check(v)
        v = self._reduce(v)
        if not v:
            return False
        p = v.bit_length() - 1
        bit = 1 << p
        for q, r in self._rows.items():
            if r & bit:
                self._rows[q] = r ^ v
        self._rows[p] = v
        return True

    @property
    def basis(self) -> tuple[int, ...]:
        return tuple(self._rows[p] for p in sorted(self._rows))

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(sorted(self._rows))

    @property
    def dim(self) -> int:
        return len(self._rows)

    def __len__(self) -> int:
        return len(self._rows)

    def copy(self) -> "BinarySubspace":
        new = BinarySubspace(self.width)
        new._rows = dict(self._rows)
        return new

    def insert(self, v: int) -> "BinarySubspace":
        new = self.copy()
        new._insert(v)
        return new

    def extend_inplace(self, vectors: Iterable[int]) -> int:
        """Insert many vectors, mutating self; returns how many were new."""
        return sum(self._insert(v) for v in vectors)

    def contains(self, v: int) -> bool:
        self._check(v)
        return self._reduce(v, early=True) == 0

    __contains__ = contains

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinarySubspace):
            return NotImplemented
        return self.width == other.width and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.width, self.basis))

    def __repr__(self) -> str:
        return f"BinarySubspace(width={self.width}, dim={self.dim})"

    def words(self) -> list[str]:
        return [word_from_bits(r, self.width) for r in self.basis]


def subspace_insert(s: BinarySubspace, v: int) -> BinarySubspace:
    return s.insert(v)


def subspace_contains(s: BinarySubspace, v: int) -> bool:
    return s.contains(v)

