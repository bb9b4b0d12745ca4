"""A vector shift over H = (+)_N Z_2 whose homoclinic group is not finitely orbit-generated.

Elements of H are finite subsets of N, read as binary numbers, so H acts on
binary words by moving position i to i XOR h.  Configurations are finite
binary words, implicitly followed by zeros.

    m_i = 4^i,  u_0 = "1",  u_n = 0^{m_{n-1}} 0^{m_{n-1}} u_{n-1} u_{n-1},  v_n = u_n^4

X_n is spanned by the shifts s^{k m_{i+1}}(v_i), i <= n, k >= 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .field_core import BinarySubspace, bits_from_word, word_from_bits

DEFAULT_MAX_LEVEL = 4
HARD_MAX_LEVEL = 6


class LevelCapExceeded(ValueError):
    pass


def block_size(i: int) -> int:
    return 4 ** i


def _check_level(n: int, max_level: int) -> None:
    if n < 0:
        raise ValueError("levels are nonnegative")
    if max_level > HARD_MAX_LEVEL:
        raise LevelCapExceeded(f"max level {max_level} above the hard cap {HARD_MAX_LEVEL}")
    if n > max_level:
        raise LevelCapExceeded(f"level {n} above the cap {max_level}")


@lru_cache(maxsize=None)
def _u(n: int) -> str:
    if n == 0:
        return "1"
    z = "0" * block_size(n - 1)
    prev = _u(n - 1)
    return z + z + prev + prev


def gen_u(n: int, max_level: int = DEFAULT_MAX_LEVEL) -> str:
    _check_level(n, max_level)
    return _u(n)


def gen_v(n: int, max_level: int = DEFAULT_MAX_LEVEL) -> str:
    _check_level(n, max_level)
    return _u(n) * 4


@dataclass(frozen=True)
class WordLadder:
    n: int
    m: tuple[int, ...] = field(init=False)
    u: tuple[str, ...] = field(init=False)
    v: tuple[str, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(block_size(i) for i in range(self.n + 2)))
        object.__setattr__(self, "u", tuple(gen_u(i, HARD_MAX_LEVEL) for i in range(self.n + 1)))
        object.__setattr__(self, "v", tuple(u * 4 for u in self.u))


def h_act_element(h: int, w: str) -> str:
    """Translate by h in H: position i goes to i XOR h."""
    if h < 0:
        raise ValueError("elements of H are nonnegative integers")
    block = 1 << h.bit_length()
    n = len(w)
    padded = w + "0" * (-n % block)
    out = ["0"] * len(padded)
    for i, ch in enumerate(padded):
        out[i ^ h] = ch
    return "".join(out[:n])


def h_act(k: int, w: str) -> str:
    """The generator 2^k: swap [2^{k+1} j, 2^{k+1} j + 2^k) with the next 2^k cells."""
    if k < 0:
        raise ValueError("generator exponent must be nonnegative")
    return h_act_element(1 << k, w)


def h_act_bits(h: int, v: int, width: int) -> int:
    """h_act_element on a bitset of the given width."""
    out = 0
    while v:
        low = v & -v
        i = low.bit_length() - 1
        j = i ^ h
        if j < width:
            out |= 1 << j
        v ^= low
    return out


@dataclass
class WindowSpace:
    level: int
    window: int
    space: BinarySubspace

    @property
    def dim(self) -> int:
        return self.space.dim

    def contains_word(self, w: str) -> bool:
        return self.space.contains(bits_from_word(w[: self.window].ljust(self.window, "0")))


def window_generators(n: int, window: int, max_level: int = DEFAULT_MAX_LEVEL) -> list[int]:
    """Bitsets of s^{k m_{i+1}}(v_i) restricted to [0, window), i <= n."""
    _check_level(n, max_level)
    if window > block_size(max_level + 1):
        raise LevelCapExceeded(f"window {window} above the cap {block_size(max_level + 1)}")
    full = (1 << window) - 1
    out = []
    for i in range(n + 1):
        v = bits_from_word(_u(i) * 4)
        step = block_size(i + 1)
        for off in range(0, window, step):
            out.append((v << off) & full)
    return out


def build_window_space(n: int, window: int, max_level: int = DEFAULT_MAX_LEVEL) -> WindowSpace:
    gens = window_generators(n, window, max_level)
    return WindowSpace(n, window, BinarySubspace.from_vectors(window, gens))


@lru_cache(maxsize=None)
def _dim(n: int, window: int, max_level: int) -> int:
    return build_window_space(n, window, max_level).dim


def window_dim(n: int, window: int, max_level: int = DEFAULT_MAX_LEVEL) -> int:
    """dim X_n on [0, window); n = -1 is the zero space."""
    if n < 0:
        return 0
    return _dim(n, window, max_level)


@dataclass
class LawRow:
    n: int
    small: int      # dim X_{n-1} on [0, m_n)
    large: int      # dim X_{n-1} on [0, m_{n+1})
    grown: int      # dim X_n on [0, m_{n+1})

    @property
    def quadrupling(self) -> bool:
        return self.large == 4 * self.small

    @property
    def increment(self) -> bool:
        return self.grown == self.large + 1


def dimension_laws(n_max: int, max_level: int = DEFAULT_MAX_LEVEL) -> list[LawRow]:
    """Both dimension laws for n = 1..n_max."""
    rows = []
    for n in range(1, n_max + 1):
        m_n, m_n1 = block_size(n), block_size(n + 1)
        rows.append(LawRow(n, window_dim(n - 1, m_n, max_level), window_dim(n - 1, m_n1, max_level),
                           window_dim(n, m_n1, max_level)))
    return rows


@dataclass
class Report:
    level: int
    checked: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_invariance(n: int, max_level: int = DEFAULT_MAX_LEVEL) -> Report:
    """Every H_{2n+2}-translate of v_n lies in X_n on [0, m_{n+1})."""
    _check_level(n, max_level)
    window = block_size(n + 1)
    space = build_window_space(n, window, max_level).space
    v = bits_from_word(_u(n) * 4)
    report = Report(n)
    for h in range(1 << (2 * n + 2)):
        img = h_act_bits(h, v, window)
        report.checked += 1
        if not space.contains(img):
            report.violations.append(f"h={h}: {word_from_bits(img, window)}")
    return report


def check_no_new_homoclinics(i: int, max_level: int = DEFAULT_MAX_LEVEL,
                             source_level: int | None = None) -> Report:
    """Elements of X_{i+1} on [0, m_{i+2}) with head outside X_i have a nonzero tail.

    The head is the restriction to [0, m_{i+1}) and the tail the rest of the
    window.  Two checks: every spanning generator is tested directly, and
    then the whole space is tested exactly.  In reduced echelon form with the
    pivot at the highest bit, the rows whose pivot lies in the head span
    exactly the elements with zero tail, so it suffices that their heads lie
    in X_i.
    """
    if source_level is None:
        source_level = i + 1
    _check_level(max(i, source_level), max_level)
    head_w, window = block_size(i + 1), block_size(i + 2)
    head_mask = (1 << head_w) - 1
    base = build_window_space(i, head_w, max_level).space
    gens = window_generators(source_level, window, max_level)
    report = Report(i)
    for g in gens:
        report.checked += 1
        if not base.contains(g & head_mask) and g >> head_w == 0:
            report.violations.append(f"generator {word_from_bits(g, window)} has a zero tail")
    span = BinarySubspace.from_vectors(window, gens)
    for row in span.basis:
        if row.bit_length() <= head_w:
            report.checked += 1
            if not base.contains(row):
                report.violations.append(f"zero-tail element {word_from_bits(row, head_w)} outside X_{i}")
    return report
