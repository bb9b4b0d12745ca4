"""Shift-invariant bilinear brackets on vector shifts over Z.

Three presentations are supported:

* ``ConstructionA(f)`` on (K^d)^Z x {constants}; elements are Configs with
  d+1 tracks whose last track is constant (no finite deviation there), and
  [(x, a), (y, b)] = (b f(x) - a f(y), 0).
* ``OrbitRules``: [e^(s)_0, e^(t)_delta] = w for each rule, extended by
  shift-invariance, bilinearity and antisymmetry; all other basis pairs
  bracket to zero.
* ``Conjugated(inner, u)``: u^-1 [u x, u y].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

from ..shift_space import (
    Config,
    LinearCA,
    NotInvertible,
    PeriodicConfig,
    ShapeError,
    ca_apply,
    ca_apply_periodic,
    ca_identity,
    ca_inverse,
    is_invertible,
)


@dataclass(frozen=True)
class ConstructionA:
    f: LinearCA

    def __post_init__(self):
        if not self.f.is_square:
            raise ShapeError("construction A needs a square CA")

    @property
    def q(self) -> int:
        return self.f.q

    @property
    def d(self) -> int:
        """Tracks of the elements, including the constant-factor track."""
        return self.f.in_tracks + 1

    @property
    def constant_generator(self) -> Config:
        """(0, 1): zero vector part, constant factor 1."""
        return Config(self.d, self.q, {}, (0,) * (self.d - 1) + (1,))


@dataclass(frozen=True)
class OrbitRule:
    s: int
    t: int
    delta: int
    target: Config


@dataclass(frozen=True)
class OrbitRules:
    d: int
    q: int
    rules: tuple[OrbitRule, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        for r in self.rules:
            if not (1 <= r.s <= self.d and 1 <= r.t <= self.d):
                raise ShapeError(f"rule tracks ({r.s}, {r.t}) out of range 1..{self.d}")
            if r.target.d != self.d or r.target.q != self.q:
                raise ShapeError("rule target has the wrong shape")
            if not r.target.is_finite:
                raise ShapeError("rule targets must have finite support")

    @property
    def is_zero(self) -> bool:
        return all(not r.target.finite for r in self.rules)


@dataclass(frozen=True)
class Conjugated:
    inner: "BracketRule"
    u: LinearCA
    u_inv: LinearCA = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.u.is_square or self.u.in_tracks != self.inner.d or self.u.q != self.inner.q:
            raise ShapeError("conjugating CA has the wrong shape")
        if not is_invertible(self.u):
            raise NotInvertible("conjugating CA is not invertible")
        if self.u_inv is None:
            object.__setattr__(self, "u_inv", ca_inverse(self.u))

    @property
    def d(self) -> int:
        return self.inner.d

    @property
    def q(self) -> int:
        return self.inner.q


BracketRule = Union[ConstructionA, OrbitRules, Conjugated]


def zero_bracket(d: int, q: int) -> OrbitRules:
    return OrbitRules(d, q, ())


def chi(d: int, q: int, track: int, positions: Sequence[int]) -> Config:
    return Config.from_track_sets(d, q, {track: positions})


def z_target(i: int, q: int = 2) -> Config:
    """chi_{{0, i}} on track 3 of a 3-track shift (set semantics: i = 0 gives chi_{0})."""
    return chi(3, q, 3, sorted({0, i}))


def example_rule(i: int, q: int = 2) -> OrbitRules:
    """The bracket [e1, e2] = chi_{{0,i}} on track 3."""
    return OrbitRules(3, q, (OrbitRule(1, 2, 0, z_target(i, q)),))


def cellwise_rule(d: int, q: int) -> OrbitRules:
    """[(1,0,..), (0,1,0,..)] = (1,0,..) applied in every cell."""
    if d < 2:
        raise ShapeError("the cellwise example needs d >= 2")
    return OrbitRules(d, q, (OrbitRule(1, 2, 0, Config.basis(d, q, 1, 0)),))


def _check_shape(rule: BracketRule, x, y) -> None:
    if x.d != rule.d or y.d != rule.d or x.q != rule.q or y.q != rule.q:
        raise ShapeError(f"bracket over (d={rule.d}, q={rule.q}) got (d={x.d}, q={x.q}) and (d={y.d}, q={y.q})")


def split_augmented(x: Config) -> tuple[Config, int]:
    """(vector part, constant factor) of a construction-A element."""
    d = x.d - 1
    if any(v[d] for v in x.finite.values()):
        raise ShapeError("constant-factor track must be constant")
    vec = Config._raw(d, x.q, {p: v[:d] for p, v in x.finite.items() if any(v[:d])}, x.tail[:d])
    return vec, x.tail[d]


def join_augmented(x: Config, a: int) -> Config:
    return Config._raw(x.d + 1, x.q, {p: v + (0,) for p, v in x.finite.items()}, x.tail + (a % x.q,))


def _eval_a(rule: ConstructionA, x: Config, y: Config) -> Config:
    xv, a = split_augmented(x)
    yv, b = split_augmented(y)
    f = rule.f
    out = ca_apply(f, xv).scale(b) - ca_apply(f, yv).scale(a)
    return join_augmented(out, 0)


def _tail_sum(w: Config) -> tuple[int, ...]:
    """Per-track sum of a finite target: sum over g of sigma^g w is this constant."""
    d, q = w.d, w.q
    return tuple(sum(v[k] for v in w.finite.values()) % q for k in range(d))


def _eval_orbit(rule: OrbitRules, x: Config, y: Config) -> Config:
    q, d = rule.q, rule.d
    acc: dict[int, list[int]] = {}
    tail = [0] * d

    def place(coef: int, g: int, w: Config) -> None:
        for p, v in w.finite.items():
            slot = acc.get(p + g)
            if slot is None:
                slot = acc[p + g] = [0] * d
            for k in range(d):
                if v[k]:
                    slot[k] += coef * v[k]

    xt, yt = x.tail, y.tail
    for r in rule.rules:
        s, t, delta, w = r.s - 1, r.t - 1, r.delta, r.target
        # coefficient at g: x^s_g y^t_{g+delta} - y^s_g x^t_{g+delta}, split into
        # finite-finite, finite-tail, tail-finite and tail-tail parts
        coefs: dict[int, int] = {}
        for g, v in x.finite.items():
            a = v[s]
            if a:
                yv = y.finite.get(g + delta)
                coefs[g] = coefs.get(g, 0) + a * ((yv[t] if yv else 0) + yt[t])
            a = v[t]
            if a:
                g0 = g - delta
                yv = y.finite.get(g0)
                coefs[g0] = coefs.get(g0, 0) - a * ((yv[s] if yv else 0) + yt[s])
        for g, v in y.finite.items():
            a = v[t]
            if a and xt[s]:
                g0 = g - delta
                coefs[g0] = coefs.get(g0, 0) + xt[s] * a
            a = v[s]
            if a and xt[t]:
                coefs[g] = coefs.get(g, 0) - a * xt[t]
        for g, c in coefs.items():
            c %= q
            if c:
                place(c, g, w)
        cc = (xt[s] * yt[t] - yt[s] * xt[t]) % q
        if cc:
            ts = _tail_sum(w)
            for k in range(d):
                tail[k] += cc * ts[k]
    fin = {}
    for p, v in acc.items():
        v = tuple(a % q for a in v)
        if any(v):
            fin[p] = v
    return Config._raw(d, q, fin, tuple(a % q for a in tail))


def bracket_eval(rule: BracketRule, x: Config, y: Config) -> Config:
    _check_shape(rule, x, y)
    if isinstance(rule, OrbitRules):
        return _eval_orbit(rule, x, y)
    if isinstance(rule, ConstructionA):
        return _eval_a(rule, x, y)
    if isinstance(rule, Conjugated):
        u = rule.u
        return ca_apply(rule.u_inv, bracket_eval(rule.inner, ca_apply(u, x), ca_apply(u, y)))
    raise TypeError(f"unknown bracket rule {type(rule).__name__}")


def _eval_orbit_periodic(rule: OrbitRules, x: PeriodicConfig, y: PeriodicConfig) -> PeriodicConfig:
    n, q, d = x.period, rule.q, rule.d
    out = [[0] * d for _ in range(n)]
    xv, yv = x.values, y.values
    for r in rule.rules:
        s, t, delta = r.s - 1, r.t - 1, r.delta
        wf = [(p, v) for p, v in r.target.finite.items()]
        for g in range(n):
            gd = (g + delta) % n
            c = (xv[g][s] * yv[gd][t] - yv[g][s] * xv[gd][t]) % q
            if not c:
                continue
            for p, v in wf:
                row = out[(g + p) % n]
                for k in range(d):
                    row[k] += c * v[k]
    return PeriodicConfig(n, q, tuple(tuple(a % q for a in row) for row in out))


def _eval_a_periodic(rule: ConstructionA, x: PeriodicConfig, y: PeriodicConfig) -> PeriodicConfig:
    n, q = x.period, rule.q
    dv = rule.d - 1

    def split(z: PeriodicConfig):
        consts = {row[dv] for row in z.values}
        if len(consts) != 1:
            raise ShapeError("constant-factor track must be constant")
        return PeriodicConfig(n, q, tuple(row[:dv] for row in z.values)), consts.pop()

    xv, a = split(x)
    yv, b = split(y)
    fx = ca_apply_periodic(rule.f, xv)
    fy = ca_apply_periodic(rule.f, yv)
    rows = tuple(tuple((b * u - a * v) % q for u, v in zip(r1, r2)) + (0,)
                 for r1, r2 in zip(fx.values, fy.values))
    return PeriodicConfig(n, q, rows)


def bracket_eval_periodic(rule: BracketRule, x: PeriodicConfig, y: PeriodicConfig) -> PeriodicConfig:
    """The bracket on n-periodic points; rule targets wrap mod n."""
    if x.period != y.period:
        raise ShapeError(f"period mismatch: {x.period} vs {y.period}")
    _check_shape(rule, x, y)
    if isinstance(rule, OrbitRules):
        return _eval_orbit_periodic(rule, x, y)
    if isinstance(rule, ConstructionA):
        return _eval_a_periodic(rule, x, y)
    if isinstance(rule, Conjugated):
        u = rule.u
        inner = bracket_eval_periodic(rule.inner, ca_apply_periodic(u, x), ca_apply_periodic(u, y))
        return ca_apply_periodic(rule.u_inv, inner)
    raise TypeError(f"unknown bracket rule {type(rule).__name__}")


def conjugate_bracket(rule: BracketRule, u: LinearCA) -> Conjugated:
    """The bracket u^-1 [u x, u y]; raises NotInvertible for non-invertible u."""
    return Conjugated(rule, u)


def identity_conjugation(rule: BracketRule) -> Conjugated:
    return Conjugated(rule, ca_identity(rule.d, rule.q))


# --------------------------------------------------------------------------
# interaction geometry
# --------------------------------------------------------------------------

def basis_generators(rule: BracketRule, window: int) -> list[Config]:
    """Basis configs e^(t)_g, |g| <= window, plus (0, 1) for construction A."""
    d, q = rule.d, rule.q
    if isinstance(rule, ConstructionA) or (isinstance(rule, Conjugated) and _root(rule).__class__ is ConstructionA):
        gens = [Config.basis(d, q, t, g) for g in range(-window, window + 1) for t in range(1, d)]
        gens.append(Config(d, q, {}, (0,) * (d - 1) + (1,)))
        return gens
    return [Config.basis(d, q, t, g) for g in range(-window, window + 1) for t in range(1, d + 1)]


def _root(rule: BracketRule) -> BracketRule:
    while isinstance(rule, Conjugated):
        rule = rule.inner
    return rule


def _probe_bound(rule: BracketRule) -> int:
    """A priori bound on |delta| for basis pairs with a nonzero bracket."""
    if isinstance(rule, OrbitRules):
        return max((abs(r.delta) for r in rule.rules), default=0)
    if isinstance(rule, ConstructionA):
        return 0
    return _probe_bound(rule.inner) + 2 * rule.u.radius


def orbit_presentation(rule: BracketRule) -> OrbitRules:
    """An equivalent OrbitRules presentation, found by probing basis pairs.

    Only defined for brackets on full vector shifts (not construction A).
    """
    if isinstance(rule, OrbitRules):
        return rule
    if isinstance(_root(rule), ConstructionA):
        raise TypeError("construction A has a constant factor; no orbit presentation")
    d, q = rule.d, rule.q
    bound = _probe_bound(rule)
    rules = []
    for s in range(1, d + 1):
        x = Config.basis(d, q, s, 0)
        for t in range(s, d + 1):
            for delta in range(-bound, bound + 1):
                if s == t and delta <= 0:
                    continue
                w = bracket_eval(rule, x, Config.basis(d, q, t, delta))
                if not w.is_finite:
                    raise ShapeError("bracket of basis elements has infinite support")
                if w.finite:
                    rules.append(OrbitRule(s, t, delta, w))
    return OrbitRules(d, q, tuple(rules))


def interaction_geometry(rule: BracketRule) -> tuple[int, int, int]:
    """(rho, lo, hi) with lo <= 0 <= hi: two basis elements interact only if
    their offset is at most rho, and the bracket of e^(s)_0 with anything is
    supported in [lo, hi]."""
    if isinstance(_root(rule), ConstructionA):
        f = _root(rule).f
        r = f.radius
        if isinstance(rule, Conjugated):
            r += 2 * max(rule.u.radius, rule.u_inv.radius)
        return 0, -r, r
    pres = orbit_presentation(rule)
    rho = max((abs(r.delta) for r in pres.rules), default=0)
    lo, hi = 0, 0
    for r in pres.rules:
        if r.target.finite:
            # relative to either element of the pair
            lo = min(lo, min(r.target.finite), min(r.target.finite) - r.delta)
            hi = max(hi, max(r.target.finite), max(r.target.finite) - r.delta)
    return rho, lo, hi


def required_window(rule: BracketRule) -> int:
    """Smallest generator window whose triples cover every interacting triple.

    A Jacobi term [[u, v], w] can be nonzero only if |u - v| <= rho and w lies
    within rho of supp [u, v] (inside [u + lo, u + hi]); all three positions
    then sit in [u + lo - rho, u + hi + rho], and a set of that diameter
    shifts into [-W, W] once 2W >= 2*rho + hi - lo.  For construction A the vector part brackets to zero with
    itself, so every nonzero term involves the shift-invariant constant.
    """
    if isinstance(_root(rule), ConstructionA):
        return 0
    rho, lo, hi = interaction_geometry(rule)
    diameter = 2 * rho + (hi - lo)
    return (diameter + 1) // 2
