"""Bounded exhaustive search for shift-invariant Lie brackets.

A candidate assigns a finite target to every canonical basis pair class
(s, t, delta) with s < t, or s == t and delta > 0, and |delta| <= 2r.  The
other classes follow by antisymmetry, and (s, s, 0) brackets to zero.
Candidates are filtered by a Jacobi check written directly on structure
constants, and each survivor is re-verified with ``verify_axioms``.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, Sequence

from ..field_core import check_modulus
from ..shift_space import Config
from .axioms import verify_axioms
from .rules import OrbitRule, OrbitRules, required_window

log = logging.getLogger(__name__)

DEFAULT_CANDIDATE_CAP = 1 << 20


class SearchCapExceeded(RuntimeError):
    pass


def pair_classes(d: int, r: int, pairs: Sequence[tuple[int, int]] | None = None) -> list[tuple[int, int, int]]:
    out = []
    for s in range(1, d + 1):
        for t in range(s, d + 1):
            if pairs is not None and (s, t) not in pairs:
                continue
            for delta in range(-2 * r, 2 * r + 1):
                if s == t and delta <= 0:
                    continue
                out.append((s, t, delta))
    return out


def search_space_size(q: int, d: int, r: int, w: int, target_tracks=None, pairs=None) -> int:
    tracks = len(target_tracks) if target_tracks is not None else d
    return q ** (len(pair_classes(d, r, pairs)) * tracks * (2 * w + 1))


def _slots(d: int, w: int, target_tracks) -> list[tuple[int, int]]:
    tracks = target_tracks if target_tracks is not None else range(1, d + 1)
    return [(p, t) for p in range(-w, w + 1) for t in tracks]


def _decode(index: int, q: int, d: int, classes, slots) -> list[tuple[int, int, int, dict]]:
    """Candidate number ``index`` as [(s, t, delta, {(pos, track): coef})]."""
    out = []
    for s, t, delta in classes:
        target = {}
        for slot in slots:
            index, c = divmod(index, q)
            if c:
                target[slot] = c
        out.append((s, t, delta, target))
    return out


def _structure_table(q: int, cand) -> dict[tuple[int, int, int], dict]:
    """(s, t, delta) -> target dict, closed under antisymmetry."""
    table: dict[tuple[int, int, int], dict] = {}
    for s, t, delta, target in cand:
        if not target:
            continue
        table[(s, t, delta)] = target
        # [e^t_delta, e^s_0] = -w, i.e. [e^t_0, e^s_{-delta}] = -sigma^{-delta} w
        table[(t, s, -delta)] = {(p - delta, k): (-c) % q for (p, k), c in target.items()}
    return table


def _br(q: int, table, x: dict, y: dict) -> dict:
    """Bracket of finite vectors {(pos, track): coef} through the structure table."""
    out: dict = {}
    for (px, sx), cx in x.items():
        for (py, ty), cy in y.items():
            w = table.get((sx, ty, py - px))
            if w is None:
                continue
            c = cx * cy
            for (p, k), a in w.items():
                key = (p + px, k)
                out[key] = (out.get(key, 0) + c * a) % q
    return {k: v for k, v in out.items() if v}


def _jacobi_ok(q: int, d: int, table, window: int) -> bool:
    if not table:
        return True
    gens = [{(g, t): 1} for g in range(-window, window + 1) for t in range(1, d + 1)]
    n = len(gens)
    pair = [[_br(q, table, gens[i], gens[j]) for j in range(n)] for i in range(n)]
    for i, j, k in itertools.combinations_with_replacement(range(n), 3):
        acc: dict = {}
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            inner = pair[a][b]
            if not inner:
                continue
            for key, v in _br(q, table, inner, gens[c]).items():
                acc[key] = (acc.get(key, 0) + v) % q
        if any(acc.values()):
            return False
    return True


def _to_rules(q: int, d: int, cand) -> OrbitRules:
    rules = []
    for s, t, delta, target in cand:
        if target:
            fin: dict[int, list[int]] = {}
            for (p, k), c in target.items():
                fin.setdefault(p, [0] * d)[k - 1] = c
            rules.append(OrbitRule(s, t, delta, Config(d, q, fin)))
    return OrbitRules(d, q, tuple(rules))


def _jacobi_window(q: int, d: int, cand) -> int:
    return required_window(_to_rules(q, d, cand))


def _scan(args) -> list[int]:
    q, d, classes, slots, start, stop = args
    hits = []
    for idx in range(start, stop):
        cand = _decode(idx, q, d, classes, slots)
        table = _structure_table(q, cand)
        if _jacobi_ok(q, d, table, _jacobi_window(q, d, cand) if table else 0):
            hits.append(idx)
    return hits


def search_brackets(q: int, d: int, r: int, w: int, *, cap: int = DEFAULT_CANDIDATE_CAP,
                    target_tracks: Iterable[int] | None = None,
                    pairs: Iterable[tuple[int, int]] | None = None,
                    workers: int = 1) -> list[OrbitRules]:
    """Every candidate bracket within the bounds that satisfies the axioms.

    ``target_tracks`` restricts which tracks targets may use and ``pairs``
    which (s, t) classes may be nonzero; both only shrink the space.  The
    zero bracket is always part of the space and therefore always returned.
    """
    check_modulus(q)
    if d < 1 or r < 0 or w < 0:
        raise ValueError("need d >= 1, r >= 0, w >= 0")
    if target_tracks is not None:
        target_tracks = tuple(sorted(set(target_tracks)))
        if not all(1 <= t <= d for t in target_tracks):
            raise ValueError("target track out of range")
    if pairs is not None:
        pairs = {tuple(sorted(p)) for p in pairs}
    classes = pair_classes(d, r, pairs)
    slots = _slots(d, w, target_tracks)
    total = q ** (len(classes) * len(slots))
    if total > cap:
        raise SearchCapExceeded(f"{total} candidates exceeds the cap {cap}")
    log.info("searching %d candidates", total)
    workers = max(1, min(workers, total))
    bounds = [total * k // workers for k in range(workers + 1)]
    jobs = [(q, d, classes, slots, bounds[k], bounds[k + 1]) for k in range(workers)]
    if workers == 1:
        hits = _scan(jobs[0])
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            hits = [h for part in pool.map(_scan, jobs) for h in part]
    found = []
    for idx in sorted(hits):
        rule = _to_rules(q, d, _decode(idx, q, d, classes, slots))
        report = verify_axioms(rule, max(1, required_window(rule)))
        if not report.ok:
            raise AssertionError(f"candidate {idx} passed the fast filter but failed verification: "
                                 f"{report.summary()}")
        found.append(rule)
    return found
