"""One test per acceptance criterion; each prints a PASS/FAIL line."""

import random
import time

import pytest

from conftest import CRITERIA
from liesubshift.group_core import grig_from_word, grig_is_identity, grig_leaf, grig_mul
from liesubshift.group_ring import coefficient_at, grig_powers, grig_ring_element, power_collision
from liesubshift.homoclinic_lab import check_invariance, check_no_new_homoclinics, dimension_laws
from liesubshift.lie_shift import (
    ConstructionA,
    example_rule,
    formula_count,
    ideal_closure,
    listed_k0_count,
    periodic_zero_pairs,
    phi_radius,
    search_brackets,
    verify_axioms,
    zero_bracket,
)
from liesubshift.lie_shift.ideals import window_basis
from liesubshift.lie_shift.rules import required_window
from liesubshift.rewrite_core import (
    BasisModel,
    affine_from_term,
    eliminate_bad,
    eval_flat,
    eval_term,
    left_nest,
)
from liesubshift.schreier_lab import (
    T_GENERATORS,
    build_graph,
    element_of_path,
    geodesic_count,
    segment_decomposition,
)
from liesubshift.shift_space import Config, right_shift

from termgen import random_term

pytestmark = pytest.mark.acceptance


def report(capsys, number: int, ok: bool, detail: str, elapsed: float, limit: float | None) -> None:
    timed_ok = limit is None or elapsed <= limit
    verdict = "PASS" if ok and timed_ok else "FAIL"
    budget = f" (limit {limit:g}s)" if limit is not None else ""
    line = f"{verdict} criterion {number}: {detail} [{elapsed:.2f}s{budget}]"
    CRITERIA.append(line)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line
    assert timed_ok, line


def test_criterion_01_periodic_counts(capsys):
    t0 = time.perf_counter()
    mismatches = []
    for k in (1, 2, 3):
        for n in (1, 2, 3, 4):
            brute, want = periodic_zero_pairs(example_rule(k), n), formula_count(k, n)
            if brute != want:
                mismatches.append((k, n, brute, want))
    k0 = [(n, periodic_zero_pairs(example_rule(0), n), listed_k0_count(n)) for n in (1, 2, 3, 4)]
    elapsed = time.perf_counter() - t0
    note = "; ".join(f"k=0 n={n}: brute {b} vs listed {p} ({'match' if b == p else 'MISMATCH'})"
                     for n, b, p in k0)
    with capsys.disabled():
        print("\n" + note)
    report(capsys, 1, not mismatches,
           f"k in 1..3, n in 1..4 brute == formula; mismatches={mismatches}; {note}", elapsed, 300)


def test_criterion_02_grigorchuk_relations(capsys):
    t0 = time.perf_counter()
    g = grig_from_word
    checks = {
        "a^2": grig_is_identity(g("aa")), "b^2": grig_is_identity(g("bb")),
        "c^2": grig_is_identity(g("cc")), "d^2": grig_is_identity(g("dd")),
        "bc=d": grig_is_identity(grig_mul(g("bc"), grig_leaf("d"))),
        "bd=c": grig_is_identity(grig_mul(g("bd"), grig_leaf("c"))),
        "cd=b": grig_is_identity(grig_mul(g("cd"), grig_leaf("b"))),
        "(ad)^2!=1": not grig_is_identity(g("adad")),
        "(ad)^4=1": grig_is_identity(g("adadadad")),
    }
    elapsed = time.perf_counter() - t0
    failed = [k for k, v in checks.items() if not v]
    report(capsys, 2, not failed, f"relations {', '.join(checks)}; failed={failed}", elapsed, 1)


def test_criterion_03_group_ring_growth(capsys, tmp_path):
    t0 = time.perf_counter()
    p = grig_ring_element(["ada", "dad", "c"], 2)
    collision = power_collision(p, 12)
    g = build_graph(200)
    rep = geodesic_count(g, T_GENERATORS)
    segs, _ = segment_decomposition(g)
    ends = [s.rightmost for s in segs]
    certified = [v for v in ends if rep.count[v] == 1 and rep.is_exact(v)][:8]
    ns = [rep.distance[v] for v in certified]
    powers = grig_powers(["ada", "dad", "c"], 2, max(ns), tmp_path / "powers.txt")
    coeffs = [int(coefficient_at(powers[n], element_of_path(rep.geodesic(v)))) for v, n in zip(certified, ns)]
    good = [(v, n) for v, n, c in zip(certified, ns, coeffs) if c == 1]
    elapsed = time.perf_counter() - t0
    ok = collision is None and len({n for _, n in good}) >= 5 and len(set(ns)) == len(ns)
    report(capsys, 3, ok, f"power_collision(p, 12)={collision}; coefficient 1 at "
           f"{len(good)} endpoints with n_v={[n for _, n in good]}", elapsed, 600)


def test_criterion_04_schreier_geodesics(capsys):
    t0 = time.perf_counter()
    g = build_graph(200)
    rep = geodesic_count(g, "abcd")
    doubling = all(rep.distance[2 * n] == 2 * n and rep.count[2 * n] == 2 ** n for n in range(9))
    trep = geodesic_count(g, T_GENERATORS)
    segs, _ = segment_decomposition(g)
    unique = [trep.count[s.rightmost] for s in segs[:6]]
    regular = all(g.action_degree(v) == 4 for v in range(len(g)))
    elapsed = time.perf_counter() - t0
    ok = doubling and unique == [1] * 6 and regular and len(segs) > 6
    report(capsys, 4, ok, f"abcd counts 2^n for n<=8: {doubling}; T counts on first 6 segment ends "
           f"{unique}; 4-regular: {regular}; segments: {len(segs)}", elapsed, 10)


def test_criterion_05_lie_axioms(capsys):
    t0 = time.perf_counter()
    rules = {"A(s)": ConstructionA(right_shift(2))}
    rules.update({f"[]_{i}": example_rule(i) for i in range(4)})
    results = {}
    for name, rule in rules.items():
        rep = verify_axioms(rule, 4)
        results[name] = (rep.summary(), rep.certified)
    elapsed = time.perf_counter() - t0
    ok = all(s == "bilinear ok, reflexive ok, jacobi ok" and c for s, c in results.values())
    report(capsys, 5, ok, "window 4: " + "; ".join(f"{k}: {s}" for k, (s, _) in results.items()),
           elapsed, 60)


def test_criterion_06_radius_growth(capsys):
    t0 = time.perf_counter()
    rule = ConstructionA(right_shift(2))
    radii = [phi_radius(rule, rule.constant_generator, i) for i in range(21)]
    elapsed = time.perf_counter() - t0
    report(capsys, 6, radii == list(range(21)), f"phi radii for i=0..20: {radii}", elapsed, 5)


def test_criterion_07_homoclinic_dimensions(capsys):
    t0 = time.perf_counter()
    laws = dimension_laws(4)
    inv = [check_invariance(n) for n in range(3)]
    nnh = [check_no_new_homoclinics(i) for i in range(3)]
    elapsed = time.perf_counter() - t0
    ok = all(r.quadrupling and r.increment for r in laws) and all(r.ok for r in inv + nnh)
    dims = [(r.small, r.large, r.grown) for r in laws]
    report(capsys, 7, ok, f"(dim X_(n-1)@m_n, X_(n-1)@m_(n+1), X_n@m_(n+1)) for n=1..4: {dims}; "
           f"invariance n<=2: {[r.ok for r in inv]}; no new homoclinics i<=2: {[r.ok for r in nnh]}",
           elapsed, 60)


def random_config(rng, d, q, augmented):
    fin = {}
    for p in rng.sample(range(-4, 5), rng.randrange(0, 4)):
        vec = [rng.randrange(q) for _ in range(d)]
        if augmented:
            vec[-1] = 0
        fin[p] = vec
    tail = [0] * d
    if augmented:
        tail[-1] = rng.randrange(q)
    return Config(d, q, fin, tail)


def test_criterion_08_rewriting(capsys):
    t0 = time.perf_counter()
    models = {"A(s)": BasisModel(ConstructionA(right_shift(2))), "[]_1": BasisModel(example_rule(1))}
    rng = random.Random(20240601)
    bad = []
    steps = 0
    for i in range(1000):
        gens = rng.sample(range(10), 4)
        t = random_term(rng, gens, 5, 2)
        for name, bm in models.items():
            m = bm.model()
            direct = eval_term(t, m)
            flat = left_nest(t, 2)
            trace = []
            out = eliminate_bad(flat, bm, model=m, trace=trace)
            ms = trace[:-1]
            steps += len(ms)
            if eval_flat(flat, m) != direct or eval_flat(out, m) != direct:
                bad.append((i, name, "value"))
            if not all(a > b for a, b in zip(ms, ms[1:])) or trace[-1] is not None:
                bad.append((i, name, "measure"))
    affine_bad = 0
    for i in range(100):
        name = "A(s)" if i % 2 else "[]_1"
        bm = models[name]
        rule = bm.rule
        t = random_term(rng, rng.sample(range(10), 4), 4, 2, xi=True)
        nf = affine_from_term(t, bm.model())
        xi = random_config(rng, rule.d, rule.q, name == "A(s)")
        if nf.apply(xi) != eval_term(t, bm.model(xi)):
            affine_bad += 1
    elapsed = time.perf_counter() - t0
    report(capsys, 8, not bad and not affine_bad,
           f"1000 terms x 2 models sound, {steps} elimination steps with strictly decreasing measure; "
           f"failures={bad[:5]}; affine round-trip failures on 100 configs: {affine_bad}", elapsed, 60)


def test_criterion_09_ideal_oracles(capsys):
    t0 = time.perf_counter()
    rule = example_rule(1)
    compared = 0
    diffs = []
    for window in range(6):
        for g in window_basis(rule, window):
            lem, _ = ideal_closure([g], rule, window, method="lemma")
            bru, _ = ideal_closure([g], rule, window, method="brute")
            compared += 1
            if lem != bru:
                diffs.append((window, g))
    elapsed = time.perf_counter() - t0
    report(capsys, 9, not diffs, f"lemma == brute for {compared} single-generator inputs, windows 0..5; "
           f"differences={len(diffs)}", elapsed, 120)


def test_criterion_10_search(capsys):
    t0 = time.perf_counter()
    tiny = search_brackets(2, 1, 0, 0)
    runs = {"q=2 d=1 r=0 w=0": tiny,
            "q=2 d=1 r=1 w=1": search_brackets(2, 1, 1, 1),
            "q=2 d=2 r=0 w=0": search_brackets(2, 2, 0, 0),
            "q=3 d=2 r=0 w=0": search_brackets(3, 2, 0, 0),
            "q=2 d=3 r=0 w=1 tracks=3": search_brackets(2, 3, 0, 1, target_tracks=(3,))}
    rechecked = failed = 0
    for found in runs.values():
        for rule in found:
            rechecked += 1
            if not verify_axioms(rule, max(1, required_window(rule)) + 1).ok:
                failed += 1
    elapsed = time.perf_counter() - t0
    ok = tiny == [zero_bracket(1, 2)] and failed == 0
    counts = ", ".join(f"{k}: {len(v)}" for k, v in runs.items())
    report(capsys, 10, ok, f"q=2 d=1 r=0 returns only zero: {tiny == [zero_bracket(1, 2)]}; found {counts}; "
           f"{rechecked} re-verified, {failed} failed", elapsed, None)
